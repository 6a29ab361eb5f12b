#include "sturmgraph/words.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sturmgraph/errors.hpp"

namespace sturmgraph {

namespace {

using Arc = std::pair<long double, long double>;  // half-open [lo, hi) in [0,1)

long double frac(long double x) { return x - std::floor(x); }

// Half-open arc [lo, lo + len) on the unit circle as disjoint pieces of [0,1).
std::vector<Arc> circle_arc(long double lo, long double len) {
  lo = frac(lo);
  long double hi = lo + len;
  if (hi <= 1.0L) return {{lo, hi}};
  return {{lo, 1.0L}, {0.0L, hi - 1.0L}};
}

std::vector<Arc> intersect(const std::vector<Arc>& a, const std::vector<Arc>& b) {
  std::vector<Arc> out;
  for (const auto& [alo, ahi] : a) {
    for (const auto& [blo, bhi] : b) {
      const long double lo = std::max(alo, blo);
      const long double hi = std::min(ahi, bhi);
      if (hi - lo > 1e-15L) out.emplace_back(lo, hi);
    }
  }
  return out;
}

}  // namespace

double golden_alpha() { return (std::sqrt(5.0) - 1.0) / 2.0; }
double silver_alpha() { return std::sqrt(2.0) - 1.0; }

SturmianParameters SturmianParameters::golden(double theta) {
  SturmianParameters p;
  p.alpha = golden_alpha();
  p.theta = theta;
  return p;
}

SturmianParameters SturmianParameters::silver(double theta) {
  SturmianParameters p;
  p.alpha = silver_alpha();
  p.theta = theta;
  return p;
}

void SturmianParameters::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0,1)");
  if (!(theta >= 0.0 && theta < 1.0)) throw InputError("theta must lie in [0,1)");
  if (precision == Precision::RationalConvergent) {
    if (convergent_depth < 1) throw InputError("convergent depth must be >= 1");
    const auto cf = continued_fraction_digits(alpha, convergent_depth);
    if (convergent(cf, cf.digits.size()).q < 2) {
      throw InputError("rational convergent must have denominator >= 2");
    }
  }
}

Word Word::from_string(const std::string& digits, std::int64_t origin) {
  Word w;
  w.origin = origin;
  for (char c : digits) {
    if (c < '0' || c > '9') throw InputError("word string must contain digits only");
    w.letters.push_back(c - '0');
  }
  return w;
}

std::string Word::to_string() const {
  std::string s;
  s.reserve(letters.size());
  for (Letter a : letters) s.push_back(static_cast<char>('0' + a));
  return s;
}

Letter sturmian_letter(const SturmianParameters& params, std::int64_t n) {
  // The threshold is formed in double so that theta = 1 - alpha, typed the
  // same way by a caller, sits exactly on the included left endpoint.
  const long double threshold = static_cast<long double>(1.0 - params.alpha);
  if (params.precision == SturmianParameters::Precision::RationalConvergent) {
    const auto cf = continued_fraction_digits(params.alpha, params.convergent_depth);
    const Convergent c = convergent(cf, cf.digits.size());
    __extension__ typedef __int128 wide;
    wide r = (static_cast<wide>(n) * c.p) % c.q;
    if (r < 0) r += c.q;
    const long double x = frac(static_cast<long double>(r) / c.q + params.theta);
    const long double left = 1.0L - static_cast<long double>(c.p) / c.q;
    return x >= left ? 1 : 0;
  }
  const long double x =
      frac(static_cast<long double>(n) * params.alpha + static_cast<long double>(params.theta));
  return x >= threshold ? 1 : 0;
}

Word generate_word(const SturmianParameters& params, std::int64_t n0, std::int64_t n1) {
  if (n0 > n1) throw InputError("generate_word: n0 must not exceed n1");
  Word w;
  w.origin = n0;
  w.letters.reserve(static_cast<std::size_t>(n1 - n0 + 1));
  if (params.precision == SturmianParameters::Precision::RationalConvergent) {
    for (std::int64_t n = n0; n <= n1; ++n) w.letters.push_back(sturmian_letter(params, n));
    return w;
  }
  const long double threshold = static_cast<long double>(1.0 - params.alpha);
  for (std::int64_t n = n0; n <= n1; ++n) {
    const long double x =
        frac(static_cast<long double>(n) * params.alpha + static_cast<long double>(params.theta));
    w.letters.push_back(x >= threshold ? 1 : 0);
  }
  return w;
}

std::size_t letter_count(const Word& word, Letter a) {
  return static_cast<std::size_t>(std::count(word.letters.begin(), word.letters.end(), a));
}

std::map<Letter, double> letter_frequencies(const SturmianParameters& params) {
  return {{0, 1.0 - params.alpha}, {1, params.alpha}};
}

double empirical_frequency(const Word& word, const Word& pattern) {
  if (pattern.size() == 0) throw InputError("empirical_frequency: empty pattern");
  if (pattern.size() > word.size()) {
    throw InputError("empirical_frequency: pattern longer than word");
  }
  const std::size_t windows = word.size() - pattern.size() + 1;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < windows; ++i) {
    if (std::equal(pattern.letters.begin(), pattern.letters.end(), word.letters.begin() + i)) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(windows);
}

ContinuedFraction continued_fraction_digits(double alpha, int depth) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("continued fraction needs alpha in (0,1)");
  if (depth < 1) throw InputError("continued fraction depth must be >= 1");
  ContinuedFraction cf;
  long double x = alpha;
  for (int i = 0; i < depth; ++i) {
    const long double inv = 1.0L / x;
    const long double digit = std::floor(inv);
    cf.digits.push_back(static_cast<std::int64_t>(digit));
    x = inv - digit;
    if (x < kRationalTolerance) break;
  }
  return cf;
}

Convergent convergent(const ContinuedFraction& cf, std::size_t depth) {
  // p_{-1}/q_{-1} = 1/0 and p_0/q_0 = 0/1 for alpha = [0; c1, c2, ...].
  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p = 0, q = 1;
  depth = std::min(depth, cf.digits.size());
  for (std::size_t i = 0; i < depth; ++i) {
    const std::int64_t c = cf.digits[i];
    const std::int64_t p_next = c * p + p_prev;
    const std::int64_t q_next = c * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return {p, q};
}

bool looks_rational(double alpha, int depth) {
  return static_cast<int>(continued_fraction_digits(alpha, depth).digits.size()) < depth;
}

PatternFrequency sturmian_pattern_frequency(double alpha, const Word& pattern) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("pattern frequency needs alpha in (0,1)");
  PatternFrequency out;
  out.pattern = pattern;
  std::vector<Arc> set = {{0.0L, 1.0L}};
  const long double a = alpha;
  for (std::size_t i = 0; i < pattern.size() && !set.empty(); ++i) {
    const Letter w = pattern[i];
    if (w != 0 && w != 1) return out;
    // theta + i*alpha mod 1 must fall in [1-alpha,1) for a 1, [0,1-alpha) for a 0.
    const long double shift = -static_cast<long double>(i) * a;
    const auto arc = (w == 1) ? circle_arc(1.0L - a + shift, a) : circle_arc(shift, 1.0L - a);
    set = intersect(set, arc);
  }
  long double measure = 0.0L;
  for (const auto& [lo, hi] : set) measure += hi - lo;
  out.frequency = static_cast<double>(measure);
  return out;
}

std::vector<PatternFrequency> adjacent_one_separations(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0,1)");
  if (looks_rational(alpha)) {
    throw InputError("adjacent_one_separations requires irrational alpha");
  }
  const auto c1 = continued_fraction_digits(alpha, 1).digits.front();
  auto separated = [](std::int64_t zeros) {
    Word w;
    w.letters.push_back(1);
    w.letters.insert(w.letters.end(), static_cast<std::size_t>(zeros), 0);
    w.letters.push_back(1);
    return w;
  };
  const double c = static_cast<double>(c1);
  return {
      {separated(c1), 1.0 - c * alpha},
      {separated(c1 - 1), (c + 1.0) * alpha - 1.0},
  };
}

}  // namespace sturmgraph
