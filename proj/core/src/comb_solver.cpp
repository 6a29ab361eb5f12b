// Sturm-sequence solver for combs: eliminating each pendant edge leaves the
// Robin coupling -k*tan(k*ell) at its base, and an LDL^T sweep along the
// chain counts the eigenvalues below E exactly.

#include <algorithm>
#include <cmath>
#include <set>

#include "edge_kernel.hpp"
#include "sturmgraph/errors.hpp"
#include "sturmgraph/metric_solver.hpp"

namespace sturmgraph {

using detail::kPi;

namespace {

void check_comb(double L, double ell, const Word& word) {
  if (!(L > 0.0) || !(ell > 0.0)) throw InputError("comb lengths must be positive");
  if (word.size() == 0) throw InputError("empty word");
  for (Letter a : word.letters) {
    if (a != 0 && a != 1) throw InputError("comb words are binary");
  }
  if (word.size() == 1 && word[0] == 0) throw InputError("truncation is a single vertex (degenerate graph)");
}

bool near_multiple(double x, double offset, double tol) {
  const double r = (x - offset) / kPi;
  return std::abs(r - std::round(r)) < tol && std::round(r) >= 0.0;
}

}  // namespace

// Eliminating the tip of a pendant edge leaves the pivot k*cot(k*ell) and
// adds -k*tan(k*ell) at its base. Along the chain the LDL^T pivot at site i
// equals (k / sin kL) * f(i+1) / f(i) for the solution f shot from the left
// end, and f'(n+)/f(n) at a free right end, so only signs of shooting data
// are needed.
std::size_t comb_count_below(double L, double ell, const Word& word, CutCondition cut, double E) {
  check_comb(L, ell, word);
  if (E <= 0.0) return 0;
  const double k = std::sqrt(E);
  const int n = static_cast<int>(word.size()) - 1;
  const bool dir = cut == CutCondition::Dirichlet;
  std::size_t teeth = 0;
  for (Letter a : word.letters) teeth += static_cast<std::size_t>(a);

  std::size_t count = static_cast<std::size_t>(n) * detail::edge_dirichlet_below(E, L) +
                      teeth * detail::edge_dirichlet_below(E, ell);
  if (std::cos(k * ell) / std::sin(k * ell) < 0.0) count += teeth;
  const double base = -k * std::tan(k * ell);

  const double c = std::cos(k * L);
  const double s = std::sin(k * L);
  // f and f'(i-) at the current site
  double f = dir ? 0.0 : 1.0;
  double d = dir ? 1.0 : 0.0;
  for (int i = 0; i <= n; ++i) {
    if (word[static_cast<std::size_t>(i)] == 1 && !(dir && i == 0)) d += base * f;
    if (i == n) {
      if (!dir && f * d < 0.0) ++count;
      break;
    }
    const double f_next = f * c + d * s / k;
    const double d_next = -f * k * s + d * c;
    if (!(dir && i == 0) && s * f * f_next < 0.0) ++count;
    const double norm = std::max(std::abs(f_next), std::abs(d_next) / k);
    f = f_next / norm;
    d = d_next / norm;
  }
  return count;
}

int comb_compact_multiplicity(double L, double ell, const Word& word, CutCondition cut, double k) {
  check_comb(L, ell, word);
  if (!(k > 0.0) || !near_multiple(k * ell, 0.5 * kPi, 1e-9)) return 0;
  const int n = static_cast<int>(word.size()) - 1;
  const bool dir = cut == CutCondition::Dirichlet;
  std::vector<int> teeth;
  for (int i = 0; i <= n; ++i)
    if (word[static_cast<std::size_t>(i)] == 1) teeth.push_back(i);
  if (teeth.empty()) return 0;

  int mult = 0;
  std::set<int> zeros(teeth.begin(), teeth.end());
  if (dir) {
    if (zeros.count(0)) ++mult;
    if (n > 0 && zeros.count(n)) ++mult;
    zeros.insert(0);
    zeros.insert(n);
  }
  const std::vector<int> z(zeros.begin(), zeros.end());
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    if (near_multiple(k * (z[j + 1] - z[j]) * L, 0.0, 1e-8)) ++mult;
  }
  if (!dir) {
    // free ends: cos-type profiles hitting the first/last tooth
    if (z.front() > 0 && near_multiple(k * z.front() * L, 0.5 * kPi, 1e-8)) ++mult;
    if (z.back() < n && near_multiple(k * (n - z.back()) * L, 0.5 * kPi, 1e-8)) ++mult;
  }
  return mult;
}

Spectrum comb_spectrum_fast(double L, double ell, const Word& word, CutCondition cut, const SolveOptions& opts) {
  check_comb(L, ell, word);
  opts.validate();
  const int n = static_cast<int>(word.size()) - 1;
  std::size_t teeth = 0;
  for (Letter a : word.letters) teeth += static_cast<std::size_t>(a);
  const double total = n * L + static_cast<double>(teeth) * ell;

  auto C = [&](double k) { return static_cast<long>(comb_count_below(L, ell, word, cut, k * k)); };

  const double k0 = 1e-3 * kPi / total;
  const double top = opts.k_max * (1.0 + 1e-9);
  const double eta = 1e-9;

  // The Sturm count is singular where tan or cot blows up: pendant-edge
  // Dirichlet energies and edge-Dirichlet energies of either length. Those
  // are evaluated off-centre, and eigenvalues within eta of them are
  // reported at them.
  std::vector<double> specials;
  auto add_family = [&](double offset, double len, bool needed) {
    if (!needed) return;
    for (int j = 0;; ++j) {
      const double ks = (offset + kPi * j) / len;
      if (ks * (1.0 - eta) > top) break;
      if (ks > 0.0) specials.push_back(ks);
    }
  };
  add_family(0.5 * kPi, ell, teeth > 0);
  add_family(0.0, ell, teeth > 0);
  add_family(0.0, L, n > 0);
  std::sort(specials.begin(), specials.end());
  specials.erase(std::unique(specials.begin(), specials.end(),
                             [](double x, double y) { return std::abs(x - y) <= 1e-12 * y; }),
                 specials.end());

  std::vector<std::pair<double, int>> roots;  // (k, multiplicity)
  auto bisect = [&](auto&& self, double a, double b, long ca, long cb) -> void {
    if (cb <= ca) return;
    if (b - a <= opts.tol) {
      roots.emplace_back(0.5 * (a + b), static_cast<int>(cb - ca));
      return;
    }
    const double m = 0.5 * (a + b);
    const long cm = C(m);
    self(self, a, m, ca, cm);
    self(self, m, b, cm, cb);
  };

  double a = k0;
  long ca = C(k0);
  for (double ks : specials) {
    const double lo = ks * (1.0 - eta);
    const double hi = ks * (1.0 + eta);
    if (lo > a) {
      const long clo = C(lo);
      bisect(bisect, a, lo, ca, clo);
      a = lo;
      ca = clo;
    }
    if (hi > top) {
      // window straddles k_max: keep what lies below it
      const long ct = C(top);
      if (ks <= top && ct > ca) roots.emplace_back(ks, static_cast<int>(ct - ca));
      a = top;
      ca = ct;
      break;
    }
    const long chi = C(hi);
    const int jump = static_cast<int>(chi - ca);
    const int lemma = comb_compact_multiplicity(L, ell, word, cut, ks);
    if (jump < lemma) {
      throw NumericalError("Sturm count across a pendant-edge energy is below the compact-support multiplicity");
    }
    if (jump > 0) roots.emplace_back(ks, jump);
    a = hi;
    ca = chi;
  }
  if (a < top) bisect(bisect, a, top, ca, C(top));

  std::sort(roots.begin(), roots.end());
  Spectrum s;
  s.k_max = opts.k_max;
  if (cut == CutCondition::Kirchhoff) s.eigenvalues.push_back({0.0, 1});
  std::vector<std::pair<double, int>> groups;
  for (const auto& [k, m] : roots) {
    if (!groups.empty() && k - groups.back().first <= opts.merge_tol) {
      groups.back().second += m;
    } else {
      groups.emplace_back(k, m);
    }
  }
  for (const auto& [k, m] : groups) {
    if (k <= opts.k_max * (1.0 + 1e-9)) s.eigenvalues.push_back({k * k, m});
  }
  return s;
}

std::optional<CombWord> as_comb(const ModelSpec& model, const Word& word) {
  if (!model.is_comb()) return std::nullopt;
  CombWord cw;
  cw.word.origin = word.origin;
  std::optional<double> ell;
  for (Letter a : word.letters) {
    const auto t = model.decoration(a).simplified().tooth_length();
    if (t) {
      if (ell && std::abs(*ell - *t) > 1e-15 * *t) return std::nullopt;
      ell = t;
    }
    cw.word.letters.push_back(t ? 1 : 0);
  }
  cw.ell = ell.value_or(1.0);
  return cw;
}

Spectrum comb_spectrum_fast(const ModelSpec& model, const Word& word, CutCondition cut, const SolveOptions& opts) {
  model.validate();
  const auto cw = as_comb(model, word);
  if (!cw) throw InputError("comb solver needs a comb model with a single pendant length");
  return comb_spectrum_fast(model.spacing, cw->ell, cw->word, cut, opts);
}

Spectrum truncation_spectrum(const ModelSpec& model, const Word& word, CutCondition cut, const SolveOptions& opts) {
  model.validate();
  if (const auto cw = as_comb(model, word)) {
    return comb_spectrum_fast(model.spacing, cw->ell, cw->word, cut, opts);
  }
  return metric_spectrum_general(build_metric_truncation(model, word, cut), opts);
}

}  // namespace sturmgraph
