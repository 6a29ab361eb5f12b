#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sturmgraph {

using Letter = int;

/// Rotation-coded binary sequences omega(n) = 1 iff (n*alpha + theta mod 1)
/// lies in [1 - alpha, 1).
///
/// In rational-convergent mode alpha is replaced by its continued-fraction
/// convergent p/q at the requested depth and the orbit is evaluated in exact
/// integer arithmetic, so letters far from the origin do not drift.
struct SturmianParameters {
  enum class Precision { Float, RationalConvergent };

  double alpha = 0.0;
  double theta = 0.0;
  Precision precision = Precision::Float;
  int convergent_depth = 0;

  static SturmianParameters golden(double theta = 0.0);
  static SturmianParameters silver(double theta = 0.0);

  /// Throws InputError unless 0 < alpha < 1, 0 <= theta < 1 and, in rational
  /// mode, the convergent denominator is at least 2.
  void validate() const;
};

/// A finite piece omega|[origin, origin + size - 1] of a symbolic sequence.
struct Word {
  std::vector<Letter> letters;
  std::int64_t origin = 0;

  std::size_t size() const { return letters.size(); }
  Letter operator[](std::size_t i) const { return letters[i]; }

  /// Parses a string of digit characters, e.g. "01011".
  static Word from_string(const std::string& digits, std::int64_t origin = 0);
  std::string to_string() const;
};

struct ContinuedFraction {
  std::vector<std::int64_t> digits;
};

struct PatternFrequency {
  Word pattern;
  double frequency = 0.0;
};

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

constexpr double kRationalTolerance = 1e-12;

double golden_alpha();
double silver_alpha();

Letter sturmian_letter(const SturmianParameters& params, std::int64_t n);

/// Letters n0..n1 inclusive; rejects n0 > n1.
Word generate_word(const SturmianParameters& params, std::int64_t n0, std::int64_t n1);

std::size_t letter_count(const Word& word, Letter a);

/// {0 -> 1 - alpha, 1 -> alpha}.
std::map<Letter, double> letter_frequencies(const SturmianParameters& params);

/// Sliding-window frequency of `pattern` as a contiguous factor of `word`.
double empirical_frequency(const Word& word, const Word& pattern);

/// Simple continued fraction digits of alpha in (0,1); the list is shorter
/// than `depth` when a remainder drops below kRationalTolerance.
ContinuedFraction continued_fraction_digits(double alpha, int depth);

/// p_d/q_d from the first d digits.
Convergent convergent(const ContinuedFraction& cf, std::size_t depth);

/// True if the continued-fraction expansion of alpha terminates within
/// `depth` digits at tolerance kRationalTolerance.
bool looks_rational(double alpha, int depth = 40);

/// Lebesgue measure of the set of phases theta for which the word starting at
/// position 0 equals `pattern`. Zero for patterns that never occur.
PatternFrequency sturmian_pattern_frequency(double alpha, const Word& pattern);

/// The two factors 1 0^c 1 and 1 0^(c-1) 1 (c = floor(1/alpha)) with their
/// frequencies 1 - c*alpha and (c+1)*alpha - 1, in that order.
std::vector<PatternFrequency> adjacent_one_separations(double alpha);

}  // namespace sturmgraph
