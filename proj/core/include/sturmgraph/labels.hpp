#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sturmgraph/graphs.hpp"
#include "sturmgraph/metric_solver.hpp"

namespace sturmgraph {

/// Normalized eigenvalue counting function of one truncation:
/// #{lambda <= E} / normalization (total length, or vertex count).
struct IDSCurve {
  std::int64_t n = 0;
  CutCondition cut = CutCondition::Kirchhoff;
  bool discrete = false;
  double normalization = 1.0;
  std::vector<double> breakpoints;  // eigenvalues with repetition, ascending

  double operator()(double E) const;
  /// #{lambda < E} / normalization
  double below(double E) const;
  std::size_t count_at_most(double E) const;
};

struct IDSReport {
  std::vector<IDSCurve> curves;
  std::vector<double> sup_distance;  // consecutive sizes, on [e_lo, e_hi]
};

IDSCurve metric_ids_curve(const ModelSpec& model, std::int64_t n, double e_max, CutCondition cut,
                          SolveOptions opts = {});
IDSCurve discrete_ids_curve(const ModelSpec& model, std::int64_t n, CutCondition cut);

/// Metric IDS curves for increasing sizes, complete on [0, e_max].
IDSReport ids_metric(const ModelSpec& model, const std::vector<std::int64_t>& sizes, double e_max,
                     SolveOptions opts = {});

/// sup over [e_lo, e_hi] of |a - b|; exact for step functions.
double sup_distance(const IDSCurve& a, const IDSCurve& b, double e_lo, double e_hi);

enum class GapStability { Stable, BoundaryArtifact };

struct Gap {
  double lo = 0.0;
  double hi = 0.0;
  double ids_value = 0.0;                // plateau of the largest size
  std::vector<double> plateaus;          // one per size, ascending sizes
  GapStability stability = GapStability::Stable;
};

struct GapOptions {
  double e_lo = 0.0;
  double e_hi = 40.0;
  double eps_factor = 4.0;      // eps_gap = eps_factor * mean level spacing
  double plateau_factor = 3.0;  // delta_plateau = plateau_factor / normalization
  int max_artifacts = 2;        // eigenvalues tolerated inside a candidate per spectrum
};

/// Mean level spacing of a truncation at E: 2*pi*sqrt(E)/|Gamma| (metric,
/// from Weyl's law) or 2/|V| (discrete).
double mean_level_spacing(const IDSCurve& c, double E);

/// Intervals free of bulk eigenvalues in every curve. Needs at least two sizes,
/// each with a Kirchhoff and a Dirichlet variant. A curve's candidate intervals
/// are spans between eigenvalues with at most max_artifacts eigenvalues inside
/// and width >= eps_gap; candidates are intersected over all curves. The
/// plateau of a size is the Kirchhoff/Dirichlet average of the normalized
/// count at the gap midpoint.
std::vector<Gap> detect_gaps(const std::vector<IDSCurve>& curves, const GapOptions& opts);

struct LatticePoint {
  int n = 0;
  int m = 0;
  double value = 0.0;
};

/// {(alpha*n + m)/Lbar : |n| <= n_max, |m| <= m_max} in [0, value_cap],
/// sorted by value.
std::vector<LatticePoint> label_lattice_sturmian(double alpha, double Lbar, int n_max, int m_max,
                                                 double value_cap);

/// Same lattice over Vbar, capped to [0, 1].
std::vector<LatticePoint> discrete_label_set(double alpha, double Vbar, int n_max, int m_max);

struct LabelMatch {
  int n = 0;
  int m = 0;
  double predicted = 0.0;
  double residual = 0.0;
};

/// Nearest lattice point; ties go to smaller |n|, then smaller |m|, then n >= 0.
LabelMatch match_gap_label(double ids_value, const std::vector<LatticePoint>& lattice);
LabelMatch match_gap_label(const Gap& gap, const std::vector<LatticePoint>& lattice);

enum class JumpCase { One, Two, Both };

struct JumpWitness {
  JumpCase kind = JumpCase::One;
  int m = 0;
  int n = 0;
};

struct JumpPrediction {
  JumpCase kind = JumpCase::One;
  std::vector<JumpWitness> witnesses;
  double energy = 0.0;
  double delta_n = 0.0;
};

/// Energies where the comb IDS jumps, with jump sizes; sorted by energy.
std::vector<JumpPrediction> predict_jumps(double alpha, double ell, double L, int m_max, int n_max);

struct JumpMeasurement {
  double energy = 0.0;
  std::vector<std::int64_t> sizes;
  std::vector<int> multiplicity;
  std::vector<double> total_length;
  std::vector<double> jump;  // multiplicity / total length
  double extrapolated = 0.0; // linear in 1/|Gamma| through the two largest sizes
};

/// Kernel dimension of each Kirchhoff truncation at E, per unit length.
JumpMeasurement measure_jump(const ModelSpec& model, double E, const std::vector<std::int64_t>& sizes);

/// Residual of N_metric(E) = floor(k/pi) + C*N_disc(1 - cos k) (even floor)
/// or floor(k/pi) + C*(1 - N_disc(1 - cos k)) (odd floor), k = sqrt(E).
/// Both IDS values use per-edge (metric) and per-vertex (discrete)
/// normalization. Throws InputError when k is a multiple of pi.
double correspondence_ids_check(double metric_ids, double discrete_ids, double E, double C);

std::string to_string(JumpCase c);
std::string to_string(GapStability s);

}  // namespace sturmgraph
