#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sturmgraph/graphs.hpp"
#include "sturmgraph/labels.hpp"
#include "sturmgraph/metric_solver.hpp"

namespace sturmgraph {

/// Zeros in (0, length] of the solution of -f'' = E f with f(0) = f0,
/// f'(0) = fp0, by phase arithmetic. Throws InputError for (f0, fp0) = 0.
int zeros_on_interval_energy(double f0, double fp0, double E, double length);

/// Same with E = k^2; throws InputError unless k > 0.
int zeros_on_interval(double f0, double fp0, double k, double length);

struct NodalData {
  double requested_energy = 0.0;
  double energy = 0.0;  // differs from the request when it had to be nudged
  bool perturbed = false;
  int zero_count = 0;
  int robin_count = 1;  // n(E): eigenvalues <= E with the Robin base condition
  int surplus = 0;
  Letter letter = 0;
};

/// Zero count, Robin count and nodal surplus of the decoration solution f_E.
/// Energies where f_E is undefined or vanishes at a vertex are nudged upward
/// by 1e-9 (relative) until they are not.
NodalData decoration_nodal(const Decoration& d, double E);

struct PruferTrace {
  double energy = 0.0;
  std::vector<double> t;
  std::vector<double> phi_lifted;
  std::vector<int> zero_count;  // zeros of f in Gamma(t), counted directly
};

/// Generalized Pruefer angle along a comb half-line for a gap energy E,
/// sampled on [0, t_max] and lifted. Pendant edges at least as long as L are
/// traversed at rescaled speed so that integer radii meet only the chain.
/// `word` must cover 0..8*t_max; longer words let the far end move out for
/// narrow gaps. For E > 0 the angle wraps once per zero on the sphere, so
/// floor(phi_lifted) is the zero count and phi_lifted is non-decreasing.
/// Throws InputError for non-comb models.
PruferTrace prufer_trace(const ModelSpec& model, const Word& word, double E, int t_max,
                         int samples_per_unit = 16);

/// Zeros of f_{omega,E} in Gamma(t) for integer t (chain [0, tL] and the
/// decorations at sites 0..t-1), from half-line data covering 0..t.
int half_line_zero_count(const ModelSpec& model, const Word& word, const HalfLineData& h, int t);

struct CountingLemmaReport {
  double energy = 0.0;
  int t = 0;
  long lhs = 0;             // n(E) of Gamma(t) with Robin ends
  long n_horizontal = 0;    // n(E) of [0, tL] with interior couplings -m
  long decoration_sum = 0;  // sum over sites of n^(a)(E) - 1
  long rhs = 0;
  bool equal = false;
};

/// Builds Gamma(t) and its horizontal reduction with the Robin data of the
/// decaying solution and compares eigenvalue counts at E exactly. far_n is
/// doubled while the half-line data are unstable and `word` is long enough.
CountingLemmaReport verify_counting_lemma(const ModelSpec& model, const Word& word, int t, double E,
                                          int far_n = 64);

/// Interval with Robin couplings at interior points, used for Sturm checks.
struct RobinChain {
  std::vector<double> lengths;    // edges, left to right
  std::vector<double> couplings;  // gamma at each vertex 0..lengths.size()
};

struct SturmReport {
  double energy = 0.0;
  int zeros = 0;
  long count = 0;  // eigenvalues <= E
  bool equal = false;
};

/// Shoots from the left end with its Robin coupling, sets the right coupling
/// so that E is an eigenvalue and compares the count with zeros + 1.
/// The right coupling in `chain` is overwritten.
SturmReport sturm_oscillation_check(RobinChain& chain, double E);

/// Random chain: 1..12 edges in [0.4, 1.6], couplings in [-3, 3].
RobinChain random_robin_chain(std::uint64_t seed);

struct SchwartzmanReport {
  double energy = 0.0;
  int t_max = 0;
  long zeros = 0;
  double zero_rate = 0.0;
  double ids = 0.0;
  double normalized_length = 0.0;
  double surplus_term = 0.0;
  double predicted = 0.0;  // ids * Lbar + sum_a nu_a sigma_a
  double residual = 0.0;   // |zero_rate - predicted|
  LabelMatch lattice;      // nearest alpha*n + m to the zero rate
};

/// Compares the zero rate of f_{omega,E} over [0, t_max] with the IDS at E
/// (cut-averaged count of a truncation of ids_size sites).
SchwartzmanReport schwartzman_identity_check(const ModelSpec& model, double E, int t_max,
                                             std::int64_t ids_size = 1000);

}  // namespace sturmgraph
