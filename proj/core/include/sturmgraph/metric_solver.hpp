#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "sturmgraph/graphs.hpp"
#include "sturmgraph/spectrum.hpp"

namespace sturmgraph {

struct SolveOptions {
  double k_max = 10.0;
  double k_step = 0.0;      // 0 selects pi / (8 * total length)
  double tol = 1e-11;       // bisection width in k
  double merge_tol = 1e-7;  // roots closer than this in k are one eigenvalue
  std::size_t max_dim = 200;  // cap on directed bonds for the general solver

  void validate() const;
};

struct ComplexMatrix {
  int n = 0;
  std::vector<std::complex<double>> data;  // row-major

  explicit ComplexMatrix(int size = 0)
      : n(size), data(static_cast<std::size_t>(size) * size, {0.0, 0.0}) {}
  std::complex<double>& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
  std::complex<double> operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * n + j];
  }
};

/// Directed bond 2e runs u->v along edge e, bond 2e+1 runs v->u.
inline int forward_bond(int edge) { return 2 * edge; }
inline int reverse_bond(int bond) { return bond ^ 1; }

/// k-independent vertex scattering matrix over directed bonds:
/// S(out, in) for `in` arriving at the vertex `out` leaves from.
/// Kirchhoff: 2/d - delta(out, reverse(in)); Dirichlet: -delta.
/// Throws InputError on Robin vertices.
ComplexMatrix bond_scattering_matrix(const CompactMetricGraph& g);

/// Number of roots k in (0, k] of det(I - D(k) S), counted with multiplicity,
/// read off from the eigenphases of the unitary D(k) S.
std::size_t secular_root_count(const CompactMetricGraph& g, double k);

/// min_j |1 - exp(i theta_j(k))| over eigenphases of D(k) S; zero at roots.
double secular_residual(const CompactMetricGraph& g, double k);

/// All eigenvalues lambda = k^2 <= k_max^2 of the Kirchhoff/Dirichlet
/// Laplacian on a compact metric graph.
Spectrum metric_spectrum_general(const CompactMetricGraph& g, const SolveOptions& opts);

struct EigenCount {
  std::size_t below = 0;    // #{lambda < E}
  std::size_t at_most = 0;  // #{lambda <= E}
};

/// Exact eigenvalue count at a single energy for any mix of Kirchhoff, Robin
/// and Dirichlet vertices (E may be negative). Uses the inertia of the
/// vertex form obtained after removing edge-Dirichlet modes. Throws
/// NumericalError when E sits on an edge-Dirichlet eigenvalue.
EigenCount count_eigenvalues(const CompactMetricGraph& g, double E);

/// Base-vertex Robin coefficient k*tan(k*ell) of a pendant edge with a
/// Kirchhoff (Neumann) tip. Throws NumericalError at |cos(k*ell)| < tol.
double tooth_robin(double k, double ell, double tol = 1e-12);

/// Solution of -f'' = E f on a decoration, Kirchhoff away from the base and
/// only continuity at the base; normalized to f(base) = 1.
struct DecorationSolution {
  double energy = 0.0;
  std::vector<double> values;  // f at decoration vertices (simplified ids)
  double m = 0.0;              // sum of outgoing derivatives at the base
};

/// Works for E of either sign. Throws NumericalError at excluded energies
/// (base-Dirichlet spectrum of the decoration, or an edge-Dirichlet energy).
DecorationSolution decoration_solution(const Decoration& d, double E);

/// m_a(E); zero for a bare vertex.
double decoration_m_function(const Decoration& d, double E);

/// Spectrum of the decoration with a Dirichlet base vertex.
Spectrum dirichlet_decoration_energies(const Decoration& d, double k_max);

/// Comb truncation spectrum (letter 1 = pendant edge of length ell,
/// letter 0 = bare site) by Sturm-sequence shooting along the chain; the
/// pendant-edge Dirichlet energies get their multiplicity from the
/// compactly supported eigenfunctions between teeth.
Spectrum comb_spectrum_fast(double L, double ell, const Word& word, CutCondition cut,
                            const SolveOptions& opts);
Spectrum comb_spectrum_fast(const ModelSpec& model, const Word& word, CutCondition cut,
                            const SolveOptions& opts);

/// #{lambda < E} for the comb truncation (E > 0, generic).
std::size_t comb_count_below(double L, double ell, const Word& word, CutCondition cut, double E);

/// Dimension of the space of eigenfunctions at a pendant-edge Dirichlet
/// energy k*ell = pi/2 + pi*j that vanish at every tooth base. Zero for
/// other k.
int comb_compact_multiplicity(double L, double ell, const Word& word, CutCondition cut, double k);

/// Binary word (1 = pendant edge) and the common pendant length of a comb
/// model; empty when the model is not a comb or mixes pendant lengths.
struct CombWord {
  Word word;
  double ell = 1.0;
};
std::optional<CombWord> as_comb(const ModelSpec& model, const Word& word);

/// Spectrum of either kind of model: comb models go to the fast solver,
/// everything else to the general solver.
Spectrum truncation_spectrum(const ModelSpec& model, const Word& word, CutCondition cut,
                             const SolveOptions& opts);

/// Values of the right-decaying solution at chain vertices 0..window of the
/// half-infinite decorated chain. Per vertex, (f, d_left, d_right) share one
/// arbitrary scale: d_left = f'(x-), d_right = f'(x+) along the chain.
struct HalfLineData {
  double energy = 0.0;
  std::vector<double> f;
  std::vector<double> d_left;
  std::vector<double> d_right;

  double ratio_left(std::size_t i) const { return d_left[i] / f[i]; }
  double ratio_right(std::size_t i) const { return d_right[i] / f[i]; }
};

/// Shoots from a Dirichlet condition at chain vertex far_n back to the origin
/// and checks that the data on 0..window are unchanged (to 1e-6) when far_n is
/// doubled. `word` must cover sites 0..2*far_n. Throws NumericalError when E
/// is in (or too close to) the spectrum, InputError when far_n < 4*window.
HalfLineData half_line_solution_data(const ModelSpec& model, const Word& word, double E,
                                     int window, int far_n);

}  // namespace sturmgraph
