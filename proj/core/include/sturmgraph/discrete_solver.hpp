#pragma once

#include <vector>

#include "sturmgraph/graphs.hpp"
#include "sturmgraph/spectrum.hpp"

namespace sturmgraph {

/// All eigenvalues of a dense symmetric matrix, ascending. Householder
/// reduction to tridiagonal form followed by implicit-shift QL.
/// Throws InputError if the matrix is asymmetric beyond 1e-12 (relative).
std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& m, double tol = 2.220446049250313e-16);

/// Eigenvalues of the tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (e[i] couples i and i+1), ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e);

struct DiscreteSpectrum {
  std::vector<double> values;  // ascending, with repetition
  int vertex_count = 0;

  /// #{mu <= x}
  std::size_t count_at_most(double x) const;
  /// #{mu < x}
  std::size_t count_below(double x) const;
  std::size_t multiplicity(double mu, double tol = 1e-9) const;
};

DiscreteSpectrum discrete_spectrum(const DiscreteGraph& g);
DiscreteSpectrum discrete_spectrum(const ModelSpec& model, const Word& word);

/// Principal submatrix with the boundary chain vertices removed: a Dirichlet
/// cut for the normalized Laplacian (degrees kept from the full graph).
DiscreteSpectrum discrete_spectrum_dirichlet_cut(const DiscreteGraph& g);

/// The k in [pi*branch, pi*(branch+1)] with 1 - cos k = mu.
double dispersion_k(double mu, int branch);

/// Kirchhoff spectrum of the unit-equilateral metric graph whose discrete
/// normalized Laplacian has spectrum `ds`, up to k_max. Branch endpoints
/// k = pi*m are filled so that the count at (pi*m)^2 equals |E|*m + M.
Spectrum metric_spectrum_via_correspondence(const DiscreteSpectrum& ds, std::size_t edge_count,
                                            double k_max, double merge_tol = 1e-9);

struct DiscreteIDSCurve {
  std::int64_t n = 0;
  int vertex_count = 0;
  std::vector<double> values;  // sorted eigenvalues
  /// #{mu <= x} / |V|
  double operator()(double x) const;
};

struct DiscreteIDSReport {
  std::vector<DiscreteIDSCurve> curves;
  std::vector<double> sup_distance;  // between consecutive sizes
};

DiscreteIDSReport discrete_ids(const ModelSpec& model, const std::vector<std::int64_t>& sizes);

}  // namespace sturmgraph
