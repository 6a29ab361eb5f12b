#pragma once

#include <cstddef>
#include <vector>

namespace sturmgraph {

struct Eigenvalue {
  double lambda = 0.0;
  int multiplicity = 1;
};

/// Sorted eigenvalues with multiplicities, complete for lambda <= k_max^2.
struct Spectrum {
  std::vector<Eigenvalue> eigenvalues;
  double k_max = 0.0;

  /// #{lambda <= E} with multiplicity.
  std::size_t count_at_most(double E) const;
  /// #{lambda < E} with multiplicity.
  std::size_t count_below(double E) const;
  std::size_t total() const;
  /// Multiplicity of E (eigenvalues within tol of E, absolute in lambda).
  int multiplicity_at(double E, double tol) const;
  /// Eigenvalues repeated by multiplicity.
  std::vector<double> flattened() const;
};

/// Merges sorted values that lie within `tol` of their neighbour.
Spectrum merge_spectrum(std::vector<double> values, double k_max, double tol);

}  // namespace sturmgraph
