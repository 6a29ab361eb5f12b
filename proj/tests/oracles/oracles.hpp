#pragma once

// Reference computations that share no numerics with the library: finite
// differences, dense Eigen eigensolves and closed-form word arithmetic.

#include <cstdint>
#include <vector>

#include "sturmgraph/graphs.hpp"

namespace oracle {

/// Lowest `count` eigenvalues of the Laplacian on `g` (Kirchhoff, Robin and
/// Dirichlet vertices honoured) from a second-order finite-difference mesh of
/// step at most h: lumped-mass linear elements, which is the three-point
/// stencil on edges with flux matching at vertices. Eigenvalues are isolated
/// by Sylvester inertia of K - x M and bisection. Throws std::invalid_argument
/// if h exceeds the shortest edge / 8.
std::vector<double> fd_eigenvalues(const sturmgraph::CompactMetricGraph& g, double h, int count);

/// #{lambda < x} of the same discretization.
std::size_t fd_count_below(const sturmgraph::CompactMetricGraph& g, double h, double x);

/// Normalized Laplacian spectrum by Eigen's dense self-adjoint solver,
/// built straight from the adjacency lists.
std::vector<double> discrete_eigenvalues(const sturmgraph::DiscreteGraph& g);

/// Mechanical word floor((n+1) a + t) - floor(n a + t) for n = 0..count-1,
/// evaluated in long double.
std::vector<int> mechanical_word(double alpha, double theta, std::int64_t count);

/// floor(1/alpha) by repeated subtraction.
std::int64_t first_digit(double alpha);

}  // namespace oracle
