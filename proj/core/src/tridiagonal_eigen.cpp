#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/errors.hpp"

namespace sturmgraph {

namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix; d is overwritten with
// the eigenvalues. e[i] couples i and i+1, e.size() == d.size() (last unused).
void implicit_ql(std::vector<double>& d, std::vector<double>& e, double eps) {
  const int n = static_cast<int>(d.size());
  constexpr int max_iter = 60;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iter) throw NumericalError("implicit QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  if (d.empty()) return {};
  if (e.size() + 1 < d.size()) throw InputError("tridiagonal: off-diagonal too short");
  e.resize(d.size(), 0.0);
  e.back() = 0.0;
  implicit_ql(d, e, std::numeric_limits<double>::epsilon());
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& m, double tol) {
  const int n = m.n;
  if (n == 0) return {};
  double norm = 0.0;
  for (double x : m.data) norm = std::max(norm, std::fabs(x));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > 1e-12 * std::max(norm, 1.0)) {
        throw InputError("symmetric_eigenvalues: matrix is not symmetric");
      }
    }
  }

  // Householder reduction on a full symmetric copy; rows stay contiguous.
  SymmetricMatrix a = m;
  std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n), 0.0);
  std::vector<double> u(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n));
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double scale = 0.0;
    for (int k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
    if (l == 0 || scale == 0.0) {
      e[l] = a(i, l);
      continue;
    }
    double h = 0.0;
    for (int k = 0; k <= l; ++k) {
      u[k] = a(i, k) / scale;
      h += u[k] * u[k];
    }
    const double f = u[l];
    const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
    e[l] = scale * g;
    h -= f * g;
    u[l] = f - g;
    double k_coef = 0.0;
    for (int j = 0; j <= l; ++j) {
      const double* row = &a.data[static_cast<std::size_t>(j) * n];
      double s = 0.0;
      for (int k = 0; k <= l; ++k) s += row[k] * u[k];
      p[j] = s / h;
      k_coef += u[j] * p[j];
    }
    k_coef /= 2.0 * h;
    for (int j = 0; j <= l; ++j) p[j] -= k_coef * u[j];
    for (int j = 0; j <= l; ++j) {
      double* row = &a.data[static_cast<std::size_t>(j) * n];
      const double qj = p[j], uj = u[j];
      for (int k = 0; k <= l; ++k) row[k] -= qj * u[k] + uj * p[k];
    }
  }
  for (int i = 0; i < n; ++i) d[i] = a(i, i);
  implicit_ql(d, e, tol);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace sturmgraph
