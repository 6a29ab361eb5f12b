#include "sturmgraph/discrete_solver.hpp"

#include <algorithm>
#include <cmath>

#include "edge_kernel.hpp"
#include "sturmgraph/errors.hpp"

namespace sturmgraph {

using detail::kPi;

std::size_t DiscreteSpectrum::count_at_most(double x) const {
  return static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), x) - values.begin());
}

std::size_t DiscreteSpectrum::count_below(double x) const {
  return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), x) - values.begin());
}

std::size_t DiscreteSpectrum::multiplicity(double mu, double tol) const {
  return count_at_most(mu + tol) - count_below(mu - tol);
}

DiscreteSpectrum discrete_spectrum(const DiscreteGraph& g) {
  DiscreteSpectrum s;
  s.vertex_count = g.vertex_count();
  s.values = symmetric_eigenvalues(normalized_laplacian_matrix(g));
  // The spectrum lies in [0,2]; rounding can push the ends out by ~1e-16.
  for (double& mu : s.values) mu = std::clamp(mu, 0.0, 2.0);
  return s;
}

DiscreteSpectrum discrete_spectrum(const ModelSpec& model, const Word& word) {
  return discrete_spectrum(build_discrete_truncation(model, word));
}

DiscreteSpectrum discrete_spectrum_dirichlet_cut(const DiscreteGraph& g) {
  const SymmetricMatrix full = normalized_laplacian_matrix(g);
  std::vector<int> keep;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (std::find(g.boundary.begin(), g.boundary.end(), v) == g.boundary.end()) keep.push_back(v);
  }
  SymmetricMatrix sub(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) sub(static_cast<int>(i), static_cast<int>(j)) = full(keep[i], keep[j]);
  DiscreteSpectrum s;
  s.vertex_count = sub.n;
  if (sub.n > 0) s.values = symmetric_eigenvalues(sub);
  for (double& mu : s.values) mu = std::clamp(mu, 0.0, 2.0);
  return s;
}

double dispersion_k(double mu, int branch) {
  if (!(mu >= 0.0 && mu <= 2.0)) throw InputError("mu must lie in [0, 2]");
  if (branch < 0) throw InputError("branch must be non-negative");
  const double a = std::acos(std::clamp(1.0 - mu, -1.0, 1.0));
  return branch % 2 == 0 ? kPi * branch + a : kPi * (branch + 1) - a;
}

Spectrum metric_spectrum_via_correspondence(const DiscreteSpectrum& ds, std::size_t edge_count, double k_max,
                                            double merge_tol) {
  if (ds.vertex_count <= 0) throw InputError("empty discrete spectrum");
  const long mult0 = static_cast<long>(ds.multiplicity(0.0, merge_tol));
  const long mult2 = static_cast<long>(ds.multiplicity(2.0, merge_tol));
  std::vector<double> interior;
  for (double mu : ds.values) {
    if (std::abs(mu) > merge_tol && std::abs(mu - 2.0) > merge_tol) interior.push_back(std::clamp(mu, 0.0, 2.0));
  }
  const long V = ds.vertex_count;
  const long E = static_cast<long>(edge_count);

  std::vector<double> ks(static_cast<std::size_t>(mult0), 0.0);
  for (int m = 0; kPi * m <= k_max * (1.0 + 1e-12); ++m) {
    if (m > 0) {
      const long Mm = m % 2 == 0 ? mult0 : mult2;
      const long Mprev = (m - 1) % 2 == 0 ? mult0 : mult2;
      const long inserted = E + Mm - Mprev - (V - mult0 - mult2);
      if (inserted < 0) throw NumericalError("negative multiplicity at a branch endpoint; is the graph connected?");
      ks.insert(ks.end(), static_cast<std::size_t>(inserted), kPi * m);
    }
    for (double mu : interior) {
      const double k = dispersion_k(mu, m);
      if (k <= k_max) ks.push_back(k);
    }
  }
  std::vector<double> lambdas;
  lambdas.reserve(ks.size());
  for (double k : ks) lambdas.push_back(k * k);
  std::sort(lambdas.begin(), lambdas.end());
  // merge in k-space tolerance
  Spectrum s;
  s.k_max = k_max;
  double last_k = -1.0;
  for (double l : lambdas) {
    const double k = std::sqrt(l);
    if (!s.eigenvalues.empty() && k - last_k <= merge_tol) {
      ++s.eigenvalues.back().multiplicity;
    } else {
      s.eigenvalues.push_back({l, 1});
      last_k = k;
    }
  }
  return s;
}

double DiscreteIDSCurve::operator()(double x) const {
  if (vertex_count <= 0) return 0.0;
  const auto c = std::upper_bound(values.begin(), values.end(), x) - values.begin();
  return static_cast<double>(c) / vertex_count;
}

DiscreteIDSReport discrete_ids(const ModelSpec& model, const std::vector<std::int64_t>& sizes) {
  model.validate();
  DiscreteIDSReport r;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw InputError("sizes must be increasing");
    const Word w = model_word(model, sizes[i]);
    const DiscreteSpectrum ds = discrete_spectrum(model, w);
    r.curves.push_back({sizes[i], ds.vertex_count, ds.values});
  }
  for (std::size_t i = 1; i < r.curves.size(); ++i) {
    const auto& a = r.curves[i - 1];
    const auto& b = r.curves[i];
    double sup = 0.0;
    for (const auto* c : {&a, &b}) {
      for (double x : c->values) sup = std::max(sup, std::abs(a(x) - b(x)));
    }
    r.sup_distance.push_back(sup);
  }
  return r;
}

}  // namespace sturmgraph
