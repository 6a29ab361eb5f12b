#include "sturmgraph/metric_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edge_kernel.hpp"
#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/errors.hpp"

namespace sturmgraph {

using detail::kPi;

// ---------------------------------------------------------------- Spectrum

std::size_t Spectrum::count_at_most(double E) const {
  std::size_t c = 0;
  for (const auto& ev : eigenvalues) {
    if (ev.lambda <= E) c += static_cast<std::size_t>(ev.multiplicity);
  }
  return c;
}

std::size_t Spectrum::count_below(double E) const {
  std::size_t c = 0;
  for (const auto& ev : eigenvalues) {
    if (ev.lambda < E) c += static_cast<std::size_t>(ev.multiplicity);
  }
  return c;
}

std::size_t Spectrum::total() const { return count_at_most(std::numeric_limits<double>::infinity()); }

int Spectrum::multiplicity_at(double E, double tol) const {
  int m = 0;
  for (const auto& ev : eigenvalues) {
    if (std::abs(ev.lambda - E) <= tol) m += ev.multiplicity;
  }
  return m;
}

std::vector<double> Spectrum::flattened() const {
  std::vector<double> out;
  for (const auto& ev : eigenvalues) out.insert(out.end(), static_cast<std::size_t>(ev.multiplicity), ev.lambda);
  return out;
}

Spectrum merge_spectrum(std::vector<double> values, double k_max, double tol) {
  std::sort(values.begin(), values.end());
  Spectrum s;
  s.k_max = k_max;
  for (double v : values) {
    if (!s.eigenvalues.empty() && std::abs(v - s.eigenvalues.back().lambda) <= tol) {
      ++s.eigenvalues.back().multiplicity;
    } else {
      s.eigenvalues.push_back({v, 1});
    }
  }
  return s;
}

void SolveOptions::validate() const {
  if (!(k_max > 0.0) || !std::isfinite(k_max)) throw InputError("k_max must be positive");
  if (k_step < 0.0) throw InputError("k_step must be non-negative");
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  if (merge_tol < 0.0) throw InputError("merge_tol must be non-negative");
}

// ------------------------------------------------------- scattering solver

ComplexMatrix bond_scattering_matrix(const CompactMetricGraph& g) {
  g.validate();
  if (g.has_robin()) throw InputError("scattering solver handles Kirchhoff and Dirichlet vertices only");
  const int nb = 2 * static_cast<int>(g.edges.size());
  // bonds leaving / arriving at each vertex
  std::vector<std::vector<int>> out(g.vertices.size()), in(g.vertices.size());
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const auto& ed = g.edges[e];
    out[ed.u].push_back(2 * e);
    in[ed.v].push_back(2 * e);
    out[ed.v].push_back(2 * e + 1);
    in[ed.u].push_back(2 * e + 1);
  }
  ComplexMatrix S(nb);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const double d = static_cast<double>(out[v].size());
    const bool dir = g.vertices[v].condition == VertexCondition::Dirichlet;
    for (int b_out : out[v]) {
      for (int b_in : in[v]) {
        double val = dir ? 0.0 : 2.0 / d;
        if (b_out == reverse_bond(b_in)) val -= 1.0;
        S(b_out, b_in) += val;
      }
    }
  }
  return S;
}

namespace {

// Eigenphases in (-pi, pi] of a unitary V. The Cayley transform
// H = i (I - W)(I + W)^{-1} of W = e^{i beta} V is Hermitian with
// eigenvalues tan((theta + beta)/2); beta is chosen so that no phase sits
// near the pole at pi.
std::vector<double> unitary_phases(const Eigen::MatrixXcd& V) {
  const Eigen::Index n = V.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  if (n == 0) return {};
  auto attempt = [&](double beta, double& rcond) {
    const Eigen::MatrixXcd W = std::polar(1.0, beta) * V;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(I + W);
    rcond = lu.rcond();
    Eigen::MatrixXcd H = std::complex<double>(0.0, 1.0) * lu.solve(I - W);
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    std::vector<double> phases(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
      double t = 2.0 * std::atan(es.eigenvalues()(j)) - beta;
      while (t <= -kPi) t += 2.0 * kPi;
      while (t > kPi) t -= 2.0 * kPi;
      phases[static_cast<std::size_t>(j)] = t;
    }
    return phases;
  };
  // a handful of incommensurate rotations; every eigenvalue can block at
  // most a short arc of them
  double best_rcond = -1.0;
  std::vector<double> best;
  for (double beta : {0.0, 1.1, 2.3, -1.7, 0.6, -0.4, 2.9, -2.6}) {
    double rcond = 0.0;
    std::vector<double> phases = attempt(beta, rcond);
    if (rcond > 1e-3) return phases;
    if (rcond > best_rcond) {
      best_rcond = rcond;
      best = std::move(phases);
    }
  }
  if (best_rcond < 1e-10) throw NumericalError("eigenphase computation is ill-conditioned");
  return best;
}

struct ScatteringSystem {
  Eigen::MatrixXcd S;
  std::vector<double> bond_length;
  double phase_offset = 0.0;  // sum of eigenphases of S, with phase 0 for eigenvalue 1
  double length_sum = 0.0;    // sum over bonds

  explicit ScatteringSystem(const CompactMetricGraph& g) {
    const ComplexMatrix s = bond_scattering_matrix(g);
    S.resize(s.n, s.n);
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j) S(i, j) = s(i, j);
    for (const auto& e : g.edges) {
      bond_length.push_back(e.length);
      bond_length.push_back(e.length);
      length_sum += 2.0 * e.length;
    }
    for (double a : unitary_phases(S)) {
      if (std::abs(a) < 1e-9) continue;
      phase_offset += a < 0.0 ? a + 2.0 * kPi : a;
    }
  }

  std::vector<double> phases(double k) const {
    Eigen::MatrixXcd U = S;
    for (Eigen::Index b = 0; b < U.rows(); ++b) {
      U.row(b) *= std::polar(1.0, k * bond_length[static_cast<std::size_t>(b)]);
    }
    return unitary_phases(U);
  }

  struct Evaluation {
    long count = 0;
    double neg = -kPi;  // largest negative eigenphase
    double pos = kPi;   // smallest non-negative eigenphase
  };

  Evaluation evaluate(double k) const {
    Evaluation ev;
    double s = 0.0;
    for (double a : phases(k)) {
      if (a < 0.0) {
        ev.neg = std::max(ev.neg, a);
        s += a + 2.0 * kPi;
      } else {
        ev.pos = std::min(ev.pos, a);
        s += a;
      }
    }
    ev.count = std::lround((k * length_sum + phase_offset - s) / (2.0 * kPi));
    return ev;
  }

  long count(double k) const { return evaluate(k).count; }
};

void check_dimension(const CompactMetricGraph& g, std::size_t max_dim) {
  if (2 * g.edges.size() > max_dim) {
    throw InputError("graph has " + std::to_string(2 * g.edges.size()) +
                     " directed bonds, above max_dim = " + std::to_string(max_dim));
  }
}

// Refines a bracket (a, b] holding exactly one simple root. The count
// decides which side of the root a point lies on; the crossing eigenphase is
// then the largest negative phase left of the root and the smallest
// non-negative one right of it, and Illinois regula falsi runs on it.
double refine_simple_root(const ScatteringSystem& sys, double a, double b, long ca, double tol) {
  double ga = sys.evaluate(a).neg;
  double gb = sys.evaluate(b).pos;
  int side = 0;
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    double x = 0.5 * (a + b);
    if (ga < 0.0 && gb >= 0.0 && gb - ga > 0.0) {
      x = (a * gb - b * ga) / (gb - ga);
      if (!(x > a && x < b)) x = 0.5 * (a + b);
    }
    const auto ev = sys.evaluate(x);
    if (ev.count == ca) {
      a = x;
      ga = ev.neg;
      if (ga > -1e-14) return x;
      if (side == -1) gb *= 0.5;
      side = -1;
    } else {
      b = x;
      gb = ev.pos;
      if (gb < 1e-14) return x;
      if (side == 1) ga *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

struct RootSearch {
  const ScatteringSystem& sys;
  double tol;
  std::vector<double> roots;

  void search(double a, double b, long ca, long cb) {
    const long c = cb - ca;
    if (c <= 0) return;
    if (b - a <= tol) {
      for (long i = 0; i < c; ++i) roots.push_back(0.5 * (a + b));
      return;
    }
    if (c == 1 && b - a < 1e-3) {
      roots.push_back(refine_simple_root(sys, a, b, ca, tol));
      return;
    }
    const double m = 0.5 * (a + b);
    const long cm = sys.count(m);
    search(a, m, ca, cm);
    search(m, b, cm, cb);
  }
};

}  // namespace

std::size_t secular_root_count(const CompactMetricGraph& g, double k) {
  const ScatteringSystem sys(g);
  return static_cast<std::size_t>(std::max(0L, sys.count(k)));
}

double secular_residual(const CompactMetricGraph& g, double k) {
  const ScatteringSystem sys(g);
  double best = std::numeric_limits<double>::infinity();
  for (double a : sys.phases(k)) best = std::min(best, std::abs(1.0 - std::polar(1.0, a)));
  return best;
}

Spectrum metric_spectrum_general(const CompactMetricGraph& g, const SolveOptions& opts) {
  opts.validate();
  g.validate();
  check_dimension(g, opts.max_dim);
  double ell_max = 0.0;
  for (const auto& e : g.edges) ell_max = std::max(ell_max, e.length);
  const double step = opts.k_step > 0.0 ? opts.k_step : kPi / (8.0 * g.total_length());
  if (ell_max * step >= kPi) throw NumericalError("grid too coarse: k_step * max edge length >= pi");

  const ScatteringSystem sys(g);
  RootSearch rs{sys, opts.tol, {}};
  const double top = opts.k_max * (1.0 + 1e-9);
  double a = 0.0;
  long ca = 0;
  while (a < top) {
    const double b = std::min(top, a + step);
    const long cb = sys.count(b);
    if (cb < ca) throw NumericalError("root counting function decreased");
    rs.search(a, b, ca, cb);
    a = b;
    ca = cb;
  }
  std::vector<double> k_roots = rs.roots;
  std::sort(k_roots.begin(), k_roots.end());
  // merge in k, then square
  Spectrum s;
  s.k_max = opts.k_max;
  if (!g.has_dirichlet()) s.eigenvalues.push_back({0.0, 1});
  std::vector<std::pair<double, int>> groups;
  for (double k : k_roots) {
    if (!groups.empty() && k - groups.back().first <= opts.merge_tol) {
      ++groups.back().second;
    } else {
      groups.emplace_back(k, 1);
    }
  }
  for (const auto& [k, mult] : groups) {
    if (k > top) continue;
    s.eigenvalues.push_back({k * k, mult});
  }
  return s;
}

// ------------------------------------------------------ signature counting

namespace {

SymmetricMatrix vertex_form(const CompactMetricGraph& g, double E, std::vector<int>& index) {
  index.assign(g.vertices.size(), -1);
  int n = 0;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].condition != VertexCondition::Dirichlet) index[v] = n++;
  }
  SymmetricMatrix Q(n);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (index[v] >= 0 && g.vertices[v].condition == VertexCondition::Robin) {
      Q(index[v], index[v]) += g.vertices[v].robin;
    }
  }
  for (const auto& e : g.edges) {
    const auto f = detail::edge_form(E, e.length);
    const int a = index[e.u];
    const int b = index[e.v];
    if (a >= 0) Q(a, a) += f.diag;
    if (b >= 0) Q(b, b) += f.diag;
    if (a >= 0 && b >= 0) {
      Q(a, b) += f.off;
      Q(b, a) += f.off;
    }
  }
  return Q;
}

double max_abs(const SymmetricMatrix& m) {
  double s = 0.0;
  for (double x : m.data) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

EigenCount count_eigenvalues(const CompactMetricGraph& g, double E) {
  g.validate();
  EigenCount c;
  for (const auto& e : g.edges) {
    const std::size_t below = detail::edge_dirichlet_below(E, e.length);
    c.below += below;
  }
  std::vector<int> index;
  const SymmetricMatrix Q = vertex_form(g, E, index);
  c.at_most = c.below;
  if (Q.n == 0) return c;
  const double tau = 1e-8 * std::max(1.0, max_abs(Q));
  for (double q : symmetric_eigenvalues(Q)) {
    if (q < -tau) {
      ++c.below;
      ++c.at_most;
    } else if (q <= tau) {
      ++c.at_most;
    }
  }
  return c;
}

// ---------------------------------------------------------------- decorations

double tooth_robin(double k, double ell, double tol) {
  const double c = std::cos(k * ell);
  if (std::abs(c) < tol) throw NumericalError("pendant edge at a Dirichlet energy: tan(k*ell) undefined");
  return k * std::sin(k * ell) / c;
}

namespace {

DecorationSolution tooth_solution(const Decoration& d, double ell, double E) {
  DecorationSolution s;
  s.energy = E;
  s.values.assign(2, 1.0);
  const int tip = d.edges.front().u == d.base_vertex ? d.edges.front().v : d.edges.front().u;
  if (E > 0.0) {
    const double k = std::sqrt(E);
    s.m = tooth_robin(k, ell);
    s.values[tip] = 1.0 / std::cos(k * ell);
  } else if (E < 0.0) {
    const double kappa = std::sqrt(-E);
    s.m = -kappa * std::tanh(kappa * ell);
    s.values[tip] = 1.0 / std::cosh(kappa * ell);
  } else {
    s.m = 0.0;
  }
  return s;
}

DecorationSolution general_decoration_solution(const Decoration& d, double E) {
  const int n = d.vertex_count;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : d.edges) {
    const auto f = detail::edge_form(E, e.length);
    Q(e.u, e.u) += f.diag;
    Q(e.v, e.v) += f.diag;
    Q(e.u, e.v) += f.off;
    Q(e.v, e.u) += f.off;
  }
  std::vector<int> interior;
  for (int v = 0; v < n; ++v)
    if (v != d.base_vertex) interior.push_back(v);
  const int m = static_cast<int>(interior.size());
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    rhs(i) = -Q(interior[i], d.base_vertex);
    for (int j = 0; j < m; ++j) A(i, j) = Q(interior[i], interior[j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().cwiseAbs().minCoeff() < 1e-10 * scale) {
    throw NumericalError("energy in the base-Dirichlet spectrum of the decoration");
  }
  const Eigen::VectorXd x = A.ldlt().solve(rhs);
  DecorationSolution s;
  s.energy = E;
  s.values.assign(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < m; ++i) s.values[interior[i]] = x(i);
  double qx = 0.0;
  for (int v = 0; v < n; ++v) qx += Q(d.base_vertex, v) * s.values[v];
  s.m = -qx;
  return s;
}

}  // namespace

DecorationSolution decoration_solution(const Decoration& dec, double E) {
  const Decoration d = dec.simplified();
  if (d.is_point()) {
    DecorationSolution s;
    s.energy = E;
    s.values = {1.0};
    return s;
  }
  if (auto ell = d.tooth_length()) return tooth_solution(d, *ell, E);
  try {
    return general_decoration_solution(d, E);
  } catch (const NumericalError&) {
    // an edge-Dirichlet energy is removable unless it is also a true
    // Dirichlet-base eigenvalue; retry just off it
    for (const auto& e : d.edges) {
      if (E > 0.0 && std::abs(std::sin(std::sqrt(E) * e.length)) < 1e-11) {
        return general_decoration_solution(d, E * (1.0 + 1e-9));
      }
    }
    throw;
  }
}

double decoration_m_function(const Decoration& d, double E) { return decoration_solution(d, E).m; }

Spectrum dirichlet_decoration_energies(const Decoration& dec, double k_max) {
  const Decoration d = dec.simplified();
  if (d.is_point()) return Spectrum{{}, k_max};
  CompactMetricGraph g;
  g.vertices.resize(static_cast<std::size_t>(d.vertex_count));
  g.vertices[d.base_vertex].condition = VertexCondition::Dirichlet;
  g.edges = d.edges;
  g.boundary = {d.base_vertex};
  SolveOptions opts;
  opts.k_max = k_max;
  opts.max_dim = std::max<std::size_t>(opts.max_dim, 2 * g.edges.size());
  return metric_spectrum_general(g, opts);
}

// ------------------------------------------------------------ half line

namespace {

// angle of (f, d/scale) in [0, pi)
double projective_angle(double f, double d, double scale) {
  double a = std::atan2(f, d / scale);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

HalfLineData shoot_from(const ModelSpec& model, const Word& word, double E, int window, int far_n,
                        const std::map<Letter, double>& m) {
  const double scale = std::max(1.0, std::sqrt(std::abs(E)));
  HalfLineData h;
  h.energy = E;
  h.f.assign(static_cast<std::size_t>(window) + 1, 0.0);
  h.d_left = h.f;
  h.d_right = h.f;
  double f = 0.0;
  double d_left = 1.0;
  for (int i = far_n - 1; i >= 0; --i) {
    const auto st = detail::propagate(E, -model.spacing, f, d_left);
    const double d_right = st.d;
    f = st.f;
    d_left = d_right + m.at(word[static_cast<std::size_t>(i)]) * f;
    const double norm = std::max({std::abs(f), std::abs(d_right) / scale, std::abs(d_left) / scale});
    if (norm == 0.0 || !std::isfinite(norm)) throw NumericalError("half-line shooting degenerated");
    f /= norm;
    d_left /= norm;
    if (i <= window) {
      h.f[i] = f;
      h.d_left[i] = d_left;
      h.d_right[i] = d_right / norm;
    }
  }
  return h;
}

}  // namespace

HalfLineData half_line_solution_data(const ModelSpec& model, const Word& word, double E, int window,
                                     int far_n) {
  model.validate();
  if (window < 0) throw InputError("window must be non-negative");
  if (far_n < 4 * window || far_n < 1) throw InputError("far_n must be at least 4 * window");
  if (static_cast<std::int64_t>(word.size()) < 2 * static_cast<std::int64_t>(far_n) + 1) {
    throw InputError("word must cover sites 0..2*far_n");
  }
  std::map<Letter, double> m;
  for (Letter a : word.letters) {
    if (!m.count(a)) m[a] = decoration_m_function(model.decoration(a), E);
  }
  const HalfLineData h1 = shoot_from(model, word, E, window, far_n, m);
  const HalfLineData h2 = shoot_from(model, word, E, window, 2 * far_n, m);
  const double scale = std::max(1.0, std::sqrt(std::abs(E)));
  for (int i = 0; i <= window; ++i) {
    const double a1 = projective_angle(h1.f[i], h1.d_right[i], scale);
    const double a2 = projective_angle(h2.f[i], h2.d_right[i], scale);
    double diff = std::abs(a1 - a2);
    diff = std::min(diff, kPi - diff);
    if (diff > 1e-6) {
      throw NumericalError("no decaying solution: E is in or too close to the spectrum");
    }
  }
  return h2;
}

}  // namespace sturmgraph
