#include "sturmgraph/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "edge_kernel.hpp"
#include "sturmgraph/errors.hpp"

namespace sturmgraph {

using detail::kPi;

int zeros_on_interval(double f0, double fp0, double k, double length) {
  if (!(k > 0.0)) throw InputError("zeros_on_interval needs k > 0");
  if (f0 == 0.0 && fp0 == 0.0) throw InputError("trivial solution has no isolated zeros");
  if (length < 0.0) throw InputError("negative interval length");
  // f = A sin(k x + phi)
  const double phi = std::atan2(f0, fp0 / k);
  return static_cast<int>(std::floor((k * length + phi) / kPi) - std::floor(phi / kPi));
}

int zeros_on_interval_energy(double f0, double fp0, double E, double length) {
  if (E > 0.0) return zeros_on_interval(f0, fp0, std::sqrt(E), length);
  if (f0 == 0.0 && fp0 == 0.0) throw InputError("trivial solution has no isolated zeros");
  if (fp0 == 0.0) return 0;
  if (E == 0.0) {
    const double x = -f0 / fp0;
    return x > 0.0 && x <= length ? 1 : 0;
  }
  // f0 cosh + fp0 sinh / kappa vanishes where tanh(kappa x) = -f0 kappa / fp0
  const double kappa = std::sqrt(-E);
  const double target = -f0 * kappa / fp0;
  return target > 0.0 && target <= std::tanh(kappa * length) ? 1 : 0;
}

namespace {

int decoration_zero_count(const Decoration& d, const DecorationSolution& sol) {
  if (d.is_point()) return 0;
  if (d.tooth_length()) return zeros_on_interval_energy(1.0, sol.m, sol.energy, *d.tooth_length());
  int z = 0;
  for (const auto& e : d.edges) {
    const auto form = detail::edge_form(sol.energy, e.length);
    const double a = sol.values[e.u];
    const double b = sol.values[e.v];
    z += zeros_on_interval_energy(a, -(form.diag * a + form.off * b), sol.energy, e.length);
  }
  return z;
}

CompactMetricGraph decoration_graph(const Decoration& d, double robin) {
  CompactMetricGraph g;
  g.vertices.resize(static_cast<std::size_t>(d.vertex_count));
  g.vertices[d.base_vertex] = {VertexCondition::Robin, robin};
  g.edges = d.edges;
  g.boundary = {d.base_vertex};
  return g;
}

}  // namespace

NodalData decoration_nodal(const Decoration& dec, double E) {
  const Decoration d = dec.simplified();
  NodalData out;
  out.requested_energy = E;
  out.energy = E;
  out.letter = dec.letter;
  if (d.is_point()) return out;
  for (int attempt = 0; attempt < 50; ++attempt) {
    const double e_try = E + attempt * 1e-9 * std::max(1.0, std::abs(E));
    try {
      const DecorationSolution sol = decoration_solution(d, e_try);
      double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
      for (double v : sol.values) {
        vmax = std::max(vmax, std::abs(v));
        vmin = std::min(vmin, std::abs(v));
      }
      if (vmin <= 1e-9 * vmax) continue;
      out.energy = e_try;
      out.perturbed = attempt > 0;
      out.zero_count = decoration_zero_count(d, sol);
      out.robin_count = static_cast<int>(count_eigenvalues(decoration_graph(d, sol.m), e_try).at_most);
      out.surplus = out.zero_count - (out.robin_count - 1);
      return out;
    } catch (const NumericalError&) {
      continue;
    }
  }
  throw NumericalError("could not move E off the excluded set of the decoration");
}

// ----------------------------------------------------------- half-line zeros

namespace {

// Doubles far_n while the doubling test fails and the word is long enough.
// Narrow gaps decay slowly, so a fixed far end is not enough for them.
HalfLineData adaptive_half_line(const ModelSpec& model, const Word& word, double E, int window, int far_n) {
  far_n = std::max(far_n, 4 * window);
  for (;;) {
    try {
      return half_line_solution_data(model, word, E, window, far_n);
    } catch (const NumericalError&) {
      if (4 * static_cast<std::int64_t>(far_n) + 1 > static_cast<std::int64_t>(word.size())) throw;
      far_n *= 2;
    }
  }
}

}  // namespace

int half_line_zero_count(const ModelSpec& model, const Word& word, const HalfLineData& h, int t) {
  if (t < 0 || static_cast<std::size_t>(t) >= h.f.size()) throw InputError("t outside the half-line window");
  int z = 0;
  for (int j = 0; j < t; ++j) {
    z += zeros_on_interval_energy(h.f[j], h.d_right[j], h.energy, model.spacing);
    const Decoration d = model.decoration(word[static_cast<std::size_t>(j)]).simplified();
    if (!d.is_point()) z += decoration_zero_count(d, decoration_solution(d, h.energy));
  }
  return z;
}

// ------------------------------------------------------------------ Pruefer

namespace {

struct CombSphere {
  const ModelSpec& model;
  const Word& word;  // binary comb word
  const HalfLineData& h;
  double ell;
  double reach;  // radius (in units of L) covered by a pendant edge

  double E() const { return h.energy; }

  // physical distance from the base of the pendant edge at site j at radius t
  double tooth_position(double t, int j) const { return (t - j) / reach * ell; }

  // sum of f'/f over the sphere of radius t (t > 0 non-integer or integer)
  double ratio_sum(double t) const {
    const int j = static_cast<int>(std::floor(t));
    const double s = (t - j) * model.spacing;
    if (s == 0.0) return h.d_left[j] / h.f[j];
    const auto st = detail::propagate(E(), s, h.f[j], h.d_right[j]);
    double sum = st.d / st.f;
    if (word[static_cast<std::size_t>(j)] == 1 && t - j < reach) {
      const double rem = ell - tooth_position(t, j);
      if (E() > 0.0) {
        const double k = std::sqrt(E());
        sum += k * std::tan(k * rem);
      } else if (E() < 0.0) {
        const double kappa = std::sqrt(-E());
        sum += -kappa * std::tanh(kappa * rem);
      }
    }
    return sum;
  }

  static double angle(double x) { return std::atan2(1.0, x) / kPi; }  // Arg C(x) / 2pi in (0, 1)

  double phi(double t) const { return angle(ratio_sum(t)); }

  int zeros(double t) const {
    const int j = static_cast<int>(std::floor(t));
    int z = half_line_zero_count(model, word, h, j);
    const double s = (t - j) * model.spacing;
    if (s > 0.0) z += zeros_on_interval_energy(h.f[j], h.d_right[j], E(), s);
    if (word[static_cast<std::size_t>(j)] == 1 && t > j) {
      const double pos = std::min(tooth_position(t, j), ell);
      // pendant solution from the base: value 1, outward derivative m
      const double m = (h.d_left[j] - h.d_right[j]) / h.f[j];
      z += zeros_on_interval_energy(1.0, m, E(), pos);
    }
    return z;
  }
};

}  // namespace

PruferTrace prufer_trace(const ModelSpec& model, const Word& word, double E, int t_max, int samples_per_unit) {
  model.validate();
  if (t_max < 1) throw InputError("t_max must be at least 1");
  if (samples_per_unit < 1) throw InputError("samples_per_unit must be positive");
  const auto cw = as_comb(model, word);
  if (!cw) throw InputError("Pruefer traces are implemented for comb models");
  ModelSpec binary = ModelSpec::comb(model.spacing, cw->ell, model.params);
  const HalfLineData h = adaptive_half_line(binary, cw->word, E, t_max, 4 * t_max);
  const double reach = cw->ell < model.spacing ? cw->ell / model.spacing : 0.5;
  const CombSphere sphere{binary, cw->word, h, cw->ell, reach};

  PruferTrace tr;
  tr.energy = E;
  double prev_t = 0.0;
  double prev_phi = sphere.phi(0.0);
  double lift = prev_phi;
  tr.t.push_back(0.0);
  tr.phi_lifted.push_back(lift);
  tr.zero_count.push_back(0);

  // For E > 0 the sphere sum of f'/f decreases in t between poles, and poles
  // are the zeros of f on the sphere, so the angle turns forward and wraps
  // once per zero. Chain and tooth zeros can nearly coincide, which defeats
  // any sampling density, so wraps are taken from the zero count.
  const bool forward = E > 0.0;
  auto advance = [&](auto&& self, double t0, double phi0, double t1, int depth) -> double {
    const double phi1 = sphere.phi(t1);
    double delta = phi1 - phi0;
    delta -= std::round(delta);
    if (std::abs(delta) > 0.25) {
      if (t1 - t0 < 1e-6 || depth > 40) throw NumericalError("Pruefer angle cannot be lifted: step below 1e-6");
      const double tm = 0.5 * (t0 + t1);
      const double dm = self(self, t0, phi0, tm, depth + 1);
      return dm + self(self, tm, sphere.phi(tm), t1, depth + 1);
    }
    return delta;
  };

  int prev_zeros = 0;
  const int steps = t_max * samples_per_unit;
  for (int i = 1; i <= steps; ++i) {
    const double t = i % samples_per_unit == 0 ? static_cast<double>(i / samples_per_unit)
                                                : static_cast<double>(i) / samples_per_unit;
    const int zeros = sphere.zeros(t);
    const double phi = sphere.phi(t);
    lift += forward ? (phi - prev_phi) + (zeros - prev_zeros) : advance(advance, prev_t, prev_phi, t, 0);
    prev_t = t;
    prev_phi = phi;
    prev_zeros = zeros;
    tr.t.push_back(t);
    tr.phi_lifted.push_back(lift);
    tr.zero_count.push_back(zeros);
  }
  return tr;
}

// ----------------------------------------------------------- counting lemma

CountingLemmaReport verify_counting_lemma(const ModelSpec& model, const Word& word, int t, double E, int far_n) {
  model.validate();
  if (t < 1) throw InputError("t must be at least 1");
  const HalfLineData h = adaptive_half_line(model, word, E, t, far_n);

  CountingLemmaReport r;
  r.energy = E;
  r.t = t;

  // Gamma(t): chain [0, tL] with the decorations of sites 0..t-1
  CompactMetricGraph g;
  g.vertices.resize(static_cast<std::size_t>(t) + 1);
  for (int i = 0; i <= t; ++i) g.chain.push_back(i);
  for (int i = 0; i < t; ++i) g.edges.push_back({i, i + 1, model.spacing});
  for (int i = 0; i < t; ++i) {
    const Decoration d = model.decoration(word[static_cast<std::size_t>(i)]).simplified();
    std::vector<int> ids(static_cast<std::size_t>(d.vertex_count));
    for (int j = 0; j < d.vertex_count; ++j) {
      if (j == d.base_vertex) {
        ids[j] = i;
      } else {
        ids[j] = g.vertex_count();
        g.vertices.push_back({});
      }
    }
    for (const auto& e : d.edges) g.edges.push_back({ids[e.u], ids[e.v], e.length});
  }
  g.boundary = {0, t};
  g.vertices[0] = {VertexCondition::Robin, h.d_left[0] / h.f[0]};
  g.vertices[t] = {VertexCondition::Robin, -h.d_left[t] / h.f[t]};
  r.lhs = static_cast<long>(count_eigenvalues(g, E).at_most);

  // horizontal interval with the decorations folded into couplings
  CompactMetricGraph hz;
  hz.vertices.resize(static_cast<std::size_t>(t) + 1);
  for (int i = 0; i < t; ++i) hz.edges.push_back({i, i + 1, model.spacing});
  hz.boundary = {0, t};
  hz.vertices[0] = {VertexCondition::Robin, h.d_right[0] / h.f[0]};
  for (int i = 1; i < t; ++i) hz.vertices[i] = {VertexCondition::Robin, (h.d_right[i] - h.d_left[i]) / h.f[i]};
  hz.vertices[t] = {VertexCondition::Robin, -h.d_left[t] / h.f[t]};
  r.n_horizontal = static_cast<long>(count_eigenvalues(hz, E).at_most);

  for (int i = 0; i < t; ++i) {
    const NodalData nd = decoration_nodal(model.decoration(word[static_cast<std::size_t>(i)]), E);
    r.decoration_sum += nd.robin_count - 1;
  }
  r.rhs = r.n_horizontal + r.decoration_sum;
  r.equal = r.lhs == r.rhs;
  return r;
}

// -------------------------------------------------------------------- Sturm

SturmReport sturm_oscillation_check(RobinChain& chain, double E) {
  const std::size_t ne = chain.lengths.size();
  if (ne == 0) throw InputError("Robin chain needs at least one edge");
  if (chain.couplings.size() != ne + 1) throw InputError("Robin chain needs one coupling per vertex");
  SturmReport r;
  r.energy = E;
  double f = 1.0;
  double d = chain.couplings[0];
  for (std::size_t i = 0; i < ne; ++i) {
    if (i > 0) d += chain.couplings[i] * f;
    r.zeros += zeros_on_interval_energy(f, d, E, chain.lengths[i]);
    const auto st = detail::propagate(E, chain.lengths[i], f, d);
    const double norm = std::max(std::abs(st.f), std::abs(st.d) / std::max(1.0, std::sqrt(std::abs(E))));
    f = st.f / norm;
    d = st.d / norm;
  }
  if (std::abs(f) < 1e-10) throw NumericalError("solution vanishes at the right end");
  chain.couplings[ne] = -d / f;

  CompactMetricGraph g;
  g.vertices.resize(ne + 1);
  for (std::size_t i = 0; i <= ne; ++i) g.vertices[i] = {VertexCondition::Robin, chain.couplings[i]};
  for (std::size_t i = 0; i < ne; ++i) {
    g.edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), chain.lengths[i]});
  }
  g.boundary = {0, static_cast<int>(ne)};
  r.count = static_cast<long>(count_eigenvalues(g, E).at_most);
  r.equal = r.count == r.zeros + 1;
  return r;
}

RobinChain random_robin_chain(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> edges(1, 12);
  std::uniform_real_distribution<double> len(0.4, 1.6);
  std::uniform_real_distribution<double> gam(-3.0, 3.0);
  RobinChain c;
  const int ne = edges(rng);
  for (int i = 0; i < ne; ++i) c.lengths.push_back(len(rng));
  for (int i = 0; i <= ne; ++i) c.couplings.push_back(gam(rng));
  return c;
}

// -------------------------------------------------------------- Schwartzman

SchwartzmanReport schwartzman_identity_check(const ModelSpec& model, double E, int t_max, std::int64_t ids_size) {
  model.validate();
  if (t_max < 1) throw InputError("t_max must be at least 1");
  SchwartzmanReport r;
  r.energy = E;
  r.t_max = t_max;
  const int far_n = 4 * t_max;
  const Word word = model_word(model, 16 * static_cast<std::int64_t>(far_n));
  const HalfLineData h = adaptive_half_line(model, word, E, t_max, far_n);
  r.zeros = half_line_zero_count(model, word, h, t_max);
  r.zero_rate = static_cast<double>(r.zeros) / t_max;

  const Word w = model_word(model, ids_size);
  const double length = build_metric_truncation(model, w).total_length();
  double count = 0.0;
  if (const auto cw = as_comb(model, w)) {
    for (auto cut : {CutCondition::Kirchhoff, CutCondition::Dirichlet}) {
      count += 0.5 * static_cast<double>(comb_count_below(model.spacing, cw->ell, cw->word, cut, E));
    }
  } else {
    for (auto cut : {CutCondition::Kirchhoff, CutCondition::Dirichlet}) {
      count += 0.5 * static_cast<double>(count_eigenvalues(build_metric_truncation(model, w, cut), E).below);
    }
  }
  r.ids = count / length;
  const auto freqs = letter_frequencies(model.params);
  r.normalized_length = normalized_length(model, freqs);
  for (const auto& [a, nu] : freqs) r.surplus_term += nu * decoration_nodal(model.decoration(a), E).surplus;
  r.predicted = r.ids * r.normalized_length + r.surplus_term;
  r.residual = std::abs(r.zero_rate - r.predicted);
  const auto lattice = label_lattice_sturmian(model.params.alpha, 1.0, 50, 50, r.zero_rate + 1.0);
  r.lattice = match_gap_label(r.zero_rate, lattice);
  return r;
}

}  // namespace sturmgraph
