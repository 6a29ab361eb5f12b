#include "sturmgraph/labels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "edge_kernel.hpp"
#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/errors.hpp"

namespace sturmgraph {

using detail::kPi;

std::size_t IDSCurve::count_at_most(double E) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), E) -
                                  breakpoints.begin());
}

double IDSCurve::operator()(double E) const { return static_cast<double>(count_at_most(E)) / normalization; }

double IDSCurve::below(double E) const {
  const auto c = std::lower_bound(breakpoints.begin(), breakpoints.end(), E) - breakpoints.begin();
  return static_cast<double>(c) / normalization;
}

IDSCurve metric_ids_curve(const ModelSpec& model, std::int64_t n, double e_max, CutCondition cut, SolveOptions opts) {
  if (!(e_max > 0.0)) throw InputError("energy window must extend above 0");
  const Word w = model_word(model, n);
  opts.k_max = std::sqrt(e_max) * (1.0 + 1e-9);
  const Spectrum s = truncation_spectrum(model, w, cut, opts);
  IDSCurve c;
  c.n = n;
  c.cut = cut;
  c.normalization = build_metric_truncation(model, w, cut).total_length();
  c.breakpoints = s.flattened();
  return c;
}

IDSCurve discrete_ids_curve(const ModelSpec& model, std::int64_t n, CutCondition cut) {
  const Word w = model_word(model, n);
  const DiscreteGraph g = build_discrete_truncation(model, w);
  const DiscreteSpectrum ds = cut == CutCondition::Kirchhoff ? discrete_spectrum(g) : discrete_spectrum_dirichlet_cut(g);
  IDSCurve c;
  c.n = n;
  c.cut = cut;
  c.discrete = true;
  c.normalization = g.vertex_count();
  c.breakpoints = ds.values;
  return c;
}

double sup_distance(const IDSCurve& a, const IDSCurve& b, double e_lo, double e_hi) {
  double sup = std::abs(a(e_lo) - b(e_lo));
  for (const auto* c : {&a, &b}) {
    for (double x : c->breakpoints) {
      if (x >= e_lo && x <= e_hi) sup = std::max(sup, std::abs(a(x) - b(x)));
    }
  }
  return sup;
}

IDSReport ids_metric(const ModelSpec& model, const std::vector<std::int64_t>& sizes, double e_max, SolveOptions opts) {
  model.validate();
  IDSReport r;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw InputError("sizes must be increasing");
    r.curves.push_back(metric_ids_curve(model, sizes[i], e_max, CutCondition::Kirchhoff, opts));
  }
  for (std::size_t i = 1; i < r.curves.size(); ++i) {
    r.sup_distance.push_back(sup_distance(r.curves[i - 1], r.curves[i], 0.0, e_max));
  }
  return r;
}

// ---------------------------------------------------------------- gaps

double mean_level_spacing(const IDSCurve& c, double E) {
  if (c.discrete) return 2.0 / c.normalization;
  return 2.0 * kPi * std::sqrt(std::max(E, 0.0)) / c.normalization;
}

namespace {

using Interval = std::pair<double, double>;

std::vector<Interval> merge_open(std::vector<Interval> v) {
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first < out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) ++i; else ++j;
  }
  return out;
}

std::vector<Interval> candidates(const IDSCurve& c, const GapOptions& opts) {
  std::vector<double> e;
  for (double x : c.breakpoints)
    if (x >= opts.e_lo && x <= opts.e_hi) e.push_back(x);
  std::vector<Interval> out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 1; j <= static_cast<std::size_t>(opts.max_artifacts) + 1 && i + j < e.size(); ++j) {
      const double a = e[i], b = e[i + j];
      if (b - a >= opts.eps_factor * mean_level_spacing(c, 0.5 * (a + b))) out.emplace_back(a, b);
    }
  }
  return merge_open(std::move(out));
}

}  // namespace

std::vector<Gap> detect_gaps(const std::vector<IDSCurve>& curves, const GapOptions& opts) {
  if (!(opts.e_lo < opts.e_hi)) throw InputError("energy window must satisfy lo < hi");
  std::map<std::int64_t, std::pair<const IDSCurve*, const IDSCurve*>> by_size;
  for (const auto& c : curves) {
    auto& slot = by_size[c.n];
    (c.cut == CutCondition::Kirchhoff ? slot.first : slot.second) = &c;
  }
  if (by_size.size() < 2) throw InputError("gap detection needs at least two truncation sizes");
  for (const auto& [n, kd] : by_size) {
    if (!kd.first || !kd.second) {
      throw InputError("gap detection needs Kirchhoff and Dirichlet variants of size " + std::to_string(n));
    }
  }
  std::vector<Interval> common;
  bool first = true;
  for (const auto& c : curves) {
    const auto cand = candidates(c, opts);
    common = first ? cand : intersect(common, cand);
    first = false;
  }
  const IDSCurve& largest = *by_size.rbegin()->second.first;
  std::vector<Gap> gaps;
  for (const auto& [lo, hi] : common) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < opts.eps_factor * mean_level_spacing(largest, mid)) continue;
    Gap g;
    g.lo = lo;
    g.hi = hi;
    for (const auto& [n, kd] : by_size) g.plateaus.push_back(0.5 * ((*kd.first)(mid) + (*kd.second)(mid)));
    g.ids_value = g.plateaus.back();
    const double delta = opts.plateau_factor / largest.normalization;
    g.stability = GapStability::Stable;
    for (double p : g.plateaus) {
      if (std::abs(p - g.ids_value) > delta) g.stability = GapStability::BoundaryArtifact;
    }
    gaps.push_back(g);
  }
  return gaps;
}

// -------------------------------------------------------------- lattice

std::vector<LatticePoint> label_lattice_sturmian(double alpha, double Lbar, int n_max, int m_max, double value_cap) {
  if (!(Lbar > 0.0)) throw InputError("normalizing length must be positive");
  if (n_max < 0 || m_max < 0) throw InputError("lattice box must be non-negative");
  std::vector<LatticePoint> out;
  for (int n = -n_max; n <= n_max; ++n) {
    for (int m = -m_max; m <= m_max; ++m) {
      double v = (alpha * n + m) / Lbar;
      if (std::abs(v) < 1e-15) v = 0.0;
      if (v >= 0.0 && v <= value_cap * (1.0 + 1e-14)) out.push_back({n, m, v});
    }
  }
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    return std::make_tuple(a.value, std::abs(a.n), std::abs(a.m), a.n < 0) <
           std::make_tuple(b.value, std::abs(b.n), std::abs(b.m), b.n < 0);
  });
  return out;
}

std::vector<LatticePoint> discrete_label_set(double alpha, double Vbar, int n_max, int m_max) {
  return label_lattice_sturmian(alpha, Vbar, n_max, m_max, 1.0);
}

LabelMatch match_gap_label(double ids_value, const std::vector<LatticePoint>& lattice) {
  if (lattice.empty()) throw InputError("empty label lattice");
  const LatticePoint* best = nullptr;
  double best_res = 0.0;
  for (const auto& p : lattice) {
    const double r = std::abs(ids_value - p.value);
    if (!best) {
      best = &p;
      best_res = r;
      continue;
    }
    const double tie = 1e-12 * std::max(1.0, std::abs(ids_value));
    if (r < best_res - tie) {
      best = &p;
      best_res = r;
    } else if (std::abs(r - best_res) <= tie) {
      if (std::make_tuple(std::abs(p.n), std::abs(p.m), p.n < 0) <
          std::make_tuple(std::abs(best->n), std::abs(best->m), best->n < 0)) {
        best = &p;
        best_res = r;
      }
    }
  }
  return {best->n, best->m, best->value, best_res};
}

LabelMatch match_gap_label(const Gap& gap, const std::vector<LatticePoint>& lattice) {
  return match_gap_label(gap.ids_value, lattice);
}

// ---------------------------------------------------------------- jumps

std::vector<JumpPrediction> predict_jumps(double alpha, double ell, double L, int m_max, int n_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (looks_rational(alpha)) throw InputError("jump prediction needs irrational alpha");
  if (!(ell > 0.0) || !(L > 0.0)) throw InputError("lengths must be positive");
  const auto c1 = continued_fraction_digits(alpha, 1).digits.at(0);
  const double r = ell / L;
  const double denom = L + alpha * ell;
  const double dn_one = (1.0 - static_cast<double>(c1) * alpha) / denom;
  const double dn_two = ((static_cast<double>(c1) + 1.0) * alpha - 1.0) / denom;

  std::vector<std::pair<double, JumpWitness>> hits;
  for (int n = 1; n <= n_max; ++n) {
    for (int m = 0; m <= m_max; ++m) {
      const double one = (2.0 * m + 1.0) * (c1 + 1) / (2.0 * n);
      if (std::abs(r - one) <= 1e-12 * std::max(1.0, r)) {
        const double k = kPi * n / (L * (c1 + 1));
        hits.push_back({k * k, {JumpCase::One, m, n}});
      }
      const double two = (2.0 * m + 1.0) * c1 / (2.0 * n);
      if (std::abs(r - two) <= 1e-12 * std::max(1.0, r)) {
        const double k = kPi * n / (L * c1);
        hits.push_back({k * k, {JumpCase::Two, m, n}});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<JumpPrediction> out;
  for (const auto& [E, w] : hits) {
    if (out.empty() || std::abs(E - out.back().energy) > 1e-12 * E) {
      JumpPrediction p;
      p.energy = E;
      p.kind = w.kind;
      out.push_back(p);
    }
    auto& p = out.back();
    p.witnesses.push_back(w);
    if (p.kind != w.kind) p.kind = JumpCase::Both;
  }
  for (auto& p : out) {
    p.delta_n = p.kind == JumpCase::One ? dn_one : p.kind == JumpCase::Two ? dn_two : dn_one + dn_two;
  }
  return out;
}

JumpMeasurement measure_jump(const ModelSpec& model, double E, const std::vector<std::int64_t>& sizes) {
  model.validate();
  if (sizes.empty()) throw InputError("no truncation sizes");
  JumpMeasurement r;
  r.energy = E;
  for (std::int64_t n : sizes) {
    const Word w = model_word(model, n);
    const CompactMetricGraph g = build_metric_truncation(model, w);
    int mult = 0;
    if (E == 0.0) {
      mult = 1;
    } else if (E > 0.0) {
      const double k = std::sqrt(E);
      if (const auto cw = as_comb(model, w)) {
        const double eta = 1e-9;
        const double hi = k * (1.0 + eta), lo = k * (1.0 - eta);
        mult = static_cast<int>(comb_count_below(model.spacing, cw->ell, cw->word, CutCondition::Kirchhoff, hi * hi)) -
               static_cast<int>(comb_count_below(model.spacing, cw->ell, cw->word, CutCondition::Kirchhoff, lo * lo));
      } else {
        SolveOptions opts;
        opts.k_max = k * (1.0 + 1e-6);
        const Spectrum s = metric_spectrum_general(g, opts);
        mult = s.multiplicity_at(E, 2.0 * k * opts.merge_tol);
      }
    }
    r.sizes.push_back(n);
    r.multiplicity.push_back(mult);
    r.total_length.push_back(g.total_length());
    r.jump.push_back(mult / g.total_length());
  }
  const std::size_t s = r.jump.size();
  if (s == 1) {
    r.extrapolated = r.jump[0];
  } else {
    const double g1 = r.total_length[s - 2], g2 = r.total_length[s - 1];
    r.extrapolated = (r.jump[s - 1] * g2 - r.jump[s - 2] * g1) / (g2 - g1);
  }
  return r;
}

double correspondence_ids_check(double metric_ids, double discrete_ids, double E, double C) {
  if (E < 0.0) return std::abs(metric_ids);
  const double x = std::sqrt(E) / kPi;
  if (E > 0.0 && std::abs(x - std::round(x)) < 1e-12) throw InputError("energy at a branch endpoint k in pi*Z");
  const double m = std::floor(x);
  const bool even = static_cast<long>(m) % 2 == 0;
  const double rhs = m + C * (even ? discrete_ids : 1.0 - discrete_ids);
  return std::abs(metric_ids - rhs);
}

std::string to_string(JumpCase c) {
  switch (c) {
    case JumpCase::One: return "one";
    case JumpCase::Two: return "two";
    case JumpCase::Both: return "both";
  }
  return "?";
}

std::string to_string(GapStability s) { return s == GapStability::Stable ? "stable" : "boundary-artifact"; }

}  // namespace sturmgraph
