// One line per acceptance criterion; exit status 1 if any criterion fails.
// Expected values come from the oracles in tests/oracles or from closed forms
// written out here, never from the library routine under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/graphs.hpp"
#include "sturmgraph/labels.hpp"
#include "sturmgraph/metric_solver.hpp"
#include "sturmgraph/nodal.hpp"
#include "sturmgraph/words.hpp"

using namespace sturmgraph;

namespace {

const double kPi = std::acos(-1.0);
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kSilver = std::sqrt(2.0) - 1.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED: " << what << ";";
    }
  }
};

// Distance from x to {(alpha n + m) / scale : |n|, |m| <= 50}.
double lattice_distance(double x, double alpha, double scale) {
  double best = INFINITY;
  for (int n = -50; n <= 50; ++n) {
    for (int m = -50; m <= 50; ++m) best = std::min(best, std::abs(x - (alpha * n + m) / scale));
  }
  return best;
}

CompactMetricGraph metric_from_edges(int n, const std::vector<GraphEdge>& edges) {
  CompactMetricGraph g;
  g.vertices.resize(static_cast<std::size_t>(n));
  g.edges = edges;
  return g;
}

DiscreteGraph discrete_from_edges(int n, const std::vector<GraphEdge>& edges) {
  DiscreteGraph g;
  g.adjacency.resize(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    g.adjacency[static_cast<std::size_t>(e.u)].push_back(e.v);
    g.adjacency[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  return g;
}

ModelSpec golden_comb() { return ModelSpec::comb(1.0, 1.0, SturmianParameters::golden()); }

// Curves shared by the gap, IDS, counting-lemma and zero-rate criteria.
struct GoldenCurves {
  std::vector<IDSCurve> curves;  // n=200 K, n=200 D, n=400 K, n=400 D
  std::vector<Gap> gaps;
};

const GoldenCurves& golden_curves() {
  static const GoldenCurves c = [] {
    GoldenCurves out;
    const ModelSpec m = golden_comb();
    for (std::int64_t n : {200, 400}) {
      for (CutCondition cut : {CutCondition::Kirchhoff, CutCondition::Dirichlet}) {
        out.curves.push_back(metric_ids_curve(m, n, 40.0, cut));
      }
    }
    out.gaps = detect_gaps(out.curves, GapOptions{});
    return out;
  }();
  return c;
}

std::vector<Gap> stable(const std::vector<Gap>& gaps) {
  std::vector<Gap> s;
  for (const auto& g : gaps) {
    if (g.stability == GapStability::Stable) s.push_back(g);
  }
  return s;
}

// ---------------------------------------------------------------- criteria

void correspondence(Outcome& o) {
  struct Case {
    std::string name;
    CompactMetricGraph metric;
    DiscreteGraph discrete;
  };
  std::vector<Case> cases;
  const ModelSpec m = golden_comb();
  for (std::int64_t n : {10, 20}) {
    const Word w = model_word(m, n);
    cases.push_back({"comb n=" + std::to_string(n), build_metric_truncation(m, w), build_discrete_truncation(m, w)});
  }
  const std::vector<std::pair<std::string, std::pair<int, std::vector<GraphEdge>>>> small = {
      {"path", {5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}}}},
      {"C3", {3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}}},
      {"C4", {4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}}},
      {"star", {4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}}},
  };
  for (const auto& [name, shape] : small) {
    cases.push_back({name, metric_from_edges(shape.first, shape.second), discrete_from_edges(shape.first, shape.second)});
  }
  double worst = 0.0;
  for (const auto& c : cases) {
    SolveOptions opts;
    opts.k_max = 2 * kPi + 0.5;
    const Spectrum s = metric_spectrum_general(c.metric, opts);
    const std::vector<double> mu = oracle::discrete_eigenvalues(c.discrete);
    std::vector<double> interior;
    for (double x : mu) {
      if (std::abs(x) > 1e-9 && std::abs(x - 2) > 1e-9) interior.push_back(x);
    }
    for (int branch = 0; branch < 2; ++branch) {
      std::vector<double> mapped;
      for (double lambda : s.flattened()) {
        const double k = std::sqrt(std::max(0.0, lambda));
        if (k > branch * kPi + 1e-7 && k < (branch + 1) * kPi - 1e-7) mapped.push_back(1 - std::cos(k));
      }
      std::sort(mapped.begin(), mapped.end());
      o.require(mapped.size() == interior.size(), c.name + " branch " + std::to_string(branch) + " size");
      for (std::size_t i = 0; i < std::min(mapped.size(), interior.size()); ++i) {
        worst = std::max(worst, std::abs(mapped[i] - interior[i]));
      }
    }
    const long E = static_cast<long>(c.metric.edges.size());
    for (int mm : {1, 2}) {
      const double endpoint = 1 - std::cos(kPi * mm);
      const long M = static_cast<long>(std::count_if(mu.begin(), mu.end(), [&](double x) { return std::abs(x - endpoint) < 1e-9; }));
      const long count = static_cast<long>(s.count_at_most(kPi * kPi * mm * mm * (1 + 1e-9)));
      o.require(count == E * mm + M, c.name + " count at (pi m)^2, m=" + std::to_string(mm));
    }
  }
  o.require(worst <= 1e-8, "elementwise mu difference");
  o.detail << " graphs=" << cases.size() << " max|mu diff|=" << worst;
}

void metric_gap_labels(Outcome& o) {
  const auto& gc = golden_curves();
  const auto st = stable(gc.gaps);
  double worst = 0.0;
  for (const auto& g : gc.gaps) worst = std::max(worst, lattice_distance(g.ids_value, kGolden, 1 + kGolden));
  o.require(st.size() >= 3, "at least 3 stable gaps");
  o.require(worst <= 1e-3, "gap plateau residual");
  o.detail << " gaps=" << gc.gaps.size() << " stable=" << st.size() << " max residual=" << worst;
}

void discrete_gap_labels(Outcome& o) {
  const ModelSpec m = golden_comb();
  std::vector<IDSCurve> curves;
  for (std::int64_t n : {500, 1000}) {
    for (CutCondition cut : {CutCondition::Kirchhoff, CutCondition::Dirichlet}) curves.push_back(discrete_ids_curve(m, n, cut));
  }
  GapOptions go;
  go.e_lo = 0.0;
  go.e_hi = 2.0;
  const auto st = stable(detect_gaps(curves, go));
  double worst = 0.0;
  for (const auto& g : st) {
    o.require(g.ids_value >= -1e-12 && g.ids_value <= 1 + 1e-12, "plateau in [0,1]");
    worst = std::max(worst, lattice_distance(g.ids_value, kGolden, 1 + kGolden));
  }
  o.require(!st.empty(), "some stable gap");
  o.require(worst <= 1e-3, "discrete plateau residual");
  o.detail << " stable=" << st.size() << " max residual=" << worst;
}

// Jump energies and sizes of a comb: compact eigenfunctions live between two
// teeth separated by s chain edges (s = c1+1 or c1). They exist when
// l/L = (2j+1) s / (2n), at E = (pi n / (s L))^2, and add
// freq(separation)/Lbar to the IDS.
struct PredictedJump {
  double energy;
  double delta;
};

std::vector<PredictedJump> jump_oracle(double alpha, double ell, double L, double e_max) {
  const std::int64_t c1 = oracle::first_digit(alpha);
  const double lbar = L + alpha * ell;
  const double nu[2] = {1 - c1 * alpha, (c1 + 1) * alpha - 1};
  const std::int64_t sep[2] = {c1 + 1, c1};
  std::vector<PredictedJump> out;
  for (int which = 0; which < 2; ++which) {
    if (sep[which] < 1 || nu[which] <= 0) continue;
    for (int n = 1; n < 200; ++n) {
      const double E = std::pow(kPi * n / (sep[which] * L), 2);
      if (E > e_max) break;
      const double odd = ell / L * 2 * n / sep[which];
      if (std::abs(odd - std::round(odd)) > 1e-9 || static_cast<long>(std::round(odd)) % 2 == 0) continue;
      bool merged = false;
      for (auto& p : out) {
        if (std::abs(p.energy - E) < 1e-9 * E) {
          p.delta += nu[which] / lbar;
          merged = true;
        }
      }
      if (!merged) out.push_back({E, nu[which] / lbar});
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.energy < b.energy; });
  return out;
}

void jumps(Outcome& o) {
  std::mt19937_64 rng(2024);
  auto check_model = [&](const std::string& tag, double alpha, double ell, const ModelSpec& m) {
    const auto oracle_jumps = jump_oracle(alpha, ell, 1.0, 40.0);
    const auto lib = predict_jumps(alpha, ell, 1.0, 20, 40);
    std::size_t lib_in_window = 0;
    for (const auto& p : lib) {
      if (p.energy <= 40.0) ++lib_in_window;
    }
    o.require(lib_in_window == oracle_jumps.size(), tag + " predicted jump count");
    for (const auto& p : oracle_jumps) {
      const auto it = std::find_if(lib.begin(), lib.end(), [&](const JumpPrediction& q) { return std::abs(q.energy - p.energy) < 1e-9; });
      o.require(it != lib.end() && std::abs(it->delta_n - p.delta) < 1e-12, tag + " predicted jump value");
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(2, oracle_jumps.size()); ++i) {
      const auto& p = oracle_jumps[i];
      const JumpMeasurement r = measure_jump(m, p.energy, {400});
      o.require(std::abs(r.jump.back() - p.delta) <= 0.01, tag + " measured jump at E=" + std::to_string(p.energy));
      o.detail << " " << tag << " E=" << p.energy << " predicted=" << p.delta << " measured=" << r.jump.back() << ";";
    }
    std::uniform_real_distribution<double> energy(0.5, 40.0);
    int tested = 0;
    double worst_ratio = 0.0;
    while (tested < 10) {
      const double E = energy(rng);
      const double k = std::sqrt(E);
      bool special = false;
      for (const auto& p : oracle_jumps) special = special || std::abs(p.energy - E) < 1e-3;
      for (double len : {1.0, ell}) {
        const double x = k * len / (kPi / 2);
        special = special || std::abs(x - std::round(x)) < 1e-6;
      }
      if (special) continue;
      const JumpMeasurement r = measure_jump(m, E, {400});
      worst_ratio = std::max(worst_ratio, r.jump.back() * r.total_length.back() / 2.0);
      o.require(r.jump.back() <= 2.0 / r.total_length.back(), tag + " generic jump at E=" + std::to_string(E));
      ++tested;
    }
    o.detail << " " << tag << " generic max jump*|G|/2=" << worst_ratio << ";";
  };
  check_model("golden", kGolden, 1.0, golden_comb());
  check_model("silver", kSilver, 1.5, ModelSpec::comb(1.0, 1.5, SturmianParameters::silver()));
}

void counting_lemma(Outcome& o) {
  const auto st = stable(golden_curves().gaps);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int equal = 0;
  for (int i = 0; i < 20; ++i) {
    ModelSpec m = golden_comb();
    m.params.theta = unit(rng);
    const int t = 1 + static_cast<int>(unit(rng) * 8);
    const Gap& g = st[static_cast<std::size_t>(unit(rng) * st.size())];
    const double E = g.lo + (0.25 + 0.5 * unit(rng)) * (g.hi - g.lo);
    const auto r = verify_counting_lemma(m, model_word(m, 8192), t, E);
    o.require(r.lhs == r.n_horizontal + r.decoration_sum, "counting identity at E=" + std::to_string(E));
    equal += r.lhs == r.n_horizontal + r.decoration_sum;
  }
  int sturm = 0;
  std::uniform_real_distribution<double> energy(0.05, 30.0);
  for (int i = 0; i < 20; ++i) {
    RobinChain chain = random_robin_chain(1000 + static_cast<std::uint64_t>(i));
    const auto r = sturm_oscillation_check(chain, energy(rng));
    o.require(r.count == r.zeros + 1, "Sturm count on chain " + std::to_string(i));
    sturm += r.count == r.zeros + 1;
  }
  o.detail << " counting identity " << equal << "/20, Sturm " << sturm << "/20";
}

void zero_rate(Outcome& o) {
  auto st = stable(golden_curves().gaps);
  std::stable_sort(st.begin(), st.end(), [](const Gap& a, const Gap& b) { return a.hi - a.lo > b.hi - b.lo; });
  st.resize(3);
  const ModelSpec m = golden_comb();
  for (const auto& g : st) {
    const double E = 0.5 * (g.lo + g.hi);
    const auto r = schwartzman_identity_check(m, E, 500);
    const double predicted = r.ids * (1 + kGolden);
    const double dist = lattice_distance(predicted, kGolden, 1.0);
    o.require(std::abs(r.zero_rate - predicted) <= 0.05, "zero rate vs N*Lbar at E=" + std::to_string(E));
    o.require(dist <= 1e-2, "N*Lbar near alpha Z + Z at E=" + std::to_string(E));
    o.detail << " E=" << E << " Z/t=" << r.zero_rate << " N*Lbar=" << predicted << " lattice dist=" << dist << ";";
  }
}

void frequencies(Outcome& o) {
  for (double alpha : {kGolden, kSilver}) {
    const std::int64_t c1 = oracle::first_digit(alpha);
    const double analytic[2] = {1 - c1 * alpha, (c1 + 1) * alpha - 1};
    SturmianParameters p;
    p.alpha = alpha;
    const Word w = generate_word(p, 0, 999'999);
    const auto mech = oracle::mechanical_word(alpha, 0.0, 1'000'000);
    o.require(std::equal(mech.begin(), mech.end(), w.letters.begin()), "word matches mechanical oracle");
    const auto lib = adjacent_one_separations(alpha);
    for (int i = 0; i < 2; ++i) {
      Word pattern;
      pattern.letters.push_back(1);
      pattern.letters.insert(pattern.letters.end(), static_cast<std::size_t>(c1 - i), 0);
      pattern.letters.push_back(1);
      const double empirical = empirical_frequency(w, pattern);
      o.require(std::abs(empirical - analytic[i]) <= 1e-3, "empirical vs analytic " + pattern.to_string());
      o.require(lib[static_cast<std::size_t>(i)].pattern.letters == pattern.letters &&
                    std::abs(lib[static_cast<std::size_t>(i)].frequency - analytic[i]) < 1e-12,
                "library separation record " + pattern.to_string());
      o.detail << " " << pattern.to_string() << ": " << analytic[i] << " vs " << empirical << ";";
    }
  }
}

void cross_validation(Outcome& o) {
  struct Comb {
    double L, ell;
    std::string word;
  };
  const std::vector<Comb> combs = {{1.0, 1.0, "101"}, {1.0, 1.0, "11"}, {1.3, 0.7, "10110"},
                                   {1.0, 1.5, "0110101"}, {0.8, 2.1, "1001011"}};
  double worst_fast = 0.0;
  for (const auto& c : combs) {
    ModelSpec m = ModelSpec::comb(c.L, c.ell, SturmianParameters::golden());
    const Word w = Word::from_string(c.word);
    SolveOptions opts;
    opts.k_max = 8.0;
    const auto fast = comb_spectrum_fast(m, w, CutCondition::Kirchhoff, opts).flattened();
    const auto general = metric_spectrum_general(build_metric_truncation(m, w), opts).flattened();
    o.require(fast.size() == general.size(), "fast/general count for " + c.word);
    for (std::size_t i = 0; i < std::min(fast.size(), general.size()); ++i) {
      worst_fast = std::max(worst_fast, std::abs(fast[i] - general[i]));
    }
  }
  o.require(worst_fast <= 1e-9, "fast vs general");

  std::vector<std::pair<std::string, CompactMetricGraph>> graphs;
  graphs.emplace_back("interval", metric_from_edges(2, {{0, 1, 1.0}}));
  graphs.emplace_back("triangle", metric_from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}));
  graphs.emplace_back("star", metric_from_edges(4, {{0, 1, 1.0}, {0, 2, 0.6}, {0, 3, 1.4}}));
  {
    const ModelSpec m = golden_comb();
    graphs.emplace_back("comb 101", build_metric_truncation(m, Word::from_string("101")));
  }
  {
    ModelSpec m = golden_comb();
    Decoration loop;
    loop.letter = 1;
    loop.vertex_count = 3;
    loop.edges = {{0, 1, 1.0}, {1, 2, 0.8}, {2, 0, 0.6}};
    m.decorations[1] = loop;
    graphs.emplace_back("cycle decoration 0110", build_metric_truncation(m, Word::from_string("0110")));
  }
  double worst_fd = 0.0;
  for (const auto& [name, g] : graphs) {
    SolveOptions opts;
    opts.k_max = 5.5;
    const auto general = metric_spectrum_general(g, opts).flattened();
    const int count = static_cast<int>(std::min<std::size_t>(8, general.size()));
    const auto fd = oracle::fd_eigenvalues(g, 1e-3, count);
    for (int i = 0; i < count; ++i) worst_fd = std::max(worst_fd, std::abs(fd[static_cast<std::size_t>(i)] - general[static_cast<std::size_t>(i)]));
  }
  o.require(worst_fd <= 1e-3, "general vs finite differences");
  o.detail << " fast vs general max=" << worst_fast << " general vs FD max=" << worst_fd;
}

void ids_convergence(Outcome& o) {
  const auto& c = golden_curves().curves;
  const double d = sup_distance(c[0], c[2], 0.0, 40.0);
  o.require(d <= 0.01, "sup distance");
  o.detail << " sup|N_200 - N_400| on [0,40] = " << d;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "correspondence suite", 30, correspondence},
      {2, "metric gap labels", 180, metric_gap_labels},
      {3, "discrete gap labels", 120, discrete_gap_labels},
      {4, "jump sizes", 0, jumps},
      {5, "counting identity and Sturm oscillation", 0, counting_lemma},
      {6, "zero rate vs IDS lattice", 0, zero_rate},
      {7, "separation frequencies", 0, frequencies},
      {8, "solver cross-validation", 0, cross_validation},
      {9, "IDS convergence", 0, ids_convergence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.pass = false;
      o.detail << " FAILED: runtime over " << c.limit_seconds << " s;";
    }
    failures += !o.pass;
    std::printf("[%s] criterion %d (%s): %.2f s;%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
