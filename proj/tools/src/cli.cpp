#include "sturmgraph/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sturmgraph/discrete_solver.hpp"
#include "sturmgraph/errors.hpp"
#include "sturmgraph/graphs.hpp"
#include "sturmgraph/io.hpp"
#include "sturmgraph/labels.hpp"
#include "sturmgraph/metric_solver.hpp"
#include "sturmgraph/nodal.hpp"
#include "sturmgraph/words.hpp"

namespace sturmgraph::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.3.0";
const double kPi = std::acos(-1.0);

struct RunConfig {
  std::string model_path;
  std::string alpha;
  std::optional<double> theta;
  std::optional<double> spacing;
  std::optional<double> ell;
  bool bare = false;
  std::string word;
  std::string output_dir;
  std::string format = "json";

  std::vector<std::int64_t> sizes;
  double e_lo = 0.0;
  double e_hi = 40.0;
  SolveOptions solve;

  ModelSpec model;
};

void apply_alpha(SturmianParameters& p, const std::string& s) {
  if (s == "golden") {
    p.alpha = golden_alpha();
  } else if (s == "silver") {
    p.alpha = silver_alpha();
  } else {
    p.alpha = parse_real(s, "--alpha");
  }
}

ModelSpec resolve_model(const RunConfig& c) {
  ModelSpec m = c.model_path.empty() ? parse_model("") : load_model(c.model_path);
  if (!c.alpha.empty()) apply_alpha(m.params, c.alpha);
  if (c.theta) m.params.theta = *c.theta;
  if (c.spacing) m.spacing = *c.spacing;
  if (c.bare && c.ell) throw InputError("--bare and --ell are exclusive");
  if (c.bare) {
    m.decorations[0] = Decoration::point(0);
    m.decorations[1] = Decoration::point(1);
  }
  if (c.ell) {
    m.decorations[0] = Decoration::point(0);
    m.decorations[1] = Decoration::tooth(1, *c.ell);
  }
  if (!c.word.empty()) {
    m.word = Word::from_string(c.word);
    for (Letter a : m.word->letters) {
      if (!m.decorations.count(a)) m.decorations[a] = Decoration::point(a);
    }
  }
  m.validate();
  return m;
}

void check_sizes(const std::vector<std::int64_t>& sizes, std::size_t at_least) {
  if (sizes.size() < at_least) throw InputError("need at least " + std::to_string(at_least) + " sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw InputError("sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw InputError("sizes must be increasing");
  }
}

void check_window(const RunConfig& c) {
  if (!(c.e_lo < c.e_hi)) throw InputError("energy window needs e-lo < e-hi");
}

// Canonical description of everything that determines a report.
std::string config_hash(const std::string& command, const RunConfig& c, const Json& options) {
  return fnv1a_hex(command + "\n" + model_to_text(c.model) + options.dump());
}

Json report_header(const std::string& command, const RunConfig& c, const Json& options) {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config_hash"] = config_hash(command, c, options);
  j["model"] = model_to_text(c.model);
  j["options"] = options;
  return j;
}

Json solver_json(const SolveOptions& o) {
  return Json{{"k_max", o.k_max}, {"k_step", o.k_step}, {"tol", o.tol}};
}

class Emitter {
 public:
  Emitter(const RunConfig& c, std::ostream& out) : config_(c), out_(out) {}

  void emit(const std::string& name, const std::string& ext, const std::string& content) {
    if (config_.output_dir.empty()) {
      out_ << content;
      if (!content.empty() && content.back() != '\n') out_ << '\n';
      return;
    }
    const auto path = std::filesystem::path(config_.output_dir) / (name + "." + ext);
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path.string());
    f << content;
    if (!content.empty() && content.back() != '\n') f << '\n';
    out_ << path.string() << '\n';
  }

  void emit_json(const std::string& name, const Json& j) { emit(name, "json", j.dump(2)); }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

CutCondition parse_cut(const std::string& s) {
  return s == "dirichlet" ? CutCondition::Dirichlet : CutCondition::Kirchhoff;
}

std::vector<IDSCurve> curves_for(const RunConfig& c, bool discrete) {
  std::vector<IDSCurve> curves;
  for (std::int64_t n : c.sizes) {
    for (CutCondition cut : {CutCondition::Kirchhoff, CutCondition::Dirichlet}) {
      curves.push_back(discrete ? discrete_ids_curve(c.model, n, cut) : metric_ids_curve(c.model, n, c.e_hi, cut, c.solve));
    }
  }
  return curves;
}

GapOptions gap_options(const RunConfig& c, bool discrete) {
  GapOptions g;
  g.e_lo = discrete ? std::max(0.0, c.e_lo) : c.e_lo;
  g.e_hi = discrete ? std::min(2.0, c.e_hi) : c.e_hi;
  return g;
}

Json gap_json(const Gap& g) {
  Json j{{"lo", g.lo}, {"hi", g.hi}, {"ids", g.ids_value}, {"plateaus", g.plateaus},
         {"stability", to_string(g.stability)}};
  return j;
}

std::vector<Gap> stable_metric_gaps(const RunConfig& c) {
  auto gaps = detect_gaps(curves_for(c, false), gap_options(c, false));
  std::erase_if(gaps, [](const Gap& g) { return g.stability != GapStability::Stable; });
  if (gaps.empty()) throw NumericalError("no stable spectral gap in the energy window");
  return gaps;
}

// ------------------------------------------------------------------ commands

int cmd_word(const RunConfig& c, std::int64_t n, Emitter& em) {
  if (n < 1) throw InputError("--n must be at least 1");
  const Word w = model_word(c.model, n - 1);
  const std::size_t ones = letter_count(w, 1);
  if (c.format == "json") {
    Json opts{{"n", n}};
    Json j = report_header("word", c, opts);
    if (!c.model.word) {
      j["alpha"] = c.model.params.alpha;
      j["theta"] = c.model.params.theta;
    }
    j["origin"] = w.origin;
    j["word"] = w.to_string();
    j["letters"] = w.letters;
    j["letter_counts"] = {{"0", letter_count(w, 0)}, {"1", ones}};
    j["empirical_frequency_1"] = static_cast<double>(ones) / static_cast<double>(n);
    if (!c.model.word) j["analytic_frequency_1"] = c.model.params.alpha;
    em.emit_json("word", j);
    return kOk;
  }
  std::ostringstream os;
  os << w.to_string() << '\n';
  os << "# n=" << n << " zeros=" << letter_count(w, 0) << " ones=" << ones
     << " freq1=" << format_real(static_cast<double>(ones) / static_cast<double>(n));
  if (!c.model.word) os << " alpha=" << format_real(c.model.params.alpha);
  os << '\n';
  em.emit("word", "txt", os.str());
  return kOk;
}

int cmd_build(const RunConfig& c, std::int64_t n, bool discrete, const std::string& cut, Emitter& em) {
  if (n < 1) throw InputError("--n must be at least 1");
  const Word w = model_word(c.model, n);
  if (discrete) {
    const DiscreteGraph g = build_discrete_truncation(c.model, w);
    if (c.format == "csv") {
      std::ostringstream os;
      os << "u,v\n";
      for (int u = 0; u < g.vertex_count(); ++u) {
        for (int v : g.adjacency[static_cast<std::size_t>(u)]) {
          if (u < v) os << u << ',' << v << '\n';
        }
      }
      em.emit("build", "csv", os.str());
      return kOk;
    }
    Json j = report_header("build", c, Json{{"n", n}, {"discrete", true}});
    j["word"] = w.to_string();
    j["vertex_count"] = g.vertex_count();
    j["edge_count"] = g.edge_count();
    j["boundary"] = g.boundary;
    j["chain"] = g.chain;
    j["degrees"] = g.degrees();
    em.emit_json("build", j);
    return kOk;
  }
  const CompactMetricGraph g = build_metric_truncation(c.model, w, parse_cut(cut));
  if (c.format == "csv") {
    std::ostringstream os;
    write_edge_list_csv(os, g);
    em.emit("build", "csv", os.str());
    return kOk;
  }
  Json j = report_header("build", c, Json{{"n", n}, {"discrete", false}, {"cut", cut}});
  j["word"] = w.to_string();
  j["vertex_count"] = g.vertex_count();
  j["edge_count"] = g.edges.size();
  j["total_length"] = g.total_length();
  j["boundary"] = g.boundary;
  j["chain"] = g.chain;
  j["degrees"] = g.degrees();
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back({e.u, e.v, e.length});
  j["edges"] = edges;
  em.emit_json("build", j);
  return kOk;
}

int cmd_spectrum(const RunConfig& c, std::int64_t n, bool discrete, const std::string& cut, const std::string& solver,
                 Emitter& em) {
  if (n < 1) throw InputError("--n must be at least 1");
  const Word w = model_word(c.model, n);
  const Json opts{{"n", n}, {"discrete", discrete}, {"cut", cut}, {"solver", solver}, {"solve", solver_json(c.solve)}};
  if (discrete) {
    const DiscreteGraph g = build_discrete_truncation(c.model, w);
    const DiscreteSpectrum ds = parse_cut(cut) == CutCondition::Kirchhoff ? discrete_spectrum(g) : discrete_spectrum_dirichlet_cut(g);
    if (c.format == "csv") {
      std::ostringstream os;
      write_discrete_spectrum_csv(os, ds);
      em.emit("spectrum", "csv", os.str());
      return kOk;
    }
    Json j = report_header("spectrum", c, opts);
    j["vertex_count"] = ds.vertex_count;
    j["values"] = ds.values;
    em.emit_json("spectrum", j);
    return kOk;
  }
  Spectrum s;
  const CutCondition cc = parse_cut(cut);
  if (solver == "general") {
    s = metric_spectrum_general(build_metric_truncation(c.model, w, cc), c.solve);
  } else if (solver == "fast") {
    if (!as_comb(c.model, w)) throw InputError("the fast solver needs a comb model");
    s = comb_spectrum_fast(c.model, w, cc, c.solve);
  } else {
    s = truncation_spectrum(c.model, w, cc, c.solve);
  }
  if (c.format == "csv") {
    std::ostringstream os;
    write_spectrum_csv(os, s);
    em.emit("spectrum", "csv", os.str());
    return kOk;
  }
  Json j = report_header("spectrum", c, opts);
  Json rows = Json::array();
  for (const auto& e : s.eigenvalues) rows.push_back({{"lambda", e.lambda}, {"multiplicity", e.multiplicity}});
  j["eigenvalues"] = rows;
  em.emit_json("spectrum", j);
  return kOk;
}

int cmd_ids(const RunConfig& c, bool discrete, int points, Emitter& em) {
  check_sizes(c.sizes, 1);
  check_window(c);
  if (points < 2) throw InputError("--points must be at least 2");
  std::vector<IDSCurve> curves;
  for (std::int64_t n : c.sizes) {
    curves.push_back(discrete ? discrete_ids_curve(c.model, n, CutCondition::Kirchhoff)
                              : metric_ids_curve(c.model, n, c.e_hi, CutCondition::Kirchhoff, c.solve));
  }
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(c.e_lo + (c.e_hi - c.e_lo) * i / (points - 1));
  if (c.format == "csv") {
    std::ostringstream os;
    os << "energy";
    for (std::int64_t n : c.sizes) os << ",ids_n" << n;
    os << '\n';
    for (double E : grid) {
      os << format_real(E);
      for (const auto& cv : curves) os << ',' << format_real(cv(E));
      os << '\n';
    }
    em.emit("ids", "csv", os.str());
    return kOk;
  }
  Json j = report_header("ids", c, Json{{"sizes", c.sizes}, {"e_lo", c.e_lo}, {"e_hi", c.e_hi}, {"discrete", discrete},
                                        {"points", points}, {"solve", solver_json(c.solve)}});
  Json sup = Json::array();
  for (std::size_t i = 1; i < curves.size(); ++i) sup.push_back(sup_distance(curves[i - 1], curves[i], c.e_lo, c.e_hi));
  j["sup_distance"] = sup;
  Json cs = Json::array();
  for (const auto& cv : curves) {
    Json values = Json::array();
    for (double E : grid) values.push_back(cv(E));
    cs.push_back({{"n", cv.n}, {"normalization", cv.normalization}, {"values", values}});
  }
  j["energies"] = grid;
  j["curves"] = cs;
  em.emit_json("ids", j);
  return kOk;
}

int cmd_gaps(const RunConfig& c, bool discrete, Emitter& em) {
  check_sizes(c.sizes, 2);
  check_window(c);
  const auto gaps = detect_gaps(curves_for(c, discrete), gap_options(c, discrete));
  Json j = report_header("gaps", c, Json{{"sizes", c.sizes}, {"e_lo", c.e_lo}, {"e_hi", c.e_hi}, {"discrete", discrete},
                                         {"solve", solver_json(c.solve)}});
  Json arr = Json::array();
  for (const auto& g : gaps) arr.push_back(gap_json(g));
  j["gaps"] = arr;
  em.emit_json("gaps", j);
  return kOk;
}

int cmd_labels(const RunConfig& c, bool discrete, int n_max, int m_max, double tolerance, Emitter& em) {
  check_sizes(c.sizes, 2);
  check_window(c);
  if (c.model.word) throw InputError("gap labels need a Sturmian model, not an explicit word");
  const auto freqs = letter_frequencies(c.model.params);
  const double alpha = c.model.params.alpha;
  const double scale = discrete ? average_vertex_count(c.model, freqs) : normalized_length(c.model, freqs);
  const auto lattice = discrete ? discrete_label_set(alpha, scale, n_max, m_max)
                                : label_lattice_sturmian(alpha, scale, n_max, m_max, 1e6);
  const auto gaps = detect_gaps(curves_for(c, discrete), gap_options(c, discrete));
  Json j = report_header("labels", c, Json{{"sizes", c.sizes}, {"e_lo", c.e_lo}, {"e_hi", c.e_hi}, {"discrete", discrete},
                                           {"n_max", n_max}, {"m_max", m_max}, {"tolerance", tolerance},
                                           {"solve", solver_json(c.solve)}});
  j["label_scale"] = scale;
  Json arr = Json::array();
  bool ok = true;
  std::size_t stable = 0;
  double worst = 0.0;
  for (const auto& g : gaps) {
    const LabelMatch m = match_gap_label(g, lattice);
    Json gj = gap_json(g);
    gj["label"] = {{"n", m.n}, {"m", m.m}, {"predicted", m.predicted}, {"residual", m.residual}};
    if (g.stability == GapStability::Stable) {
      ++stable;
      worst = std::max(worst, m.residual);
      if (m.residual > tolerance) ok = false;
    }
    arr.push_back(gj);
  }
  j["gaps"] = arr;
  j["stable_gaps"] = stable;
  j["max_stable_residual"] = worst;
  j["pass"] = ok;
  em.emit_json("labels", j);
  return ok ? kOk : kAssertionFailed;
}

int cmd_jumps(const RunConfig& c, int m_max, int n_max, double e_max, bool measure, Emitter& em) {
  if (c.model.word) throw InputError("jump prediction needs a Sturmian model");
  const Word probe = model_word(c.model, 64);
  const auto cw = as_comb(c.model, probe);
  if (!cw) throw InputError("jump prediction needs a comb model");
  auto preds = predict_jumps(c.model.params.alpha, cw->ell, c.model.spacing, m_max, n_max);
  std::erase_if(preds, [&](const JumpPrediction& p) { return p.energy > e_max; });
  if (measure) check_sizes(c.sizes, 1);
  Json opts{{"m_max", m_max}, {"n_max", n_max}, {"e_max", e_max}, {"measure", measure}};
  if (measure) opts["sizes"] = c.sizes;
  Json j = report_header("jumps", c, opts);
  Json arr = Json::array();
  for (const auto& p : preds) {
    Json pj{{"energy", p.energy}, {"k", std::sqrt(p.energy)}, {"case", to_string(p.kind)}, {"delta_n", p.delta_n}};
    Json wit = Json::array();
    for (const auto& w : p.witnesses) wit.push_back({{"case", to_string(w.kind)}, {"m", w.m}, {"n", w.n}});
    pj["witnesses"] = wit;
    if (measure) {
      const JumpMeasurement r = measure_jump(c.model, p.energy, c.sizes);
      pj["measured"] = {{"sizes", r.sizes}, {"multiplicity", r.multiplicity}, {"jump", r.jump},
                        {"extrapolated", r.extrapolated}};
    }
    arr.push_back(pj);
  }
  j["predictions"] = arr;
  em.emit_json("jumps", j);
  return kOk;
}

// -------------------------------------------------------------- verify suites

struct SuiteResult {
  Json report;
  bool pass = true;
};

SuiteResult verify_counting_lemma_suite(RunConfig c, int trials, std::uint64_t seed) {
  c.sizes = {200, 400};
  const auto gaps = stable_metric_gaps(c);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_t(1, 8);
  std::uniform_int_distribution<std::size_t> pick_gap(0, gaps.size() - 1);
  SuiteResult r;
  Json arr = Json::array();
  for (int i = 0; i < trials; ++i) {
    ModelSpec m = c.model;
    if (!m.word) m.params.theta = unit(rng);
    const int t = pick_t(rng);
    const Gap& g = gaps[pick_gap(rng)];
    const double E = g.lo + (0.25 + 0.5 * unit(rng)) * (g.hi - g.lo);
    const Word w = model_word(m, m.word ? static_cast<std::int64_t>(m.word->size()) - 1 : 8192);
    const auto rep = verify_counting_lemma(m, w, t, E);
    r.pass = r.pass && rep.equal;
    arr.push_back({{"theta", m.params.theta}, {"t", t}, {"energy", rep.energy}, {"lhs", rep.lhs},
                   {"n_horizontal", rep.n_horizontal}, {"decoration_sum", rep.decoration_sum},
                   {"predicted_rhs", rep.rhs}, {"equal", rep.equal}});
  }
  r.report["instances"] = arr;
  return r;
}

SuiteResult verify_sturm_suite(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> energy(0.05, 30.0);
  SuiteResult r;
  Json arr = Json::array();
  for (int i = 0; i < trials; ++i) {
    RobinChain chain = random_robin_chain(seed + static_cast<std::uint64_t>(i));
    const auto rep = sturm_oscillation_check(chain, energy(rng));
    r.pass = r.pass && rep.equal;
    arr.push_back({{"edges", chain.lengths.size()}, {"energy", rep.energy}, {"count", rep.count},
                   {"predicted_count", rep.zeros + 1}, {"zeros", rep.zeros}, {"equal", rep.equal}});
  }
  r.report["instances"] = arr;
  return r;
}

struct NamedGraph {
  std::string name;
  CompactMetricGraph metric;
  DiscreteGraph discrete;
};

NamedGraph graph_from_edges(const std::string& name, int n, const std::vector<std::pair<int, int>>& edges) {
  NamedGraph g;
  g.name = name;
  g.metric.vertices.resize(static_cast<std::size_t>(n));
  g.discrete.adjacency.resize(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    g.metric.edges.push_back({u, v, 1.0});
    g.discrete.adjacency[static_cast<std::size_t>(u)].push_back(v);
    g.discrete.adjacency[static_cast<std::size_t>(v)].push_back(u);
  }
  return g;
}

bool equilateral(const ModelSpec& m) {
  if (m.spacing != 1.0) return false;
  for (const auto& [a, d] : m.decorations) {
    for (const auto& e : d.edges) {
      if (e.length != 1.0) return false;
    }
  }
  return true;
}

Json correspondence_case(const NamedGraph& g, bool& pass) {
  SolveOptions o;
  o.k_max = 2.0 * kPi + 0.5;
  const Spectrum s = metric_spectrum_general(g.metric, o);
  const DiscreteSpectrum ds = discrete_spectrum(g.discrete);
  std::vector<double> interior;
  for (double mu : ds.values) {
    if (std::abs(mu) > 1e-9 && std::abs(mu - 2.0) > 1e-9) interior.push_back(mu);
  }
  double worst = 0.0;
  bool sizes_match = true;
  for (int branch = 0; branch < 2; ++branch) {
    std::vector<double> mapped;
    for (double lambda : s.flattened()) {
      const double k = std::sqrt(std::max(lambda, 0.0));
      if (k <= kPi * branch + 1e-7 || k >= kPi * (branch + 1) - 1e-7) continue;
      mapped.push_back(1.0 - std::cos(k));
    }
    std::sort(mapped.begin(), mapped.end());
    if (mapped.size() != interior.size()) {
      sizes_match = false;
      continue;
    }
    for (std::size_t i = 0; i < mapped.size(); ++i) worst = std::max(worst, std::abs(mapped[i] - interior[i]));
  }
  const long E = static_cast<long>(g.metric.edges.size());
  const long M1 = static_cast<long>(ds.multiplicity(2.0)), M2 = static_cast<long>(ds.multiplicity(0.0));
  // Roots are accurate to the solver tolerance, so the counts look just past (pi m)^2.
  const long n1 = static_cast<long>(s.count_at_most(kPi * kPi * (1 + 1e-9)));
  const long n2 = static_cast<long>(s.count_at_most(4 * kPi * kPi * (1 + 1e-9)));
  const bool ok = sizes_match && worst <= 1e-8 && n1 == E + M1 && n2 == 2 * E + M2;
  pass = pass && ok;
  return {{"graph", g.name}, {"edges", E}, {"vertices", ds.vertex_count}, {"branches_match", sizes_match},
          {"max_mu_difference", worst}, {"count_pi2", n1}, {"predicted_count_pi2", E + M1},
          {"count_4pi2", n2}, {"predicted_count_4pi2", 2 * E + M2}, {"pass", ok}};
}

SuiteResult verify_correspondence_suite(const RunConfig& c) {
  check_sizes(c.sizes, 1);
  if (!equilateral(c.model)) throw InputError("correspondence needs unit spacing and unit decoration edges");
  std::vector<NamedGraph> graphs;
  for (std::int64_t n : c.sizes) {
    const Word w = model_word(c.model, n);
    graphs.push_back({"truncation n=" + std::to_string(n), build_metric_truncation(c.model, w),
                      build_discrete_truncation(c.model, w)});
  }
  graphs.push_back(graph_from_edges("path P5", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
  graphs.push_back(graph_from_edges("cycle C3", 3, {{0, 1}, {1, 2}, {2, 0}}));
  graphs.push_back(graph_from_edges("cycle C4", 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  graphs.push_back(graph_from_edges("star K1,3", 4, {{0, 1}, {0, 2}, {0, 3}}));
  SuiteResult r;
  Json arr = Json::array();
  for (const auto& g : graphs) arr.push_back(correspondence_case(g, r.pass));
  r.report["instances"] = arr;
  return r;
}

SuiteResult verify_schwartzman_suite(RunConfig c, int t_max, int energies) {
  c.sizes = {200, 400};
  auto gaps = stable_metric_gaps(c);
  std::stable_sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) { return a.hi - a.lo > b.hi - b.lo; });
  if (static_cast<int>(gaps.size()) > energies) gaps.resize(static_cast<std::size_t>(energies));
  std::sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) { return a.lo < b.lo; });
  SuiteResult r;
  Json arr = Json::array();
  for (const auto& g : gaps) {
    const auto rep = schwartzman_identity_check(c.model, 0.5 * (g.lo + g.hi), t_max);
    const bool ok = rep.residual <= 0.05 && rep.lattice.residual <= 1e-2;
    r.pass = r.pass && ok;
    arr.push_back({{"energy", rep.energy}, {"t_max", rep.t_max}, {"zeros", rep.zeros}, {"zero_rate", rep.zero_rate},
                   {"ids", rep.ids}, {"normalized_length", rep.normalized_length}, {"surplus_term", rep.surplus_term},
                   {"predicted_rate", rep.predicted}, {"residual", rep.residual},
                   {"lattice", {{"n", rep.lattice.n}, {"m", rep.lattice.m}, {"value", rep.lattice.predicted},
                                {"residual", rep.lattice.residual}}},
                   {"pass", ok}});
  }
  r.report["instances"] = arr;
  return r;
}

int cmd_verify(const RunConfig& c, const std::string& suite, int trials, std::uint64_t seed, int t_max, int energies,
               Emitter& em, std::ostream& err) {
  if (trials < 1) throw InputError("--trials must be at least 1");
  std::vector<std::string> suites = {suite};
  if (suite == "all") suites = {"counting-lemma", "sturm", "correspondence", "schwartzman"};
  Json opts{{"suite", suite}, {"trials", trials}, {"seed", seed}, {"t_max", t_max}, {"energies", energies}};
  if (suite == "correspondence" || suite == "all") opts["sizes"] = c.sizes;
  Json j = report_header("verify", c, opts);
  bool all = true;
  Json results = Json::object();
  for (const auto& s : suites) {
    SuiteResult r;
    if (s == "counting-lemma") {
      r = verify_counting_lemma_suite(c, trials, seed);
    } else if (s == "sturm") {
      r = verify_sturm_suite(trials, seed);
    } else if (s == "correspondence") {
      r = verify_correspondence_suite(c);
    } else {
      r = verify_schwartzman_suite(c, t_max, energies);
    }
    r.report["pass"] = r.pass;
    if (!r.pass) {
      for (const auto& inst : r.report["instances"]) {
        const bool ok = inst.contains("pass") ? inst["pass"].get<bool>() : inst["equal"].get<bool>();
        if (!ok) err << s << ": failed " << inst.dump() << '\n';
      }
    }
    all = all && r.pass;
    results[s] = r.report;
  }
  j["suites"] = results;
  j["pass"] = all;
  em.emit_json("verify-" + suite, j);
  return all ? kOk : kAssertionFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, gap labels and nodal counts of Sturmian decorated graphs", "sturmgraph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunConfig c;
  auto add_model_options = [&c](CLI::App* sub) {
    sub->add_option("--model", c.model_path, "Model file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--alpha", c.alpha, "golden, silver or a real in (0,1)");
    sub->add_option("--theta", c.theta, "Phase in [0,1)");
    sub->add_option("--L", c.spacing, "Chain spacing");
    sub->add_option("--ell", c.ell, "Use the comb with pendant length ell on letter 1");
    sub->add_flag("--bare", c.bare, "Use the bare chain (no decorations)");
    sub->add_option("--word", c.word, "Explicit word of digits; overrides alpha/theta");
    sub->add_option("--output-dir", c.output_dir, "Write reports here instead of stdout")->check(CLI::ExistingDirectory);
  };
  auto add_solver_options = [&c](CLI::App* sub) {
    sub->add_option("--k-max", c.solve.k_max, "Largest wavenumber")->capture_default_str();
    sub->add_option("--k-step", c.solve.k_step, "Scan step in k (0 = automatic)")->capture_default_str();
    sub->add_option("--tol", c.solve.tol, "Root tolerance in k")->capture_default_str();
  };
  auto add_window = [&c](CLI::App* sub) {
    sub->add_option("--e-lo", c.e_lo, "Energy window start")->capture_default_str();
    sub->add_option("--e-hi", c.e_hi, "Energy window end")->capture_default_str();
  };
  std::int64_t n = 0;
  bool discrete = false;
  std::string cut = "kirchhoff";
  std::string solver = "auto";
  int points = 401;
  int n_max = 50, m_max = 50;
  double tolerance = 1e-3;
  int jm_max = 10, jn_max = 10;
  double jump_e_max = 40.0;
  bool measure = false;
  std::string suite;
  int trials = 20;
  std::uint64_t seed = 1;
  int t_max = 500;
  int energies = 3;
  std::vector<std::int64_t> sizes;

  auto* word = app.add_subcommand("word", "Print a Sturmian word prefix of n letters");
  add_model_options(word);
  word->add_option("--n", n, "Number of letters")->required();
  word->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* build = app.add_subcommand("build", "Describe the truncation on sites 0..n");
  add_model_options(build);
  build->add_option("--n", n, "Last site")->required();
  build->add_flag("--discrete", discrete, "Discrete graph");
  build->add_option("--cut", cut, "kirchhoff or dirichlet")->check(CLI::IsMember({"kirchhoff", "dirichlet"}));
  build->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the truncation on sites 0..n");
  add_model_options(spectrum);
  add_solver_options(spectrum);
  spectrum->add_option("--n", n, "Last site")->required();
  spectrum->add_flag("--discrete", discrete, "Normalized discrete Laplacian");
  spectrum->add_option("--cut", cut, "kirchhoff or dirichlet")->check(CLI::IsMember({"kirchhoff", "dirichlet"}));
  spectrum->add_option("--solver", solver, "auto, fast or general")->check(CLI::IsMember({"auto", "fast", "general"}));
  spectrum->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

  auto* ids = app.add_subcommand("ids", "Integrated density of states curves");
  add_model_options(ids);
  add_solver_options(ids);
  add_window(ids);
  ids->add_option("--sizes", sizes, "Truncation sizes, increasing")->delimiter(',');
  ids->add_flag("--discrete", discrete, "Discrete IDS");
  ids->add_option("--points", points, "Sample points in the window")->capture_default_str();
  ids->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* gaps = app.add_subcommand("gaps", "Detect stable spectral gaps");
  add_model_options(gaps);
  add_solver_options(gaps);
  add_window(gaps);
  gaps->add_option("--sizes", sizes, "Truncation sizes, increasing")->delimiter(',');
  gaps->add_flag("--discrete", discrete, "Discrete gaps");

  auto* labels = app.add_subcommand("labels", "Match gap plateaus to alpha*n + m lattice labels");
  add_model_options(labels);
  add_solver_options(labels);
  add_window(labels);
  labels->add_option("--sizes", sizes, "Truncation sizes, increasing")->delimiter(',');
  labels->add_flag("--discrete", discrete, "Discrete gaps");
  labels->add_option("--n-max", n_max, "Largest |n|")->capture_default_str();
  labels->add_option("--m-max", m_max, "Largest |m|")->capture_default_str();
  labels->add_option("--tolerance", tolerance, "Largest accepted residual")->capture_default_str();

  auto* jumps = app.add_subcommand("jumps", "Predicted (and measured) IDS jumps of a comb");
  add_model_options(jumps);
  jumps->add_option("--m-max", jm_max, "Witness range for m")->capture_default_str();
  jumps->add_option("--n-max", jn_max, "Witness range for n")->capture_default_str();
  jumps->add_option("--e-max", jump_e_max, "Largest energy listed")->capture_default_str();
  jumps->add_flag("--measure", measure, "Measure kernel dimensions at each energy");
  jumps->add_option("--sizes", sizes, "Truncation sizes for --measure")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  add_model_options(verify);
  verify->add_option("suite", suite, "counting-lemma, sturm, correspondence, schwartzman or all")
      ->required()
      ->check(CLI::IsMember({"counting-lemma", "sturm", "correspondence", "schwartzman", "all"}));
  verify->add_option("--trials", trials, "Random instances")->capture_default_str();
  verify->add_option("--seed", seed, "Random seed")->capture_default_str();
  verify->add_option("--t-max", t_max, "Radius for the zero rate")->capture_default_str();
  verify->add_option("--energies", energies, "Gap energies for the zero rate")->capture_default_str();
  verify->add_option("--sizes", sizes, "Truncation sizes for correspondence")->delimiter(',');

  std::vector<const char*> argv = {"sturmgraph"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    c.model = resolve_model(c);
    Emitter em(c, out);
    if (word->parsed()) {
      if (!word->count("--format")) c.format = "text";
      return cmd_word(c, n, em);
    }
    if (build->parsed()) return cmd_build(c, n, discrete, cut, em);
    if (spectrum->parsed()) {
      if (!spectrum->count("--format")) c.format = "csv";
      c.solve.validate();
      return cmd_spectrum(c, n, discrete, cut, solver, em);
    }
    const bool discrete_default = discrete;
    c.sizes = sizes;
    if (c.sizes.empty()) {
      c.sizes = discrete_default ? std::vector<std::int64_t>{500, 1000} : std::vector<std::int64_t>{200, 400};
      if (verify->parsed()) c.sizes = {10, 20};
    }
    if (ids->parsed()) return cmd_ids(c, discrete, points, em);
    if (gaps->parsed()) return cmd_gaps(c, discrete, em);
    if (labels->parsed()) return cmd_labels(c, discrete, n_max, m_max, tolerance, em);
    if (jumps->parsed()) return cmd_jumps(c, jm_max, jn_max, jump_e_max, measure, em);
    return cmd_verify(c, suite, trials, seed, t_max, energies, em, err);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace sturmgraph::cli
