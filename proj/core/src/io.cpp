#include "sturmgraph/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "sturmgraph/errors.hpp"

namespace sturmgraph {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string roundtrip(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Decoration parse_decoration(Letter letter, std::string_view value) {
  const auto parts = split_ws(value);
  if (parts.empty()) throw InputError("empty decoration");
  if (parts[0] == "point") {
    if (parts.size() != 1) throw InputError("'point' takes no arguments");
    return Decoration::point(letter);
  }
  if (parts[0] == "tooth") {
    if (parts.size() != 2) throw InputError("'tooth' takes one length");
    return Decoration::tooth(letter, parse_real(parts[1], "tooth length"));
  }
  if (parts[0] != "edges") throw InputError("decoration kind must be point, tooth or edges");
  if (parts.size() < 2 || parts.size() > 3) throw InputError("'edges' takes an edge list and optional base=<id>");
  Decoration d;
  d.letter = letter;
  int max_id = 0;
  for (auto item : split(parts[1], ',')) {
    const auto colon = item.find(':');
    const auto dash = item.find('-');
    if (colon == std::string_view::npos || dash == std::string_view::npos || dash > colon) {
      throw InputError("edge must look like u-v:length");
    }
    GraphEdge e;
    e.u = static_cast<int>(parse_integer(item.substr(0, dash), "edge endpoint"));
    e.v = static_cast<int>(parse_integer(item.substr(dash + 1, colon - dash - 1), "edge endpoint"));
    e.length = parse_real(item.substr(colon + 1), "edge length");
    if (e.u < 0 || e.v < 0) throw InputError("edge endpoints must be non-negative");
    max_id = std::max({max_id, e.u, e.v});
    d.edges.push_back(e);
  }
  d.vertex_count = max_id + 1;
  if (parts.size() == 3) {
    if (parts[2].substr(0, 5) != "base=") throw InputError("expected base=<id>");
    d.base_vertex = static_cast<int>(parse_integer(parts[2].substr(5), "base vertex"));
  }
  d.validate();
  return d;
}

void apply_key(ModelSpec& m, bool& any_decoration, std::string_view key, std::string_view value) {
  if (key == "alpha") {
    if (value == "golden") {
      m.params.alpha = golden_alpha();
    } else if (value == "silver") {
      m.params.alpha = silver_alpha();
    } else {
      m.params.alpha = parse_real(value, "alpha");
      if (!(m.params.alpha > 0.0 && m.params.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    }
  } else if (key == "theta") {
    m.params.theta = parse_real(value, "theta");
    if (!(m.params.theta >= 0.0 && m.params.theta < 1.0)) throw InputError("theta must lie in [0, 1)");
  } else if (key == "precision") {
    if (value == "float") {
      m.params.precision = SturmianParameters::Precision::Float;
    } else if (value.substr(0, 11) == "convergent:") {
      m.params.precision = SturmianParameters::Precision::RationalConvergent;
      m.params.convergent_depth = static_cast<int>(parse_integer(value.substr(11), "convergent depth"));
    } else {
      throw InputError("precision must be float or convergent:<depth>");
    }
  } else if (key == "spacing") {
    m.spacing = parse_real(value, "spacing");
    if (!(m.spacing > 0.0)) throw InputError("spacing must be positive");
  } else if (key == "word") {
    m.word = Word::from_string(std::string(value));
    if (m.word->letters.empty()) throw InputError("word must not be empty");
  } else if (key.substr(0, 11) == "decoration.") {
    const Letter a = static_cast<Letter>(parse_integer(key.substr(11), "decoration letter"));
    if (a < 0 || a > 9) throw InputError("decoration letter must be a digit");
    m.decorations[a] = parse_decoration(a, value);
    any_decoration = true;
  } else {
    throw InputError("unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

double parse_real(std::string_view s, const std::string& what) {
  s = trim(s);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw InputError(what + ": not a real number: '" + std::string(s) + "'");
  }
  return x;
}

std::int64_t parse_integer(std::string_view s, const std::string& what) {
  s = trim(s);
  std::int64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(what + ": not an integer: '" + std::string(s) + "'");
  }
  return x;
}

ModelSpec parse_model(std::string_view text) {
  ModelSpec m;
  m.params = SturmianParameters::golden();
  bool any_decoration = false;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw InputError(where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) throw InputError(where + "duplicate key '" + std::string(key) + "'");
    try {
      apply_key(m, any_decoration, key, value);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  if (!any_decoration) {
    m.decorations[0] = Decoration::point(0);
    m.decorations[1] = Decoration::tooth(1, 1.0);
  }
  for (Letter a : {0, 1}) {
    if (!m.decorations.count(a)) m.decorations[a] = Decoration::point(a);
  }
  if (m.word) {
    for (Letter a : m.word->letters) {
      if (!m.decorations.count(a)) m.decorations[a] = Decoration::point(a);
    }
  }
  m.validate();
  return m;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string model_to_text(const ModelSpec& model) {
  std::ostringstream os;
  if (model.params.alpha == golden_alpha()) {
    os << "alpha = golden\n";
  } else if (model.params.alpha == silver_alpha()) {
    os << "alpha = silver\n";
  } else {
    os << "alpha = " << roundtrip(model.params.alpha) << "\n";
  }
  os << "theta = " << roundtrip(model.params.theta) << "\n";
  if (model.params.precision == SturmianParameters::Precision::RationalConvergent) {
    os << "precision = convergent:" << model.params.convergent_depth << "\n";
  }
  os << "spacing = " << roundtrip(model.spacing) << "\n";
  if (model.word) os << "word = " << model.word->to_string() << "\n";
  for (const auto& [a, d] : model.decorations) {
    os << "decoration." << a << " = ";
    if (d.is_point()) {
      os << "point";
    } else if (d.tooth_length() && d.base_vertex == 0 && d.edges[0].u == 0) {
      os << "tooth " << roundtrip(*d.tooth_length());
    } else {
      os << "edges ";
      for (std::size_t i = 0; i < d.edges.size(); ++i) {
        const auto& e = d.edges[i];
        os << (i ? "," : "") << e.u << '-' << e.v << ':' << roundtrip(e.length);
      }
      os << " base=" << d.base_vertex;
    }
    os << "\n";
  }
  return os.str();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "lambda,multiplicity\n";
  for (const auto& e : s.eigenvalues) os << format_real(e.lambda) << ',' << e.multiplicity << '\n';
}

void write_discrete_spectrum_csv(std::ostream& os, const DiscreteSpectrum& s, double merge_tol) {
  os << "mu,multiplicity\n";
  std::size_t i = 0;
  while (i < s.values.size()) {
    std::size_t j = i + 1;
    while (j < s.values.size() && s.values[j] - s.values[j - 1] <= merge_tol) ++j;
    os << format_real(s.values[i]) << ',' << (j - i) << '\n';
    i = j;
  }
}

void write_edge_list_csv(std::ostream& os, const CompactMetricGraph& g) {
  os << "u,v,length\n";
  for (const auto& e : g.edges) os << e.u << ',' << e.v << ',' << format_real(e.length) << '\n';
}

void write_prufer_csv(std::ostream& os, const PruferTrace& trace) {
  os << "t,phi_lifted,zero_count\n";
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    os << format_real(trace.t[i]) << ',' << format_real(trace.phi_lifted[i]) << ',' << trace.zero_count[i] << '\n';
  }
}

}  // namespace sturmgraph
