#include "sturmgraph/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "sturmgraph/errors.hpp"

namespace sturmgraph {

namespace {

bool connected_components_one(int n, const std::vector<std::pair<int, int>>& links) {
  if (n == 0) return false;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  for (auto [u, v] : links) {
    const int ru = find(u), rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

Decoration Decoration::point(Letter letter) {
  Decoration d;
  d.letter = letter;
  return d;
}

Decoration Decoration::tooth(Letter letter, double ell) {
  Decoration d;
  d.letter = letter;
  d.vertex_count = 2;
  d.edges.push_back({0, 1, ell});
  d.base_vertex = 0;
  return d;
}

double Decoration::total_length() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.length;
  return total;
}

std::optional<double> Decoration::tooth_length() const {
  if (vertex_count == 2 && edges.size() == 1 && edges[0].u != edges[0].v) {
    return edges[0].length;
  }
  return std::nullopt;
}

void Decoration::validate() const {
  if (vertex_count < 1) throw InputError("decoration needs at least one vertex");
  if (base_vertex < 0 || base_vertex >= vertex_count) {
    throw InputError("decoration base vertex out of range");
  }
  std::vector<std::pair<int, int>> links;
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count) {
      throw InputError("decoration edge references unknown vertex");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw InputError("decoration edge lengths must be positive");
    }
    links.emplace_back(e.u, e.v);
  }
  if (!connected_components_one(vertex_count, links)) {
    throw InputError("decoration must be connected");
  }
}

Decoration Decoration::simplified() const {
  Decoration out;
  out.letter = letter;
  out.base_vertex = base_vertex;
  out.vertex_count = vertex_count;
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    const auto key = std::minmax(e.u, e.v);
    if (e.u != e.v && seen.insert(key).second) {
      out.edges.push_back(e);
      continue;
    }
    // loop or repeated edge: split once at the midpoint
    const int mid = out.vertex_count++;
    out.edges.push_back({e.u, mid, e.length / 2.0});
    out.edges.push_back({mid, e.v, e.length / 2.0});
  }
  return out;
}

ModelSpec ModelSpec::comb(double spacing, double ell, const SturmianParameters& params) {
  ModelSpec m;
  m.spacing = spacing;
  m.params = params;
  m.decorations[0] = Decoration::point(0);
  m.decorations[1] = Decoration::tooth(1, ell);
  return m;
}

ModelSpec ModelSpec::bare_chain(double spacing, const SturmianParameters& params) {
  ModelSpec m;
  m.spacing = spacing;
  m.params = params;
  m.decorations[0] = Decoration::point(0);
  m.decorations[1] = Decoration::point(1);
  return m;
}

void ModelSpec::validate() const {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InputError("spacing L must be positive");
  if (decorations.empty()) throw InputError("model needs at least one decoration");
  for (const auto& [letter, d] : decorations) {
    if (d.letter != letter) throw InputError("decoration letter does not match its key");
    d.validate();
  }
  if (!word) {
    params.validate();
    if (!decorations.count(0) || !decorations.count(1)) {
      throw InputError("Sturmian model needs decorations for letters 0 and 1");
    }
  } else {
    for (Letter a : word->letters) {
      if (!decorations.count(a)) throw InputError("word uses a letter with no decoration");
    }
  }
}

const Decoration& ModelSpec::decoration(Letter a) const {
  auto it = decorations.find(a);
  if (it == decorations.end()) {
    throw InputError("no decoration for letter " + std::to_string(a));
  }
  return it->second;
}

bool ModelSpec::is_comb() const {
  return std::all_of(decorations.begin(), decorations.end(), [](const auto& kv) {
    return kv.second.is_point() || kv.second.tooth_length().has_value();
  });
}

double CompactMetricGraph::total_length() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.length;
  return total;
}

std::vector<int> CompactMetricGraph::degrees() const {
  std::vector<int> deg(vertices.size(), 0);
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

bool CompactMetricGraph::connected() const {
  std::vector<std::pair<int, int>> links;
  for (const auto& e : edges) links.emplace_back(e.u, e.v);
  return connected_components_one(vertex_count(), links);
}

bool CompactMetricGraph::has_dirichlet() const {
  return std::any_of(vertices.begin(), vertices.end(),
                     [](const VertexSpec& v) { return v.condition == VertexCondition::Dirichlet; });
}

bool CompactMetricGraph::has_robin() const {
  return std::any_of(vertices.begin(), vertices.end(),
                     [](const VertexSpec& v) { return v.condition == VertexCondition::Robin; });
}

void CompactMetricGraph::validate() const {
  if (edges.empty()) throw InputError("metric graph has no edges");
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= vertex_count() || e.v < 0 || e.v >= vertex_count()) {
      throw InputError("metric edge references unknown vertex");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw InputError("metric edge lengths must be positive");
    }
  }
  for (const auto& v : vertices) {
    if (v.condition == VertexCondition::Robin && !std::isfinite(v.robin)) {
      throw InputError("Robin coefficient must be finite");
    }
  }
  if (!connected()) throw InputError("metric graph must be connected");
}

std::size_t DiscreteGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : adjacency) twice += nb.size();
  return twice / 2;
}

std::vector<int> DiscreteGraph::degrees() const {
  std::vector<int> deg;
  deg.reserve(adjacency.size());
  for (const auto& nb : adjacency) deg.push_back(static_cast<int>(nb.size()));
  return deg;
}

bool DiscreteGraph::connected() const {
  std::vector<std::pair<int, int>> links;
  for (int u = 0; u < vertex_count(); ++u) {
    for (int v : adjacency[u]) {
      if (u < v) links.emplace_back(u, v);
    }
  }
  return connected_components_one(vertex_count(), links);
}

CompactMetricGraph build_metric_truncation(const ModelSpec& model, const Word& word,
                                           CutCondition cut) {
  if (word.size() == 0) throw InputError("cannot truncate on an empty word");
  if (!(model.spacing > 0.0)) throw InputError("spacing L must be positive");
  CompactMetricGraph g;
  const int sites = static_cast<int>(word.size());
  g.vertices.resize(static_cast<std::size_t>(sites));
  for (int i = 0; i < sites; ++i) g.chain.push_back(i);
  for (int i = 0; i + 1 < sites; ++i) g.edges.push_back({i, i + 1, model.spacing});
  for (int i = 0; i < sites; ++i) {
    const Decoration d = model.decoration(word[static_cast<std::size_t>(i)]).simplified();
    // decoration vertex j maps to chain vertex i (base) or a fresh id
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
  if (g.edges.empty()) throw InputError("truncation is a single vertex (degenerate graph)");
  g.boundary = {0, sites - 1};
  if (sites == 1) g.boundary = {0};
  if (cut == CutCondition::Dirichlet) {
    for (int b : g.boundary) g.vertices[b].condition = VertexCondition::Dirichlet;
  }
  return g;
}

DiscreteGraph build_discrete_truncation(const ModelSpec& model, const Word& word) {
  const CompactMetricGraph m = build_metric_truncation(model, word);
  DiscreteGraph g;
  g.adjacency.resize(m.vertices.size());
  for (const auto& e : m.edges) {
    g.adjacency[e.u].push_back(e.v);
    g.adjacency[e.v].push_back(e.u);
  }
  for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
  g.boundary = m.boundary;
  g.chain = m.chain;
  return g;
}

SymmetricMatrix normalized_laplacian_matrix(const DiscreteGraph& g) {
  const int n = g.vertex_count();
  const auto deg = g.degrees();
  SymmetricMatrix m(n);
  for (int v = 0; v < n; ++v) {
    if (deg[v] == 0) throw InputError("normalized Laplacian undefined at an isolated vertex");
    m(v, v) = 1.0;
  }
  for (int v = 0; v < n; ++v) {
    for (int u : g.adjacency[v]) {
      m(v, u) -= 1.0 / std::sqrt(static_cast<double>(deg[v]) * deg[u]);
    }
  }
  return m;
}

double normalized_length(const ModelSpec& model, const std::map<Letter, double>& freqs) {
  double total = model.spacing;
  for (const auto& [a, nu] : freqs) total += nu * model.decoration(a).total_length();
  return total;
}

double average_vertex_count(const ModelSpec& model, const std::map<Letter, double>& freqs) {
  double total = 0.0;
  for (const auto& [a, nu] : freqs) total += nu * model.decoration(a).simplified().vertex_count;
  return total;
}

double average_edge_count(const ModelSpec& model, const std::map<Letter, double>& freqs) {
  double total = 1.0;
  for (const auto& [a, nu] : freqs) {
    total += nu * static_cast<double>(model.decoration(a).simplified().edges.size());
  }
  return total;
}

double conversion_factor(const ModelSpec& model, const std::map<Letter, double>& freqs) {
  return average_vertex_count(model, freqs) / average_edge_count(model, freqs);
}

Word model_word(const ModelSpec& model, std::int64_t n) {
  if (n < 0) throw InputError("truncation size must be non-negative");
  if (model.word) {
    if (static_cast<std::int64_t>(model.word->size()) < n + 1) {
      throw InputError("supplied word is shorter than the requested truncation");
    }
    Word w;
    w.origin = model.word->origin;
    w.letters.assign(model.word->letters.begin(), model.word->letters.begin() + (n + 1));
    return w;
  }
  return generate_word(model.params, 0, n);
}

}  // namespace sturmgraph
