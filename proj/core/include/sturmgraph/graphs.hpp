#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "sturmgraph/words.hpp"

namespace sturmgraph {

struct GraphEdge {
  int u = 0;
  int v = 0;
  double length = 1.0;
};

/// Compact graph glued at a chain vertex through its base vertex. Vertex ids
/// are 0..vertex_count-1. A decoration with one vertex and no edges is the
/// bare (undecorated) site.
struct Decoration {
  int vertex_count = 1;
  std::vector<GraphEdge> edges;
  int base_vertex = 0;
  Letter letter = 0;

  static Decoration point(Letter letter);
  /// Pendant edge of length `ell` hanging from the base vertex.
  static Decoration tooth(Letter letter, double ell);

  double total_length() const;
  bool is_point() const { return edges.empty(); }
  std::optional<double> tooth_length() const;

  /// Connected, positive lengths, base vertex in range.
  void validate() const;

  /// Loops and parallel edges split at their midpoints. Metric length and the
  /// Kirchhoff spectrum are unchanged; the result has simple incidence.
  Decoration simplified() const;
};

struct ModelSpec {
  std::map<Letter, Decoration> decorations;
  double spacing = 1.0;
  SturmianParameters params = SturmianParameters::golden();
  std::optional<Word> word;  // externally supplied word overrides params

  /// Letter 1 -> tooth of length ell, letter 0 -> bare vertex.
  static ModelSpec comb(double spacing, double ell, const SturmianParameters& params);
  /// Every letter a bare vertex: the plain chain.
  static ModelSpec bare_chain(double spacing, const SturmianParameters& params);

  void validate() const;
  const Decoration& decoration(Letter a) const;

  /// True when every decoration is a bare vertex or a single pendant edge.
  bool is_comb() const;
};

enum class VertexCondition { Kirchhoff, Robin, Dirichlet };

struct VertexSpec {
  VertexCondition condition = VertexCondition::Kirchhoff;
  double robin = 0.0;  // sum of outgoing derivatives = robin * f(v)
};

enum class CutCondition { Kirchhoff, Dirichlet };

struct CompactMetricGraph {
  std::vector<VertexSpec> vertices;
  std::vector<GraphEdge> edges;
  std::vector<int> boundary;
  std::vector<int> chain;  // chain[i] = vertex id of chain site i (may be empty)

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  double total_length() const;
  std::vector<int> degrees() const;
  bool connected() const;
  bool has_dirichlet() const;
  bool has_robin() const;
  void validate() const;
};

struct DiscreteGraph {
  std::vector<std::vector<int>> adjacency;
  std::vector<int> boundary;
  std::vector<int> chain;

  int vertex_count() const { return static_cast<int>(adjacency.size()); }
  std::size_t edge_count() const;
  std::vector<int> degrees() const;
  bool connected() const;
};

/// Dense row-major symmetric matrix.
struct SymmetricMatrix {
  int n = 0;
  std::vector<double> data;

  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int size) : n(size), data(static_cast<std::size_t>(size) * size, 0.0) {}
  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

/// Chain of |word|-1 edges of length L with decoration word[i] glued at chain
/// vertex i. Chain ends are Kirchhoff (or Dirichlet when requested).
CompactMetricGraph build_metric_truncation(const ModelSpec& model, const Word& word,
                                           CutCondition cut = CutCondition::Kirchhoff);

/// Same incidence as the metric truncation with unit combinatorial edges.
DiscreteGraph build_discrete_truncation(const ModelSpec& model, const Word& word);

SymmetricMatrix normalized_laplacian_matrix(const DiscreteGraph& g);

double normalized_length(const ModelSpec& model, const std::map<Letter, double>& freqs);
double average_vertex_count(const ModelSpec& model, const std::map<Letter, double>& freqs);
double average_edge_count(const ModelSpec& model, const std::map<Letter, double>& freqs);
double conversion_factor(const ModelSpec& model, const std::map<Letter, double>& freqs);

/// Word used for truncation [0, n]: params or the supplied word's prefix.
Word model_word(const ModelSpec& model, std::int64_t n);

}  // namespace sturmgraph
