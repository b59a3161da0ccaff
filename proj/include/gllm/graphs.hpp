#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gllm/varset.hpp"

namespace gllm {

/// Unordered vertex pair, stored with first < second.
struct Edge {
  std::size_t first = 0;
  std::size_t second = 0;

  Edge() = default;
  Edge(std::size_t u, std::size_t v);
  VarSet as_set() const { return VarSet::pair(first, second); }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph over labelled vertices. Vertex i is addressed by its
/// position in the declared vertex list.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(std::vector<std::string> vertices);
  UndirectedGraph(std::vector<std::string> vertices, std::span<const Edge> edges);

  const std::vector<std::string>& vertices() const { return vertices_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t vertex_index(std::string_view label) const;
  VarSet all_vertices() const { return VarSet::first(vertices_.size()); }

  /// Throws on self-loops or unknown endpoints; adding an existing edge is a no-op.
  void add_edge(std::size_t u, std::size_t v);
  void add_edge(std::string_view u, std::string_view v);
  bool adjacent(std::size_t u, std::size_t v) const { return neighbors(u).contains(v); }
  VarSet neighbors(std::size_t v) const { return adjacency_.at(v); }

  /// Sorted by (first, second).
  std::vector<Edge> edges() const;
  std::size_t num_edges() const;

  bool is_independent(VarSet s) const;
  bool is_clique(VarSet s) const;

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<VarSet> adjacency_;
};

UndirectedGraph complement(const UndirectedGraph& g);

/// Pivoting Bron–Kerbosch. Canonically ordered; isolated vertices come out as
/// singletons.
VarSetFamily maximal_cliques(const UndirectedGraph& g);

VarSetFamily maximal_independent_sets(const UndirectedGraph& g);

/// Rebuilds the graph whose maximal independent sets are `amis`: u and v are
/// adjacent iff no member holds both. Throws if a vertex is not covered.
UndirectedGraph graph_from_amis(std::vector<std::string> vertices, std::span<const VarSet> amis);

/// Maximum cardinality search (ties to the lowest vertex index) followed by a
/// perfect-elimination check.
bool is_chordal(const UndirectedGraph& g);

std::string to_dot(const UndirectedGraph& g);

}  // namespace gllm
