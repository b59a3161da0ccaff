#include "gllm/graphs.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace gllm {

Edge::Edge(std::size_t u, std::size_t v) : first(std::min(u, v)), second(std::max(u, v)) {
  if (u == v) throw std::invalid_argument("self-loop edge");
}

UndirectedGraph::UndirectedGraph(std::vector<std::string> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() > kMaxVariables) throw std::invalid_argument("too many vertices");
  std::unordered_set<std::string> seen;
  for (const auto& v : vertices_)
    if (!seen.insert(v).second) throw std::invalid_argument("duplicate vertex label '" + v + "'");
  adjacency_.assign(vertices_.size(), VarSet{});
}

UndirectedGraph::UndirectedGraph(std::vector<std::string> vertices, std::span<const Edge> edges)
    : UndirectedGraph(std::move(vertices)) {
  for (const auto& e : edges) add_edge(e.first, e.second);
}

std::size_t UndirectedGraph::vertex_index(std::string_view label) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == label) return i;
  throw std::invalid_argument("unknown vertex '" + std::string(label) + "'");
}

void UndirectedGraph::add_edge(std::size_t u, std::size_t v) {
  if (u >= vertices_.size() || v >= vertices_.size()) throw std::out_of_range("edge endpoint is not a vertex");
  if (u == v) throw std::invalid_argument("self-loop on '" + vertices_[u] + "'");
  adjacency_[u] = adjacency_[u].with(v);
  adjacency_[v] = adjacency_[v].with(u);
}

void UndirectedGraph::add_edge(std::string_view u, std::string_view v) { add_edge(vertex_index(u), vertex_index(v)); }

std::vector<Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t u = 0; u < vertices_.size(); ++u)
    for (auto v : adjacency_[u].indices())
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::size_t UndirectedGraph::num_edges() const {
  std::size_t twice = 0;
  for (auto a : adjacency_) twice += a.size();
  return twice / 2;
}

bool UndirectedGraph::is_independent(VarSet s) const {
  for (auto v : s.indices())
    if (adjacency_.at(v).intersects(s)) return false;
  return true;
}

bool UndirectedGraph::is_clique(VarSet s) const {
  for (auto v : s.indices())
    if (!adjacency_.at(v).contains_all(s.without(v))) return false;
  return true;
}

UndirectedGraph complement(const UndirectedGraph& g) {
  UndirectedGraph out(g.vertices());
  const auto n = g.num_vertices();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!g.adjacent(u, v)) out.add_edge(u, v);
  return out;
}

namespace {

void bron_kerbosch(const UndirectedGraph& g, VarSet r, VarSet p, VarSet x, VarSetFamily& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  // Pivot on the vertex of P ∪ X with the most neighbours in P.
  std::size_t pivot = 0;
  std::size_t best = 0;
  bool have_pivot = false;
  for (auto u : (p | x).indices()) {
    const auto k = (g.neighbors(u) & p).size();
    if (!have_pivot || k > best) {
      pivot = u;
      best = k;
      have_pivot = true;
    }
  }
  for (auto v : (p - g.neighbors(pivot)).indices()) {
    const auto nv = g.neighbors(v);
    bron_kerbosch(g, r.with(v), p & nv, x & nv, out);
    p = p.without(v);
    x = x.with(v);
  }
}

}  // namespace

VarSetFamily maximal_cliques(const UndirectedGraph& g) {
  VarSetFamily out;
  if (g.num_vertices() == 0) return out;
  bron_kerbosch(g, VarSet{}, g.all_vertices(), VarSet{}, out);
  canonicalize(out);
  return out;
}

VarSetFamily maximal_independent_sets(const UndirectedGraph& g) { return maximal_cliques(complement(g)); }

UndirectedGraph graph_from_amis(std::vector<std::string> vertices, std::span<const VarSet> amis) {
  UndirectedGraph g(std::move(vertices));
  VarSet covered;
  for (auto s : amis) {
    if (!g.all_vertices().contains_all(s)) throw std::invalid_argument("AMIS member names an unknown vertex");
    covered = covered | s;
  }
  if (covered != g.all_vertices()) {
    const auto missing = (g.all_vertices() - covered).lowest();
    throw std::invalid_argument("vertex '" + g.vertices()[missing] + "' is not covered by any independent set");
  }
  const auto n = g.num_vertices();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const auto uv = VarSet::pair(u, v);
      if (std::none_of(amis.begin(), amis.end(), [uv](VarSet s) { return s.contains_all(uv); })) g.add_edge(u, v);
    }
  return g;
}

bool is_chordal(const UndirectedGraph& g) {
  const auto n = g.num_vertices();
  std::vector<std::size_t> weight(n, 0);
  VarSet visited;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!visited.contains(v) && (pick == n || weight[v] > weight[pick])) pick = v;
    // Reverse visit order is a perfect elimination ordering iff the graph is
    // chordal: the previously visited neighbours of each vertex form a clique.
    if (!g.is_clique(g.neighbors(pick) & visited)) return false;
    visited = visited.with(pick);
    for (auto u : (g.neighbors(pick) - visited).indices()) ++weight[u];
  }
  return true;
}

namespace {

bool plain_id(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string dot_id(const std::string& s) {
  if (plain_id(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string to_dot(const UndirectedGraph& g) {
  std::ostringstream out;
  out << "graph G {\n";
  for (const auto& v : g.vertices()) out << dot_id(v) << ";\n";
  for (const auto& e : g.edges()) out << dot_id(g.vertices()[e.first]) << " -- " << dot_id(g.vertices()[e.second]) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace gllm
