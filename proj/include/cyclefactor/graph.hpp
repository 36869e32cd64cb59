#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cyclefactor {

using Vertex = int;
using AdjacencyLists = std::vector<std::vector<Vertex>>;

// First invariant violation found while checking a raw adjacency structure.
struct GraphViolation {
  enum class Kind {
    BadDegree,        // d outside [1, n] (or n < 1)
    WrongLength,      // a vertex list does not hold d entries, or n lists expected
    IndexOutOfRange,  // neighbour index outside [0, n)
    DuplicateEdge,    // parallel edge u -> v
    DegreeMismatch,   // in-degree (directed) or list length differs from d
    LoopNotAllowed,   // undirected graphs are simple
    Asymmetric,       // undirected: v in adj[u] but u not in adj[v]
  };
  Kind kind;
  Vertex vertex = -1;
  Vertex other = -1;
  int found = 0;
  int expected = 0;

  std::string message() const;
};

std::string to_string(GraphViolation::Kind kind);

// Checks every d-regular digraph invariant on raw out-adjacency lists. Loops
// and digons are legal; parallel edges are not. Lists need not be sorted.
std::optional<GraphViolation> validate_digraph(int n, int d, const AdjacencyLists& out_adj);

// Same for simple undirected d-regular graphs, where each edge is listed in
// both endpoint lists.
std::optional<GraphViolation> validate_undirected(int n, int d, const AdjacencyLists& adj);

// Directed graph with in- and out-degree exactly d at every vertex. Immutable
// once built; out-neighbour lists are kept sorted so equality is structural.
class RegularDigraph {
 public:
  // Throws ValidationError carrying the first violation.
  RegularDigraph(int n, int d, AdjacencyLists out_adj);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::span<const Vertex> out(Vertex v) const { return out_adj_[static_cast<std::size_t>(v)]; }
  const AdjacencyLists& adjacency() const noexcept { return out_adj_; }
  bool has_edge(Vertex u, Vertex v) const;
  std::size_t edge_count() const noexcept { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(d_); }
  bool has_loops() const;

  RegularDigraph transpose() const;

  friend bool operator==(const RegularDigraph&, const RegularDigraph&) = default;

 private:
  int n_;
  int d_;
  AdjacencyLists out_adj_;
};

// Simple undirected d-regular graph.
class UndirectedRegularGraph {
 public:
  UndirectedRegularGraph(int n, int d, AdjacencyLists adj);

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::span<const Vertex> neighbours(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
  const AdjacencyLists& adjacency() const noexcept { return adj_; }
  bool has_edge(Vertex u, Vertex v) const;

  // Component label per vertex, labels numbered by smallest member.
  std::vector<int> components() const;
  int component_count() const;
  bool connected() const { return component_count() == 1; }

  friend bool operator==(const UndirectedRegularGraph&, const UndirectedRegularGraph&) = default;

 private:
  int n_;
  int d_;
  AdjacencyLists adj_;
};

// Either kind of graph, as read from disk or produced by a family generator.
using AnyGraph = std::variant<RegularDigraph, UndirectedRegularGraph>;

// Bipartite graph H on U and V, both copies of [n]; U-vertex u is adjacent to
// V-vertex v iff (u, v) is an arc of the source digraph.
struct BipartiteGraph {
  int n = 0;
  int d = 0;
  AdjacencyLists u_adj;  // sorted V-side neighbours per U vertex

  bool has_edge(Vertex u, Vertex v) const;
  std::size_t edge_count() const;
  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;
};

BipartiteGraph to_bipartite(const RegularDigraph& g);

// Replaces every undirected edge {u, v} by the arcs (u, v) and (v, u).
RegularDigraph double_undirected(const UndirectedRegularGraph& g);

// A permutation sigma with (i, sigma[i]) an arc for every i, plus its cycles.
// Cycles are listed by increasing smallest vertex, each starting at its
// smallest vertex and following sigma.
class CycleFactor {
 public:
  // Throws ValidationError if sigma is not a bijection or uses a non-arc.
  CycleFactor(const RegularDigraph& g, std::vector<Vertex> sigma);

  const std::vector<Vertex>& sigma() const noexcept { return sigma_; }
  const std::vector<std::vector<Vertex>>& cycles() const noexcept { return cycles_; }
  std::size_t cycle_count() const noexcept { return cycles_.size(); }

  friend bool operator==(const CycleFactor& a, const CycleFactor& b) { return a.sigma_ == b.sigma_; }

 private:
  std::vector<Vertex> sigma_;
  std::vector<std::vector<Vertex>> cycles_;
};

// Number of cycles of a permutation of [0, n); fixed points count as cycles.
int count_cycles(std::span<const Vertex> perm);

// Cycle decomposition in the canonical order used by CycleFactor.
std::vector<std::vector<Vertex>> permutation_cycles(std::span<const Vertex> perm);

bool is_permutation_of_range(std::span<const Vertex> perm);

}  // namespace cyclefactor
