#include "cyclefactor/graph.hpp"

#include <algorithm>
#include <sstream>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

std::string to_string(GraphViolation::Kind kind) {
  switch (kind) {
    case GraphViolation::Kind::BadDegree: return "BadDegree";
    case GraphViolation::Kind::WrongLength: return "WrongLength";
    case GraphViolation::Kind::IndexOutOfRange: return "IndexOutOfRange";
    case GraphViolation::Kind::DuplicateEdge: return "DuplicateEdge";
    case GraphViolation::Kind::DegreeMismatch: return "DegreeMismatch";
    case GraphViolation::Kind::LoopNotAllowed: return "LoopNotAllowed";
    case GraphViolation::Kind::Asymmetric: return "Asymmetric";
  }
  return "Unknown";
}

std::string GraphViolation::message() const {
  std::ostringstream os;
  os << to_string(kind) << ": ";
  switch (kind) {
    case Kind::BadDegree:
      os << "degree " << found << " not in [1, n]";
      break;
    case Kind::WrongLength:
      if (vertex < 0) {
        os << "expected " << expected << " adjacency lists, found " << found;
      } else {
        os << "vertex " << vertex << " lists " << found << " neighbours, expected " << expected;
      }
      break;
    case Kind::IndexOutOfRange:
      os << "vertex " << vertex << " has neighbour " << other << " outside [0, " << expected << ")";
      break;
    case Kind::DuplicateEdge:
      os << "edge (" << vertex << ", " << other << ") listed twice";
      break;
    case Kind::DegreeMismatch:
      os << "vertex " << vertex << " has in-degree " << found << ", expected " << expected;
      break;
    case Kind::LoopNotAllowed:
      os << "loop at vertex " << vertex;
      break;
    case Kind::Asymmetric:
      os << "edge (" << vertex << ", " << other << ") missing its reverse";
      break;
  }
  return os.str();
}

namespace {

// Shared shape checks: n lists of d in-range, distinct entries.
std::optional<GraphViolation> check_lists(int n, int d, const AdjacencyLists& adj) {
  using Kind = GraphViolation::Kind;
  if (n < 1 || d < 1 || d > n) return GraphViolation{Kind::BadDegree, -1, -1, d, n};
  if (adj.size() != static_cast<std::size_t>(n)) {
    return GraphViolation{Kind::WrongLength, -1, -1, static_cast<int>(adj.size()), n};
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Vertex u = 0; u < n; ++u) {
    const auto& list = adj[static_cast<std::size_t>(u)];
    if (list.size() != static_cast<std::size_t>(d)) {
      return GraphViolation{Kind::WrongLength, u, -1, static_cast<int>(list.size()), d};
    }
    for (Vertex v : list) {
      if (v < 0 || v >= n) return GraphViolation{Kind::IndexOutOfRange, u, v, 0, n};
      if (seen[static_cast<std::size_t>(v)]) return GraphViolation{Kind::DuplicateEdge, u, v, 0, 0};
      seen[static_cast<std::size_t>(v)] = 1;
    }
    for (Vertex v : list) seen[static_cast<std::size_t>(v)] = 0;
  }
  return std::nullopt;
}

AdjacencyLists sorted(AdjacencyLists adj) {
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

bool sorted_contains(std::span<const Vertex> list, Vertex v) {
  return std::binary_search(list.begin(), list.end(), v);
}

}  // namespace

std::optional<GraphViolation> validate_digraph(int n, int d, const AdjacencyLists& out_adj) {
  if (auto v = check_lists(n, d, out_adj)) return v;
  std::vector<int> in_degree(static_cast<std::size_t>(n), 0);
  for (const auto& list : out_adj) {
    for (Vertex v : list) ++in_degree[static_cast<std::size_t>(v)];
  }
  // The lists hold n*d arcs in total, so a deficit implies an overfull vertex.
  for (Vertex v = 0; v < n; ++v) {
    if (in_degree[static_cast<std::size_t>(v)] > d) {
      return GraphViolation{GraphViolation::Kind::DegreeMismatch, v, -1, in_degree[static_cast<std::size_t>(v)], d};
    }
  }
  return std::nullopt;
}

std::optional<GraphViolation> validate_undirected(int n, int d, const AdjacencyLists& adj) {
  if (auto v = check_lists(n, d, adj)) return v;
  const auto canonical = sorted(adj);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v : canonical[static_cast<std::size_t>(u)]) {
      if (u == v) return GraphViolation{GraphViolation::Kind::LoopNotAllowed, u, v, 0, 0};
      if (!sorted_contains(canonical[static_cast<std::size_t>(v)], u)) {
        return GraphViolation{GraphViolation::Kind::Asymmetric, u, v, 0, 0};
      }
    }
  }
  return std::nullopt;
}

RegularDigraph::RegularDigraph(int n, int d, AdjacencyLists out_adj) : n_(n), d_(d) {
  if (auto violation = validate_digraph(n, d, out_adj)) throw ValidationError(violation->message());
  out_adj_ = sorted(std::move(out_adj));
}

bool RegularDigraph::has_edge(Vertex u, Vertex v) const {
  if (u < 0 || u >= n_) return false;
  return sorted_contains(out(u), v);
}

bool RegularDigraph::has_loops() const {
  for (Vertex v = 0; v < n_; ++v) {
    if (has_edge(v, v)) return true;
  }
  return false;
}

RegularDigraph RegularDigraph::transpose() const {
  AdjacencyLists in_adj(static_cast<std::size_t>(n_));
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v : out(u)) in_adj[static_cast<std::size_t>(v)].push_back(u);
  }
  return RegularDigraph(n_, d_, std::move(in_adj));
}

UndirectedRegularGraph::UndirectedRegularGraph(int n, int d, AdjacencyLists adj) : n_(n), d_(d) {
  if (auto violation = validate_undirected(n, d, adj)) throw ValidationError(violation->message());
  adj_ = sorted(std::move(adj));
}

bool UndirectedRegularGraph::has_edge(Vertex u, Vertex v) const {
  if (u < 0 || u >= n_) return false;
  return sorted_contains(neighbours(u), v);
}

std::vector<int> UndirectedRegularGraph::components() const {
  std::vector<int> label(static_cast<std::size_t>(n_), -1);
  std::vector<Vertex> stack;
  int next = 0;
  for (Vertex root = 0; root < n_; ++root) {
    if (label[static_cast<std::size_t>(root)] >= 0) continue;
    label[static_cast<std::size_t>(root)] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (Vertex v : neighbours(u)) {
        if (label[static_cast<std::size_t>(v)] < 0) {
          label[static_cast<std::size_t>(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

int UndirectedRegularGraph::component_count() const {
  const auto label = components();
  return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

bool BipartiteGraph::has_edge(Vertex u, Vertex v) const {
  if (u < 0 || u >= n) return false;
  return sorted_contains(u_adj[static_cast<std::size_t>(u)], v);
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : u_adj) total += list.size();
  return total;
}

BipartiteGraph to_bipartite(const RegularDigraph& g) {
  return BipartiteGraph{g.n(), g.d(), g.adjacency()};
}

RegularDigraph double_undirected(const UndirectedRegularGraph& g) {
  // Each undirected edge already appears in both endpoint lists, so the
  // adjacency lists are exactly the out-lists of the doubled digraph.
  return RegularDigraph(g.n(), g.d(), g.adjacency());
}

bool is_permutation_of_range(std::span<const Vertex> perm) {
  std::vector<char> hit(perm.size(), 0);
  for (Vertex v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || hit[static_cast<std::size_t>(v)]) return false;
    hit[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

int count_cycles(std::span<const Vertex> perm) {
  std::vector<char> visited(perm.size(), 0);
  int cycles = 0;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (visited[start]) continue;
    ++cycles;
    for (auto v = start; !visited[v]; v = static_cast<std::size_t>(perm[v])) visited[v] = 1;
  }
  return cycles;
}

std::vector<std::vector<Vertex>> permutation_cycles(std::span<const Vertex> perm) {
  std::vector<std::vector<Vertex>> cycles;
  std::vector<char> visited(perm.size(), 0);
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (visited[start]) continue;
    auto& cycle = cycles.emplace_back();
    for (auto v = start; !visited[v]; v = static_cast<std::size_t>(perm[v])) {
      visited[v] = 1;
      cycle.push_back(static_cast<Vertex>(v));
    }
  }
  return cycles;
}

CycleFactor::CycleFactor(const RegularDigraph& g, std::vector<Vertex> sigma) : sigma_(std::move(sigma)) {
  if (sigma_.size() != static_cast<std::size_t>(g.n()) || !is_permutation_of_range(sigma_)) {
    throw ValidationError("cycle factor is not a permutation of the vertex set");
  }
  for (Vertex i = 0; i < g.n(); ++i) {
    if (!g.has_edge(i, sigma_[static_cast<std::size_t>(i)])) {
      throw ValidationError("cycle factor uses non-edge (" + std::to_string(i) + ", " +
                            std::to_string(sigma_[static_cast<std::size_t>(i)]) + ")");
    }
  }
  cycles_ = permutation_cycles(sigma_);
}

}  // namespace cyclefactor
