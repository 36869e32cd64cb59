#include "cyclefactor/factor_ops.hpp"

#include <algorithm>
#include <queue>
#include <utility>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::EmptyWalk: return "EmptyWalk";
    case Violation::Kind::EmptyPath: return "EmptyPath";
    case Violation::Kind::NotClosed: return "NotClosed";
    case Violation::Kind::LengthMismatch: return "LengthMismatch";
    case Violation::Kind::IndexOutOfRange: return "IndexOutOfRange";
    case Violation::Kind::NonAdjacent: return "NonAdjacent";
    case Violation::Kind::UncoveredVertex: return "UncoveredVertex";
    case Violation::Kind::VertexReuse: return "VertexReuse";
  }
  return "Unknown";
}

bool Verdict::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

bool in_range(Vertex v, const UndirectedRegularGraph& g) { return v >= 0 && v < g.n(); }

void require_decomposition(const UndirectedCycles& cycles, const UndirectedRegularGraph& g) {
  const auto verdict = verify_cycle_decomposition(cycles, g);
  if (!verdict.ok()) {
    const auto& first = verdict.violations.front();
    throw ValidationError("not a cycle decomposition: " + to_string(first.kind) + " at entry " +
                          std::to_string(first.position));
  }
}

}  // namespace

Verdict verify_cycle_decomposition(const UndirectedCycles& cycles, const UndirectedRegularGraph& g) {
  using Kind = Violation::Kind;
  Verdict verdict;
  std::vector<char> covered(static_cast<std::size_t>(g.n()), 0);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& cycle = cycles[c];
    if (cycle.empty()) {
      verdict.violations.push_back({Kind::EmptyPath, c});
      continue;
    }
    if (cycle.size() == 1) verdict.violations.push_back({Kind::LengthMismatch, c, cycle.front()});
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Vertex v = cycle[k];
      if (!in_range(v, g)) {
        verdict.violations.push_back({Kind::IndexOutOfRange, c, v});
        continue;
      }
      if (covered[static_cast<std::size_t>(v)]) verdict.violations.push_back({Kind::VertexReuse, c, v});
      covered[static_cast<std::size_t>(v)] = 1;
      // A 2-cycle is one edge; longer cycles close back to their first vertex.
      const bool last = k + 1 == cycle.size();
      if (last && cycle.size() <= 2) continue;
      const Vertex w = cycle[last ? 0 : k + 1];
      if (in_range(w, g) && !g.has_edge(v, w)) verdict.violations.push_back({Kind::NonAdjacent, c, v, w});
    }
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!covered[static_cast<std::size_t>(v)]) verdict.violations.push_back({Kind::UncoveredVertex, 0, v});
  }
  return verdict;
}

UndirectedCycles to_undirected_cycle_factor(const CycleFactor& cf, const UndirectedRegularGraph& g) {
  if (cf.sigma().size() != static_cast<std::size_t>(g.n())) {
    throw ValidationError("cycle-factor size does not match the graph");
  }
  UndirectedCycles cycles;
  for (const auto& cycle : cf.cycles()) {
    if (cycle.size() == 1) throw LoopEncountered("fixed point at vertex " + std::to_string(cycle.front()));
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Vertex v = cycle[k];
      const Vertex w = cycle[(k + 1) % cycle.size()];
      if (!g.has_edge(v, w)) {
        throw ValidationError("arc (" + std::to_string(v) + ", " + std::to_string(w) + ") is not an edge of the graph");
      }
    }
    cycles.push_back(cycle);
  }
  return cycles;
}

PathFactor to_path_factor(const UndirectedCycles& cycles, const UndirectedRegularGraph& g) {
  require_decomposition(cycles, g);
  PathFactor pf;
  for (const auto& cycle : cycles) {
    if (cycle.size() <= 2) {
      pf.paths.push_back(cycle);
      continue;
    }
    const auto len = cycle.size();
    auto edge_rank = [&](std::size_t k) {
      const Vertex a = cycle[k];
      const Vertex b = cycle[(k + 1) % len];
      return std::pair{std::max(a, b), std::min(a, b)};
    };
    std::size_t cut = 0;
    for (std::size_t k = 1; k < len; ++k) {
      if (edge_rank(k) > edge_rank(cut)) cut = k;
    }
    auto& path = pf.paths.emplace_back();
    for (std::size_t k = 1; k <= len; ++k) path.push_back(cycle[(cut + k) % len]);
  }
  return pf;
}

Tour to_tour(const UndirectedCycles& cycles, const UndirectedRegularGraph& g) {
  require_decomposition(cycles, g);
  if (!g.connected()) throw GraphDisconnected("tour needs a connected graph");

  const std::size_t c = cycles.size();
  std::vector<std::size_t> cycle_of(static_cast<std::size_t>(g.n()));
  std::vector<std::size_t> offset_of(static_cast<std::size_t>(g.n()));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t k = 0; k < cycles[i].size(); ++k) {
      cycle_of[static_cast<std::size_t>(cycles[i][k])] = i;
      offset_of[static_cast<std::size_t>(cycles[i][k])] = k;
    }
  }

  // entry[i]: vertex where the walk enters cycle i.
  // detours[v]: child cycles entered from v, as (child entry vertex).
  std::vector<Vertex> entry(c, -1);
  std::vector<std::vector<Vertex>> detours(static_cast<std::size_t>(g.n()));
  auto walk_order = [&](std::size_t i) {
    const auto& cycle = cycles[i];
    const auto start = offset_of[static_cast<std::size_t>(entry[i])];
    std::vector<Vertex> order;
    for (std::size_t k = 0; k < cycle.size(); ++k) order.push_back(cycle[(start + k) % cycle.size()]);
    return order;
  };

  const std::size_t root = cycle_of[0];
  entry[root] = 0;
  std::queue<std::size_t> queue;
  queue.push(root);
  std::size_t reached = 1;
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop();
    for (Vertex v : walk_order(i)) {
      for (Vertex w : g.neighbours(v)) {
        const auto j = cycle_of[static_cast<std::size_t>(w)];
        if (entry[j] >= 0) continue;
        entry[j] = w;
        detours[static_cast<std::size_t>(v)].push_back(w);
        queue.push(j);
        ++reached;
      }
    }
  }
  if (reached != c) throw GraphDisconnected("contracted cycle graph is disconnected");

  Tour tour;
  // Iterative walk: each frame is a cycle being traversed and the next
  // position along it.
  struct Frame {
    std::vector<Vertex> order;
    std::size_t pos;
    std::size_t detour;
  };
  std::vector<Frame> stack;
  tour.walk.push_back(0);
  stack.push_back({walk_order(root), 0, 0});
  while (!stack.empty()) {
    auto& top = stack.back();
    const Vertex here = top.order[top.pos];
    const auto& out = detours[static_cast<std::size_t>(here)];
    if (top.detour < out.size()) {
      const Vertex child_entry = out[top.detour++];
      tour.walk.push_back(child_entry);
      stack.push_back({walk_order(cycle_of[static_cast<std::size_t>(child_entry)]), 0, 0});
      continue;
    }
    const auto len = top.order.size();
    ++top.pos;
    top.detour = 0;
    if (top.pos < len) {
      tour.walk.push_back(top.order[top.pos]);
      continue;
    }
    // Close the cycle (a 2-cycle goes back over its single edge), then
    // return over the tree edge to the parent's vertex.
    tour.walk.push_back(top.order.front());
    stack.pop_back();
    if (!stack.empty()) {
      const auto& parent = stack.back();
      tour.walk.push_back(parent.order[parent.pos]);
    }
  }
  tour.length = tour.walk.size() - 1;
  return tour;
}

Verdict verify_tour(const Tour& t, const UndirectedRegularGraph& g) {
  using Kind = Violation::Kind;
  Verdict verdict;
  if (t.walk.empty()) {
    verdict.violations.push_back({Kind::EmptyWalk});
    return verdict;
  }
  if (t.walk.front() != t.walk.back()) verdict.violations.push_back({Kind::NotClosed, t.walk.size() - 1, t.walk.back()});
  if (t.length != t.walk.size() - 1) verdict.violations.push_back({Kind::LengthMismatch, t.walk.size() - 1});
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  for (std::size_t k = 0; k < t.walk.size(); ++k) {
    const Vertex v = t.walk[k];
    if (!in_range(v, g)) {
      verdict.violations.push_back({Kind::IndexOutOfRange, k, v});
      continue;
    }
    seen[static_cast<std::size_t>(v)] = 1;
    if (k + 1 < t.walk.size() && !g.has_edge(v, t.walk[k + 1])) {
      verdict.violations.push_back({Kind::NonAdjacent, k, v, t.walk[k + 1]});
    }
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!seen[static_cast<std::size_t>(v)]) verdict.violations.push_back({Kind::UncoveredVertex, 0, v});
  }
  return verdict;
}

Verdict verify_path_factor(const PathFactor& pf, const UndirectedRegularGraph& g) {
  using Kind = Violation::Kind;
  Verdict verdict;
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  for (std::size_t p = 0; p < pf.paths.size(); ++p) {
    const auto& path = pf.paths[p];
    if (path.empty()) verdict.violations.push_back({Kind::EmptyPath, p});
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Vertex v = path[k];
      if (!in_range(v, g)) {
        verdict.violations.push_back({Kind::IndexOutOfRange, p, v});
        continue;
      }
      if (seen[static_cast<std::size_t>(v)]) verdict.violations.push_back({Kind::VertexReuse, p, v});
      seen[static_cast<std::size_t>(v)] = 1;
      if (k + 1 < path.size() && !g.has_edge(v, path[k + 1])) {
        verdict.violations.push_back({Kind::NonAdjacent, p, v, path[k + 1]});
      }
    }
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!seen[static_cast<std::size_t>(v)]) verdict.violations.push_back({Kind::UncoveredVertex, 0, v});
  }
  return verdict;
}

}  // namespace cyclefactor
