#pragma once

#include <string>
#include <vector>

#include "cyclefactor/graph.hpp"

namespace cyclefactor {

// Undirected cycle decomposition: each entry is a vertex sequence around one
// cycle. Length-2 entries are single edges ("2-cycles").
using UndirectedCycles = std::vector<std::vector<Vertex>>;

struct PathFactor {
  std::vector<std::vector<Vertex>> paths;
  friend bool operator==(const PathFactor&, const PathFactor&) = default;
};

// Closed walk; walk.front() == walk.back().
struct Tour {
  std::vector<Vertex> walk;
  std::size_t length = 0;  // edge traversals, walk.size() - 1
  friend bool operator==(const Tour&, const Tour&) = default;
};

// Maps a cycle-factor of double_undirected(g) onto g. Throws LoopEncountered
// on a fixed point and ValidationError if cf is not a factor of the doubled
// graph.
UndirectedCycles to_undirected_cycle_factor(const CycleFactor& cf, const UndirectedRegularGraph& g);

// One path per cycle. A cycle of length >= 3 loses the edge whose endpoints
// are largest (compared as (max, min) pairs); a 2-cycle keeps its edge.
// Throws ValidationError when `cycles` is not a decomposition of g.
PathFactor to_path_factor(const UndirectedCycles& cycles, const UndirectedRegularGraph& g);

// Contracts each cycle, grows a BFS spanning tree over the contracted graph
// from the cycle holding vertex 0, and walks every cycle with a there-and-back
// detour over each tree edge into the child cycle. The result has length
// exactly n + 2(c - 1). Throws GraphDisconnected when g is disconnected and
// ValidationError when `cycles` is not a decomposition of g.
Tour to_tour(const UndirectedCycles& cycles, const UndirectedRegularGraph& g);

struct Violation {
  enum class Kind {
    EmptyWalk,
    EmptyPath,
    NotClosed,
    LengthMismatch,
    IndexOutOfRange,
    NonAdjacent,
    UncoveredVertex,
    VertexReuse,
  };
  Kind kind;
  std::size_t position = 0;  // index into the walk or path list
  Vertex vertex = -1;
  Vertex other = -1;
};

std::string to_string(Violation::Kind kind);

struct Verdict {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation::Kind kind) const;
};

// Independent re-checks of the Tour / PathFactor invariants against g.
// Never throw.
Verdict verify_tour(const Tour& t, const UndirectedRegularGraph& g);
Verdict verify_path_factor(const PathFactor& pf, const UndirectedRegularGraph& g);

// Checks that `cycles` partitions the vertex set of g into cycles of g.
Verdict verify_cycle_decomposition(const UndirectedCycles& cycles, const UndirectedRegularGraph& g);

}  // namespace cyclefactor
