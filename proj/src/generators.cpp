#include "cyclefactor/generators.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>
#include <utility>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/rng.hpp"

namespace cyclefactor {

namespace {

constexpr int kMaxPermutationDraws = 10'000;

void shuffle(std::vector<Vertex>& v, Engine& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

std::vector<Vertex> identity(int n) {
  std::vector<Vertex> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// d distinct shifts of a relabelled cyclic group; loop-free iff shift 0 is excluded.
RegularDigraph circulant_fallback(int n, int d, bool allow_loops, Engine& rng) {
  auto relabel = identity(n);
  shuffle(relabel, rng);
  std::vector<Vertex> position(static_cast<std::size_t>(n));
  for (Vertex i = 0; i < n; ++i) position[static_cast<std::size_t>(relabel[static_cast<std::size_t>(i)])] = i;

  std::vector<int> shifts;
  for (int s = allow_loops ? 0 : 1; s < n; ++s) shifts.push_back(s);
  shuffle(shifts, rng);
  shifts.resize(static_cast<std::size_t>(d));

  AdjacencyLists adj(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    const int p = position[static_cast<std::size_t>(v)];
    for (int s : shifts) adj[static_cast<std::size_t>(v)].push_back(relabel[static_cast<std::size_t>((p + s) % n)]);
  }
  return RegularDigraph(n, d, std::move(adj));
}

std::uint64_t edge_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

AdjacencyLists disjoint_blocks(int n, int block, auto&& connect) {
  AdjacencyLists adj(static_cast<std::size_t>(n));
  for (int base = 0; base < n; base += block) {
    for (int a = 0; a < block; ++a) {
      for (int b = 0; b < block; ++b) {
        if (connect(a, b)) adj[static_cast<std::size_t>(base + a)].push_back(base + b);
      }
    }
  }
  return adj;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::CompleteLoops: return "complete_loops";
    case Family::CliqueUnion: return "clique_union";
    case Family::Cycle: return "cycle";
    case Family::CompleteBipartiteLike: return "complete_bipartite_like";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::CompleteLoops, Family::CliqueUnion, Family::Cycle, Family::CompleteBipartiteLike}) {
    if (to_string(f) == name) return f;
  }
  throw BadParameters("unknown family '" + std::string(name) + "'");
}

AnyGraph gen_family(Family family, int n, int d) {
  if (n < 1 || d < 1) throw BadParameters("family graphs need n >= 1 and d >= 1");
  switch (family) {
    case Family::CompleteLoops:
      if (n % d != 0) throw BadParameters("complete_loops needs d | n");
      return RegularDigraph(n, d, disjoint_blocks(n, d, [](int, int) { return true; }));
    case Family::CliqueUnion:
      if (n % (d + 1) != 0) throw BadParameters("clique_union needs (d+1) | n");
      return UndirectedRegularGraph(n, d, disjoint_blocks(n, d + 1, [](int a, int b) { return a != b; }));
    case Family::Cycle: {
      if (d != 2 || n < 3) throw BadParameters("cycle needs d = 2 and n >= 3");
      AdjacencyLists adj(static_cast<std::size_t>(n));
      for (Vertex v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = {(v + n - 1) % n, (v + 1) % n};
      return UndirectedRegularGraph(n, 2, std::move(adj));
    }
    case Family::CompleteBipartiteLike:
      if (n % (2 * d) != 0) throw BadParameters("complete_bipartite_like needs 2d | n");
      // Within a block, vertices [0, d) form one side and [d, 2d) the other.
      return UndirectedRegularGraph(n, d, disjoint_blocks(n, 2 * d, [d](int a, int b) { return (a < d) != (b < d); }));
  }
  throw BadParameters("unknown family");
}

RegularDigraph gen_random_regular_digraph(int n, int d, std::uint64_t seed, bool allow_loops) {
  if (n < 1 || d < 1 || d > n) throw BadParameters("random digraph needs 1 <= d <= n");
  if (!allow_loops && d >= n) throw BadParameters("loop-free random digraph needs d < n");
  auto rng = make_engine(seed);

  std::vector<std::vector<Vertex>> perms;
  int draws = 0;
  while (static_cast<int>(perms.size()) < d && draws < kMaxPermutationDraws) {
    ++draws;
    auto candidate = identity(n);
    shuffle(candidate, rng);
    bool clash = false;
    for (Vertex i = 0; i < n && !clash; ++i) {
      const auto image = candidate[static_cast<std::size_t>(i)];
      if (!allow_loops && image == i) clash = true;
      for (const auto& p : perms) {
        if (p[static_cast<std::size_t>(i)] == image) {
          clash = true;
          break;
        }
      }
    }
    if (!clash) perms.push_back(std::move(candidate));
  }
  if (static_cast<int>(perms.size()) < d) return circulant_fallback(n, d, allow_loops, rng);

  AdjacencyLists adj(static_cast<std::size_t>(n));
  for (const auto& p : perms) {
    for (Vertex i = 0; i < n; ++i) adj[static_cast<std::size_t>(i)].push_back(p[static_cast<std::size_t>(i)]);
  }
  return RegularDigraph(n, d, std::move(adj));
}

UndirectedRegularGraph gen_random_regular_graph(int n, int d, std::uint64_t seed) {
  if (n < 2 || d < 1 || d >= n || (n * d) % 2 != 0) {
    throw BadParameters("random undirected graph needs 1 <= d < n and n*d even");
  }
  auto rng = make_engine(seed);

  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 0; v < n; ++v) {
    for (int k = 1; k <= d / 2; ++k) edges.emplace_back(v, (v + k) % n);
    if (d % 2 == 1 && v < n / 2) edges.emplace_back(v, v + n / 2);
  }
  std::unordered_set<std::uint64_t> present;
  for (auto [a, b] : edges) present.insert(edge_key(a, b));

  const std::size_t swaps = 20 * edges.size() + 100;
  for (std::size_t t = 0; t < swaps; ++t) {
    const auto i = uniform_below(rng, edges.size());
    const auto j = uniform_below(rng, edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, e] = edges[j];
    if (rng() & 1) std::swap(c, e);
    // {a,b},{c,e} -> {a,c},{b,e}
    if (a == c || b == e) continue;
    if (present.count(edge_key(a, c)) || present.count(edge_key(b, e))) continue;
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, e));
    present.insert(edge_key(a, c));
    present.insert(edge_key(b, e));
    edges[i] = {a, c};
    edges[j] = {b, e};
  }

  AdjacencyLists adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  return UndirectedRegularGraph(n, d, std::move(adj));
}

UndirectedRegularGraph gen_random_connected_regular_graph(int n, int d, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    auto g = gen_random_regular_graph(n, d, attempt == 0 ? seed : derive_seed(seed, attempt));
    if (g.connected()) return g;
  }
  throw RetryLimitExceeded("no connected " + std::to_string(d) + "-regular graph on " + std::to_string(n) +
                           " vertices after 1000 draws");
}

RegularDigraph directed_cycle(int n) {
  AdjacencyLists adj(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = {(v + 1) % n};
  return RegularDigraph(n, 1, std::move(adj));
}

RegularDigraph permutation_digraph(std::span<const Vertex> perm) {
  AdjacencyLists adj(perm.size());
  for (std::size_t v = 0; v < perm.size(); ++v) adj[v] = {perm[v]};
  return RegularDigraph(static_cast<int>(perm.size()), 1, std::move(adj));
}

RegularDigraph complete_loops(int n) { return std::get<RegularDigraph>(gen_family(Family::CompleteLoops, n, n)); }

UndirectedRegularGraph petersen_graph() {
  // Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
  AdjacencyLists adj(10);
  auto link = [&adj](Vertex a, Vertex b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  for (Vertex i = 0; i < 5; ++i) {
    link(i, (i + 1) % 5);
    link(5 + i, 5 + (i + 2) % 5);
    link(i, i + 5);
  }
  return UndirectedRegularGraph(10, 3, std::move(adj));
}

UndirectedRegularGraph complete_graph(int n) {
  AdjacencyLists adj(static_cast<std::size_t>(n));
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = 0; b < n; ++b) {
      if (a != b) adj[static_cast<std::size_t>(a)].push_back(b);
    }
  }
  return UndirectedRegularGraph(n, n - 1, std::move(adj));
}

}  // namespace cyclefactor
