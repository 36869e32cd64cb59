#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cyclefactor/graph.hpp"

namespace cyclefactor {

// Extremal and sanity families.
enum class Family {
  CompleteLoops,          // directed: n/d disjoint complete digraphs on d vertices, loops included
  CliqueUnion,            // undirected: n/(d+1) disjoint cliques K_{d+1}
  Cycle,                  // undirected: C_n, d = 2
  CompleteBipartiteLike,  // undirected: n/(2d) disjoint copies of K_{d,d}
};

std::string to_string(Family family);
// Throws BadParameters on an unknown name.
Family parse_family(std::string_view name);

// Throws BadParameters when n, d violate the family's divisibility rule.
AnyGraph gen_family(Family family, int n, int d);

// Union of d random permutations of [n] that disagree at every index, so no
// arc repeats. Each permutation is redrawn until it clashes with none of the
// earlier ones; after 10^4 failed draws the generator falls back to a randomly
// relabelled circulant (the columns of a Latin square). With allow_loops
// false every permutation is a derangement and d must be below n.
RegularDigraph gen_random_regular_digraph(int n, int d, std::uint64_t seed, bool allow_loops = true);

// Random simple d-regular undirected graph: a circulant start graph mixed by
// degree-preserving double-edge swaps. Requires n*d even and d < n.
UndirectedRegularGraph gen_random_regular_graph(int n, int d, std::uint64_t seed);

// As above, redrawn (with derived seeds) until connected.
UndirectedRegularGraph gen_random_connected_regular_graph(int n, int d, std::uint64_t seed);

RegularDigraph directed_cycle(int n);
RegularDigraph permutation_digraph(std::span<const Vertex> perm);
RegularDigraph complete_loops(int n);
UndirectedRegularGraph petersen_graph();
UndirectedRegularGraph complete_graph(int n);

}  // namespace cyclefactor
