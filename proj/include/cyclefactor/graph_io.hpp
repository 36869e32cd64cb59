#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "cyclefactor/graph.hpp"

namespace cyclefactor {

// Text format:
//
//   # comment lines start with '#', blank lines are skipped
//   digraph <n> <d>      (or: graph <n> <d>)
//   <d neighbours of vertex 0>
//   ...
//   <d neighbours of vertex n-1>
//
// Undirected files list every edge in both endpoint lines. Parsing is
// strict: wrong counts, duplicates, stray tokens or asymmetry throw
// ParseError with the offending line; an unknown header keyword throws
// FormatMismatch.
AnyGraph parse_graph(std::istream& in);
AnyGraph parse_graph_string(const std::string& text);

std::string format_graph(const AnyGraph& g);

AnyGraph read_graph(const std::filesystem::path& path);
void write_graph(const AnyGraph& g, const std::filesystem::path& path);

// Read a file that must hold a specific kind; FormatMismatch otherwise.
RegularDigraph read_digraph(const std::filesystem::path& path);
UndirectedRegularGraph read_undirected(const std::filesystem::path& path);

// FNV-1a over the canonical text form, rendered as 16 hex digits.
std::string instance_hash(const AnyGraph& g);
std::string fnv1a_hex(std::string_view text);

int vertex_count(const AnyGraph& g);
int degree(const AnyGraph& g);
bool is_directed(const AnyGraph& g);

// Directed view: digraphs as-is, undirected graphs doubled.
RegularDigraph as_digraph(const AnyGraph& g);

}  // namespace cyclefactor
