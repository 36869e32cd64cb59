#include "cyclefactor/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

int parse_int(std::string_view token, std::size_t line_no) {
  int value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line_no, "expected an integer, found '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

AnyGraph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t header_line = 0;
  bool directed = false;
  int n = 0;
  int d = 0;
  AdjacencyLists adj;
  std::vector<std::size_t> line_of;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    if (!have_header) {
      if (tokens[0] == "digraph") {
        directed = true;
      } else if (tokens[0] != "graph") {
        throw FormatMismatch("line " + std::to_string(line_no) + ": unknown header '" + std::string(tokens[0]) +
                             "', expected 'digraph' or 'graph'");
      }
      if (tokens.size() != 3) throw ParseError(line_no, "header must be '<kind> <n> <d>'");
      n = parse_int(tokens[1], line_no);
      d = parse_int(tokens[2], line_no);
      if (n < 1 || d < 1 || d > n) throw ParseError(line_no, "header needs 1 <= d <= n");
      have_header = true;
      header_line = line_no;
      continue;
    }

    if (adj.size() == static_cast<std::size_t>(n)) throw ParseError(line_no, "more than n adjacency lines");
    if (tokens.size() != static_cast<std::size_t>(d)) {
      throw ParseError(line_no, "expected " + std::to_string(d) + " neighbours, found " + std::to_string(tokens.size()));
    }
    auto& list = adj.emplace_back();
    for (auto t : tokens) list.push_back(parse_int(t, line_no));
    line_of.push_back(line_no);
  }

  if (!have_header) throw ParseError(line_no, "missing header line");
  if (adj.size() != static_cast<std::size_t>(n)) {
    throw ParseError(line_no, "expected " + std::to_string(n) + " adjacency lines, found " + std::to_string(adj.size()));
  }

  const auto violation = directed ? validate_digraph(n, d, adj) : validate_undirected(n, d, adj);
  if (violation) {
    // Degree mismatches are global; blame the header line. Everything else
    // belongs to the line of the offending vertex.
    const auto where = violation->vertex >= 0 && violation->kind != GraphViolation::Kind::DegreeMismatch
                           ? line_of[static_cast<std::size_t>(violation->vertex)]
                           : header_line;
    throw ParseError(where, violation->message());
  }
  if (directed) return RegularDigraph(n, d, std::move(adj));
  return UndirectedRegularGraph(n, d, std::move(adj));
}

AnyGraph parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

std::string format_graph(const AnyGraph& g) {
  std::ostringstream os;
  const auto& adj = std::visit([](const auto& x) -> const AdjacencyLists& { return x.adjacency(); }, g);
  os << (is_directed(g) ? "digraph " : "graph ") << vertex_count(g) << ' ' << degree(g) << '\n';
  for (const auto& list : adj) {
    for (std::size_t k = 0; k < list.size(); ++k) os << (k ? " " : "") << list[k];
    os << '\n';
  }
  return os.str();
}

AnyGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_graph(in);
}

void write_graph(const AnyGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << format_graph(g);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

RegularDigraph read_digraph(const std::filesystem::path& path) {
  auto g = read_graph(path);
  if (!is_directed(g)) throw FormatMismatch("'" + path.string() + "' holds an undirected graph");
  return std::get<RegularDigraph>(std::move(g));
}

UndirectedRegularGraph read_undirected(const std::filesystem::path& path) {
  auto g = read_graph(path);
  if (is_directed(g)) throw FormatMismatch("'" + path.string() + "' holds a directed graph");
  return std::get<UndirectedRegularGraph>(std::move(g));
}

std::string instance_hash(const AnyGraph& g) { return fnv1a_hex(format_graph(g)); }

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

int vertex_count(const AnyGraph& g) {
  return std::visit([](const auto& x) { return x.n(); }, g);
}

int degree(const AnyGraph& g) {
  return std::visit([](const auto& x) { return x.d(); }, g);
}

bool is_directed(const AnyGraph& g) { return std::holds_alternative<RegularDigraph>(g); }

RegularDigraph as_digraph(const AnyGraph& g) {
  if (const auto* dg = std::get_if<RegularDigraph>(&g)) return *dg;
  return double_undirected(std::get<UndirectedRegularGraph>(g));
}

}  // namespace cyclefactor
