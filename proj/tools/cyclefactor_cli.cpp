// cyclefactor: command-line front end.
//
//   cyclefactor gen complete_loops 4
//   cyclefactor gen random 30 5 --seed 7 --out g.txt
//   cyclefactor verify g.txt
//   cyclefactor tour c10.txt --seed 1
//   cyclefactor bench manifest.json --out results.ndjson
//
// Exit codes: 0 ok, 1 sampler/internal failure, 2 validation, 3 size, 4 I/O.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cyclefactor/errors.hpp"
#include "cyclefactor/harness.hpp"

namespace {

using cyclefactor::harness::json;
namespace h = cyclefactor::harness;

struct Globals {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string format = "json";
  std::string backend = "auto";
  int samples = 0;
  std::uint64_t mcmc_steps = 0;
  double tv_target = 0.05;
  std::string out;
};

h::RunOptions run_options(const Globals& g) {
  h::RunOptions opts;
  if (g.seed_opt->count() > 0) opts.seed = g.seed;
  opts.backend = cyclefactor::parse_backend(g.backend);
  opts.samples = g.samples;
  opts.mcmc_steps = g.mcmc_steps;
  opts.tv_target = g.tv_target;
  return opts;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw cyclefactor::IoError("cannot open '" + out + "' for writing");
  f << text;
  if (!f) throw cyclefactor::IoError("write to '" + out + "' failed");
}

void emit_doc(const json& doc, const Globals& g) {
  if (h::parse_format(g.format) == h::Format::Csv) {
    emit(h::to_csv(doc), g.out);
  } else {
    emit(doc.dump(2) + "\n", g.out);
  }
}

void print_check_table(const json& doc) {
  for (const auto& c : doc["checks"]) {
    std::cerr << (c["holds"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
              << (c["informational"].get<bool>() ? " (informational)" : "") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-factors, path-factors and tours of regular graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file with any of the global options");

  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "seed for every random operation");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--backend", g.backend, "exact, mcmc or auto")->check(CLI::IsMember({"exact", "mcmc", "auto"}));
  app.add_option("--samples", g.samples, "number of draws (k)")->check(CLI::NonNegativeNumber);
  app.add_option("--mcmc-steps", g.mcmc_steps, "chain steps per draw (0: 50 n^2 d)");
  app.add_option("--tv-target", g.tv_target, "target total variation, recorded in reports");
  app.add_option("--out", g.out, "output path (default stdout)");

  std::string kind;
  int gen_n = 0;
  std::optional<int> gen_d;
  bool no_loops = false;
  auto* gen = app.add_subcommand("gen", "write a graph file");
  gen->add_option("kind", kind,
                  "complete_loops, clique_union, cycle, complete_bipartite_like, random, random_undirected, "
                  "random_connected")
      ->required();
  gen->add_option("n", gen_n, "vertex count")->required();
  gen->add_option("d", gen_d, "degree");
  gen->add_flag("--no-loops", no_loops, "random digraphs without loops");

  std::string graph_path;
  auto add_graph_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("graph", graph_path, "graph file")->required();
    return sub;
  };
  auto* verify = add_graph_cmd("verify", "exact oracle audit of a small instance");
  auto* cyc = add_graph_cmd("cyclefactor", "min-of-k cycle-factor");
  auto* path = add_graph_cmd("pathfactor", "path-factor of an undirected graph");
  auto* tour = add_graph_cmd("tour", "tour of a connected undirected graph");
  auto* stats = add_graph_cmd("sample-stats", "sampler statistics against the exact oracle");

  h::EntropyCheckOptions eopts;
  std::string entropy_graph;
  auto* entropy = app.add_subcommand("entropy-check", "entropy lemma suites and reveal audit");
  entropy->add_option("graph", entropy_graph, "optional graph for the reveal audit (n <= 6)");
  entropy->add_option("--trials", eopts.trials, "random distributions per support size");
  entropy->add_option("--s-min", eopts.s_min);
  entropy->add_option("--s-max", eopts.s_max);

  std::string manifest;
  auto* bench = app.add_subcommand("bench", "run a JSON manifest, append NDJSON records");
  bench->add_option("manifest", manifest, "manifest file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : h::kExitValidation;
  }

  try {
    if (gen->parsed()) {
      std::optional<std::uint64_t> seed;
      if (g.seed_opt->count() > 0) seed = g.seed;
      const auto graph = h::generate(kind, gen_n, gen_d, seed, !no_loops);
      if (g.out.empty()) {
        std::cout << cyclefactor::format_graph(graph);
      } else {
        cyclefactor::write_graph(graph, g.out);
      }
      return h::kExitOk;
    }
    if (bench->parsed()) {
      const auto summary = h::cmd_bench(manifest, g.out, h::parse_format(g.format), std::cout);
      std::cerr << "bench: " << summary.jobs << " jobs, " << summary.written << " written, " << summary.skipped
                << " already present, " << summary.failed << " failed\n";
      return summary.exit_code;
    }
    if (entropy->parsed()) {
      std::optional<cyclefactor::AnyGraph> graph;
      if (!entropy_graph.empty()) graph = cyclefactor::read_graph(entropy_graph);
      const auto doc = h::cmd_entropy_check(graph, eopts, run_options(g));
      emit_doc(doc, g);
      return doc["ok"].get<bool>() ? h::kExitOk : h::kExitValidation;
    }

    const auto graph = cyclefactor::read_graph(graph_path);
    json doc;
    if (verify->parsed()) {
      doc = h::cmd_verify(graph);
      print_check_table(doc);
    } else if (cyc->parsed()) {
      doc = h::cmd_cyclefactor(graph, run_options(g));
    } else if (path->parsed()) {
      doc = h::cmd_pathfactor(graph, run_options(g));
    } else if (tour->parsed()) {
      doc = h::cmd_tour(graph, run_options(g));
    } else if (stats->parsed()) {
      doc = h::cmd_sample_stats(graph, run_options(g));
    }
    emit_doc(doc, g);
    return doc["ok"].get<bool>() ? h::kExitOk : h::kExitValidation;
  } catch (const cyclefactor::SizeLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n  (too large for exact work; sample-stats or cyclefactor --backend mcmc "
              << "still run)\n";
    return h::kExitSize;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::exit_code_for(e);
  }
}
