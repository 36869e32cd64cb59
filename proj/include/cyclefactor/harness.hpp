#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cyclefactor/entropy.hpp"
#include "cyclefactor/factor_ops.hpp"
#include "cyclefactor/graph_io.hpp"
#include "cyclefactor/oracle.hpp"
#include "cyclefactor/sampler.hpp"

namespace cyclefactor::harness {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

enum class Format { Json, Csv };
Format parse_format(const std::string& name);

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // sampler trouble or an internal self-check
  kExitValidation = 2,
  kExitSize = 3,
  kExitIo = 4,
};

// Maps a thrown exception (rethrown inside) to an exit code.
int exit_code_for(const std::exception& e);

// Plain serialisation helpers. Big integers travel as decimal strings.
json to_json(const OracleReport& r);
json to_json(const BoundAudit& a);
json to_json(const RevealReport& r);
json to_json(const PathFactor& pf);
json to_json(const Tour& t);
json to_json(const Verdict& v);
json rational_json(const Rational& q);

// Both variants of the expected-cycle bound, labelled.
json cycle_bound_json(int n, int d);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  Backend backend = Backend::Auto;
  int samples = 0;               // 0: command default
  std::uint64_t mcmc_steps = 0;  // 0: default_mcmc_steps
  double tv_target = 0.05;
};

// Throws BadParameters when a random operation runs without a seed.
std::uint64_t require_seed(const RunOptions& opts, const std::string& what);
SamplerConfig sampler_config(const RunOptions& opts);

// Generator front end. kind is a family name, "random" (directed) or
// "random_undirected". d defaults to n for complete_loops.
AnyGraph generate(const std::string& kind, int n, std::optional<int> d, std::optional<std::uint64_t> seed,
                  bool allow_loops = true);

// Independent re-check of a permutation against g (bijection + arcs).
bool is_cycle_factor_of(const RegularDigraph& g, const std::vector<Vertex>& sigma);

// Each command returns its JSON document; "ok" says whether every check the
// command ran came out clean.
json cmd_verify(const AnyGraph& g);
json cmd_cyclefactor(const AnyGraph& g, const RunOptions& opts);
json cmd_pathfactor(const AnyGraph& g, const RunOptions& opts);
json cmd_tour(const AnyGraph& g, const RunOptions& opts);
json cmd_sample_stats(const AnyGraph& g, const RunOptions& opts);

struct EntropyCheckOptions {
  int trials = 10000;  // random distributions per support size
  int s_min = 2;
  int s_max = 64;
};
json cmd_entropy_check(const std::optional<AnyGraph>& g, const EntropyCheckOptions& eopts, const RunOptions& opts);

// Flattens the scalar top-level fields of a command document into a header
// line and a value line.
std::string to_csv(const json& doc);

// --- bench -----------------------------------------------------------------

struct BenchJob {
  json instance;  // normalised descriptor from the manifest
  json config;    // normalised sampler config
  std::uint64_t seed = 0;

  std::string key() const;
};

// Expands {"instances": [...], "configs": [...], "seeds": [...]} into jobs in
// manifest order (instance-major, then config, then seed). Missing configs
// default to one auto config; a non-empty instance list needs seeds.
std::vector<BenchJob> expand_manifest(const json& manifest, const std::filesystem::path& base_dir);
json load_manifest(const std::filesystem::path& path);

// One record; never throws for per-instance failures (they land in "error").
json run_bench_job(const BenchJob& job, const std::filesystem::path& base_dir);

// Drops the wall-clock field so records can be compared byte for byte.
json strip_timing(json record);

struct BenchSummary {
  std::size_t jobs = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;  // already present in the results file
  std::size_t failed = 0;
  int exit_code = kExitOk;
};

// Worker count: CYCLEFACTOR_THREADS if set and positive, else hardware
// concurrency, never more than the job count.
unsigned worker_count(std::size_t jobs);

// Runs every job not already recorded in `results` and appends one NDJSON
// (or CSV) line per record in manifest order. With an empty results path
// the lines go to `out_stream`.
BenchSummary cmd_bench(const std::filesystem::path& manifest_path, const std::filesystem::path& results,
                       Format format, std::ostream& out_stream);

std::string bench_csv_header();
std::string bench_csv_row(const json& record);

}  // namespace cyclefactor::harness
