#include "cyclefactor/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/generators.hpp"

namespace cyclefactor::harness {

namespace {

// Oracle work in bench / sample-stats is attempted only up to this side.
constexpr int kOracleSide = 20;
// Empirical TV is only meaningful when the support is small next to the
// sample count; above this many factors it is left out.
constexpr std::uint64_t kMaxTvSupport = 10000;
constexpr int kDefaultStatSamples = 1000;

const UndirectedRegularGraph& need_undirected(const AnyGraph& g, const std::string& command) {
  if (is_directed(g)) {
    throw FormatMismatch(command + " needs an undirected graph (header \"graph\")");
  }
  return std::get<UndirectedRegularGraph>(g);
}

json base_doc(const std::string& command, const AnyGraph& g) {
  return json{{"command", command},
              {"instance_hash", instance_hash(g)},
              {"n", vertex_count(g)},
              {"d", degree(g)},
              {"directed", is_directed(g)}};
}

json sampler_fields(const MinCycleResult& r, const SamplerConfig& cfg) {
  return json{{"seed", cfg.seed},
              {"backend", to_string(r.backend)},
              {"mcmc_steps", r.mcmc_steps},
              {"samples", r.cycle_counts.size()},
              {"tv_target", cfg.tv_target},
              {"cycle_counts", r.cycle_counts},
              {"best_index", r.best_index}};
}

void self_check(bool ok, const std::string& what) {
  if (!ok) throw Error("internal self-check failed: " + what);
}

std::string csv_field(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return v.dump();
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw BadParameters("unknown format '" + name + "' (json or csv)");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
  if (dynamic_cast<const SizeLimitExceeded*>(&e)) return kExitSize;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const json::exception*>(&e)) return kExitValidation;
  return kExitFailure;
}

json rational_json(const Rational& q) {
  return json{{"fraction", q.str()}, {"decimal", to_decimal(q, 50)}};
}

json to_json(const BoundAudit& a) {
  json out = json::array();
  for (const auto& c : a.checks) {
    out.push_back({{"name", c.name},
                   {"relation", c.relation},
                   {"lhs", c.lhs},
                   {"rhs", c.rhs},
                   {"holds", c.holds},
                   {"exact", c.exact},
                   {"informational", c.informational}});
  }
  return out;
}

json to_json(const OracleReport& r) {
  json hist = json::object();
  for (const auto& [c, m] : r.cycle_histogram) hist[std::to_string(c)] = m;
  return json{{"n", r.n},
              {"d", r.d},
              {"matching_count", r.matching_count.str()},
              {"expected_cycles", rational_json(r.expected_cycles)},
              {"entropy_loss", r.entropy_loss},
              {"entropy_loss_ceiling", r.entropy_loss_ceiling},
              {"entropy_loss_in_range", r.entropy_loss_in_range()},
              {"bound_audit", to_json(r.bound_audit)},
              {"cycle_histogram", hist},
              {"all_hold", r.all_hold()}};
}

json to_json(const RevealReport& r) {
  return json{{"n", r.n},
              {"d", r.d},
              {"orders", r.orders},
              {"factors", r.factors},
              {"tally_target", r.d > 0 ? r.orders / static_cast<std::uint64_t>(r.d) : 0},
              {"uniform", r.uniform},
              {"loss_from_reveal", r.loss_from_reveal},
              {"loss_from_count", r.loss_from_count},
              {"loss_matches", r.loss_matches}};
}

json to_json(const PathFactor& pf) { return json{{"paths", pf.paths}}; }

json to_json(const Tour& t) { return json{{"walk", t.walk}, {"length", t.length}}; }

json to_json(const Verdict& v) {
  json out = json::array();
  for (const auto& x : v.violations) {
    out.push_back({{"kind", to_string(x.kind)}, {"position", x.position}, {"vertex", x.vertex}, {"other", x.other}});
  }
  return out;
}

json cycle_bound_json(int n, int d) {
  return json{{"log2", cycle_bound_log2(n, d)},
              {"ln", cycle_bound_ln(n, d)},
              {"formula_log2", "4 (n/d)(log2 d + 1)"},
              {"formula_ln", "4 (n/d)(ln d + 1)"}};
}

std::uint64_t require_seed(const RunOptions& opts, const std::string& what) {
  if (!opts.seed) throw BadParameters(what + " is random and needs --seed");
  return *opts.seed;
}

SamplerConfig sampler_config(const RunOptions& opts) {
  SamplerConfig cfg;
  cfg.backend = opts.backend;
  cfg.seed = opts.seed.value_or(0);
  cfg.mcmc_steps = opts.mcmc_steps;
  cfg.num_samples = opts.samples;
  cfg.tv_target = opts.tv_target;
  if (cfg.num_samples < 0) throw BadParameters("--samples must be positive");
  if (!(cfg.tv_target > 0.0 && cfg.tv_target < 1.0)) throw BadParameters("tv target must lie in (0, 1)");
  return cfg;
}

AnyGraph generate(const std::string& kind, int n, std::optional<int> d, std::optional<std::uint64_t> seed,
                  bool allow_loops) {
  const bool random = kind == "random" || kind == "random_undirected" || kind == "random_connected";
  if (random) {
    if (!d) throw BadParameters(kind + " needs a degree");
    if (!seed) throw BadParameters(kind + " generation needs --seed");
    if (kind == "random") return gen_random_regular_digraph(n, *d, *seed, allow_loops);
    if (kind == "random_undirected") return gen_random_regular_graph(n, *d, *seed);
    return gen_random_connected_regular_graph(n, *d, *seed);
  }
  const Family family = parse_family(kind);
  if (!d) {
    if (family != Family::CompleteLoops) throw BadParameters(kind + " needs a degree");
    d = n;
  }
  return gen_family(family, n, *d);
}

bool is_cycle_factor_of(const RegularDigraph& g, const std::vector<Vertex>& sigma) {
  if (static_cast<int>(sigma.size()) != g.n()) return false;
  std::vector<char> hit(sigma.size(), 0);
  for (int i = 0; i < g.n(); ++i) {
    const Vertex j = sigma[static_cast<std::size_t>(i)];
    if (j < 0 || j >= g.n() || hit[static_cast<std::size_t>(j)]) return false;
    hit[static_cast<std::size_t>(j)] = 1;
    if (!g.has_edge(i, j)) return false;
  }
  return true;
}

json cmd_verify(const AnyGraph& g) {
  const auto dg = as_digraph(g);
  const auto report = oracle_report(dg);

  json doc = base_doc("verify", g);
  doc["oracle"] = to_json(report);
  doc["bound"] = cycle_bound_json(dg.n(), dg.d());

  json checks = json::array();
  bool ok = true;
  auto add = [&](const std::string& name, bool holds, bool counts = true) {
    checks.push_back({{"name", name}, {"holds", holds}, {"informational", !counts}});
    if (counts) ok = ok && holds;
  };
  for (const auto& c : report.bound_audit.checks) add(c.name, c.holds, !c.informational);
  add("entropy_loss_range", report.entropy_loss_in_range());

  if (dg.n() <= kMaxRevealSide) {
    const auto reveal = reveal_audit(dg);
    doc["reveal"] = to_json(reveal);
    add("reveal_uniform", reveal.uniform);
    add("reveal_loss_matches", reveal.loss_matches);
  } else {
    doc["reveal"] = nullptr;
  }
  doc["checks"] = checks;
  doc["expected_cycles"] = report.expected_cycles.str();
  doc["entropy_loss"] = report.entropy_loss;
  doc["ok"] = ok;
  return doc;
}

json cmd_cyclefactor(const AnyGraph& g, const RunOptions& opts) {
  require_seed(opts, "cyclefactor");
  const auto dg = as_digraph(g);
  const auto cfg = sampler_config(opts);
  const auto r = min_cycle_factor(dg, cfg);
  self_check(is_cycle_factor_of(dg, r.best.sigma()), "sampled permutation is not a cycle-factor");
  self_check(count_cycles(r.best.sigma()) == static_cast<int>(r.best.cycle_count()), "cycle count mismatch");

  json doc = base_doc("cyclefactor", g);
  doc.update(sampler_fields(r, cfg));
  doc["sigma"] = r.best.sigma();
  doc["cycles"] = r.best.cycles();
  doc["cycle_count"] = r.best.cycle_count();
  doc["bound"] = cycle_bound_json(dg.n(), dg.d());
  doc["verified"] = true;
  doc["ok"] = true;
  return doc;
}

json cmd_pathfactor(const AnyGraph& g, const RunOptions& opts) {
  require_seed(opts, "pathfactor");
  const auto& ug = need_undirected(g, "pathfactor");
  const auto cfg = sampler_config(opts);
  const auto r = min_cycle_factor(double_undirected(ug), cfg);
  const auto cycles = to_undirected_cycle_factor(r.best, ug);
  const auto pf = to_path_factor(cycles, ug);
  const auto verdict = verify_path_factor(pf, ug);
  self_check(verdict.ok(), "path factor rejected by verify_path_factor");

  json doc = base_doc("pathfactor", g);
  doc.update(sampler_fields(r, cfg));
  doc["paths"] = pf.paths;
  doc["path_count"] = pf.paths.size();
  doc["cycle_count"] = cycles.size();
  doc["components"] = ug.component_count();
  doc["bound"] = cycle_bound_json(ug.n(), ug.d());
  doc["verified"] = true;
  doc["ok"] = true;
  return doc;
}

json cmd_tour(const AnyGraph& g, const RunOptions& opts) {
  require_seed(opts, "tour");
  const auto& ug = need_undirected(g, "tour");
  if (!ug.connected()) throw GraphDisconnected("tour needs a connected graph");
  const auto cfg = sampler_config(opts);
  const auto r = min_cycle_factor(double_undirected(ug), cfg);
  const auto cycles = to_undirected_cycle_factor(r.best, ug);
  const auto t = to_tour(cycles, ug);
  const auto verdict = verify_tour(t, ug);
  self_check(verdict.ok(), "tour rejected by verify_tour");
  const auto c = cycles.size();
  const auto n = static_cast<std::size_t>(ug.n());
  self_check(t.length <= n + 2 * (c - 1), "tour longer than n + 2(c - 1)");

  json doc = base_doc("tour", g);
  doc.update(sampler_fields(r, cfg));
  doc["walk"] = t.walk;
  doc["length"] = t.length;
  doc["cycle_count"] = c;
  doc["length_bound"] = n + 2 * (c - 1);
  doc["length_bound_loose"] = n + 2 * c;
  doc["bound"] = cycle_bound_json(ug.n(), ug.d());
  doc["verified"] = true;
  doc["ok"] = true;
  return doc;
}

json cmd_sample_stats(const AnyGraph& g, const RunOptions& opts) {
  const auto seed = require_seed(opts, "sample-stats");
  const auto dg = as_digraph(g);
  auto cfg = sampler_config(opts);
  const int k = opts.samples > 0 ? opts.samples : kDefaultStatSamples;
  const Sampler sampler(dg, cfg);

  std::map<int, std::uint64_t> histogram;
  std::map<std::vector<Vertex>, std::uint64_t> freq;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < k; ++i) {
    auto sigma = sampler.draw(derive_seed(seed, static_cast<std::uint64_t>(i)));
    self_check(is_cycle_factor_of(dg, sigma), "sampled permutation is not a cycle-factor");
    const int c = count_cycles(sigma);
    ++histogram[c];
    sum += c;
    sum_sq += static_cast<double>(c) * c;
    ++freq[std::move(sigma)];
  }
  const double mean = sum / k;
  const double var = k > 1 ? std::max(0.0, (sum_sq - k * mean * mean) / (k - 1)) : 0.0;

  json doc = base_doc("sample-stats", g);
  doc["seed"] = seed;
  doc["backend"] = to_string(sampler.backend());
  doc["mcmc_steps"] = sampler.mcmc_steps();
  doc["samples"] = k;
  doc["tv_target"] = cfg.tv_target;
  json hist = json::object();
  for (const auto& [c, m] : histogram) hist[std::to_string(c)] = m;
  doc["cycle_histogram"] = hist;
  doc["mean_cycles"] = mean;
  doc["stddev_cycles"] = std::sqrt(var);
  doc["distinct_factors"] = freq.size();
  doc["bound"] = cycle_bound_json(dg.n(), dg.d());

  doc["factor_count"] = nullptr;
  doc["exact_expected_cycles"] = nullptr;
  doc["z_score"] = nullptr;
  doc["tv_measured"] = nullptr;
  if (dg.n() <= kOracleSide) {
    const BigInt count = permanent(to_bipartite(dg));
    doc["factor_count"] = count.str();
    if (count <= kMaxEnumeratedFactors) {
      const auto expected = exact_expected_cycles(dg);
      doc["exact_expected_cycles"] = rational_json(expected);
      const double se = std::sqrt(var / k);
      if (se > 0.0) doc["z_score"] = (mean - to_double(expected)) / se;
      if (count <= kMaxTvSupport) {
        const double u = 1.0 / count.convert_to<double>();
        double tv = u * (count.convert_to<double>() - static_cast<double>(freq.size()));
        for (const auto& [_, m] : freq) tv += std::abs(static_cast<double>(m) / k - u);
        doc["tv_measured"] = tv / 2.0;
      }
    }
  }
  doc["ok"] = true;
  return doc;
}

json cmd_entropy_check(const std::optional<AnyGraph>& g, const EntropyCheckOptions& eopts, const RunOptions& opts) {
  const auto seed = require_seed(opts, "entropy-check");
  if (eopts.trials < 1 || eopts.s_min < 1 || eopts.s_max < eopts.s_min) {
    throw BadParameters("entropy-check needs trials >= 1 and 1 <= s-min <= s-max");
  }
  auto rng = make_engine(seed);

  std::uint64_t skew_violations = 0;
  double worst_margin = INFINITY;
  for (int s = eopts.s_min; s <= eopts.s_max; ++s) {
    for (int t = 0; t < eopts.trials; ++t) {
      const auto check = check_skew_lemma(random_simplex_point(static_cast<std::size_t>(s), rng));
      skew_violations += check.holds ? 0 : 1;
      worst_margin = std::min(worst_margin, check.bound - check.max_p);
    }
  }

  std::uint64_t chain_violations = 0;
  double max_gap = 0.0;
  for (int t = 0; t < eopts.trials; ++t) {
    const std::size_t rows = 1 + uniform_below(rng, 8), cols = 1 + uniform_below(rng, 8);
    const auto flat = random_simplex_point(rows * cols, rng);
    std::vector<std::vector<double>> joint(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      joint[r].assign(flat.probs().begin() + static_cast<std::ptrdiff_t>(r * cols),
                      flat.probs().begin() + static_cast<std::ptrdiff_t>((r + 1) * cols));
    }
    const auto check = chain_rule_check(joint);
    chain_violations += check.holds ? 0 : 1;
    max_gap = std::max(max_gap, check.gap);
  }

  json doc{{"command", "entropy-check"},
           {"seed", seed},
           {"trials", eopts.trials},
           {"s_min", eopts.s_min},
           {"s_max", eopts.s_max},
           {"skew_violations", skew_violations},
           {"skew_worst_margin", worst_margin},
           {"chain_rule_violations", chain_violations},
           {"chain_rule_max_gap", max_gap}};
  bool ok = skew_violations == 0 && chain_violations == 0;
  if (g) {
    const auto reveal = reveal_audit(as_digraph(*g));
    doc["instance_hash"] = instance_hash(*g);
    doc["reveal"] = to_json(reveal);
    ok = ok && reveal.ok();
  }
  doc["ok"] = ok;
  return doc;
}

std::string to_csv(const json& doc) {
  std::string header, row;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_structured()) continue;
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    row += csv_field(value);
  }
  return header + "\n" + row + "\n";
}

// --- bench -------------------------------------------------------------------

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& what) {
  if (!obj.is_object()) throw BadParameters(what + " entries must be JSON objects");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw BadParameters("unknown key '" + key + "' in " + what);
  }
}

json normalise_instance(const json& in) {
  reject_unknown_keys(in, {"family", "n", "d", "seed", "loops", "path"}, "instance");
  if (in.contains("path")) {
    if (in.size() != 1) throw BadParameters("a path instance takes no other keys");
    return json{{"path", in.at("path").get<std::string>()}};
  }
  if (!in.contains("family") || !in.contains("n")) throw BadParameters("instance needs \"family\" and \"n\" (or \"path\")");
  json out{{"family", in.at("family").get<std::string>()}, {"n", in.at("n").get<int>()}};
  if (in.contains("d")) out["d"] = in.at("d").get<int>();
  if (in.contains("seed")) out["seed"] = in.at("seed").get<std::uint64_t>();
  if (out["family"] == "random") out["loops"] = in.value("loops", true);
  else if (in.contains("loops")) throw BadParameters("\"loops\" only applies to the random family");
  return out;
}

json normalise_config(const json& in) {
  reject_unknown_keys(in, {"backend", "samples", "mcmc_steps", "tv_target"}, "config");
  json out{{"backend", in.value("backend", std::string("auto"))},
           {"samples", in.value("samples", 0)},
           {"mcmc_steps", in.value("mcmc_steps", std::uint64_t{0})},
           {"tv_target", in.value("tv_target", 0.05)}};
  parse_backend(out["backend"].get<std::string>());
  if (out["samples"].get<int>() < 0) throw BadParameters("config samples must be >= 0");
  return out;
}

AnyGraph build_instance(const json& inst, std::uint64_t job_seed, const std::filesystem::path& base_dir) {
  if (inst.contains("path")) {
    std::filesystem::path p = inst["path"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return read_graph(p);
  }
  const std::optional<int> d = inst.contains("d") ? std::optional<int>(inst["d"].get<int>()) : std::nullopt;
  const auto seed = inst.contains("seed") ? inst["seed"].get<std::uint64_t>() : job_seed;
  return generate(inst["family"].get<std::string>(), inst["n"].get<int>(), d, seed, inst.value("loops", true));
}

std::string bench_key(const json& instance, const json& config, std::uint64_t seed) {
  return json{{"instance", instance}, {"config", config}, {"seed", seed}}.dump();
}

}  // namespace

std::string BenchJob::key() const { return bench_key(instance, config, seed); }

json load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::vector<BenchJob> expand_manifest(const json& manifest, const std::filesystem::path&) {
  reject_unknown_keys(manifest, {"instances", "configs", "seeds"}, "manifest");
  const json instances = manifest.value("instances", json::array());
  const json configs = manifest.value("configs", json::array({json::object()}));
  const json seeds = manifest.value("seeds", json::array());
  if (!instances.is_array() || !configs.is_array() || !seeds.is_array()) {
    throw BadParameters("manifest instances, configs and seeds must be arrays");
  }
  if (!instances.empty() && seeds.empty()) throw BadParameters("manifest needs a non-empty \"seeds\" list");

  std::vector<BenchJob> jobs;
  for (const auto& i : instances) {
    const auto inst = normalise_instance(i);
    for (const auto& c : configs) {
      const auto cfg = normalise_config(c);
      for (const auto& s : seeds) jobs.push_back({inst, cfg, s.get<std::uint64_t>()});
    }
  }
  return jobs;
}

json run_bench_job(const BenchJob& job, const std::filesystem::path& base_dir) {
  const auto start = std::chrono::steady_clock::now();
  json record{{"instance", job.instance}, {"config", job.config}, {"seed", job.seed}, {"version", kToolVersion}};
  try {
    const auto g = build_instance(job.instance, job.seed, base_dir);
    const auto dg = as_digraph(g);
    SamplerConfig cfg;
    cfg.backend = parse_backend(job.config["backend"].get<std::string>());
    cfg.num_samples = job.config["samples"].get<int>();
    cfg.mcmc_steps = job.config["mcmc_steps"].get<std::uint64_t>();
    cfg.tv_target = job.config["tv_target"].get<double>();
    cfg.seed = job.seed;

    json out{{"instance_hash", instance_hash(g)}, {"n", dg.n()}, {"d", dg.d()}, {"directed", is_directed(g)}};
    const auto r = min_cycle_factor(dg, cfg);
    self_check(is_cycle_factor_of(dg, r.best.sigma()), "sampled permutation is not a cycle-factor");
    out.update(sampler_fields(r, cfg));
    out.erase("seed");
    out.erase("tv_target");
    out["min_cycles"] = r.best.cycle_count();
    out["bound"] = cycle_bound_json(dg.n(), dg.d());
    bool ok = true;

    out["path_count"] = nullptr;
    out["tour_length"] = nullptr;
    out["tour_bound"] = nullptr;
    if (!is_directed(g)) {
      const auto& ug = std::get<UndirectedRegularGraph>(g);
      const auto cycles = to_undirected_cycle_factor(r.best, ug);
      const auto pf = to_path_factor(cycles, ug);
      const bool pf_ok = verify_path_factor(pf, ug).ok();
      out["path_count"] = pf.paths.size();
      ok = ok && pf_ok;
      if (ug.connected()) {
        const auto t = to_tour(cycles, ug);
        const auto bound = static_cast<std::size_t>(ug.n()) + 2 * (cycles.size() - 1);
        out["tour_length"] = t.length;
        out["tour_bound"] = bound;
        ok = ok && verify_tour(t, ug).ok() && t.length <= bound;
      }
    }

    out["oracle"] = nullptr;
    if (dg.n() <= kOracleSide) {
      try {
        const auto report = oracle_report(dg);
        out["oracle"] = to_json(report);
        ok = ok && report.all_hold();
      } catch (const SizeLimitExceeded&) {
        out["oracle"] = json{{"skipped", "too many cycle-factors to enumerate"},
                             {"entropy_loss", entropy_loss(dg)},
                             {"entropy_loss_ceiling", entropy_loss_ceiling(dg.n(), dg.d())}};
      }
    }
    record["outputs"] = out;
    record["ok"] = ok;
  } catch (const std::exception& e) {
    record["error"] = json{{"message", e.what()}, {"exit_code", exit_code_for(e)}};
    record["ok"] = false;
  }
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  record["wall_ms"] = std::round(elapsed.count() * 1000.0) / 1000.0;
  return record;
}

json strip_timing(json record) {
  record.erase("wall_ms");
  return record;
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CYCLEFACTOR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

std::string bench_csv_header() {
  return "key,instance_hash,family,n,d,seed,backend,samples,mcmc_steps,min_cycles,path_count,tour_length,"
         "expected_cycles,ok,wall_ms";
}

std::string bench_csv_row(const json& record) {
  const auto& inst = record["instance"];
  const json empty = json::object();
  const auto& out = record.contains("outputs") ? record["outputs"] : empty;
  auto get = [](const json& obj, const char* k) { return obj.contains(k) ? obj[k] : json(nullptr); };
  json expected = nullptr;
  if (out.contains("oracle") && out["oracle"].is_object() && out["oracle"].contains("expected_cycles")) {
    expected = out["oracle"]["expected_cycles"]["fraction"];
  }
  const std::vector<json> fields{
      fnv1a_hex(bench_key(record["instance"], record["config"], record["seed"].get<std::uint64_t>())),
      get(out, "instance_hash"),
      inst.contains("family") ? inst["family"] : inst["path"],
      get(out, "n"),
      get(out, "d"),
      record["seed"],
      record["config"]["backend"],
      get(out, "samples"),
      get(out, "mcmc_steps"),
      get(out, "min_cycles"),
      get(out, "path_count"),
      get(out, "tour_length"),
      expected,
      record["ok"],
      record["wall_ms"]};
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += csv_field(fields[i]);
  }
  return row;
}

BenchSummary cmd_bench(const std::filesystem::path& manifest_path, const std::filesystem::path& results,
                       Format format, std::ostream& out_stream) {
  const auto manifest = load_manifest(manifest_path);
  const auto base_dir = manifest_path.parent_path();
  const auto jobs = expand_manifest(manifest, base_dir);

  BenchSummary summary;
  summary.jobs = jobs.size();

  // Keys already on disk; CSV rows start with the key hash.
  std::set<std::string> done;
  bool need_header = format == Format::Csv;
  if (!results.empty() && std::filesystem::exists(results)) {
    std::ifstream in(results);
    if (!in) throw IoError("cannot read results file '" + results.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (format == Format::Csv) {
        need_header = false;
        done.insert(line.substr(0, line.find(',')));
      } else {
        try {
          const auto rec = json::parse(line);
          done.insert(bench_key(rec.at("instance"), rec.at("config"), rec.at("seed").get<std::uint64_t>()));
        } catch (const json::exception& e) {
          throw ValidationError("results file '" + results.string() + "' holds a malformed record: " + e.what());
        }
      }
    }
  }

  std::vector<const BenchJob*> pending;
  for (const auto& job : jobs) {
    const auto k = job.key();
    const bool seen = format == Format::Csv ? done.count(fnv1a_hex(k)) > 0 : done.count(k) > 0;
    if (seen) {
      ++summary.skipped;
    } else {
      pending.push_back(&job);
    }
  }

  std::ofstream file;
  if (!results.empty()) {
    file.open(results, std::ios::app);
    if (!file) throw IoError("cannot open results file '" + results.string() + "'");
  }
  std::ostream& sink = results.empty() ? out_stream : file;
  if (need_header && !pending.empty()) sink << bench_csv_header() << '\n';

  // Workers fill slots; whoever completes the next slot in order flushes the
  // ready prefix, so records land in manifest order.
  std::vector<std::optional<json>> slots(pending.size());
  std::atomic<std::size_t> next{0};
  std::size_t flushed = 0;
  std::mutex sink_mutex;
  auto flush_ready = [&] {
    while (flushed < slots.size() && slots[flushed]) {
      const auto& rec = *slots[flushed];
      if (format == Format::Csv) {
        sink << bench_csv_row(rec) << '\n';
      } else {
        sink << rec.dump() << '\n';
      }
      if (!rec["ok"].get<bool>()) {
        ++summary.failed;
        if (summary.exit_code == kExitOk) {
          summary.exit_code = rec.contains("error") ? rec["error"]["exit_code"].get<int>() : kExitValidation;
        }
      }
      ++summary.written;
      slots[flushed].reset();
      ++flushed;
    }
    sink.flush();
  };
  auto worker = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      auto rec = run_bench_job(*pending[i], base_dir);
      const std::lock_guard<std::mutex> lock(sink_mutex);
      slots[i] = std::move(rec);
      flush_ready();
    }
  };

  const unsigned workers = worker_count(pending.size());
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!sink) throw IoError("writing bench results failed");
  return summary;
}

}  // namespace cyclefactor::harness
