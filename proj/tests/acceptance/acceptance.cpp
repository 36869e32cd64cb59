// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and sizes are fixed below.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "brute_force.hpp"
#include "cyclefactor/entropy.hpp"
#include "cyclefactor/factor_ops.hpp"
#include "cyclefactor/generators.hpp"
#include "cyclefactor/harness.hpp"
#include "cyclefactor/oracle.hpp"
#include "cyclefactor/sampler.hpp"

namespace {

using namespace cyclefactor;
namespace bf = cyclefactor::testing;

// --- pinned parameters -------------------------------------------------------
constexpr int kCorpusSize = 200;
constexpr int kCorpusMaxN = 8;
constexpr double kOracleTimeLimitS = 60.0;
constexpr int kHarmonicMaxN = 9;
constexpr int kSkewTrials = 100000;
constexpr int kSkewMinS = 2;
constexpr int kSkewMaxS = 64;
constexpr double kSkewTimeLimitS = 30.0;  // slack 1e-9 lives in check_skew_lemma
constexpr int kFidelityInstances = 10;
constexpr std::uint64_t kFidelityMaxFactors = 120;
constexpr int kFidelityDraws = 100000;
constexpr double kChiSquareAlpha = 1e-3;
constexpr double kTvLimit = 0.05;
constexpr int kCorollaryInstances = 50;
constexpr int kCorollaryMaxN = 16;
constexpr int kCorollaryRequired = 45;
constexpr int kTourInstances = 100;
constexpr int kTourMaxN = 60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

BigInt bf_factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// The shared 200-instance corpus: n uniform in [1, 8], d uniform in [1, n].
const std::vector<RegularDigraph>& corpus() {
  static const std::vector<RegularDigraph> graphs = [] {
    std::vector<RegularDigraph> out;
    auto rng = make_engine(0xacce97);
    for (int i = 0; i < kCorpusSize; ++i) {
      const int n = 1 + static_cast<int>(uniform_below(rng, kCorpusMaxN));
      const int d = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      out.push_back(gen_random_regular_digraph(n, d, rng()));
    }
    return out;
  }();
  return graphs;
}

Outcome oracle_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (const auto& g : corpus()) {
    const auto h = to_bipartite(g);
    const BigInt perm = permanent(h);
    const auto listed = enumerate_cycle_factors(g).size();
    if (perm != listed || perm != bf::brute_permanent(h)) ++mismatches;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << kCorpusSize << " instances, " << mismatches << " mismatches (Ryser vs enumeration vs S_n scan), " << secs
     << " s (limit " << kOracleTimeLimitS << ")";
  return {mismatches == 0 && secs < kOracleTimeLimitS, os.str()};
}

Outcome harmonic_numbers() {
  int wrong = 0;
  Rational h = 0;
  std::string last;
  for (int n = 1; n <= kHarmonicMaxN; ++n) {
    h += Rational(1, n);
    const auto e = exact_expected_cycles(complete_loops(n));
    if (e != h) ++wrong;
    last = e.str();
  }
  return {wrong == 0, "n = 1.." + std::to_string(kHarmonicMaxN) + " exact, H_9 = " + last + ", " +
                          std::to_string(wrong) + " mismatches"};
}

Outcome expected_cycle_bound() {
  int violations = 0;
  double worst_ratio = 0.0;
  for (const auto& g : corpus()) {
    const double e = to_double(exact_expected_cycles(g));
    const double bound = cycle_bound_log2(g.n(), g.d());
    if (!(e <= bound)) ++violations;
    worst_ratio = std::max(worst_ratio, e / bound);
  }
  std::ostringstream os;
  os << violations << " violations over " << kCorpusSize << " instances, max E/bound = " << worst_ratio;
  return {violations == 0, os.str()};
}

Outcome matching_count_bounds() {
  int violations = 0;
  for (const auto& g : corpus()) {
    const int n = g.n(), d = g.d();
    const BigInt c = permanent(to_bipartite(g));
    // Independent integer arithmetic next to the library's audit.
    const BigInt df = bf_factorial(d);
    const bool bm = boost::multiprecision::pow(c, static_cast<unsigned>(d)) <=
                    boost::multiprecision::pow(df, static_cast<unsigned>(n));
    const bool vdw = c * boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(n)) >=
                     bf_factorial(n) * boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(d == 0 ? 0 : n));
    const auto audit = audit_bounds(g);
    const bool lib = audit.find("bregman_minc")->holds && audit.find("van_der_waerden")->holds &&
                     audit.find("van_der_waerden_stirling")->holds;
    if (!bm || !vdw || !lib) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(kCorpusSize) +
                               " instances (exact integer comparison)"};
}

Outcome entropy_ledger() {
  int out_of_range = 0;
  double max_fraction = 0.0;
  for (const auto& g : corpus()) {
    const double loss = entropy_loss(g);
    const double ceiling = entropy_loss_ceiling(g.n(), g.d());
    if (!(loss >= 0.0 && loss <= ceiling)) ++out_of_range;
    if (ceiling > 0.0) max_fraction = std::max(max_fraction, loss / ceiling);
  }
  int nonzero = 0;
  std::vector<RegularDigraph> complete;
  for (int n = 1; n <= 9; ++n) complete.push_back(complete_loops(n));
  for (auto [n, d] : {std::pair{6, 3}, {8, 4}, {8, 2}, {9, 3}, {12, 4}}) {
    complete.push_back(std::get<RegularDigraph>(gen_family(Family::CompleteLoops, n, d)));
  }
  for (const auto& g : complete) nonzero += entropy_loss(g) == 0.0 ? 0 : 1;
  std::ostringstream os;
  os << out_of_range << " out of [0, (n/d) log2(e d)] over " << kCorpusSize << " instances (max loss/ceiling "
     << max_fraction << "); " << nonzero << " nonzero among " << complete.size() << " complete-with-loops graphs";
  return {out_of_range == 0 && nonzero == 0, os.str()};
}

Outcome skew_lemma() {
  const auto t0 = std::chrono::steady_clock::now();
  auto rng = make_engine(31);
  std::uint64_t violations = 0, checked = 0;
  double worst = INFINITY;
  for (int s = kSkewMinS; s <= kSkewMaxS; ++s) {
    for (int t = 0; t < kSkewTrials; ++t) {
      const auto c = check_skew_lemma(random_simplex_point(static_cast<std::size_t>(s), rng));
      violations += c.holds ? 0 : 1;
      worst = std::min(worst, c.bound - c.max_p);
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << checked << " distributions, " << violations << " violations, min margin " << worst << ", " << secs
     << " s (limit " << kSkewTimeLimitS << ")";
  return {violations == 0 && secs < kSkewTimeLimitS, os.str()};
}

Outcome reveal_uniformity() {
  int audited = 0, nonuniform = 0;
  for (int n : {3, 4}) {
    const auto r = reveal_audit(complete_loops(n));
    ++audited;
    nonuniform += r.uniform ? 0 : 1;
  }
  // Every d = 1 digraph on n <= 6 vertices is a permutation digraph.
  for (int n = 1; n <= 6; ++n) {
    for (const auto& perm : bf::all_permutations(n)) {
      const auto r = reveal_audit(permutation_digraph(perm));
      ++audited;
      bool ok = r.uniform;
      for (int i = 0; i < n; ++i) ok = ok && r.tally(i, 0, 1) == r.orders;
      nonuniform += ok ? 0 : 1;
    }
  }
  return {nonuniform == 0, std::to_string(audited) + " graphs audited, " + std::to_string(nonuniform) +
                               " with a non-uniform integer tally"};
}

// Ten instances with 2 <= |C| <= 120, always including the two complete
// graphs on 4 and 5 vertices.
std::vector<RegularDigraph> fidelity_instances() {
  std::vector<RegularDigraph> out{complete_loops(4), complete_loops(5)};
  auto rng = make_engine(808);
  while (static_cast<int>(out.size()) < kFidelityInstances) {
    const int n = 4 + static_cast<int>(uniform_below(rng, 4));
    const int d = 2 + static_cast<int>(uniform_below(rng, 2));
    auto g = gen_random_regular_digraph(n, d, rng());
    const BigInt c = permanent(to_bipartite(g));
    if (c >= 2 && c <= kFidelityMaxFactors) out.push_back(std::move(g));
  }
  return out;
}

Outcome sampler_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  int chi_fail = 0, tv_fail = 0;
  double worst_tv = 0.0, worst_p = 1.0;
  std::uint64_t seed = 0;
  for (const auto& g : fidelity_instances()) {
    std::map<std::vector<Vertex>, std::size_t> index;
    for (const auto& cf : enumerate_cycle_factors(g)) index.emplace(cf.sigma(), index.size());
    const auto k = index.size();
    const double expected = static_cast<double>(kFidelityDraws) / static_cast<double>(k);
    const boost::math::chi_squared_distribution<double> chi(static_cast<double>(k - 1));

    for (Backend backend : {Backend::Exact, Backend::Mcmc}) {
      SamplerConfig cfg;
      cfg.backend = backend;  // mcmc_steps 0: default budget
      const Sampler sampler(g, cfg);
      std::vector<std::uint64_t> counts(k, 0);
      ++seed;
      for (int t = 0; t < kFidelityDraws; ++t) {
        const auto it = index.find(sampler.draw(derive_seed(seed, static_cast<std::uint64_t>(t))));
        if (it == index.end()) return {false, "sampler returned a permutation outside the enumeration"};
        ++counts[it->second];
      }
      if (backend == Backend::Exact) {
        double stat = 0.0;
        for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
        const double p = boost::math::cdf(boost::math::complement(chi, stat));
        worst_p = std::min(worst_p, p);
        chi_fail += p < kChiSquareAlpha ? 1 : 0;
      } else {
        double tv = 0.0;
        for (auto c : counts) tv += std::abs(static_cast<double>(c) / kFidelityDraws - 1.0 / static_cast<double>(k));
        tv /= 2.0;
        worst_tv = std::max(worst_tv, tv);
        tv_fail += tv > kTvLimit ? 1 : 0;
      }
    }
  }
  std::ostringstream os;
  os << kFidelityInstances << " instances x " << kFidelityDraws << " draws: exact chi-square min p = " << worst_p
     << " (alpha " << kChiSquareAlpha << ", " << chi_fail << " rejections); mcmc max TV = " << worst_tv << " (limit "
     << kTvLimit << ", " << tv_fail << " over); " << seconds_since(t0) << " s";
  return {chi_fail == 0 && tv_fail == 0, os.str()};
}

Outcome min_of_k() {
  auto rng = make_engine(2222);
  int beats = 0, tried = 0;
  while (tried < kCorollaryInstances) {
    const int n = 2 + static_cast<int>(uniform_below(rng, kCorollaryMaxN - 1));
    const int d = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::min(n, 5))));
    const auto g = gen_random_regular_digraph(n, d, rng());
    if (permanent(to_bipartite(g)) > kMaxEnumeratedFactors) continue;
    ++tried;
    SamplerConfig cfg;
    cfg.seed = rng();
    cfg.num_samples = static_cast<int>(std::ceil(4.0 * std::log2(static_cast<double>(n))));
    const auto r = min_cycle_factor(g, cfg);
    if (Rational(static_cast<long long>(r.best.cycle_count())) <= exact_expected_cycles(g)) ++beats;
  }
  return {beats >= kCorollaryRequired, std::to_string(beats) + "/" + std::to_string(kCorollaryInstances) +
                                           " instances with |sigma| <= E|sigma| (need " +
                                           std::to_string(kCorollaryRequired) + ")"};
}

Outcome tours_and_paths() {
  const auto t0 = std::chrono::steady_clock::now();
  auto rng = make_engine(4444);
  int violations = 0;
  std::size_t max_c = 0;
  for (int i = 0; i < kTourInstances; ++i) {
    int n = 0, d = 0;
    do {
      n = 4 + static_cast<int>(uniform_below(rng, kTourMaxN - 3));
      d = 2 + static_cast<int>(uniform_below(rng, 5));
    } while (d >= n || (n * d) % 2 != 0);
    const auto g = gen_random_connected_regular_graph(n, d, rng());
    SamplerConfig cfg;
    cfg.seed = rng();
    const auto best = min_cycle_factor(double_undirected(g), cfg);
    const auto cycles = to_undirected_cycle_factor(best.best, g);
    const auto tour = to_tour(cycles, g);
    const auto c = cycles.size();
    max_c = std::max(max_c, c);
    if (!verify_tour(tour, g).ok() || tour.length > static_cast<std::size_t>(n) + 2 * (c - 1)) ++violations;
  }
  int short_paths = 0, families = 0;
  for (int d = 2; d <= 5; ++d) {
    for (int m = 1; m <= 4; ++m) {
      const int n = (d + 1) * m;
      const auto g = std::get<UndirectedRegularGraph>(gen_family(Family::CliqueUnion, n, d));
      SamplerConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(n * 31 + d);
      const auto best = min_cycle_factor(double_undirected(g), cfg);
      const auto pf = to_path_factor(to_undirected_cycle_factor(best.best, g), g);
      ++families;
      if (!verify_path_factor(pf, g).ok() || pf.paths.size() * static_cast<std::size_t>(d + 1) < static_cast<std::size_t>(n)) {
        ++short_paths;
      }
    }
  }
  std::ostringstream os;
  os << violations << " tour violations over " << kTourInstances << " connected graphs (max c = " << max_c << "); "
     << short_paths << "/" << families << " clique unions with fewer than n/(d+1) paths; " << seconds_since(t0)
     << " s";
  return {violations == 0 && short_paths == 0, os.str()};
}

Outcome reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("cyclefactor_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream m(dir / "manifest.json");
    m << R"({"instances": [
      {"family": "random", "n": 8, "d": 3},
      {"family": "random", "n": 7, "d": 2, "loops": false},
      {"family": "complete_loops", "n": 6},
      {"family": "random_connected", "n": 14, "d": 3},
      {"family": "clique_union", "n": 8, "d": 3},
      {"family": "random", "n": 24, "d": 4}
    ],
    "configs": [{"backend": "exact", "samples": 5}, {"backend": "mcmc", "samples": 3}, {"backend": "auto"}],
    "seeds": [1, 2, 3]})";
  }
  std::ostringstream sink;
  harness::cmd_bench(dir / "manifest.json", dir / "a.ndjson", harness::Format::Json, sink);
  ::setenv("CYCLEFACTOR_THREADS", "4", 1);
  harness::cmd_bench(dir / "manifest.json", dir / "b.ndjson", harness::Format::Json, sink);
  ::unsetenv("CYCLEFACTOR_THREADS");
  // Rerun into an existing file must leave it untouched.
  const auto before = fs::file_size(dir / "a.ndjson");
  const auto rerun = harness::cmd_bench(dir / "manifest.json", dir / "a.ndjson", harness::Format::Json, sink);

  auto lines = [](const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(harness::strip_timing(harness::json::parse(l)).dump());
    return out;
  };
  const auto a = lines(dir / "a.ndjson");
  const auto b = lines(dir / "b.ndjson");
  std::size_t differing = a.size() == b.size() ? 0 : std::max(a.size(), b.size());
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) differing += a[i] == b[i] ? 0 : 1;
  const bool untouched = fs::file_size(dir / "a.ndjson") == before && rerun.written == 0;
  fs::remove_all(dir);
  std::ostringstream os;
  os << a.size() << " records, " << differing << " differ after stripping wall_ms; rerun appended " << rerun.written;
  return {a.size() == 54 && differing == 0 && untouched, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle correctness", oracle_correctness},
      {"harmonic numbers", harmonic_numbers},
      {"expected cycle bound", expected_cycle_bound},
      {"matching count bounds", matching_count_bounds},
      {"entropy loss ledger", entropy_ledger},
      {"skew lemma suite", skew_lemma},
      {"reveal uniformity", reveal_uniformity},
      {"sampler fidelity", sampler_fidelity},
      {"min-of-k selection", min_of_k},
      {"tours and path counts", tours_and_paths},
      {"bench reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
