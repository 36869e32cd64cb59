#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclefactor/graph.hpp"
#include "cyclefactor/rng.hpp"

namespace cyclefactor {

enum class Backend { Exact, Mcmc, Auto };

std::string to_string(Backend backend);
Backend parse_backend(std::string_view name);

// The exact sampler keeps a table of 2^n completion counts.
inline constexpr int kMaxExactSamplerSide = 20;

struct SamplerConfig {
  Backend backend = Backend::Auto;
  std::uint64_t mcmc_steps = 0;  // 0: default_mcmc_steps(n, d)
  int num_samples = 0;           // 0: default_sample_count(n)
  std::uint64_t seed = 0;
  // Target total variation distance. Recorded in reports only; the chain
  // makes no mixing guarantee.
  double tv_target = 0.05;
};

// 50 n^2 d.
std::uint64_t default_mcmc_steps(int n, int d);
// max(10, ceil(4 log2 n)).
int default_sample_count(int n);
// Auto resolves to Exact for n <= kMaxExactSamplerSide, else Mcmc.
Backend resolve_backend(Backend backend, int n);

// Exactly uniform cycle-factor sampler. Rows are matched in vertex order; the
// table entry for a set S of already-used targets counts the ways to finish
// the matching, i.e. the permanent of the remaining minor. Each row then
// picks its target with probability proportional to the minor left behind.
class ExactSampler {
 public:
  // Throws SizeLimitExceeded for n > kMaxExactSamplerSide.
  explicit ExactSampler(const RegularDigraph& g);

  std::vector<Vertex> draw(Engine& rng) const;
  std::uint64_t factor_count() const noexcept { return completions_[0]; }

 private:
  std::uint64_t count(std::uint32_t used, int row);

  RegularDigraph graph_;
  std::vector<std::uint64_t> completions_;
};

// Matching of the bipartite graph H, perfect or missing exactly one vertex on
// each side (the holes).
struct MatchingState {
  static constexpr Vertex kUnmatched = -1;

  std::vector<Vertex> mate_of_u;  // V partner of each U vertex
  std::vector<Vertex> mate_of_v;  // U partner of each V vertex
  Vertex hole_u = kUnmatched;
  Vertex hole_v = kUnmatched;

  bool perfect() const noexcept { return hole_u == kUnmatched; }
  // Checks edge membership, mutual consistency and the hole bookkeeping.
  bool consistent_with(const BipartiteGraph& h) const;
};

// Maximum matching by Hopcroft-Karp with neighbours scanned in sorted order.
MatchingState maximum_matching(const BipartiteGraph& h);

// Lazy chain on perfect and near-perfect matchings. Each step stays put with
// probability 1/2; otherwise it proposes an edge (u, v) of H uniformly and
//   perfect state, (u, v) matched       -> remove it, holes become u and v
//   holes are exactly u and v           -> add (u, v), matching is perfect
//   u is the U-hole, v matched to w     -> swap (w, v) for (u, v), w is the new hole
//   v is the V-hole, u matched to z     -> swap (u, z) for (u, v), z is the new hole
// and rejects every other proposal. The moves are symmetric, so the chain is
// uniform on its state space and uniform on perfect matchings in particular.
class NearPerfectChain {
 public:
  NearPerfectChain(const BipartiteGraph& h, MatchingState start);

  void step(Engine& rng);
  const MatchingState& state() const noexcept { return state_; }

 private:
  std::vector<std::pair<Vertex, Vertex>> edges_;
  MatchingState state_;
};

// Holds the per-graph preprocessing of either backend and draws independent
// cycle-factors (as permutations) from per-draw seeds.
class Sampler {
 public:
  Sampler(const RegularDigraph& g, const SamplerConfig& cfg);

  std::vector<Vertex> draw(std::uint64_t seed) const;
  Backend backend() const noexcept { return backend_; }
  std::uint64_t mcmc_steps() const noexcept { return mcmc_steps_; }

 private:
  std::vector<Vertex> draw_mcmc(Engine& rng) const;

  RegularDigraph graph_;
  Backend backend_;
  std::uint64_t mcmc_steps_;
  std::optional<ExactSampler> exact_;
  BipartiteGraph bipartite_;
  MatchingState start_;
};

CycleFactor sample_exact(const RegularDigraph& g, std::uint64_t seed);
// Uses cfg.seed and cfg.mcmc_steps. Returns the first perfect state reached at
// or after mcmc_steps steps; throws StepBudgetExhausted if none appears within
// a further 100 * mcmc_steps steps.
CycleFactor sample_mcmc(const RegularDigraph& g, const SamplerConfig& cfg);

struct MinCycleResult {
  CycleFactor best;
  std::size_t best_index = 0;
  std::vector<int> cycle_counts;  // per draw, in draw order
  Backend backend = Backend::Exact;
  std::uint64_t mcmc_steps = 0;
};

// Draws k = cfg.num_samples (or the default) independent cycle-factors, draw
// i seeded with derive_seed(cfg.seed, i), and keeps the first one with the
// fewest cycles.
MinCycleResult min_cycle_factor(const RegularDigraph& g, const SamplerConfig& cfg);

}  // namespace cyclefactor
