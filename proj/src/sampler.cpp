#include "cyclefactor/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

namespace {
constexpr std::uint64_t kUnknown = std::numeric_limits<std::uint64_t>::max();
}

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::Exact: return "exact";
    case Backend::Mcmc: return "mcmc";
    case Backend::Auto: return "auto";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "exact") return Backend::Exact;
  if (name == "mcmc") return Backend::Mcmc;
  if (name == "auto") return Backend::Auto;
  throw BadParameters("unknown backend '" + std::string(name) + "'");
}

std::uint64_t default_mcmc_steps(int n, int d) {
  return 50ULL * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(d);
}

int default_sample_count(int n) {
  const int scaled = n <= 1 ? 0 : static_cast<int>(std::ceil(4.0 * std::log2(static_cast<double>(n))));
  return std::max(10, scaled);
}

Backend resolve_backend(Backend backend, int n) {
  if (backend != Backend::Auto) return backend;
  return n <= kMaxExactSamplerSide ? Backend::Exact : Backend::Mcmc;
}

// ---------------------------------------------------------------------------
// Exact sampler

ExactSampler::ExactSampler(const RegularDigraph& g) : graph_(g) {
  if (g.n() > kMaxExactSamplerSide) {
    throw SizeLimitExceeded("exact sampler supports n <= " + std::to_string(kMaxExactSamplerSide) + ", got " +
                            std::to_string(g.n()));
  }
  completions_.assign(std::size_t{1} << g.n(), kUnknown);
  count(0, 0);
  if (completions_[0] == 0) throw NoPerfectMatchingFound("digraph has no cycle-factor");
}

std::uint64_t ExactSampler::count(std::uint32_t used, int row) {
  if (row == graph_.n()) return 1;
  if (completions_[used] != kUnknown) return completions_[used];
  std::uint64_t total = 0;
  for (Vertex v : graph_.out(row)) {
    const auto bit = std::uint32_t{1} << v;
    if ((used & bit) == 0) total += count(used | bit, row + 1);
  }
  completions_[used] = total;
  return total;
}

std::vector<Vertex> ExactSampler::draw(Engine& rng) const {
  const int n = graph_.n();
  std::vector<Vertex> sigma(static_cast<std::size_t>(n));
  std::uint32_t used = 0;
  for (int row = 0; row < n; ++row) {
    std::uint64_t x = uniform_below(rng, completions_[used]);
    for (Vertex v : graph_.out(row)) {
      const auto bit = std::uint32_t{1} << v;
      if (used & bit) continue;
      const std::uint64_t c = row + 1 == n ? 1 : completions_[used | bit];
      if (x < c) {
        sigma[static_cast<std::size_t>(row)] = v;
        used |= bit;
        break;
      }
      x -= c;
    }
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Matchings

bool MatchingState::consistent_with(const BipartiteGraph& h) const {
  const auto n = static_cast<std::size_t>(h.n);
  if (mate_of_u.size() != n || mate_of_v.size() != n) return false;
  int unmatched_u = 0;
  int unmatched_v = 0;
  for (Vertex u = 0; u < h.n; ++u) {
    const Vertex v = mate_of_u[static_cast<std::size_t>(u)];
    if (v == kUnmatched) {
      ++unmatched_u;
      if (u != hole_u) return false;
      continue;
    }
    if (!h.has_edge(u, v) || mate_of_v[static_cast<std::size_t>(v)] != u) return false;
  }
  for (Vertex v = 0; v < h.n; ++v) {
    const Vertex u = mate_of_v[static_cast<std::size_t>(v)];
    if (u == kUnmatched) {
      ++unmatched_v;
      if (v != hole_v) return false;
      continue;
    }
    if (u < 0 || u >= h.n || mate_of_u[static_cast<std::size_t>(u)] != v) return false;
  }
  if (unmatched_u != unmatched_v || unmatched_u > 1) return false;
  return (unmatched_u == 0) == (hole_u == kUnmatched && hole_v == kUnmatched);
}

MatchingState maximum_matching(const BipartiteGraph& h) {
  const int n = h.n;
  constexpr int kInf = std::numeric_limits<int>::max();
  MatchingState m;
  m.mate_of_u.assign(static_cast<std::size_t>(n), MatchingState::kUnmatched);
  m.mate_of_v.assign(static_cast<std::size_t>(n), MatchingState::kUnmatched);
  std::vector<int> layer(static_cast<std::size_t>(n));

  auto bfs = [&] {
    std::queue<Vertex> queue;
    bool found_free = false;
    for (Vertex u = 0; u < n; ++u) {
      if (m.mate_of_u[static_cast<std::size_t>(u)] == MatchingState::kUnmatched) {
        layer[static_cast<std::size_t>(u)] = 0;
        queue.push(u);
      } else {
        layer[static_cast<std::size_t>(u)] = kInf;
      }
    }
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop();
      for (Vertex v : h.u_adj[static_cast<std::size_t>(u)]) {
        const Vertex w = m.mate_of_v[static_cast<std::size_t>(v)];
        if (w == MatchingState::kUnmatched) {
          found_free = true;
        } else if (layer[static_cast<std::size_t>(w)] == kInf) {
          layer[static_cast<std::size_t>(w)] = layer[static_cast<std::size_t>(u)] + 1;
          queue.push(w);
        }
      }
    }
    return found_free;
  };

  auto dfs = [&](auto&& self, Vertex u) -> bool {
    for (Vertex v : h.u_adj[static_cast<std::size_t>(u)]) {
      const Vertex w = m.mate_of_v[static_cast<std::size_t>(v)];
      if (w == MatchingState::kUnmatched ||
          (layer[static_cast<std::size_t>(w)] == layer[static_cast<std::size_t>(u)] + 1 && self(self, w))) {
        m.mate_of_u[static_cast<std::size_t>(u)] = v;
        m.mate_of_v[static_cast<std::size_t>(v)] = u;
        return true;
      }
    }
    layer[static_cast<std::size_t>(u)] = kInf;
    return false;
  };

  while (bfs()) {
    for (Vertex u = 0; u < n; ++u) {
      if (m.mate_of_u[static_cast<std::size_t>(u)] == MatchingState::kUnmatched) dfs(dfs, u);
    }
  }

  // Record holes when the matching misses exactly one vertex per side.
  int missing = 0;
  for (Vertex u = 0; u < n; ++u) {
    if (m.mate_of_u[static_cast<std::size_t>(u)] == MatchingState::kUnmatched) {
      ++missing;
      m.hole_u = u;
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (m.mate_of_v[static_cast<std::size_t>(v)] == MatchingState::kUnmatched) m.hole_v = v;
  }
  if (missing > 1) m.hole_u = m.hole_v = MatchingState::kUnmatched;
  return m;
}

// ---------------------------------------------------------------------------
// Near-perfect matching chain

NearPerfectChain::NearPerfectChain(const BipartiteGraph& h, MatchingState start) : state_(std::move(start)) {
  for (Vertex u = 0; u < h.n; ++u) {
    for (Vertex v : h.u_adj[static_cast<std::size_t>(u)]) edges_.emplace_back(u, v);
  }
  if (!state_.consistent_with(h)) throw NoPerfectMatchingFound("chain start is not a perfect or near-perfect matching");
}

void NearPerfectChain::step(Engine& rng) {
  const std::uint64_t r = rng();
  if ((r & 1) == 0) return;
  // The remaining 63 bits pick the proposal; the modulo bias is below 2^-40
  // for any graph this library can hold.
  const auto [u, v] = edges_[static_cast<std::size_t>((r >> 1) % edges_.size())];
  auto& s = state_;
  constexpr Vertex kFree = MatchingState::kUnmatched;
  const auto ui = static_cast<std::size_t>(u);
  const auto vi = static_cast<std::size_t>(v);

  if (s.perfect()) {
    if (s.mate_of_u[ui] == v) {
      s.mate_of_u[ui] = kFree;
      s.mate_of_v[vi] = kFree;
      s.hole_u = u;
      s.hole_v = v;
    }
    return;
  }
  if (u == s.hole_u && v == s.hole_v) {
    s.mate_of_u[ui] = v;
    s.mate_of_v[vi] = u;
    s.hole_u = s.hole_v = kFree;
  } else if (u == s.hole_u) {
    const Vertex w = s.mate_of_v[vi];
    s.mate_of_u[static_cast<std::size_t>(w)] = kFree;
    s.mate_of_u[ui] = v;
    s.mate_of_v[vi] = u;
    s.hole_u = w;
  } else if (v == s.hole_v) {
    const Vertex z = s.mate_of_u[ui];
    s.mate_of_v[static_cast<std::size_t>(z)] = kFree;
    s.mate_of_v[vi] = u;
    s.mate_of_u[ui] = v;
    s.hole_v = z;
  }
}

// ---------------------------------------------------------------------------
// Front ends

Sampler::Sampler(const RegularDigraph& g, const SamplerConfig& cfg)
    : graph_(g),
      backend_(resolve_backend(cfg.backend, g.n())),
      mcmc_steps_(cfg.mcmc_steps != 0 ? cfg.mcmc_steps : default_mcmc_steps(g.n(), g.d())),
      bipartite_(to_bipartite(g)) {
  if (backend_ == Backend::Exact) {
    exact_.emplace(g);
  } else {
    start_ = maximum_matching(bipartite_);
    const auto& mates = start_.mate_of_u;
    if (std::find(mates.begin(), mates.end(), MatchingState::kUnmatched) != mates.end()) {
      throw NoPerfectMatchingFound("maximum matching of the bipartite double cover is not perfect");
    }
  }
}

std::vector<Vertex> Sampler::draw(std::uint64_t seed) const {
  auto rng = make_engine(seed);
  if (backend_ == Backend::Exact) return exact_->draw(rng);
  return draw_mcmc(rng);
}

std::vector<Vertex> Sampler::draw_mcmc(Engine& rng) const {
  NearPerfectChain chain(bipartite_, start_);
  for (std::uint64_t t = 0; t < mcmc_steps_; ++t) chain.step(rng);
  const std::uint64_t extra = 100 * mcmc_steps_;
  for (std::uint64_t t = 0; !chain.state().perfect(); ++t) {
    if (t >= extra) {
      throw StepBudgetExhausted("no perfect matching within " + std::to_string(extra) + " steps after the budget");
    }
    chain.step(rng);
  }
  return chain.state().mate_of_u;
}

CycleFactor sample_exact(const RegularDigraph& g, std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.backend = Backend::Exact;
  return CycleFactor(g, Sampler(g, cfg).draw(seed));
}

CycleFactor sample_mcmc(const RegularDigraph& g, const SamplerConfig& cfg) {
  SamplerConfig c = cfg;
  c.backend = Backend::Mcmc;
  return CycleFactor(g, Sampler(g, c).draw(cfg.seed));
}

MinCycleResult min_cycle_factor(const RegularDigraph& g, const SamplerConfig& cfg) {
  const Sampler sampler(g, cfg);
  const int k = cfg.num_samples > 0 ? cfg.num_samples : default_sample_count(g.n());

  std::vector<Vertex> best;
  std::size_t best_index = 0;
  std::vector<int> counts;
  counts.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto sigma = sampler.draw(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const int c = count_cycles(sigma);
    if (counts.empty() || c < counts[best_index]) {
      best_index = static_cast<std::size_t>(i);
      best = std::move(sigma);
    }
    counts.push_back(c);
  }
  return MinCycleResult{CycleFactor(g, std::move(best)), best_index, std::move(counts), sampler.backend(),
                        sampler.backend() == Backend::Mcmc ? sampler.mcmc_steps() : 0};
}

}  // namespace cyclefactor
