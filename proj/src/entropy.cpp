#include "cyclefactor/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/oracle.hpp"

namespace cyclefactor {

namespace {

constexpr double kLemmaSlack = 1e-9;
constexpr double kChainRuleTolerance = 1e-9;
constexpr double kLossTolerance = 1e-6;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidDistribution("distribution over an empty set");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidDistribution("probabilities must be finite and non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidDistribution("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

Distribution Distribution::uniform(std::size_t s) {
  return Distribution(std::vector<double>(s, 1.0 / static_cast<double>(s)));
}

Distribution Distribution::point_mass(std::size_t s, std::size_t at) {
  std::vector<double> p(s, 0.0);
  p.at(at) = 1.0;
  return Distribution(std::move(p));
}

double Distribution::max_probability() const { return *std::max_element(probs_.begin(), probs_.end()); }

double shannon_entropy(const Distribution& dist) {
  double h = 0.0;
  for (double p : dist.probs()) h -= plogp(p);
  return h;
}

double entropy_of_counts(std::span<const std::uint64_t> counts) {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) h -= plogp(static_cast<double>(c) / static_cast<double>(total));
  return h;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("binary entropy needs p in [0, 1]");
  return -plogp(p) - plogp(1.0 - p);
}

SkewCheck check_skew_lemma(const Distribution& dist) {
  SkewCheck check;
  check.s = dist.size();
  check.entropy = shannon_entropy(dist);
  check.loss = std::log2(static_cast<double>(check.s)) - check.entropy;
  check.max_p = dist.max_probability();
  check.bound = 2.0 / static_cast<double>(check.s) + check.loss;
  check.holds = check.max_p <= check.bound + kLemmaSlack;
  return check;
}

ChainRuleCheck chain_rule_check(const std::vector<std::vector<double>>& joint) {
  if (joint.empty() || joint.front().empty()) throw InvalidDistribution("empty joint table");
  const auto cols = joint.front().size();
  std::vector<double> flat;
  for (const auto& row : joint) {
    if (row.size() != cols) throw InvalidDistribution("ragged joint table");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  const Distribution joint_law(flat);  // validates non-negativity and total mass

  ChainRuleCheck check;
  check.joint = shannon_entropy(joint_law);
  for (const auto& row : joint) {
    const double px = std::accumulate(row.begin(), row.end(), 0.0);
    check.marginal -= plogp(px);
    if (px <= 0.0) continue;
    double h_given_x = 0.0;
    for (double pxy : row) h_given_x -= plogp(pxy / px);
    check.conditional += px * h_given_x;
  }
  check.gap = std::abs(check.joint - check.marginal - check.conditional);
  check.holds = check.gap <= kChainRuleTolerance;
  return check;
}

Distribution random_simplex_point(std::size_t s, Engine& rng) {
  std::vector<double> w(s);
  double total = 0.0;
  for (auto& x : w) {
    // -log(1 - U) with U in [0, 1) is a standard exponential.
    x = -std::log1p(-uniform_unit(rng));
    total += x;
  }
  if (total <= 0.0) return Distribution::uniform(s);
  for (auto& x : w) x /= total;
  // Push the rounding residue onto the largest weight so the sum is 1 within
  // a few ulps.
  const double residue = 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += residue;
  return Distribution(std::move(w));
}

RevealAudit reveal_step(const RegularDigraph& g, std::span<const std::vector<Vertex>> factors, Vertex i,
                        std::span<const Vertex> sigma_prime, std::span<const Vertex> tau) {
  const auto n = static_cast<std::size_t>(g.n());
  RevealAudit step;
  step.i = i;
  step.sigma_prime.assign(sigma_prime.begin(), sigma_prime.end());
  step.tau.assign(tau.begin(), tau.end());

  std::vector<Vertex> before;
  for (Vertex v : tau) {
    if (v == i) break;
    before.push_back(v);
  }
  std::vector<char> taken(n, 0);
  for (Vertex v : before) taken[static_cast<std::size_t>(sigma_prime[static_cast<std::size_t>(v)])] = 1;
  for (Vertex j : g.out(i)) step.s_value += taken[static_cast<std::size_t>(j)] ? 0 : 1;

  std::vector<std::uint64_t> law(n, 0);
  for (const auto& sigma : factors) {
    const bool agrees = std::all_of(before.begin(), before.end(), [&](Vertex v) {
      return sigma[static_cast<std::size_t>(v)] == sigma_prime[static_cast<std::size_t>(v)];
    });
    if (agrees) ++law[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])];
  }
  step.loss = std::log2(static_cast<double>(step.s_value)) - entropy_of_counts(law);
  return step;
}

std::uint64_t RevealReport::tally(int i, std::uint64_t factor, int t) const {
  return tallies[(static_cast<std::size_t>(i) * factors + factor) * static_cast<std::size_t>(d) +
                 static_cast<std::size_t>(t - 1)];
}

RevealReport reveal_audit(const RegularDigraph& g) {
  const int n = g.n();
  const int d = g.d();
  if (n > kMaxRevealSide) {
    throw SizeLimitExceeded("reveal audit walks all n! orders; n = " + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxRevealSide));
  }

  std::vector<std::vector<Vertex>> factors;
  for_each_cycle_factor(g, [&](std::span<const Vertex> sigma) { factors.emplace_back(sigma.begin(), sigma.end()); });
  const std::size_t m = factors.size();
  const auto nn = static_cast<std::size_t>(n);
  const auto dd = static_cast<std::size_t>(d);

  // in_nbhd[i][v]: v is an out-neighbour of i.
  std::vector<std::vector<char>> in_nbhd(nn, std::vector<char>(nn, 0));
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j : g.out(i)) in_nbhd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
  }

  RevealReport report;
  report.n = n;
  report.d = d;
  report.factors = m;
  report.tallies.assign(nn * m * dd, 0);

  std::vector<Vertex> tau(nn);
  std::iota(tau.begin(), tau.end(), 0);
  std::vector<std::size_t> class_of(m);
  std::vector<int> s_of(m);
  std::vector<std::uint64_t> class_law;
  std::unordered_map<std::uint64_t, std::size_t> class_index;
  double loss_total = 0.0;
  std::uint64_t orders = 0;

  do {
    ++orders;
    for (std::size_t j = 0; j < nn; ++j) {
      const Vertex i = tau[j];
      const auto ii = static_cast<std::size_t>(i);
      // Group factors by their values on the vertices revealed before i.
      class_index.clear();
      class_law.clear();
      for (std::size_t f = 0; f < m; ++f) {
        std::uint64_t key = 0;
        int s = d;
        for (std::size_t k = 0; k < j; ++k) {
          const Vertex image = factors[f][static_cast<std::size_t>(tau[k])];
          key = (key << 3) | static_cast<std::uint64_t>(image);
          s -= in_nbhd[ii][static_cast<std::size_t>(image)];
        }
        s_of[f] = s;
        ++report.tallies[(ii * m + f) * dd + static_cast<std::size_t>(s - 1)];
        auto [it, inserted] = class_index.try_emplace(key, class_index.size());
        if (inserted) class_law.resize(class_law.size() + nn, 0);
        class_of[f] = it->second;
        ++class_law[it->second * nn + static_cast<std::size_t>(factors[f][ii])];
      }
      std::vector<double> class_entropy(class_index.size());
      for (std::size_t c = 0; c < class_entropy.size(); ++c) {
        class_entropy[c] = entropy_of_counts(std::span(class_law).subspan(c * nn, nn));
      }
      for (std::size_t f = 0; f < m; ++f) {
        loss_total += std::log2(static_cast<double>(s_of[f])) - class_entropy[class_of[f]];
      }
    }
  } while (std::next_permutation(tau.begin(), tau.end()));

  report.orders = orders;
  report.uniform = orders % dd == 0 &&
                   std::all_of(report.tallies.begin(), report.tallies.end(),
                               [&](std::uint64_t t) { return t == orders / dd; });
  report.loss_from_reveal = loss_total / (static_cast<double>(m) * static_cast<double>(orders));
  report.loss_from_count = entropy_loss(g.n(), g.d(), BigInt(m));
  report.loss_matches = std::abs(report.loss_from_reveal - report.loss_from_count) <= kLossTolerance;
  return report;
}

}  // namespace cyclefactor
