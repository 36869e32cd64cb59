#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cyclefactor/graph.hpp"
#include "cyclefactor/rng.hpp"

namespace cyclefactor {

// Entropies are in bits throughout.

// Probability vector over a finite set whose size is the vector length
// (zero entries still count towards the support size s).
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // Throws InvalidDistribution on an empty vector, a negative or non-finite
  // entry, or a sum further than kSumTolerance from 1.
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t s);
  static Distribution point_mass(std::size_t s, std::size_t at);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double max_probability() const;

 private:
  std::vector<double> probs_;
};

// -sum p log2 p with 0 log 0 = 0.
double shannon_entropy(const Distribution& dist);
// Entropy of raw non-negative weights after normalisation; zero weights are
// skipped. Used on conditional laws given as counts.
double entropy_of_counts(std::span<const std::uint64_t> counts);

// H(p) = -p log2 p - (1-p) log2(1-p). Throws OutOfRange outside [0, 1].
double binary_entropy(double p);

// For X on a set of size s with loss l = log2 s - H(X), every outcome has
// probability at most 2/s + l.
struct SkewCheck {
  std::size_t s = 0;
  double entropy = 0.0;
  double loss = 0.0;
  double max_p = 0.0;
  double bound = 0.0;  // 2/s + loss
  bool holds = false;  // max_p <= bound + 1e-9
};

SkewCheck check_skew_lemma(const Distribution& dist);

// Two-variable chain rule H(X, Y) = H(X) + H(Y | X) on a joint table with
// rows indexed by X and columns by Y.
struct ChainRuleCheck {
  double joint = 0.0;
  double marginal = 0.0;     // H(X)
  double conditional = 0.0;  // H(Y | X)
  double gap = 0.0;          // |joint - marginal - conditional|
  bool holds = false;        // gap <= 1e-9
};

// Throws InvalidDistribution on ragged rows or an invalid joint law.
ChainRuleCheck chain_rule_check(const std::vector<std::vector<double>>& joint);

// Uniform point of the (s-1)-simplex via normalised exponentials.
Distribution random_simplex_point(std::size_t s, Engine& rng);

// One revealed step: vertex i, reference factor sigma_prime, reveal order tau
// (tau[j] is the j-th revealed vertex). s_value counts the out-neighbours of i
// not yet taken by sigma_prime on the vertices revealed before i; loss is
// log2(s_value) minus the entropy of sigma(i) for uniform sigma conditioned on
// agreeing with sigma_prime on those vertices.
struct RevealAudit {
  Vertex i = 0;
  std::vector<Vertex> sigma_prime;
  std::vector<Vertex> tau;
  int s_value = 0;
  double loss = 0.0;
};

// Direct evaluation of one step by filtering `factors` (all cycle-factors of g).
RevealAudit reveal_step(const RegularDigraph& g, std::span<const std::vector<Vertex>> factors, Vertex i,
                        std::span<const Vertex> sigma_prime, std::span<const Vertex> tau);

inline constexpr int kMaxRevealSide = 6;

struct RevealReport {
  int n = 0;
  int d = 0;
  std::uint64_t orders = 0;   // n!
  std::uint64_t factors = 0;  // |C|
  // tallies[(i * factors + f) * d + (t - 1)] = number of orders tau with s(i, f, tau) = t.
  std::vector<std::uint64_t> tallies;
  bool uniform = false;           // every tally equals n!/d
  double loss_from_reveal = 0.0;  // sum_i mean_{sigma'} mean_tau loss
  double loss_from_count = 0.0;   // (n/d) log2(d!) - log2|C|
  bool loss_matches = false;      // |difference| <= 1e-6

  std::uint64_t tally(int i, std::uint64_t factor, int t) const;
  bool ok() const noexcept { return uniform && loss_matches; }
};

// Walks every reveal order tau in S_n and every cycle-factor sigma' of g.
// Throws SizeLimitExceeded for n > kMaxRevealSide.
RevealReport reveal_audit(const RegularDigraph& g);

}  // namespace cyclefactor
