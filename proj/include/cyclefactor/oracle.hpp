#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cyclefactor/graph.hpp"

namespace cyclefactor {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Ryser costs 2^n * n; larger sides are refused.
inline constexpr int kMaxPermanentSide = 24;
// Enumeration refuses graphs with more cycle-factors than this.
inline constexpr std::uint64_t kMaxEnumeratedFactors = 1'000'000;

// Number of perfect matchings of H, i.e. the permanent of its 0/1
// biadjacency matrix, by Ryser's inclusion-exclusion formula over column
// subsets visited in Gray-code order. Exact. Throws SizeLimitExceeded above
// kMaxPermanentSide.
BigInt permanent(const BipartiteGraph& h);

// Calls visit(sigma) once per cycle-factor of g, in lexicographic order of
// sigma. Throws SizeLimitExceeded when the permanent exceeds
// kMaxEnumeratedFactors.
void for_each_cycle_factor(const RegularDigraph& g, const std::function<void(std::span<const Vertex>)>& visit);

std::vector<CycleFactor> enumerate_cycle_factors(const RegularDigraph& g);

// multiplicity[c] = number of cycle-factors with exactly c cycles.
std::map<int, std::uint64_t> cycle_count_histogram(const RegularDigraph& g);

// Mean number of cycles over all cycle-factors, as an exact fraction.
Rational exact_expected_cycles(const RegularDigraph& g);

// The upper bound on the expected cycle count, 4 (n/d)(log2 d + 1), and its
// natural-log counterpart 4 (n/d)(ln d + 1).
double cycle_bound_log2(int n, int d);
double cycle_bound_ln(int n, int d);

// (n/d) log2(e d): the largest entropy loss compatible with both matching
// count bounds.
double entropy_loss_ceiling(int n, int d);

struct BoundCheck {
  std::string name;
  std::string relation;  // human-readable inequality being checked
  double lhs = 0.0;      // log2-scale for the counting bounds, raw for cycle bounds
  double rhs = 0.0;
  bool holds = false;
  bool exact = false;          // decided by exact integer arithmetic
  bool informational = false;  // reported but not part of the verdict
};

struct BoundAudit {
  std::vector<BoundCheck> checks;

  // True iff every non-informational check holds.
  bool all_hold() const;
  const BoundCheck* find(const std::string& name) const;
};

// Audits the matching-count bounds and the expected cycle bound:
//   bregman_minc          |C|^d <= (d!)^n              (exact)
//   van_der_waerden       |C| n^n >= n! d^n            (exact)
//   van_der_waerden_stirling  log2|C| >= n log2(d/e)
//   expected_cycles       E|sigma| <= 4 (n/d)(log2 d + 1)
//   expected_cycles_ln    same with natural logs (informational)
BoundAudit audit_bounds(const RegularDigraph& g);
BoundAudit audit_bounds(int n, int d, const BigInt& factor_count, const Rational& expected_cycles);

// L = (n/d) log2(d!) - log2|C| in bits. Exactly 0 when |C|^d = (d!)^n.
// Needs only the permanent, not enumeration.
double entropy_loss(const RegularDigraph& g);
double entropy_loss(int n, int d, const BigInt& factor_count);

struct OracleReport {
  int n = 0;
  int d = 0;
  BigInt matching_count;
  Rational expected_cycles;
  double entropy_loss = 0.0;
  double entropy_loss_ceiling = 0.0;
  BoundAudit bound_audit;
  std::map<int, std::uint64_t> cycle_histogram;

  bool entropy_loss_in_range() const;
  bool all_hold() const { return bound_audit.all_hold() && entropy_loss_in_range(); }
};

OracleReport oracle_report(const RegularDigraph& g);

std::string to_decimal(const Rational& q, int significant_digits = 50);
double to_double(const Rational& q);
double log2_of(const BigInt& x);
BigInt factorial(int n);
Rational harmonic_number(int n);

}  // namespace cyclefactor
