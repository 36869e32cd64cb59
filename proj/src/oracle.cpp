#include "cyclefactor/oracle.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

namespace mp = boost::multiprecision;

BigInt factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Rational harmonic_number(int n) {
  Rational h = 0;
  for (int k = 1; k <= n; ++k) h += Rational(1, k);
  return h;
}

double log2_of(const BigInt& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  // Shift large values into double range before taking the logarithm.
  const auto bits = mp::msb(x);
  if (bits < 1000) return std::log2(x.convert_to<double>());
  const auto shift = bits - 900;
  return std::log2(BigInt(x >> shift).convert_to<double>()) + static_cast<double>(shift);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_decimal(const Rational& q, int significant_digits) {
  using Dec = mp::number<mp::cpp_dec_float<60>>;
  const Dec value = Dec(mp::numerator(q)) / Dec(mp::denominator(q));
  return value.str(significant_digits, std::ios_base::fmtflags(0));
}

BigInt permanent(const BipartiteGraph& h) {
  const int n = h.n;
  if (n > kMaxPermanentSide) {
    throw SizeLimitExceeded("permanent of a side-" + std::to_string(n) + " bipartite graph exceeds the limit of " +
                            std::to_string(kMaxPermanentSide));
  }
  if (n == 0) return 1;

  // column_rows[j] = U vertices adjacent to V vertex j.
  std::vector<std::vector<int>> column_rows(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    for (Vertex v : h.u_adj[static_cast<std::size_t>(u)]) column_rows[static_cast<std::size_t>(v)].push_back(u);
  }

  // perm(A) = (-1)^n * sum_{S} (-1)^{|S|} prod_i rowsum_i(S), S over column subsets.
  std::vector<int> row_sum(static_cast<std::size_t>(n), 0);
  int zero_rows = n;
  BigInt total = 0;
  __int128 acc = 0;
  auto flush = [&] {
    if (acc == 0) return;
    const bool negative = acc < 0;
    unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-acc) : static_cast<unsigned __int128>(acc);
    BigInt big = static_cast<std::uint64_t>(mag >> 64);
    big <<= 64;
    big += static_cast<std::uint64_t>(mag);
    total += negative ? BigInt(-big) : big;
    acc = 0;
  };

  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    const int delta = (gray & bit) ? 1 : -1;
    for (int u : column_rows[static_cast<std::size_t>(col)]) {
      auto& s = row_sum[static_cast<std::size_t>(u)];
      if (s == 0) --zero_rows;
      s += delta;
      if (s == 0) ++zero_rows;
    }
    if (zero_rows != 0) continue;

    // Row sums are at most n <= 24, so the product stays below 24^24 < 2^111.
    __int128 product = 1;
    for (int s : row_sum) product *= s;
    if ((std::popcount(gray) & 1) != 0) product = -product;
    __int128 next;
    if (__builtin_add_overflow(acc, product, &next)) {
      flush();
      next = product;
    }
    acc = next;
  }
  flush();
  return (n % 2 == 0) ? total : BigInt(-total);
}

namespace {

void require_enumerable(const RegularDigraph& g) {
  const auto count = permanent(to_bipartite(g));
  if (count > kMaxEnumeratedFactors) {
    throw SizeLimitExceeded("graph has " + count.str() + " cycle-factors; enumeration is capped at " +
                            std::to_string(kMaxEnumeratedFactors));
  }
}

void extend(const RegularDigraph& g, int row, std::vector<Vertex>& sigma, std::vector<char>& used,
            const std::function<void(std::span<const Vertex>)>& visit) {
  if (row == g.n()) {
    visit(sigma);
    return;
  }
  for (Vertex v : g.out(row)) {
    if (used[static_cast<std::size_t>(v)]) continue;
    used[static_cast<std::size_t>(v)] = 1;
    sigma[static_cast<std::size_t>(row)] = v;
    extend(g, row + 1, sigma, used, visit);
    used[static_cast<std::size_t>(v)] = 0;
  }
}

}  // namespace

void for_each_cycle_factor(const RegularDigraph& g, const std::function<void(std::span<const Vertex>)>& visit) {
  require_enumerable(g);
  std::vector<Vertex> sigma(static_cast<std::size_t>(g.n()), -1);
  std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
  extend(g, 0, sigma, used, visit);
}

std::vector<CycleFactor> enumerate_cycle_factors(const RegularDigraph& g) {
  std::vector<CycleFactor> factors;
  for_each_cycle_factor(g, [&](std::span<const Vertex> sigma) {
    factors.emplace_back(g, std::vector<Vertex>(sigma.begin(), sigma.end()));
  });
  return factors;
}

std::map<int, std::uint64_t> cycle_count_histogram(const RegularDigraph& g) {
  std::map<int, std::uint64_t> histogram;
  for_each_cycle_factor(g, [&](std::span<const Vertex> sigma) { ++histogram[count_cycles(sigma)]; });
  return histogram;
}

namespace {

Rational mean_of(const std::map<int, std::uint64_t>& histogram) {
  BigInt total = 0;
  BigInt weighted = 0;
  for (auto [cycles, count] : histogram) {
    total += count;
    weighted += BigInt(count) * cycles;
  }
  return Rational(weighted, total);
}

}  // namespace

Rational exact_expected_cycles(const RegularDigraph& g) { return mean_of(cycle_count_histogram(g)); }

double cycle_bound_log2(int n, int d) { return 4.0 * n / d * (std::log2(static_cast<double>(d)) + 1.0); }

double cycle_bound_ln(int n, int d) { return 4.0 * n / d * (std::log(static_cast<double>(d)) + 1.0); }

double entropy_loss_ceiling(int n, int d) {
  return static_cast<double>(n) / d * std::log2(std::numbers::e * d);
}

bool BoundAudit::all_hold() const {
  for (const auto& c : checks) {
    if (!c.informational && !c.holds) return false;
  }
  return true;
}

const BoundCheck* BoundAudit::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

BoundAudit audit_bounds(int n, int d, const BigInt& factor_count, const Rational& expected_cycles) {
  BoundAudit audit;
  const double log_count = log2_of(factor_count);
  const BigInt d_fact = factorial(d);
  const BigInt n_fact = factorial(n);

  audit.checks.push_back(BoundCheck{
      "bregman_minc", "log2|C| <= (n/d) log2(d!)", log_count,
      static_cast<double>(n) / d * log2_of(d_fact),
      mp::pow(factor_count, static_cast<unsigned>(d)) <= mp::pow(d_fact, static_cast<unsigned>(n)), true, false});

  audit.checks.push_back(BoundCheck{
      "van_der_waerden", "log2|C| >= log2(n! d^n / n^n)", log_count,
      log2_of(n_fact) + n * std::log2(static_cast<double>(d)) - n * std::log2(static_cast<double>(n)),
      factor_count * mp::pow(BigInt(n), static_cast<unsigned>(n)) >= n_fact * mp::pow(BigInt(d), static_cast<unsigned>(n)),
      true, false});

  const double stirling_rhs = n * (std::log2(static_cast<double>(d)) - std::numbers::log2e);
  audit.checks.push_back(BoundCheck{"van_der_waerden_stirling", "log2|C| >= n log2(d/e)", log_count, stirling_rhs,
                                    log_count >= stirling_rhs, false, false});

  const double expected = to_double(expected_cycles);
  const double bound2 = cycle_bound_log2(n, d);
  audit.checks.push_back(BoundCheck{"expected_cycles", "E|sigma| <= 4 (n/d)(log2 d + 1)", expected, bound2,
                                    expected <= bound2, false, false});
  const double bound_e = cycle_bound_ln(n, d);
  audit.checks.push_back(BoundCheck{"expected_cycles_ln", "E|sigma| <= 4 (n/d)(ln d + 1)", expected, bound_e,
                                    expected <= bound_e, false, true});
  return audit;
}

BoundAudit audit_bounds(const RegularDigraph& g) {
  const auto histogram = cycle_count_histogram(g);
  BigInt count = 0;
  for (auto [cycles, c] : histogram) count += c;
  return audit_bounds(g.n(), g.d(), count, mean_of(histogram));
}

double entropy_loss(int n, int d, const BigInt& factor_count) {
  const BigInt d_fact = factorial(d);
  if (mp::pow(factor_count, static_cast<unsigned>(d)) == mp::pow(d_fact, static_cast<unsigned>(n))) return 0.0;
  return (n * log2_of(d_fact) - d * log2_of(factor_count)) / d;
}

double entropy_loss(const RegularDigraph& g) { return entropy_loss(g.n(), g.d(), permanent(to_bipartite(g))); }

bool OracleReport::entropy_loss_in_range() const {
  return entropy_loss >= 0.0 && entropy_loss <= entropy_loss_ceiling;
}

OracleReport oracle_report(const RegularDigraph& g) {
  OracleReport report;
  report.n = g.n();
  report.d = g.d();
  report.cycle_histogram = cycle_count_histogram(g);
  report.matching_count = 0;
  for (auto [cycles, c] : report.cycle_histogram) report.matching_count += c;
  report.expected_cycles = mean_of(report.cycle_histogram);
  report.entropy_loss = entropy_loss(g.n(), g.d(), report.matching_count);
  report.entropy_loss_ceiling = entropy_loss_ceiling(g.n(), g.d());
  report.bound_audit = audit_bounds(g.n(), g.d(), report.matching_count, report.expected_cycles);
  return report;
}

}  // namespace cyclefactor
