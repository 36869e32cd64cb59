#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "brute_force.hpp"
#include "cyclefactor/errors.hpp"
#include "cyclefactor/generators.hpp"
#include "cyclefactor/oracle.hpp"
#include "cyclefactor/rng.hpp"

using namespace cyclefactor;
namespace bf = cyclefactor::testing;

namespace {

// Small random corpus: n <= 7 keeps the brute-force side quick.
RegularDigraph corpus_instance(std::uint64_t seed) {
  auto rng = make_engine(seed);
  const int n = 1 + static_cast<int>(uniform_below(rng, 7));
  const int d = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
  return gen_random_regular_digraph(n, d, seed);
}

RegularDigraph eight_cycle_source() { return RegularDigraph(4, 2, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

RegularDigraph two_blocks_n6_d3() { return std::get<RegularDigraph>(gen_family(Family::CompleteLoops, 6, 3)); }

}  // namespace

TEST(Permanent, SmallExamples) {
  EXPECT_EQ(permanent(to_bipartite(complete_loops(3))), 6);
  EXPECT_EQ(permanent(to_bipartite(directed_cycle(3))), 1);
  // H of loop-plus-successor on 4 vertices is an 8-cycle.
  EXPECT_EQ(permanent(to_bipartite(eight_cycle_source())), 2);
  // Doubled C4: two directions of the Hamilton cycle plus two digon pairings.
  const auto c4 = std::get<UndirectedRegularGraph>(gen_family(Family::Cycle, 4, 2));
  EXPECT_EQ(permanent(to_bipartite(double_undirected(c4))), 4);
  EXPECT_EQ(permanent(to_bipartite(complete_loops(8))), 40320);
}

TEST(Permanent, MatchesBruteForceOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto g = corpus_instance(seed);
    const auto h = to_bipartite(g);
    EXPECT_EQ(permanent(h), bf::brute_permanent(h)) << "seed " << seed;
  }
}

TEST(Permanent, InvariantUnderRelabelling) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = gen_random_regular_digraph(8, 3, seed);
    const auto h = to_bipartite(g);
    auto rng = make_engine(seed + 1000);
    std::vector<Vertex> rows(8), cols(8);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    for (int i = 7; i > 0; --i) {
      std::swap(rows[i], rows[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
      std::swap(cols[i], cols[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
    }
    BipartiteGraph r{8, 3, AdjacencyLists(8)};
    for (int u = 0; u < 8; ++u) {
      for (Vertex v : h.u_adj[static_cast<std::size_t>(u)]) {
        r.u_adj[static_cast<std::size_t>(rows[u])].push_back(cols[static_cast<std::size_t>(v)]);
      }
    }
    for (auto& l : r.u_adj) std::sort(l.begin(), l.end());
    EXPECT_EQ(permanent(r), permanent(h));
  }
}

TEST(Permanent, LargeSideStillExactAndGuarded) {
  // 20! does not fit in 64 bits.
  EXPECT_EQ(permanent(to_bipartite(complete_loops(20))), factorial(20));
  EXPECT_EQ(permanent(to_bipartite(complete_loops(21))), factorial(21));
  const auto big = complete_loops(25);
  EXPECT_THROW(permanent(to_bipartite(big)), SizeLimitExceeded);
}

TEST(Enumerate, CompleteAndCycle) {
  const auto all3 = enumerate_cycle_factors(complete_loops(3));
  EXPECT_EQ(all3.size(), 6u);
  const auto one = enumerate_cycle_factors(directed_cycle(3));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].cycle_count(), 1u);
}

TEST(Enumerate, HistogramIsStirlingRow) {
  for (int n = 1; n <= 7; ++n) {
    EXPECT_EQ(cycle_count_histogram(complete_loops(n)), bf::stirling_cycle_row(n)) << "n = " << n;
  }
  const std::map<int, std::uint64_t> four{{1, 6}, {2, 11}, {3, 6}, {4, 1}};
  EXPECT_EQ(cycle_count_histogram(complete_loops(4)), four);
}

TEST(Enumerate, SameSetAsBruteForce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = corpus_instance(seed);
    std::vector<std::vector<Vertex>> mine;
    for (const auto& cf : enumerate_cycle_factors(g)) mine.push_back(cf.sigma());
    // Both sides come out lexicographically sorted.
    EXPECT_EQ(mine, bf::brute_factors(g)) << "seed " << seed;
  }
}

TEST(Enumerate, RefusesHugeFactorCounts) {
  EXPECT_THROW(enumerate_cycle_factors(complete_loops(10)), SizeLimitExceeded);
  EXPECT_NO_THROW(cycle_count_histogram(complete_loops(9)));
}

TEST(ExpectedCycles, Examples) {
  EXPECT_EQ(exact_expected_cycles(complete_loops(3)), Rational(11, 6));
  EXPECT_EQ(exact_expected_cycles(complete_loops(4)), Rational(25, 12));
  EXPECT_EQ(exact_expected_cycles(directed_cycle(9)), Rational(1));
}

TEST(ExpectedCycles, HarmonicNumbersOnCompleteWithLoops) {
  Rational h = 0;
  for (int n = 1; n <= 9; ++n) {
    h += Rational(1, n);
    EXPECT_EQ(exact_expected_cycles(complete_loops(n)), h) << "n = " << n;
    EXPECT_EQ(harmonic_number(n), h);
  }
}

TEST(ExpectedCycles, MatchesBruteForceAndLiesInRange) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = corpus_instance(seed);
    const auto e = exact_expected_cycles(g);
    EXPECT_EQ(e, bf::brute_expected_cycles(g)) << "seed " << seed;
    EXPECT_GE(e, 1);
    EXPECT_LE(e, g.n());
  }
}

TEST(Bounds, ConstantsAgreeWithHandValues) {
  EXPECT_NEAR(cycle_bound_log2(3, 3), 10.339850002884624, 1e-12);
  EXPECT_NEAR(cycle_bound_log2(8, 8), 16.0, 1e-12);
  EXPECT_NEAR(cycle_bound_log2(7, 6), 16.729825003365395, 1e-12);
  EXPECT_NEAR(cycle_bound_ln(3, 3), 4.0 * (std::log(3.0) + 1.0), 1e-12);
  EXPECT_NEAR(entropy_loss_ceiling(4, 2), 2.0 * std::log2(2.0 * std::exp(1.0)), 1e-12);
}

TEST(Bounds, TightOnCompleteWithLoops) {
  for (int n = 1; n <= 7; ++n) {
    const auto audit = audit_bounds(complete_loops(n));
    EXPECT_TRUE(audit.all_hold()) << "n = " << n;
    const auto* bm = audit.find("bregman_minc");
    const auto* vdw = audit.find("van_der_waerden");
    ASSERT_TRUE(bm && vdw);
    EXPECT_TRUE(bm->exact);
    EXPECT_TRUE(vdw->exact);
    // Equality: both sides coincide.
    EXPECT_NEAR(bm->lhs, bm->rhs, 1e-9);
    EXPECT_NEAR(vdw->lhs, vdw->rhs, 1e-9);
  }
}

TEST(Bounds, BipartiteEightCycle) {
  const auto audit = audit_bounds(eight_cycle_source());
  EXPECT_TRUE(audit.all_hold());
  // 2 >= 4! 2^4 / 4^4 = 1.5 and 2 <= (2!)^2 = 4, compared as log2 values.
  const auto* vdw = audit.find("van_der_waerden");
  ASSERT_TRUE(vdw);
  EXPECT_NEAR(std::exp2(vdw->lhs - vdw->rhs), 2.0 / 1.5, 1e-9);
}

TEST(Bounds, ExpectedCyclesCheckOnCompleteThree) {
  const auto audit = audit_bounds(complete_loops(3));
  const auto* e = audit.find("expected_cycles");
  ASSERT_TRUE(e);
  EXPECT_NEAR(e->lhs, 11.0 / 6.0, 1e-12);
  EXPECT_NEAR(e->rhs, 10.339850002884624, 1e-9);
  EXPECT_TRUE(e->holds);
  const auto* ln = audit.find("expected_cycles_ln");
  ASSERT_TRUE(ln);
  EXPECT_TRUE(ln->informational);
}

TEST(Bounds, AllHoldOnRandomCorpus) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto g = corpus_instance(seed);
    const auto audit = audit_bounds(g);
    EXPECT_TRUE(audit.all_hold()) << "seed " << seed;
  }
}

TEST(Bounds, ViolationsAreReported) {
  // A fake count above (d!)^{n/d} and one below n! d^n / n^n.
  const auto high = audit_bounds(4, 2, BigInt(5), Rational(1));
  EXPECT_FALSE(high.find("bregman_minc")->holds);
  EXPECT_FALSE(high.all_hold());
  const auto low = audit_bounds(4, 2, BigInt(1), Rational(1));
  EXPECT_FALSE(low.find("van_der_waerden")->holds);
  const auto many = audit_bounds(4, 2, BigInt(2), Rational(100));
  EXPECT_FALSE(many.find("expected_cycles")->holds);
}

TEST(EntropyLoss, ExactZeros) {
  for (int n = 1; n <= 9; ++n) EXPECT_EQ(entropy_loss(complete_loops(n)), 0.0);
  EXPECT_EQ(entropy_loss(directed_cycle(8)), 0.0);
  EXPECT_EQ(permanent(to_bipartite(two_blocks_n6_d3())), 36);
  EXPECT_EQ(entropy_loss(two_blocks_n6_d3()), 0.0);
}

TEST(EntropyLoss, MatchesFormulaAndStaysInRange) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto g = corpus_instance(seed);
    const double count = static_cast<double>(bf::brute_permanent(to_bipartite(g)));
    const double want = g.n() / static_cast<double>(g.d()) * std::log2(std::tgamma(g.d() + 1.0)) - std::log2(count);
    const double loss = entropy_loss(g);
    EXPECT_NEAR(loss, want, 1e-9) << "seed " << seed;
    EXPECT_GE(loss, 0.0);
    EXPECT_LE(loss, entropy_loss_ceiling(g.n(), g.d()));
  }
}

TEST(OracleReport, CompleteFour) {
  const auto r = oracle_report(complete_loops(4));
  EXPECT_EQ(r.matching_count, 24);
  EXPECT_EQ(r.expected_cycles, Rational(25, 12));
  EXPECT_EQ(r.entropy_loss, 0.0);
  EXPECT_TRUE(r.all_hold());
  EXPECT_EQ(to_decimal(Rational(1, 3), 5), "0.33333");
}
