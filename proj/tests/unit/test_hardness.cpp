#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fomlab/engine.hpp"
#include "fomlab/error.hpp"
#include "fomlab/hardness.hpp"
#include "fomlab/oracle.hpp"

using namespace fomlab;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::UsageError;
}

// Exact E[|M|]/OPT over all rank orders (ranks only matter through order).
double exact_ratio(const Instance& inst) {
  const int n = inst.size();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  RankAssignment ranks(std::vector<double>(n, 0.0));
  double total = 0.0;
  long count = 0;
  do {
    for (int k = 0; k < n; ++k) ranks.rank[order[k]] = (k + 1.0) / (n + 1.0);
    total += run_ranking(inst, ranks).size();
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return total / count / max_matching(inst).size;
}

}  // namespace

TEST(AdversaryTree, Smallest) {
  const auto inst = gen_adversary_tree({1, 1, 0});
  EXPECT_EQ(inst.size(), 4);
  EXPECT_EQ(max_matching(inst).size, 2);
  ASSERT_TRUE(inst.bipartition());
}

TEST(AdversaryTree, ThreeByTwo) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = gen_adversary_tree({3, 2, seed});
    EXPECT_EQ(inst.size(), 26);
    ASSERT_TRUE(inst.bipartition());
    EXPECT_EQ(max_matching_bipartite(inst).size, 13);
    // The root's deadline comes right after its k+1 children arrive.
    EXPECT_EQ(inst.deadline_position(0), 5);
    // Nine B-vertices, with 9, 8, ..., 1 neighbors.
    std::vector<int> b_degrees;
    for (VertexId v = 26 - 9; v < 26; ++v) b_degrees.push_back(inst.degree(v));
    EXPECT_EQ(b_degrees, (std::vector<int>{9, 8, 7, 6, 5, 4, 3, 2, 1}));
  }
  EXPECT_FALSE(gen_adversary_tree({3, 2, 0}) == gen_adversary_tree({3, 2, 1}));
  EXPECT_EQ(gen_adversary_tree({3, 2, 5}), gen_adversary_tree({3, 2, 5}));
}

TEST(AdversaryTree, PerfectMatchings) {
  for (int k = 1; k <= 4; ++k) {
    for (int h = 1; h <= 3; ++h) {
      const auto inst = gen_adversary_tree({k, h, static_cast<std::uint64_t>(k * 10 + h)});
      EXPECT_EQ(2 * max_matching(inst).size, inst.size()) << k << ' ' << h;
    }
  }
}

TEST(AdversaryTree, Invalid) {
  EXPECT_EQ(code_of([] { gen_adversary_tree({0, 2, 0}); }), ErrorCode::ParamsInvalid);
  EXPECT_EQ(code_of([] { gen_adversary_tree({2, 0, 0}); }), ErrorCode::ParamsInvalid);
  EXPECT_EQ(code_of([] { gen_adversary_tree({7, 8, 0}); }), ErrorCode::ParamsInvalid);
}

TEST(AdversaryRatio, Recurrence) {
  for (int k = 1; k <= 50; ++k) {
    const auto p = p_recurrence(k, 200);
    for (int i = 0; i <= 200; ++i) ASSERT_NEAR(p[i], p_closed_form(k, i), 1e-12) << k << ' ' << i;
    EXPECT_NEAR(p[1], 1.0 / (k + 1), 1e-15);
    EXPECT_NEAR(p[200], 1.0 / (k + 2), 1e-12);
  }
  EXPECT_NEAR(p_closed_form(7, 1), 0.125, 1e-15);
  // Seeding with 1 instead of 0 flips the first step.
  EXPECT_NEAR(p_recurrence(7, 1, 1.0)[1], 0.0, 1e-15);
}

TEST(AdversaryRatio, Asymptotic) {
  const auto r = adversary_ratio(7, 8);
  EXPECT_NEAR(r.ratio_asymptotic, 0.631745, 1e-6);
  EXPECT_NEAR(r.ratio_asymptotic, 62.0 / 63.0 - 6.0 / 7.0 * std::exp(-8.0 / 9.0), 1e-14);
  EXPECT_NEAR(r.t_fraction, 1 - std::exp(-8.0 / 9.0), 1e-3);
  double prev_gap = 1.0;
  for (int h = 2; h <= 9; ++h) {
    const double gap = std::abs(adversary_ratio(7, h).ratio_finite - r.ratio_asymptotic);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-6);
  EXPECT_EQ(code_of([] { adversary_ratio(1, 3); }), ErrorCode::ParamsInvalid);
  EXPECT_EQ(code_of([] { adversary_ratio(3, 0); }), ErrorCode::ParamsInvalid);
}

TEST(WaterFilling, SmallCases) {
  EXPECT_NEAR(water_filling(1, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(water_filling(2, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(water_filling(2, 0.25), 0.5, 1e-15);
  EXPECT_NEAR(water_filling(2, 1.0), 1.5, 1e-15);
  EXPECT_EQ(code_of([] { water_filling(2, 2.0); }), ErrorCode::ParamsInvalid);
}

TEST(WaterFilling, LargeKUsesDigamma) {
  // Both sides of the summation / digamma switch agree.
  const double direct = water_filling(1e7, 0.6) / 1e7;
  const double digamma = water_filling(1e7 + 1, 0.6) / (1e7 + 1);
  EXPECT_NEAR(direct, digamma, 1e-6);
  EXPECT_NEAR(water_filling(1e12, 0.6) / 1e12, 1 - std::exp(-0.6), 1e-9);
}

TEST(Omega, FixedPoint) {
  const double x = omega_fixed_point();
  EXPECT_LT(std::abs(x - std::exp(-x)), 1e-12);
  EXPECT_NEAR(x * std::exp(x), 1.0, 1e-12);
  EXPECT_NEAR(x, 0.56714, 1e-5);
}

TEST(Fluid, Recurrence) {
  const auto f = fluid_recurrence(100, 60);
  EXPECT_NEAR(f.fluid[1], std::exp(-1.0), 1e-15);
  EXPECT_NEAR(f.fluid.back(), omega_fixed_point(), 1e-9);
  EXPECT_NEAR(f.fluid_limit, omega_fixed_point(), 1e-9);
  EXPECT_NEAR(f.mean_field[1], std::pow(100.0 / 101.0, 100.0), 1e-15);
  EXPECT_EQ(code_of([] { fluid_recurrence(0, 3); }), ErrorCode::ParamsInvalid);
}

TEST(RankingHard, Shape) {
  const auto inst = gen_ranking_hard({3, 4});
  EXPECT_EQ(inst.size(), 24);
  EXPECT_EQ(inst.edges().size(), 12u + 9u * 3u);
  EXPECT_EQ(max_matching_bipartite(inst).size, 12);
  for (int k = 1; k <= 6; ++k) {
    for (int h = 1; h <= 6; ++h) EXPECT_EQ(max_matching(gen_ranking_hard({k, h})).size, k * h);
  }
  EXPECT_EQ(code_of([] { gen_ranking_hard({0, 2}); }), ErrorCode::ParamsInvalid);
}

TEST(RankingHard, PathEnumerationMatchesMonteCarlo) {
  for (int h = 1; h <= 4; ++h) {
    const auto inst = gen_ranking_hard({1, h});
    const double exact = exact_ratio(inst);
    const auto mc = empirical_ratio(inst, Algorithm::Ranking, 40000, 5);
    EXPECT_NEAR(mc.mean, exact, 4 * mc.std_error + 1e-12) << h;
    EXPECT_EQ(mc.opt, h);
  }
}

TEST(EmpiricalRatio, SingleEdgeAndDeterminism) {
  const auto edge = canonical_instance(2, {{0, 1}});
  const auto r = empirical_ratio(edge, Algorithm::Ranking, 100, 1);
  EXPECT_EQ(r.mean, 1.0);
  EXPECT_EQ(r.std_error, 0.0);
  const auto inst = gen_ranking_hard({10, 5});
  const auto one = empirical_ratio(inst, Algorithm::Ranking, 300, 9, 1);
  const auto many = empirical_ratio(inst, Algorithm::Ranking, 300, 9, 3);
  EXPECT_EQ(one.mean, many.mean);
  EXPECT_EQ(one.std_error, many.std_error);
  const auto gen = [](std::uint64_t s) { return gen_adversary_tree({3, 2, s}); };
  EXPECT_EQ(empirical_ratio(gen, Algorithm::Ranking, 100, 2, 1).mean,
            empirical_ratio(gen, Algorithm::Ranking, 100, 2, 4).mean);
}

TEST(EmpiricalRatio, LadderApproachesOmega) {
  const double omega = omega_fixed_point();
  double prev_gap = 1.0, prev_se = 0.0;
  for (const auto& [k, h] : {std::pair{2, 2}, {10, 10}, {40, 30}}) {
    const auto r = empirical_ratio(gen_ranking_hard({k, h}), Algorithm::Ranking, 200, 17);
    const double gap = r.mean - omega;
    EXPECT_GT(gap, -3 * r.std_error);
    EXPECT_LT(gap, prev_gap + 3 * (r.std_error + prev_se)) << k << ' ' << h;
    prev_gap = gap;
    prev_se = r.std_error;
  }
  EXPECT_LT(prev_gap, 0.02);
}

TEST(EmpiricalRatio, AdversaryTreeBelowUniversalBound) {
  const auto gen = [](std::uint64_t s) { return gen_adversary_tree({7, 3, s}); };
  const auto r = empirical_ratio(gen, Algorithm::Ranking, 100, 3);
  const double bound = adversary_ratio(7, 3).ratio_finite;
  EXPECT_LE(r.mean, bound + 3 * r.std_error + 1e-3);
}
