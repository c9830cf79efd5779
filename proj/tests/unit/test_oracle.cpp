#include <gtest/gtest.h>

#include "fomlab/error.hpp"
#include "fomlab/hardness.hpp"
#include "fomlab/oracle.hpp"
#include "fomlab/rng.hpp"

using namespace fomlab;

namespace {

Instance path(int n) {
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return canonical_instance(n, edges, find_two_coloring(n, edges));
}

Instance cycle(int n) {
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return canonical_instance(n, edges, find_two_coloring(n, edges));
}

Instance complete(int n) {
  std::vector<Edge> edges;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) edges.emplace_back(x, y);
  }
  return canonical_instance(n, edges);
}

void expect_witness(const Instance& inst, const OracleResult& r) {
  EXPECT_TRUE(is_valid_matching(inst, r.witness));
  EXPECT_EQ(static_cast<int>(r.witness.size()), r.size);
}

}  // namespace

TEST(Bipartite, Examples) {
  EXPECT_EQ(max_matching_bipartite(path(2)).size, 1);
  EXPECT_EQ(max_matching_bipartite(path(4)).size, 2);
  for (int k : {1, 3, 5}) {
    for (int h : {1, 2, 4}) {
      const auto inst = gen_ranking_hard({k, h});
      const auto r = max_matching_bipartite(inst);
      EXPECT_EQ(r.size, k * h);
      expect_witness(inst, r);
    }
  }
}

TEST(Bipartite, NotBipartite) {
  try {
    max_matching_bipartite(complete(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotBipartite);
  }
}

TEST(General, Examples) {
  EXPECT_EQ(max_matching_general(complete(3)).size, 1);
  EXPECT_EQ(max_matching_general(cycle(5)).size, 2);
  EXPECT_EQ(max_matching_general(complete(7)).size, 3);
  for (const auto& [k, h] : {std::pair{2, 1}, {2, 3}, {3, 2}, {4, 2}}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto inst = gen_adversary_tree({k, h, seed});
      const auto r = max_matching_general(inst);
      EXPECT_EQ(2 * r.size, inst.size());
      expect_witness(inst, r);
    }
  }
}

TEST(General, BlossomNeeded) {
  // Two triangles joined by a path: the greedy warm start is not enough.
  const auto inst = canonical_instance(8, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 5}});
  EXPECT_EQ(max_matching_general(inst).size, 4);
  EXPECT_EQ(max_matching_bruteforce(inst).size, 4);
}

TEST(Bruteforce, Examples) {
  EXPECT_EQ(max_matching_bruteforce(canonical_instance(4, {})).size, 0);
  EXPECT_EQ(max_matching_bruteforce(complete(4)).size, 2);
  try {
    max_matching_bruteforce(complete(8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(CrossOracle, BlossomVsBruteforce) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const int n = 2 + static_cast<int>(rng.below(11));
    Instance inst;
    do {
      inst = random_instance(n, rng.uniform(), false, rng.below(1u << 30));
    } while (inst.edges().size() > kBruteforceEdgeLimit);
    const auto general = max_matching_general(inst);
    const auto brute = max_matching_bruteforce(inst);
    ASSERT_EQ(general.size, brute.size) << instance_to_json(inst);
    expect_witness(inst, general);
    expect_witness(inst, brute);
  }
}

TEST(CrossOracle, HopcroftKarpVsBlossom) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const auto inst = random_instance(2 + static_cast<int>(rng.below(40)), rng.uniform() * 0.5, true, seed);
    const auto hk = max_matching_bipartite(inst);
    ASSERT_EQ(hk.size, max_matching_general(inst).size) << instance_to_json(inst);
    ASSERT_EQ(hk.size, max_matching(inst).size);
    expect_witness(inst, hk);
  }
}
