#pragma once

#include <vector>

#include "fomlab/instance.hpp"

namespace fomlab {

/// Offline maximum matching: cardinality plus a witness.
struct OracleResult {
  int size = 0;
  std::vector<Edge> witness;  // pairs (a, b) with a < b, sorted
};

/// Hopcroft–Karp on the instance's bipartition witness. Throws NotBipartite
/// when no witness is present.
OracleResult max_matching_bipartite(const Instance& instance);

/// Edmonds' blossom algorithm, O(V^3).
OracleResult max_matching_general(const Instance& instance);

/// Exhaustive include/exclude branching over edges. Throws TooLarge above
/// kBruteforceEdgeLimit edges.
OracleResult max_matching_bruteforce(const Instance& instance);
inline constexpr int kBruteforceEdgeLimit = 24;

/// Bipartite oracle when a witness exists, blossom otherwise.
OracleResult max_matching(const Instance& instance);

/// True iff `pairs` is a matching using only instance edges.
bool is_valid_matching(const Instance& instance, const std::vector<Edge>& pairs);

}  // namespace fomlab
