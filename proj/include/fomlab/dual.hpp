#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fomlab/charging.hpp"
#include "fomlab/engine.hpp"
#include "fomlab/instance.hpp"

namespace fomlab {

/// Per-vertex dual values: alpha = gain + comp_in − comp_out.
struct DualAssignment {
  std::vector<double> alpha;
  std::vector<double> gain;
  std::vector<double> comp_in;
  std::vector<double> comp_out;
  /// Victim of each active vertex, -1 if none (always -1 for non-active).
  std::vector<VertexId> victim_of;
  int matched_edges = 0;
};

/// Largest θ in {other ranks} ∪ {1} such that v is passive with rank θ⁻;
/// 0 if v is never passive. The entry ranks[v] is ignored.
double marginal_rank(const Instance& instance, const RankAssignment& ranks, VertexId v);

/// The unmatched neighbor of active vertex w that becomes matched once w is
/// removed. Throws NotActive if w is not active under these ranks.
std::optional<VertexId> find_victim(const Instance& instance, const RankAssignment& ranks, VertexId w);

/// Gain sharing followed by compensation. Throws ChargingInvalid if the
/// charging function fails check_properties.
DualAssignment assign_duals(const Instance& instance, const RankAssignment& ranks, const ChargingFunction& charging);

struct EdgeEstimate {
  VertexId u = 0;
  VertexId v = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

/// Monte Carlo estimate of E_y[α_u + α_v] over fresh uniform ranks.
EdgeEstimate estimate_edge_cover(const Instance& instance, Edge edge, const ChargingFunction& charging,
                                 std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

struct FeasibilityReport {
  std::vector<EdgeEstimate> edges;  // instance edge order
  std::vector<std::size_t> failing;  // indices with mean + 3·stderr < target
  double target = 0.0;
  double min_mean = 0.0;
  std::int64_t trials = 0;
  /// Trials in which Σα differed from |M| by more than 1e-9.
  std::int64_t sum_violations = 0;

  bool pass() const { return failing.empty() && sum_violations == 0; }
};

/// Estimates every edge from one shared stream of rank draws (trial i uses
/// substream i of `seed`), so all edges see identical samples.
FeasibilityReport verify_feasibility(const Instance& instance, const ChargingFunction& charging, double target,
                                     std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

/// Exact E_y[α_u + α_v] by summing over all rank orders and integrating the
/// order statistics in closed form. Throws TooLarge above kExactVertexLimit.
double exact_edge_cover(const Instance& instance, Edge edge, const ChargingFunction& charging);
inline constexpr int kExactVertexLimit = 7;

}  // namespace fomlab
