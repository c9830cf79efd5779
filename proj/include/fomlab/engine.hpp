#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fomlab/instance.hpp"

namespace fomlab {

/// Rank side marker. JustBelow stands for y⁻: a value infinitesimally
/// smaller than the stored rank. It sorts before any At rank of equal value.
enum class Side : std::uint8_t { JustBelow, At };

struct RankKey {
  double rank;
  Side side;
  VertexId vertex;

  friend auto operator<=>(const RankKey&, const RankKey&) = default;
};

/// Per-vertex ranks in [0,1). The value 1 is admitted only with side
/// JustBelow, representing the limit 1⁻.
struct RankAssignment {
  std::vector<double> rank;
  std::vector<Side> side;

  RankAssignment() = default;
  explicit RankAssignment(std::vector<double> ranks)
      : rank(std::move(ranks)), side(rank.size(), Side::At) {}

  std::size_t size() const noexcept { return rank.size(); }
  RankKey key(VertexId v) const { return {rank[v], side[v], v}; }
  void set(VertexId v, double value, Side s = Side::At) {
    rank[v] = value;
    side[v] = s;
  }
};

RankAssignment sample_ranks(const Instance& instance, std::uint64_t seed);
/// Draws fresh uniform ranks into an existing buffer (no allocation once sized).
void sample_ranks_into(RankAssignment& ranks, int n, std::uint64_t seed);

enum class Role : std::uint8_t { Unmatched, Active, Passive };

struct MatchingOutcome {
  /// (active, passive) pairs in the order they were formed.
  std::vector<Edge> pairs;
  std::vector<VertexId> partner;  // -1 when unmatched
  std::vector<Role> role;

  int size() const noexcept { return static_cast<int>(pairs.size()); }
  bool matched(VertexId v) const { return partner[v] >= 0; }
  std::vector<VertexId> unmatched() const;

  friend bool operator==(const MatchingOutcome&, const MatchingOutcome&) = default;
};

/// One line per deadline event, in stream order.
struct TraceEntry {
  VertexId vertex;
  enum class Decision : std::uint8_t { Matched, AlreadyMatched, NoCandidate } decision;
  VertexId partner;  // -1 unless decision == Matched, or the earlier partner
  double rank;       // rank of the deadline vertex (NaN for greedy)
};

std::string format_trace(const std::vector<TraceEntry>& trace);

/// Ranking: at each deadline, an unmatched vertex matches its unmatched
/// neighbor of smallest rank key. Throws RankMissing if ranks do not cover
/// every vertex.
MatchingOutcome run_ranking(const Instance& instance, const RankAssignment& ranks,
                            std::vector<TraceEntry>* trace = nullptr);

/// Ranking on the instance with `removed` and its incident edges deleted.
/// `removed` is reported Unmatched with partner -1.
MatchingOutcome run_without(const Instance& instance, const RankAssignment& ranks, VertexId removed);

/// Deterministic greedy: the deadline vertex takes the unmatched neighbor
/// that arrived earliest.
MatchingOutcome run_greedy(const Instance& instance, std::vector<TraceEntry>* trace = nullptr);

/// Reusable scratch space for hot Monte Carlo loops.
class RankingRunner {
 public:
  explicit RankingRunner(const Instance& instance);
  /// Same semantics as run_ranking / run_without; result is overwritten.
  void run(const RankAssignment& ranks, VertexId removed, MatchingOutcome& out) const;

 private:
  const Instance* instance_;
};

}  // namespace fomlab
