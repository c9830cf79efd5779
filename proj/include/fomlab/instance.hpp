#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fomlab/error.hpp"

namespace fomlab {

using VertexId = int;

enum class EventKind : std::uint8_t { Arrival, Deadline };

struct Event {
  EventKind kind;
  VertexId vertex;

  friend bool operator==(const Event&, const Event&) = default;
};

using Edge = std::pair<VertexId, VertexId>;

/// A fully online matching instance: n vertices, an interleaved stream of
/// 2n arrival/deadline events and an undirected edge set. Every edge has
/// both endpoints arrived before either endpoint's deadline.
///
/// Instances are immutable once built. Use build_instance() (or one of the
/// generators) to obtain one; construction validates all model guarantees.
class Instance {
 public:
  Instance() = default;

  int size() const noexcept { return n_; }
  std::span<const Event> events() const noexcept { return events_; }
  /// Edges as supplied (orientation and order preserved).
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  int degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Per-vertex side (0/1) when a two-coloring witness was supplied.
  const std::optional<std::vector<int>>& bipartition() const noexcept { return bipartition_; }
  bool is_bipartite_witnessed() const noexcept { return bipartition_.has_value(); }

  int arrival_position(VertexId v) const { return arrival_pos_[v]; }
  int deadline_position(VertexId v) const { return deadline_pos_[v]; }
  /// Index of v among the deadlines (0 = earliest).
  int deadline_order(VertexId v) const { return deadline_index_[v]; }
  bool earlier_deadline(VertexId a, VertexId b) const { return deadline_pos_[a] < deadline_pos_[b]; }
  /// Vertices in deadline order.
  std::span<const VertexId> deadline_sequence() const noexcept { return deadline_sequence_; }

  bool has_edge(VertexId a, VertexId b) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.events_ == b.events_ && a.edges_ == b.edges_ &&
           a.bipartition_ == b.bipartition_;
  }

 private:
  friend Instance build_instance(int, std::vector<Event>, std::vector<Edge>,
                                 std::optional<std::vector<int>>);

  int n_ = 0;
  std::vector<Event> events_;
  std::vector<Edge> edges_;
  std::optional<std::vector<int>> bipartition_;

  std::vector<int> arrival_pos_;
  std::vector<int> deadline_pos_;
  std::vector<int> deadline_index_;
  std::vector<VertexId> deadline_sequence_;
  std::vector<int> offsets_{0};
  std::vector<VertexId> adjacency_;  // each list sorted ascending
};

/// Validates and builds an instance.
///
/// Throws Error with MalformedEvents, EdgeViolatesModel, SelfLoop,
/// DuplicateEdge, IndexOutOfRange or NotBipartite (witness inconsistent).
Instance build_instance(int n, std::vector<Event> events, std::vector<Edge> edges,
                        std::optional<std::vector<int>> bipartition = std::nullopt);

/// One-sided online model encoded as a fully online instance. Offline
/// vertices are 0..offline_count-1; online vertex j gets id offline_count+j.
Instance from_one_sided(int offline_count, const std::vector<std::vector<VertexId>>& online_adjacency);

/// Random instance: uniform valid event stream, each candidate pair kept
/// with probability edge_prob unless it would violate the model guarantee.
Instance random_instance(int n, double edge_prob, bool bipartite, std::uint64_t seed);

/// All arrivals first, then deadlines in id order. Used for canonical
/// small instances where only deadline order matters.
Instance canonical_instance(int n, std::vector<Edge> edges,
                            std::optional<std::vector<int>> bipartition = std::nullopt);

/// Two-coloring of the graph if one exists.
std::optional<std::vector<int>> find_two_coloring(int n, std::span<const Edge> edges);

// JSON instance files: {"n", "events": [{"kind","v"}], "edges": [[u,v]], "bipartition": [...]|null}
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
void save_instance(const Instance& instance, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

}  // namespace fomlab
