#include "fomlab/instance.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "fomlab/rng.hpp"

namespace fomlab {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
}

}  // namespace

bool Instance::has_edge(VertexId a, VertexId b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) return false;
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

Instance build_instance(int n, std::vector<Event> events, std::vector<Edge> edges,
                        std::optional<std::vector<int>> bipartition) {
  if (n < 0) throw Error(ErrorCode::MalformedEvents, "negative vertex count");
  if (events.size() != 2 * static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::MalformedEvents,
                "expected " + std::to_string(2 * n) + " events, got " + std::to_string(events.size()));
  }

  Instance inst;
  inst.n_ = n;
  inst.arrival_pos_.assign(n, -1);
  inst.deadline_pos_.assign(n, -1);
  for (int pos = 0; pos < static_cast<int>(events.size()); ++pos) {
    const Event& ev = events[pos];
    if (ev.vertex < 0 || ev.vertex >= n) {
      throw Error(ErrorCode::MalformedEvents, "event for unknown vertex " + std::to_string(ev.vertex));
    }
    auto& slot = ev.kind == EventKind::Arrival ? inst.arrival_pos_[ev.vertex] : inst.deadline_pos_[ev.vertex];
    if (slot != -1) {
      throw Error(ErrorCode::MalformedEvents,
                  std::string("duplicate ") + (ev.kind == EventKind::Arrival ? "arrival" : "deadline") +
                      " for vertex " + std::to_string(ev.vertex));
    }
    if (ev.kind == EventKind::Deadline && inst.arrival_pos_[ev.vertex] == -1) {
      throw Error(ErrorCode::MalformedEvents, "deadline before arrival for vertex " + std::to_string(ev.vertex));
    }
    slot = pos;
  }
  // With exactly 2n events, no duplicates and no early deadlines, every
  // vertex has both events.

  std::set<Edge> seen;
  std::vector<std::vector<VertexId>> lists(n);
  for (const Edge& e : edges) {
    const auto [a, b] = e;
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "edge " + edge_str(e) + " references unknown vertex");
    }
    if (a == b) throw Error(ErrorCode::SelfLoop, "edge " + edge_str(e));
    if (!seen.insert(std::minmax(a, b)).second) throw Error(ErrorCode::DuplicateEdge, "edge " + edge_str(e));
    const int last_arrival = std::max(inst.arrival_pos_[a], inst.arrival_pos_[b]);
    const int first_deadline = std::min(inst.deadline_pos_[a], inst.deadline_pos_[b]);
    if (last_arrival > first_deadline) {
      throw Error(ErrorCode::EdgeViolatesModel,
                  "edge " + edge_str(e) + ": an endpoint arrives after the other's deadline");
    }
    lists[a].push_back(b);
    lists[b].push_back(a);
  }

  if (bipartition) {
    if (bipartition->size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::NotBipartite, "bipartition witness has wrong length");
    }
    for (int side : *bipartition) {
      if (side != 0 && side != 1) throw Error(ErrorCode::NotBipartite, "bipartition sides must be 0 or 1");
    }
    for (const Edge& e : edges) {
      if ((*bipartition)[e.first] == (*bipartition)[e.second]) {
        throw Error(ErrorCode::NotBipartite, "edge " + edge_str(e) + " does not cross the bipartition");
      }
    }
  }

  inst.offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    std::sort(lists[v].begin(), lists[v].end());
    inst.offsets_[v + 1] = inst.offsets_[v] + static_cast<int>(lists[v].size());
  }
  inst.adjacency_.reserve(inst.offsets_[n]);
  for (auto& list : lists) inst.adjacency_.insert(inst.adjacency_.end(), list.begin(), list.end());

  inst.deadline_index_.assign(n, 0);
  inst.deadline_sequence_.reserve(n);
  for (const Event& ev : events) {
    if (ev.kind == EventKind::Deadline) {
      inst.deadline_index_[ev.vertex] = static_cast<int>(inst.deadline_sequence_.size());
      inst.deadline_sequence_.push_back(ev.vertex);
    }
  }

  inst.events_ = std::move(events);
  inst.edges_ = std::move(edges);
  inst.bipartition_ = std::move(bipartition);
  return inst;
}

Instance from_one_sided(int offline_count, const std::vector<std::vector<VertexId>>& online_adjacency) {
  if (offline_count < 0) throw Error(ErrorCode::IndexOutOfRange, "negative offline count");
  const int online = static_cast<int>(online_adjacency.size());
  const int n = offline_count + online;
  std::vector<Event> events;
  events.reserve(2 * n);
  std::vector<Edge> edges;
  for (int v = 0; v < offline_count; ++v) events.push_back({EventKind::Arrival, v});
  for (int j = 0; j < online; ++j) {
    const VertexId id = offline_count + j;
    events.push_back({EventKind::Arrival, id});
    events.push_back({EventKind::Deadline, id});
    for (VertexId off : online_adjacency[j]) {
      if (off < 0 || off >= offline_count) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "online vertex " + std::to_string(j) + " lists offline neighbor " + std::to_string(off));
      }
      edges.emplace_back(off, id);
    }
  }
  for (int v = 0; v < offline_count; ++v) events.push_back({EventKind::Deadline, v});
  std::vector<int> sides(n, 0);
  std::fill(sides.begin() + offline_count, sides.end(), 1);
  return build_instance(n, std::move(events), std::move(edges), std::move(sides));
}

Instance random_instance(int n, double edge_prob, bool bipartite, std::uint64_t seed) {
  if (n < 0) throw Error(ErrorCode::ParamsInvalid, "negative vertex count");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw Error(ErrorCode::ParamsInvalid, "edge_prob outside [0,1]");
  Rng rng(seed);

  // A uniform shuffle of the multiset {0,0,1,1,...}; the first copy of each
  // vertex is its arrival, the second its deadline. This is uniform over
  // all valid event streams.
  std::vector<VertexId> slots;
  slots.reserve(2 * n);
  for (int v = 0; v < n; ++v) {
    slots.push_back(v);
    slots.push_back(v);
  }
  rng.shuffle(slots.begin(), slots.end());
  std::vector<Event> events;
  events.reserve(2 * n);
  std::vector<bool> arrived(n, false);
  std::vector<int> arrival(n), deadline(n);
  for (int pos = 0; pos < 2 * n; ++pos) {
    const VertexId v = slots[pos];
    if (!arrived[v]) {
      arrived[v] = true;
      arrival[v] = pos;
      events.push_back({EventKind::Arrival, v});
    } else {
      deadline[v] = pos;
      events.push_back({EventKind::Deadline, v});
    }
  }

  std::optional<std::vector<int>> sides;
  if (bipartite) {
    sides.emplace(n);
    for (int v = 0; v < n; ++v) (*sides)[v] = static_cast<int>(rng.below(2));
  }

  std::vector<Edge> edges;
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = a + 1; b < n; ++b) {
      if (sides && (*sides)[a] == (*sides)[b]) continue;
      if (!rng.bernoulli(edge_prob)) continue;
      if (std::max(arrival[a], arrival[b]) > std::min(deadline[a], deadline[b])) continue;
      edges.emplace_back(a, b);
    }
  }
  return build_instance(n, std::move(events), std::move(edges), std::move(sides));
}

Instance canonical_instance(int n, std::vector<Edge> edges, std::optional<std::vector<int>> bipartition) {
  std::vector<Event> events;
  events.reserve(2 * n);
  for (int v = 0; v < n; ++v) events.push_back({EventKind::Arrival, v});
  for (int v = 0; v < n; ++v) events.push_back({EventKind::Deadline, v});
  return build_instance(n, std::move(events), std::move(edges), std::move(bipartition));
}

std::optional<std::vector<int>> find_two_coloring(int n, std::span<const Edge> edges) {
  std::vector<std::vector<VertexId>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> color(n, -1);
  for (int s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (int y : adj[x]) {
        if (color[y] == -1) {
          color[y] = 1 - color[x];
          q.push(y);
        } else if (color[y] == color[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

}  // namespace fomlab
