#include "fomlab/engine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fomlab/rng.hpp"

namespace fomlab {

namespace {

void reset(MatchingOutcome& out, int n) {
  out.pairs.clear();
  out.partner.assign(n, -1);
  out.role.assign(n, Role::Unmatched);
}

void link(MatchingOutcome& out, VertexId active, VertexId passive) {
  out.pairs.emplace_back(active, passive);
  out.partner[active] = passive;
  out.partner[passive] = active;
  out.role[active] = Role::Active;
  out.role[passive] = Role::Passive;
}

void check_ranks(const Instance& instance, const RankAssignment& ranks) {
  if (ranks.rank.size() != static_cast<std::size_t>(instance.size()) ||
      ranks.side.size() != ranks.rank.size()) {
    throw Error(ErrorCode::RankMissing, "rank assignment covers " + std::to_string(ranks.rank.size()) +
                                            " of " + std::to_string(instance.size()) + " vertices");
  }
}

template <typename Better>
void run_lazy(const Instance& instance, VertexId removed, MatchingOutcome& out, Better&& better,
              std::vector<TraceEntry>* trace, const RankAssignment* ranks) {
  reset(out, instance.size());
  if (trace) trace->clear();
  for (const VertexId v : instance.deadline_sequence()) {
    if (v == removed) continue;
    const double own_rank = ranks ? ranks->rank[v] : std::numeric_limits<double>::quiet_NaN();
    if (out.partner[v] >= 0) {
      if (trace) trace->push_back({v, TraceEntry::Decision::AlreadyMatched, out.partner[v], own_rank});
      continue;
    }
    VertexId best = -1;
    for (const VertexId u : instance.neighbors(v)) {
      if (u == removed || out.partner[u] >= 0) continue;
      if (best < 0 || better(u, best)) best = u;
    }
    if (best >= 0) link(out, v, best);
    if (trace) {
      trace->push_back({v, best >= 0 ? TraceEntry::Decision::Matched : TraceEntry::Decision::NoCandidate, best,
                        own_rank});
    }
  }
}

}  // namespace

std::vector<VertexId> MatchingOutcome::unmatched() const {
  std::vector<VertexId> result;
  for (VertexId v = 0; v < static_cast<VertexId>(partner.size()); ++v) {
    if (partner[v] < 0) result.push_back(v);
  }
  return result;
}

void sample_ranks_into(RankAssignment& ranks, int n, std::uint64_t seed) {
  Rng rng(seed);
  ranks.rank.resize(n);
  ranks.side.assign(n, Side::At);
  for (int v = 0; v < n; ++v) ranks.rank[v] = rng.uniform();
}

RankAssignment sample_ranks(const Instance& instance, std::uint64_t seed) {
  RankAssignment ranks;
  sample_ranks_into(ranks, instance.size(), seed);
  return ranks;
}

RankingRunner::RankingRunner(const Instance& instance) : instance_(&instance) {}

void RankingRunner::run(const RankAssignment& ranks, VertexId removed, MatchingOutcome& out) const {
  check_ranks(*instance_, ranks);
  run_lazy(*instance_, removed, out, [&](VertexId a, VertexId b) { return ranks.key(a) < ranks.key(b); },
           nullptr, &ranks);
}

MatchingOutcome run_ranking(const Instance& instance, const RankAssignment& ranks, std::vector<TraceEntry>* trace) {
  check_ranks(instance, ranks);
  MatchingOutcome out;
  run_lazy(instance, -1, out, [&](VertexId a, VertexId b) { return ranks.key(a) < ranks.key(b); }, trace,
           &ranks);
  return out;
}

MatchingOutcome run_without(const Instance& instance, const RankAssignment& ranks, VertexId removed) {
  check_ranks(instance, ranks);
  if (removed < 0 || removed >= instance.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "cannot remove vertex " + std::to_string(removed));
  }
  MatchingOutcome out;
  run_lazy(instance, removed, out, [&](VertexId a, VertexId b) { return ranks.key(a) < ranks.key(b); }, nullptr,
           &ranks);
  return out;
}

MatchingOutcome run_greedy(const Instance& instance, std::vector<TraceEntry>* trace) {
  MatchingOutcome out;
  run_lazy(
      instance, -1, out,
      [&](VertexId a, VertexId b) {
        const int pa = instance.arrival_position(a);
        const int pb = instance.arrival_position(b);
        return pa != pb ? pa < pb : a < b;
      },
      trace, nullptr);
  return out;
}

std::string format_trace(const std::vector<TraceEntry>& trace) {
  std::ostringstream os;
  os.precision(12);
  for (const auto& t : trace) {
    os << "deadline " << t.vertex << ' ';
    switch (t.decision) {
      case TraceEntry::Decision::Matched: os << "match " << t.partner; break;
      case TraceEntry::Decision::AlreadyMatched: os << "already-matched " << t.partner; break;
      case TraceEntry::Decision::NoCandidate: os << "unmatched -"; break;
    }
    if (std::isnan(t.rank)) {
      os << " rank -";
    } else {
      os << " rank " << t.rank;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace fomlab
