#include "fomlab/dual.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "fomlab/parallel.hpp"
#include "fomlab/rng.hpp"

namespace fomlab {

namespace {

constexpr std::size_t kBlock = 1024;

void require_valid(const ChargingFunction& charging) {
  if (!check_properties(charging).pass()) {
    throw Error(ErrorCode::ChargingInvalid, "charging function '" + charging.name() + "' fails its properties");
  }
}

// Scratch state for computing duals repeatedly on one instance.
class DualWorkspace {
 public:
  DualWorkspace(const Instance& instance, const ChargingFunction& charging)
      : instance_(instance), charging_(charging), runner_(instance) {}

  void compute(const RankAssignment& ranks, DualAssignment& out) {
    const int n = instance_.size();
    runner_.run(ranks, -1, base_);
    out.alpha.assign(n, 0.0);
    out.gain.assign(n, 0.0);
    out.comp_in.assign(n, 0.0);
    out.comp_out.assign(n, 0.0);
    out.victim_of.assign(n, -1);
    out.matched_edges = base_.size();

    for (const auto& [active, passive] : base_.pairs) {
      const double share = charging_.g(UnitPoint(ranks.rank[passive], ranks.side[passive]));
      out.gain[passive] = share;
      out.gain[active] = 1.0 - share;
    }

    if (!charging_.zero_compensation()) {
      for (const auto& [active, passive] : base_.pairs) {
        const VertexId victim = victim_of(ranks, active);
        if (victim < 0) continue;
        if (victim == active) throw std::logic_error("vertex compensates itself");
        out.victim_of[active] = victim;
        const double amount = charging_.h(UnitPoint(ranks.rank[passive], ranks.side[passive]));
        out.comp_out[active] = amount;
        out.comp_in[victim] += amount;
      }
    }

    for (int v = 0; v < n; ++v) out.alpha[v] = out.gain[v] + out.comp_in[v] - out.comp_out[v];
  }

  /// Requires `w` active in the most recent base run.
  VertexId victim_of(const RankAssignment& ranks, VertexId w) {
    runner_.run(ranks, w, without_);
    VertexId victim = -1;
    for (const VertexId z : instance_.neighbors(w)) {
      if (base_.partner[z] < 0 && without_.partner[z] >= 0) {
        if (victim >= 0) throw std::logic_error("active vertex has more than one victim");
        victim = z;
      }
    }
    return victim;
  }

  const MatchingOutcome& base() const { return base_; }

 private:
  const Instance& instance_;
  const ChargingFunction& charging_;
  RankingRunner runner_;
  MatchingOutcome base_, without_;
};

struct Moments {
  std::vector<double> sum, sumsq;
  std::int64_t violations = 0;
};

FeasibilityReport run_trials(const Instance& instance, const std::vector<Edge>& edges,
                             const ChargingFunction& charging, double target, std::int64_t trials,
                             std::uint64_t seed, unsigned workers) {
  require_valid(charging);
  if (trials < 1) throw Error(ErrorCode::ParamsInvalid, "trials must be >= 1");
  for (const auto& [a, b] : edges) {
    if (!instance.has_edge(a, b)) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "(" + std::to_string(a) + "," + std::to_string(b) + ") is not an instance edge");
    }
  }
  if (workers == 0) workers = default_parallelism();

  const std::size_t count = static_cast<std::size_t>(trials);
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<Moments> partial(blocks);
  parallel_blocks(count, kBlock, workers, [&](std::size_t block, std::size_t begin, std::size_t end) {
    DualWorkspace ws(instance, charging);
    RankAssignment ranks;
    DualAssignment duals;
    Moments& m = partial[block];
    m.sum.assign(edges.size(), 0.0);
    m.sumsq.assign(edges.size(), 0.0);
    for (std::size_t trial = begin; trial < end; ++trial) {
      sample_ranks_into(ranks, instance.size(), substream_seed(seed, trial));
      ws.compute(ranks, duals);
      const double total = std::accumulate(duals.alpha.begin(), duals.alpha.end(), 0.0);
      if (std::abs(total - duals.matched_edges) > 1e-9) ++m.violations;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const double x = duals.alpha[edges[e].first] + duals.alpha[edges[e].second];
        m.sum[e] += x;
        m.sumsq[e] += x * x;
      }
    }
  });

  FeasibilityReport report;
  report.target = target;
  report.trials = trials;
  std::vector<double> sum(edges.size(), 0.0), sumsq(edges.size(), 0.0);
  for (const auto& m : partial) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      sum[e] += m.sum[e];
      sumsq[e] += m.sumsq[e];
    }
    report.sum_violations += m.violations;
  }
  const double n = static_cast<double>(trials);
  report.min_mean = edges.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    EdgeEstimate est;
    est.u = edges[e].first;
    est.v = edges[e].second;
    est.trials = trials;
    est.mean = sum[e] / n;
    const double var = trials > 1 ? std::max(0.0, (sumsq[e] - sum[e] * sum[e] / n) / (n - 1.0)) : 0.0;
    est.std_error = std::sqrt(var / n);
    report.min_mean = std::min(report.min_mean, est.mean);
    if (est.mean + 3.0 * est.std_error < target) report.failing.push_back(e);
    report.edges.push_back(est);
  }
  return report;
}

}  // namespace

double marginal_rank(const Instance& instance, const RankAssignment& ranks, VertexId v) {
  if (ranks.size() != static_cast<std::size_t>(instance.size()) || ranks.side.size() != ranks.size()) {
    throw Error(ErrorCode::RankMissing, "rank assignment does not cover the instance");
  }
  if (v < 0 || v >= instance.size()) throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(v));

  // The matching only changes when y_v crosses another vertex's rank, so it
  // suffices to probe just below each of them (and just below 1).
  std::vector<double> candidates{1.0};
  for (VertexId u = 0; u < instance.size(); ++u) {
    if (u != v) candidates.push_back(ranks.rank[u]);
  }
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  RankAssignment probe = ranks;
  RankingRunner runner(instance);
  MatchingOutcome out;
  for (const double c : candidates) {
    probe.set(v, c, Side::JustBelow);
    runner.run(probe, -1, out);
    if (out.role[v] == Role::Passive) return c;
  }
  return 0.0;
}

std::optional<VertexId> find_victim(const Instance& instance, const RankAssignment& ranks, VertexId w) {
  if (w < 0 || w >= instance.size()) throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(w));
  const auto base = run_ranking(instance, ranks);
  if (base.role[w] != Role::Active) throw Error(ErrorCode::NotActive, "vertex " + std::to_string(w) + " is not active");
  const auto without = run_without(instance, ranks, w);
  std::optional<VertexId> victim;
  for (const VertexId z : instance.neighbors(w)) {
    if (!base.matched(z) && without.matched(z)) {
      if (victim) throw std::logic_error("active vertex has more than one victim");
      victim = z;
    }
  }
  return victim;
}

DualAssignment assign_duals(const Instance& instance, const RankAssignment& ranks, const ChargingFunction& charging) {
  require_valid(charging);
  DualWorkspace ws(instance, charging);
  DualAssignment out;
  ws.compute(ranks, out);
  return out;
}

EdgeEstimate estimate_edge_cover(const Instance& instance, Edge edge, const ChargingFunction& charging,
                                 std::int64_t trials, std::uint64_t seed, unsigned workers) {
  return run_trials(instance, {edge}, charging, 0.0, trials, seed, workers).edges.front();
}

FeasibilityReport verify_feasibility(const Instance& instance, const ChargingFunction& charging, double target,
                                     std::int64_t trials, std::uint64_t seed, unsigned workers) {
  const std::vector<Edge> edges(instance.edges().begin(), instance.edges().end());
  return run_trials(instance, edges, charging, target, trials, seed, workers);
}

double exact_edge_cover(const Instance& instance, Edge edge, const ChargingFunction& charging) {
  const int n = instance.size();
  if (n > kExactVertexLimit) {
    throw Error(ErrorCode::TooLarge, "exact expectation limited to " + std::to_string(kExactVertexLimit) + " vertices");
  }
  if (!instance.has_edge(edge.first, edge.second)) throw Error(ErrorCode::IndexOutOfRange, "not an instance edge");
  require_valid(charging);

  // Over the region where the rank order is fixed, a term F(y_j) with j in
  // position k integrates to ∫ F(x)·x^k (1−x)^{n−1−k} / (k!(n−1−k)!) dx.
  std::vector<double> cuts{0.0};
  for (double bp : charging.breakpoints()) cuts.push_back(bp);
  cuts.push_back(1.0);
  const auto order_integral = [&](auto&& f, int k) {
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      total += boost::math::quadrature::gauss<double, 30>::integrate(
          [&](double x) { return f(x) * std::pow(x, k) * std::pow(1.0 - x, n - 1 - k); }, cuts[s], cuts[s + 1]);
    }
    return total / (std::tgamma(k + 1.0) * std::tgamma(static_cast<double>(n - k)));
  };
  std::vector<double> one(n), gint(n), hint(n);
  for (int k = 0; k < n; ++k) {
    one[k] = order_integral([](double) { return 1.0; }, k);
    gint[k] = order_integral([&](double x) { return charging.g(x); }, k);
    hint[k] = order_integral([&](double x) { return charging.h(x); }, k);
  }

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> position(n);
  RankAssignment ranks(std::vector<double>(n, 0.0));
  DualWorkspace ws(instance, charging);
  DualAssignment duals;
  const auto [a, b] = edge;
  const auto weight = [&](VertexId x) { return (x == a ? 1 : 0) + (x == b ? 1 : 0); };

  double expectation = 0.0;
  do {
    for (int k = 0; k < n; ++k) {
      position[order[k]] = k;
      ranks.rank[order[k]] = (k + 1.0) / (n + 1.0);
    }
    ws.compute(ranks, duals);
    for (const auto& [active, passive] : ws.base().pairs) {
      const int k = position[passive];
      expectation += weight(passive) * gint[k] + weight(active) * (one[k] - gint[k]);
      const VertexId victim = duals.victim_of[active];
      if (victim >= 0) expectation += (weight(victim) - weight(active)) * hint[k];
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return expectation;
}

}  // namespace fomlab
