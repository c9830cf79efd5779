#include "fomlab/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>

#include "fomlab/engine.hpp"
#include "fomlab/oracle.hpp"
#include "fomlab/parallel.hpp"
#include "fomlab/rng.hpp"

namespace fomlab {

namespace {

constexpr std::size_t kBlock = 16;

double int_pow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Instance gen_adversary_tree(const AdversaryTreeParams& params) {
  const int k = params.k;
  const int h = params.h;
  if (k < 1 || h < 1) throw Error(ErrorCode::ParamsInvalid, "adversary tree needs k >= 1 and h >= 1");
  double per_side = 0.0;
  for (int i = 0; i <= h; ++i) per_side += int_pow(k, i);
  const double leaves = int_pow(k, h);
  const double edge_estimate = per_side * (k + 1) + leaves * (leaves + 1) / 2;
  if (2 * per_side > kMaxGeneratedVertices || edge_estimate > 4.0 * kMaxGeneratedVertices) {
    throw Error(ErrorCode::ParamsInvalid, "adversary tree with k=" + std::to_string(k) + ", h=" + std::to_string(h) +
                                              " is too large to materialize");
  }

  Rng rng(params.seed);
  const int n = static_cast<int>(2 * per_side);
  std::vector<Event> events;
  events.reserve(2 * n);
  std::vector<Edge> edges;
  std::vector<int> side(n, 0);
  std::vector<VertexId> pendants;
  int next_id = 0;
  const auto arrive = [&](int s) {
    const VertexId id = next_id++;
    side[id] = s;
    events.push_back({EventKind::Arrival, id});
    return id;
  };

  std::vector<VertexId> level{arrive(0)};
  for (int depth = 0; depth < h; ++depth) {
    std::vector<VertexId> next;
    next.reserve(level.size() * k);
    for (const VertexId u : level) {
      std::vector<VertexId> children;
      for (int c = 0; c <= k; ++c) {
        children.push_back(arrive(1 - side[u]));
        edges.emplace_back(u, children.back());
      }
      const auto pendant = static_cast<std::size_t>(rng.below(k + 1));
      for (std::size_t c = 0; c < children.size(); ++c) {
        if (c == pendant) {
          pendants.push_back(children[c]);
        } else {
          next.push_back(children[c]);
        }
      }
      events.push_back({EventKind::Deadline, u});
    }
    level = std::move(next);
  }

  // level now holds the leaves; B-vertex j sees leaves j.. of a random order.
  rng.shuffle(level.begin(), level.end());
  const int leaf_side = side[level.front()];
  for (std::size_t j = 0; j < level.size(); ++j) {
    const VertexId b = arrive(1 - leaf_side);
    for (std::size_t a = j; a < level.size(); ++a) edges.emplace_back(b, level[a]);
    events.push_back({EventKind::Deadline, b});
  }
  for (const VertexId v : pendants) events.push_back({EventKind::Deadline, v});
  for (const VertexId a : level) events.push_back({EventKind::Deadline, a});
  return build_instance(n, std::move(events), std::move(edges), std::move(side));
}

Instance gen_ranking_hard(const LayeredParams& params) {
  const int k = params.k;
  const int h = params.h;
  if (k < 1 || h < 1) throw Error(ErrorCode::ParamsInvalid, "layered instance needs k >= 1 and h >= 1");
  if (2.0 * k * h > kMaxGeneratedVertices) throw Error(ErrorCode::ParamsInvalid, "layered instance too large");
  const int n = k * h;
  std::vector<Event> events;
  events.reserve(4 * n);
  for (int v = 0; v < 2 * n; ++v) events.push_back({EventKind::Arrival, v});
  for (int v = 0; v < 2 * n; ++v) events.push_back({EventKind::Deadline, v});

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) + static_cast<std::size_t>(k) * k * (h - 1));
  std::vector<int> side(2 * n);
  for (int i = 0; i < n; ++i) {
    side[i] = (i / k) % 2;
    side[n + i] = 1 - side[i];
    edges.emplace_back(i, n + i);
  }
  for (int g = 0; g + 1 < h; ++g) {
    for (int a = g * k; a < (g + 1) * k; ++a) {
      for (int b = (g + 1) * k; b < (g + 2) * k; ++b) edges.emplace_back(a, b);
    }
  }
  return build_instance(2 * n, std::move(events), std::move(edges), std::move(side));
}

std::vector<double> p_recurrence(int k, int imax, double p0) {
  std::vector<double> p{p0};
  for (int i = 1; i <= imax; ++i) p.push_back((1.0 - p.back()) / (k + 1.0));
  return p;
}

double p_closed_form(int k, int i) {
  return (1.0 - std::pow(-1.0 / (k + 1.0), i)) / (k + 2.0);
}

double water_filling(double big_k, double target) {
  if (!(big_k >= 1.0) || target < 0.0) throw Error(ErrorCode::ParamsInvalid, "water filling needs K >= 1, target >= 0");
  if (big_k <= 1e7) {
    const auto terms = static_cast<std::int64_t>(big_k);
    double acc = 0.0;
    for (std::int64_t m = 0; m < terms; ++m) {
      const double term = 1.0 / (big_k - static_cast<double>(m));
      if (acc + term >= target) return static_cast<double>(m) + (target - acc) / term;
      acc += term;
    }
    throw Error(ErrorCode::ParamsInvalid, "water-filling target exceeds the harmonic sum");
  }
  // Σ_{j<m} 1/(K−j) = ψ(K+1) − ψ(K−m+1); bisect on the integer m.
  using boost::math::digamma;
  const auto partial = [&](double m) { return digamma(big_k + 1.0) - digamma(big_k - m + 1.0); };
  double lo = 0.0, hi = big_k;
  if (partial(hi) < target) throw Error(ErrorCode::ParamsInvalid, "water-filling target exceeds the harmonic sum");
  while (hi - lo > 1.0) {
    const double mid = std::floor((lo + hi) / 2.0);
    (partial(mid) <= target ? lo : hi) = mid;
  }
  return lo + (target - partial(lo)) * (big_k - lo);
}

AdversaryPrediction adversary_ratio(int k, int h) {
  if (k < 2 || h < 1) throw Error(ErrorCode::ParamsInvalid, "adversary_ratio needs k >= 2 and h >= 1");
  AdversaryPrediction out;
  out.k = k;
  out.h = h;
  const auto p = p_recurrence(k, h, 0.0);
  out.p_h = p.back();
  out.p_h_seed_one = p_recurrence(k, h, 1.0).back();

  const double leaves = int_pow(k, h);
  double per_side = 0.0;
  for (int i = 0; i <= h; ++i) per_side += int_pow(k, i);

  out.t = water_filling(leaves, 1.0 - out.p_h);
  out.t_fraction = out.t / leaves;

  // Matched vertices: every internal U-vertex, pendants at level i with
  // probability p_i, leaves taken by their parent with probability p_h, and
  // both endpoints of the t expected B-matches.
  double pendants = 0.0;
  for (int i = 1; i <= h; ++i) pendants += int_pow(k, i - 1) * p[i];
  const double matched = (per_side - leaves) + pendants + leaves * out.p_h + 2.0 * out.t;
  out.ratio_finite = matched / (2.0 * per_side);

  const double e = std::exp(-(k + 1.0) / (k + 2.0));
  out.ratio_display = (2.0 * (1.0 - e) * leaves * (k - 1.0) + leaves - 1.0) / (2.0 * (leaves * k - 1.0)) +
                      1.0 / (2.0 * (k + 2.0));
  out.ratio_asymptotic = (k - 1.0) / k * (1.0 - e) + 1.0 / (2.0 * k) + 1.0 / (2.0 * (k + 2.0));
  return out;
}

double omega_fixed_point() {
  // Newton on x·e^x − 1, which converges quadratically from 0.5.
  double x = 0.5;
  for (int i = 0; i < 100; ++i) {
    const double ex = std::exp(x);
    const double step = (x * ex - 1.0) / (ex * (x + 1.0));
    x -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return x;
}

FluidPrediction fluid_recurrence(int k, int h) {
  if (k < 1 || h < 1) throw Error(ErrorCode::ParamsInvalid, "fluid_recurrence needs k >= 1 and h >= 1");
  FluidPrediction out;
  out.k = k;
  out.h = h;
  out.omega = omega_fixed_point();
  const double keep = static_cast<double>(k) / (k + 1.0);
  double x = 1.0, y = 1.0;
  for (int i = 0; i < h; ++i) {
    out.fluid.push_back(x);
    out.mean_field.push_back(y);
    x = std::exp(-x);
    y = std::pow(keep, k * y);
  }
  double limit = 1.0;
  for (int i = 0; i < 10000; ++i) {
    const double next = std::exp(-limit);
    if (next == limit) break;
    limit = next;
  }
  out.fluid_limit = limit;
  const auto mean = [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double v : xs) s += v;
    return s / static_cast<double>(xs.size());
  };
  out.ratio_fluid = mean(out.fluid);
  out.ratio_mean_field = mean(out.mean_field);
  return out;
}

namespace {

struct TrialSums {
  double sum = 0.0;
  double sumsq = 0.0;
};

RatioEstimate finish(const std::vector<TrialSums>& blocks, std::int64_t trials) {
  double sum = 0.0, sumsq = 0.0;
  for (const auto& b : blocks) {
    sum += b.sum;
    sumsq += b.sumsq;
  }
  const double n = static_cast<double>(trials);
  RatioEstimate r;
  r.trials = trials;
  r.mean = sum / n;
  const double var = trials > 1 ? std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0)) : 0.0;
  r.std_error = std::sqrt(var / n);
  return r;
}

double run_once(const Instance& instance, Algorithm algorithm, std::uint64_t seed, RankAssignment& ranks,
                MatchingOutcome& out) {
  if (algorithm == Algorithm::Greedy) {
    out = run_greedy(instance);
  } else {
    sample_ranks_into(ranks, instance.size(), seed);
    RankingRunner(instance).run(ranks, -1, out);
  }
  return out.size();
}

}  // namespace

RatioEstimate empirical_ratio(const Instance& instance, Algorithm algorithm, std::int64_t trials,
                              std::uint64_t seed, unsigned workers) {
  if (trials < 1) throw Error(ErrorCode::ParamsInvalid, "trials must be >= 1");
  if (workers == 0) workers = default_parallelism();
  const int opt = max_matching(instance).size;
  const auto count = static_cast<std::size_t>(trials);
  std::vector<TrialSums> blocks((count + kBlock - 1) / kBlock);
  parallel_blocks(count, kBlock, workers, [&](std::size_t block, std::size_t begin, std::size_t end) {
    RankAssignment ranks;
    MatchingOutcome out;
    for (std::size_t t = begin; t < end; ++t) {
      const double size = run_once(instance, algorithm, substream_seed(seed, t), ranks, out);
      const double ratio = opt == 0 ? 1.0 : size / opt;
      blocks[block].sum += ratio;
      blocks[block].sumsq += ratio * ratio;
    }
  });
  auto r = finish(blocks, trials);
  r.opt = opt;
  return r;
}

RatioEstimate empirical_ratio(const std::function<Instance(std::uint64_t)>& generator, Algorithm algorithm,
                              std::int64_t trials, std::uint64_t seed, unsigned workers) {
  if (trials < 1) throw Error(ErrorCode::ParamsInvalid, "trials must be >= 1");
  if (workers == 0) workers = default_parallelism();
  const auto count = static_cast<std::size_t>(trials);
  std::vector<TrialSums> blocks((count + kBlock - 1) / kBlock);
  parallel_blocks(count, kBlock, workers, [&](std::size_t block, std::size_t begin, std::size_t end) {
    RankAssignment ranks;
    MatchingOutcome out;
    for (std::size_t t = begin; t < end; ++t) {
      const std::uint64_t trial_seed = substream_seed(seed, t);
      const Instance instance = generator(trial_seed);
      const int opt = max_matching(instance).size;
      const double size = run_once(instance, algorithm, mix_seed(trial_seed), ranks, out);
      const double ratio = opt == 0 ? 1.0 : size / opt;
      blocks[block].sum += ratio;
      blocks[block].sumsq += ratio * ratio;
    }
  });
  return finish(blocks, trials);
}

}  // namespace fomlab
