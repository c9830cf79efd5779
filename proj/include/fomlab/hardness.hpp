#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fomlab/instance.hpp"

namespace fomlab {

/// Random (k+1)-ary tree instance that defeats every online algorithm.
struct AdversaryTreeParams {
  int k = 2;
  int h = 1;
  std::uint64_t seed = 0;
};

/// Layered instance on which Ranking approaches the Omega constant.
struct LayeredParams {
  int k = 1;
  int h = 1;
};

/// Vertices are numbered in arrival order. Throws ParamsInvalid for k < 1,
/// h < 1 or more than kMaxGeneratedVertices vertices.
Instance gen_adversary_tree(const AdversaryTreeParams& params);

/// u_i = i−1 and its pendant v_i = n+i−1 for i = 1..n, n = k·h.
Instance gen_ranking_hard(const LayeredParams& params);

inline constexpr std::int64_t kMaxGeneratedVertices = 50'000'000;

struct AdversaryPrediction {
  int k = 0;
  int h = 0;
  double p_h = 0.0;          // recurrence seeded with p₀ = 0
  double p_h_seed_one = 0.0;  // the same recurrence seeded with p₀ = 1
  double t = 0.0;            // expected number of matched B-vertices (water-filling)
  double t_fraction = 0.0;   // t / k^h
  double ratio_finite = 0.0;
  double ratio_display = 0.0;  // finite-h display formula, reproduced verbatim
  double ratio_asymptotic = 0.0;
};

/// p_i = (1 − p_{i−1})/(k+1) for i = 0..imax, starting from p0.
std::vector<double> p_recurrence(int k, int imax, double p0 = 0.0);
/// (1/(k+2))·(1 − (−1/(k+1))^i).
double p_closed_form(int k, int i);
/// Smallest fractional t with Σ_{j<t} 1/(K−j) = target, interpolating
/// linearly inside the last term. Requires 0 ≤ target ≤ H_K.
double water_filling(double big_k, double target);

/// Throws ParamsInvalid unless k ≥ 2 and h ≥ 1.
AdversaryPrediction adversary_ratio(int k, int h);

/// Solution of x = e^{−x}.
double omega_fixed_point();

struct FluidPrediction {
  int k = 0;
  int h = 0;
  /// x₁ = 1, x_{i+1} = e^{−x_i}: fraction of each group still unmatched
  /// when its phase begins, in the k → ∞ limit.
  std::vector<double> fluid;
  /// Finite-k mean field: x_{i+1} = (k/(k+1))^{k·x_i}.
  std::vector<double> mean_field;
  double fluid_limit = 0.0;  // the recurrence iterated to convergence
  double omega = 0.0;
  /// Ratio predictions: the average of the per-group fractions.
  double ratio_fluid = 0.0;
  double ratio_mean_field = 0.0;
};

/// Throws ParamsInvalid unless k ≥ 1 and h ≥ 1.
FluidPrediction fluid_recurrence(int k, int h);

enum class Algorithm { Ranking, Greedy };

struct RatioEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  int opt = 0;  // only meaningful for a fixed instance
};

/// Mean of |M_alg| / OPT over `trials` rank draws on a fixed instance.
RatioEstimate empirical_ratio(const Instance& instance, Algorithm algorithm, std::int64_t trials,
                              std::uint64_t seed, unsigned workers = 0);

/// Same, drawing a fresh instance per trial from `generator(substream seed)`.
RatioEstimate empirical_ratio(const std::function<Instance(std::uint64_t)>& generator, Algorithm algorithm,
                              std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

}  // namespace fomlab
