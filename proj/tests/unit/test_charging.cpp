#include <gtest/gtest.h>

#include <cmath>

#include "fomlab/charging.hpp"
#include "fomlab/error.hpp"

using namespace fomlab;

namespace {

const ChargingFunction kExp = ChargingFunction::exponential();
const ChargingFunction kPw = ChargingFunction::piecewise();
const double kE = std::exp(1.0);

bool check_passes(const PropertyReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c.pass;
  }
  ADD_FAILURE() << "no check named " << name;
  return false;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::UsageError;
}

}  // namespace

TEST(Eval, Exponential) {
  EXPECT_NEAR(kExp.eval(Component::G, 0.0), 1.0 / kE, 1e-15);
  EXPECT_DOUBLE_EQ(kExp.eval(Component::G, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(kExp.eval(Component::H, 0.4), 0.0);
  EXPECT_EQ(code_of([] { kExp.eval(Component::G, 1.5); }), ErrorCode::OutOfDomain);
  EXPECT_EQ(code_of([] { kExp.eval(Component::G, -0.1); }), ErrorCode::OutOfDomain);
}

TEST(Eval, PiecewiseLimitsAtOne) {
  EXPECT_NEAR(kPw.eval(Component::Phi, kOneMinus), 0.21, 1e-12);
  EXPECT_NEAR(kPw.eval(Component::H, kOneMinus), 0.197, 1e-12);
  EXPECT_NEAR(kPw.eval(Component::G, kOneMinus), 0.593, 1e-12);
  EXPECT_DOUBLE_EQ(kPw.eval(Component::G, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(kPw.eval(Component::H, 1.0), 0.0);
  EXPECT_NEAR(kPw.g(0.2), 0.502, 1e-12);
  EXPECT_NEAR(kPw.h(0.2), 0.052, 1e-12);
}

TEST(Integrals, ClosedForms) {
  EXPECT_NEAR(kExp.g_integral(1.0), 1.0 - 1.0 / kE, 1e-14);
  EXPECT_NEAR(kPw.g_integral(1.0), 0.53805, 1e-12);
  EXPECT_NEAR(kPw.h_integral(1.0), 0.10795, 1e-12);
  // Midpoint-rule cross-check.
  for (const auto* c : {&kExp, &kPw}) {
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += c->g((i + 0.5) / n * 0.7);
    EXPECT_NEAR(sum * 0.7 / n, c->g_integral(0.7), 1e-9);
  }
}

TEST(Properties, KnownGood) {
  EXPECT_TRUE(check_properties(kExp).pass());
  EXPECT_TRUE(check_properties(kPw).pass());
  EXPECT_TRUE(check_properties(ChargingFunction::capped_exponential()).pass());
}

TEST(Properties, LargeCompensationSlopeBreaksPhi) {
  PiecewiseConstants c;
  c.kh1 = 1.6;
  const auto r = check_properties(ChargingFunction::piecewise(c));
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(check_passes(r, "phi_nonnegative"));
  EXPECT_LT(ChargingFunction::piecewise(c).phi(kOneMinus), 0.0);
}

TEST(Properties, ModerateCompensationSlopeStillFeasible) {
  // k_h¹ = 0.6 gives h(1⁻) = 0.299 and φ(1⁻) = 0.108 ≥ 0.
  PiecewiseConstants c;
  c.kh1 = 0.6;
  const auto f = ChargingFunction::piecewise(c);
  EXPECT_NEAR(f.h(kOneMinus), 0.299, 1e-12);
  EXPECT_NEAR(f.phi(kOneMinus), 0.108, 1e-12);
  EXPECT_TRUE(check_properties(f).pass());
}

TEST(Properties, SteeperSecondSlopeBreaksRatio) {
  PiecewiseConstants c;
  c.kh2 = 0.4;
  const auto r = check_properties(ChargingFunction::piecewise(c));
  EXPECT_FALSE(check_passes(r, "h_over_y_nonincreasing"));
  EXPECT_FALSE(check_passes(r, "piecewise_h_ratio_exact"));
}

TEST(Properties, DecreasingG) {
  PiecewiseConstants c;
  c.kg2 = -0.1;
  const auto r = check_properties(ChargingFunction::piecewise(c));
  EXPECT_FALSE(check_passes(r, "g_nondecreasing"));
}

TEST(ChargingJson, RoundTripAndNames) {
  for (const auto& c : {kExp, kPw, ChargingFunction::capped_exponential()}) {
    EXPECT_EQ(charging_from_json(charging_to_json(c)), c);
  }
  EXPECT_EQ(charging_by_name("exp"), kExp);
  EXPECT_EQ(charging_by_name("piecewise"), kPw);
  EXPECT_EQ(code_of([] { charging_by_name("cubic"); }), ErrorCode::UsageError);
}

TEST(FBipartite, Examples) {
  EXPECT_NEAR(f_bipartite(0.0, kExp).value, 1.0 / kE, 1e-9);
  EXPECT_NEAR(f_bipartite(0.0, kExp).theta, 0.0, 1e-12);
  EXPECT_NEAR(f_bipartite(1.0, kExp).value, 1.0 - 1.0 / kE, 1e-9);
  const double cross = 1.0 + std::log(1.0 - 1.0 / kE);
  EXPECT_NEAR(f_bipartite(cross, kExp).value, 1.0 - 1.0 / kE, 1e-9);
}

TEST(RatioBipartite, Exponential) {
  const double closed = (kE - 2.0) / kE + (1.0 - std::log(kE - 1.0)) * (1.0 - 1.0 / kE);
  EXPECT_NEAR(closed, 0.5541791069, 1e-10);
  const auto r = ratio_bipartite(kExp, {1e-3, true});
  EXPECT_GE(r.ratio, 0.5540);
  EXPECT_LE(r.ratio, 0.5545);
  EXPECT_NEAR(r.ratio, closed, 1e-6);
  EXPECT_NEAR(ratio_bipartite(kExp, {2e-4, true}).ratio, closed, 1e-7);
  EXPECT_EQ(r.points.size(), 1001u);
}

TEST(RatioBipartite, QuadratureConverges) {
  const double coarse = ratio_bipartite(kExp, {1e-3, true}).ratio;
  const double fine = ratio_bipartite(kExp, {5e-4, true}).ratio;
  EXPECT_LT(std::abs(coarse - fine), 1e-4);
}

TEST(RatioBipartite, DegenerateConstantG) {
  PiecewiseConstants c{0.3, 0.0, 0.0, 1.0, 0.0, 0.0};
  EXPECT_NEAR(ratio_bipartite(ChargingFunction::piecewise(c)).ratio, 0.0, 1e-12);
}

TEST(RatioBipartite, CappedExponential) {
  EXPECT_NEAR(ratio_bipartite(ChargingFunction::capped_exponential()).ratio, 0.5547, 5e-4);
}

TEST(Psi, Domain) {
  EXPECT_EQ(code_of([] { psi1(0.5, 0.6, 0.4, kPw); }), ErrorCode::OutOfDomain);
  EXPECT_EQ(code_of([] { psi1(0.5, 0.2, 1.0, kPw); }), ErrorCode::OutOfDomain);
  EXPECT_EQ(code_of([] { psi1(0.5, kOneMinus, 0.5, kPw); }), ErrorCode::OutOfDomain);
  EXPECT_EQ(code_of([] { psi2(0.5, 1.2, kPw); }), ErrorCode::OutOfDomain);
  EXPECT_NO_THROW(psi1(0.5, 0.2, kOneMinus, kPw));
  EXPECT_NO_THROW(psi1(0.5, 0.2, 0.2, kPw));
  EXPECT_NO_THROW(psi1(0.5, kOneMinus, kOneMinus, kPw));
}

TEST(Psi, Psi2AtOneMinusIsIntegralOfG) {
  for (double y : {0.0, 0.3, 0.8, 1.0}) {
    const double v = psi2(y, kOneMinus, kPw);
    EXPECT_GE(v, 0.53800);
    EXPECT_LE(v, 0.53810);
  }
}

TEST(Psi, Psi2StationaryPoint) {
  double best = 1e9, arg = -1;
  for (int i = 0; i <= 100000; ++i) {
    const double th = i / 100000.0 * 0.999;
    const double v = psi2(1.0, th, kPw);
    if (v < best) best = v, arg = th;
  }
  EXPECT_NEAR(arg, 0.03 / 0.11, 1e-3);
  EXPECT_NEAR(best, 0.5359, 5e-4);
}

TEST(Psi, Psi1StationaryPoint) {
  double best = 1e9, arg = -1;
  for (int i = 0; i <= 100000; ++i) {
    const double th = i / 100000.0 * 0.999;
    const double v = psi1(1.0, th, kOneMinus, kPw);
    if (v < best) best = v, arg = th;
  }
  EXPECT_NEAR(arg, 0.08 / 0.63, 1e-3);
  EXPECT_NEAR(best, 0.5349, 5e-4);
}

TEST(Psi, Psi2SecondDerivatives) {
  const auto second = [](double yu, double th) {
    const double d = 1e-3;
    return (psi2(yu, th + d, kPw) - 2 * psi2(yu, th, kPw) + psi2(yu, th - d, kPw)) / (d * d);
  };
  // g(y_u) < 1 − g(θ): y_u = 0 and θ below g⁻¹(0.54).
  EXPECT_NEAR(second(0.0, 0.15), -0.31, 1e-6);
  EXPECT_NEAR(second(0.0, 0.4), -0.24, 1e-6);
  // g(y_u) ≥ 1 − g(θ): y_u = 1.
  EXPECT_NEAR(second(1.0, 0.15), 0.11, 1e-6);
  EXPECT_NEAR(second(1.0, 0.6), -0.04, 1e-6);
}

TEST(Psi, Psi1NonIncreasingInTau) {
  // Holds where the φ(τ) branch is active, i.e. g(y_u) > φ(τ); φ decreases,
  // so that region is an upper interval of τ.
  int checked = 0;
  for (double yu : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double gu = kPw.g(yu);
    for (int i = 0; i < 100; ++i) {
      const double th = i / 100.0;
      double prev = 1e9;
      for (int j = i; j < 100; ++j) {
        const double tau = j / 100.0;
        if (!(gu > kPw.phi(tau))) continue;
        const double cur = psi1(yu, th, tau, kPw);
        ASSERT_LE(cur, prev + 1e-12) << yu << ' ' << th << ' ' << tau;
        prev = cur;
        ++checked;
      }
      if (gu > kPw.phi(kOneMinus)) ASSERT_LE(psi1(yu, th, kOneMinus, kPw), prev + 1e-12);
    }
  }
  EXPECT_GT(checked, 10000);
}

TEST(Psi, Psi1ConstantBranchGrowsWithTau) {
  // Where g(y_u) ≤ φ(τ) the τ-dependence is (τ−θ)h(θ), non-decreasing.
  EXPECT_GT(psi1(0.0, 0.01, 0.2, kPw), psi1(0.0, 0.01, 0.02, kPw));
}

TEST(Psi, Psi1AtEqualArgumentsDropsCompensation) {
  for (double yu : {0.0, 0.5, 1.0}) {
    for (double th : {0.0, 0.2, 0.5, 0.9}) {
      const double v1 = psi1(yu, th, th, kPw);
      const double expected = kPw.g_integral(th) + (1 - th) * std::min(kPw.g(yu), kPw.phi(th)) +
                              th * std::min(kPw.g(yu), kPw.phi(th));
      EXPECT_NEAR(v1, expected, 1e-12);
    }
  }
}

TEST(FGeneral, Examples) {
  const auto at0 = f_general(0.0, kPw, {1e-3, true});
  EXPECT_NEAR(at0.value(), 0.46, 1e-9);
  EXPECT_TRUE(at0.clamp_inactive);
  EXPECT_NEAR(at0.full.value, at0.simplified.value, 1e-12);
  EXPECT_GE(f_general(1.0, kPw, {1e-3, true}).value(), 0.5349 - 1e-9);
}

TEST(FGeneral, BoundedBelowOnCoarseGrid) {
  for (int i = 0; i <= 20; ++i) {
    const double y = i / 20.0;
    EXPECT_GE(f_general(y, kPw, {1e-2, true}).value() - std::min(kPw.g(y), 0.5349), -1e-9) << y;
  }
}

TEST(FGeneral, InvalidCharging) {
  PiecewiseConstants c;
  c.kh1 = 1.6;
  EXPECT_EQ(code_of([&] { f_general(0.5, ChargingFunction::piecewise(c)); }), ErrorCode::ChargingInvalid);
  EXPECT_EQ(code_of([&] { ratio_general(ChargingFunction::piecewise(c)); }), ErrorCode::ChargingInvalid);
}

TEST(RatioGeneral, LowerBoundCrossCheck) {
  const double y_star = 0.419;
  EXPECT_NEAR(kPw.g(y_star), 0.5349, 1e-12);
  const double cross = kPw.g_integral(y_star) + (1 - y_star) * 0.5349;
  EXPECT_NEAR(cross, 0.521172, 1e-6);
}

TEST(RatioGeneral, CoarseGridAboveTarget) {
  EXPECT_GT(ratio_general(kPw, {1e-2, true}).ratio, 0.5211);
}

TEST(RatioGeneral, ExponentialBelowBipartite) {
  const BoundGrid grid{1e-2, true};
  EXPECT_LE(ratio_general(kExp, grid).ratio, ratio_bipartite(kExp, grid).ratio + 1e-12);
}
