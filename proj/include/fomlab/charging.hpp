#pragma once

#include <string>
#include <vector>

#include "fomlab/engine.hpp"

namespace fomlab {

enum class ChargingKind { ExponentialBipartite, PiecewiseGeneral, CappedExponential };

/// Two-segment piecewise-linear g and h with a shared breakpoint t:
///   g(x) = kg1·x + b                 on [0,t],  kg2·(x−t) + kg1·t + b on (t,1),  g(1) = 1
///   h(x) = kh1·x                     on [0,t],  kh2·(x−t) + kh1·t     on (t,1),  h(1) = 0
struct PiecewiseConstants {
  double t = 0.3;
  double kg1 = 0.21;
  double kg2 = 0.1;
  double b = 0.46;
  double kh1 = 0.26;
  double kh2 = 0.17;

  friend bool operator==(const PiecewiseConstants&, const PiecewiseConstants&) = default;
};

/// A point of [0,1] with an optional "just below" marker. Only x = 1 is
/// affected in practice: the charging functions jump there.
struct UnitPoint {
  double x;
  Side side = Side::At;

  UnitPoint(double value, Side s = Side::At) : x(value), side(s) {}  // NOLINT(implicit)
};

inline const UnitPoint kOneMinus{1.0, Side::JustBelow};

enum class Component { G, H, Phi };

/// A (g, h) pair used to split matched-edge gains and compensations.
class ChargingFunction {
 public:
  static ChargingFunction exponential();
  static ChargingFunction piecewise(const PiecewiseConstants& c = {});
  /// g(y) = min{1, e^{y−1} + lift}, h ≡ 0.
  static ChargingFunction capped_exponential(double lift = 0.0128);

  ChargingKind kind() const noexcept { return kind_; }
  const PiecewiseConstants& constants() const noexcept { return pw_; }
  double lift() const noexcept { return lift_; }

  /// Throws OutOfDomain unless 0 ≤ x ≤ 1.
  double eval(Component which, UnitPoint p) const;

  // Unchecked evaluators for hot loops; x must lie in [0,1].
  double g(UnitPoint p) const;
  double h(UnitPoint p) const;
  double phi(UnitPoint p) const { return 1.0 - g(p) - h(p); }

  /// Closed-form ∫₀^θ g and ∫₀^θ h (θ ∈ [0,1]).
  double g_integral(double theta) const;
  double h_integral(double theta) const;

  /// h vanishes identically, so no compensation is ever paid.
  bool zero_compensation() const;

  /// Interior breakpoints of g and h (excluding 0 and 1).
  std::vector<double> breakpoints() const;

  std::string name() const;

  friend bool operator==(const ChargingFunction&, const ChargingFunction&) = default;

 private:
  ChargingKind kind_ = ChargingKind::ExponentialBipartite;
  PiecewiseConstants pw_{};
  double lift_ = 0.0;
};

/// "exp" / "exponential", "piecewise", "capped". Throws UsageError otherwise.
ChargingFunction charging_by_name(const std::string& name);

// JSON form: {"kind": "...", "constants": {...}}
std::string charging_to_json(const ChargingFunction& c);
ChargingFunction charging_from_json(const std::string& text);

struct PropertyCheck {
  std::string name;
  bool pass;
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool pass() const;
};

/// Checks monotonicity of g and h, g(1) = 1, h(1) = 0, h(y)/y
/// non-increasing and φ ≥ 0 on a dense grid plus every breakpoint, with
/// exact slope checks for the piecewise kind.
PropertyReport check_properties(const ChargingFunction& c);

// ---------------------------------------------------------------------------
// Competitive-ratio bounds

struct BoundGrid {
  double step = 1e-3;
  /// After the grid sweep, re-sweep ±step around the argmin at step/100.
  bool refine = true;
};

/// Minimizer of the per-y_u lower bound.
struct BoundPoint {
  double y_u = 0.0;
  double value = 0.0;
  double theta = 0.0;
  double tau = 0.0;  // 1 stands for 1⁻ when tau_limit is set; unused for bipartite
  bool tau_limit = false;
  int branch = 0;  // 1: compensation branch (ψ₁-type), 2: unmatched-partner branch (ψ₂-type)
};

struct BoundReport {
  double ratio = 0.0;
  double grid_step = 0.0;
  std::vector<BoundPoint> points;  // one per y_u grid node
};

/// min over θ ∈ [0,1] of ∫₀^θ g + min{1 − g(θ), g(y_u)}. h is ignored.
BoundPoint f_bipartite(UnitPoint y_u, const ChargingFunction& c, const BoundGrid& grid = {});
BoundReport ratio_bipartite(const ChargingFunction& c, const BoundGrid& grid = {});

double psi1(UnitPoint y_u, UnitPoint theta, UnitPoint tau, const ChargingFunction& c);
double psi2(UnitPoint y_u, UnitPoint theta, const ChargingFunction& c);

/// The general-graph per-y_u bound in both forms: the simplified two-branch
/// form min{min ψ₁, min ψ₂} and the full form with the (1−θ)φ(1⁻) clamps.
struct GeneralBound {
  BoundPoint full;
  BoundPoint simplified;
  /// φ(1⁻) ≥ h(1⁻), which makes the clamps inactive and the forms equal.
  bool clamp_inactive = false;
  /// The authoritative value: the full form.
  double value() const { return full.value; }
};

/// Throws ChargingInvalid when check_properties fails.
GeneralBound f_general(UnitPoint y_u, const ChargingFunction& c, const BoundGrid& grid = {});
BoundReport ratio_general(const ChargingFunction& c, const BoundGrid& grid = {});

}  // namespace fomlab
