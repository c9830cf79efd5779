#include "fomlab/charging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fomlab {

namespace {

constexpr double kTol = 1e-12;

bool is_one_minus(UnitPoint p) { return p.x == 1.0 && p.side == Side::JustBelow; }
bool is_one_at(UnitPoint p) { return p.x >= 1.0 && p.side == Side::At; }

int grid_nodes(double step) {
  if (!(step > 0.0) || step > 1.0) throw Error(ErrorCode::ParamsInvalid, "grid step must lie in (0,1]");
  return std::max(1, static_cast<int>(std::llround(1.0 / step)));
}

}  // namespace

ChargingFunction ChargingFunction::exponential() { return ChargingFunction{}; }

ChargingFunction ChargingFunction::piecewise(const PiecewiseConstants& c) {
  ChargingFunction f;
  f.kind_ = ChargingKind::PiecewiseGeneral;
  f.pw_ = c;
  return f;
}

ChargingFunction ChargingFunction::capped_exponential(double lift) {
  ChargingFunction f;
  f.kind_ = ChargingKind::CappedExponential;
  f.lift_ = lift;
  return f;
}

double ChargingFunction::g(UnitPoint p) const {
  if (is_one_at(p)) return 1.0;
  const double x = std::min(p.x, 1.0);
  switch (kind_) {
    case ChargingKind::ExponentialBipartite: return std::exp(x - 1.0);
    case ChargingKind::CappedExponential: return std::min(1.0, std::exp(x - 1.0) + lift_);
    case ChargingKind::PiecewiseGeneral:
      return x <= pw_.t ? pw_.kg1 * x + pw_.b : pw_.kg2 * (x - pw_.t) + pw_.kg1 * pw_.t + pw_.b;
  }
  return 0.0;
}

double ChargingFunction::h(UnitPoint p) const {
  if (kind_ != ChargingKind::PiecewiseGeneral || is_one_at(p)) return 0.0;
  const double x = std::min(p.x, 1.0);
  return x <= pw_.t ? pw_.kh1 * x : pw_.kh2 * (x - pw_.t) + pw_.kh1 * pw_.t;
}

double ChargingFunction::eval(Component which, UnitPoint p) const {
  if (!(p.x >= 0.0 && p.x <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "charging function argument " + std::to_string(p.x) + " outside [0,1]");
  }
  switch (which) {
    case Component::G: return g(p);
    case Component::H: return h(p);
    case Component::Phi: return phi(p);
  }
  return 0.0;
}

double ChargingFunction::g_integral(double theta) const {
  theta = std::clamp(theta, 0.0, 1.0);
  switch (kind_) {
    case ChargingKind::ExponentialBipartite: return std::exp(theta - 1.0) - std::exp(-1.0);
    case ChargingKind::CappedExponential: {
      // e^{x−1} + lift reaches 1 at x = 1 + ln(1 − lift).
      const double cross = lift_ < 1.0 ? std::clamp(1.0 + std::log(1.0 - lift_), 0.0, 1.0) : 0.0;
      const double upto = std::min(theta, cross);
      double area = std::exp(upto - 1.0) - std::exp(-1.0) + lift_ * upto;
      if (theta > cross) area += theta - cross;
      return area;
    }
    case ChargingKind::PiecewiseGeneral: {
      const auto& c = pw_;
      if (theta <= c.t) return 0.5 * c.kg1 * theta * theta + c.b * theta;
      const double d = theta - c.t;
      return 0.5 * c.kg1 * c.t * c.t + c.b * c.t + 0.5 * c.kg2 * d * d + (c.kg1 * c.t + c.b) * d;
    }
  }
  return 0.0;
}

double ChargingFunction::h_integral(double theta) const {
  if (kind_ != ChargingKind::PiecewiseGeneral) return 0.0;
  theta = std::clamp(theta, 0.0, 1.0);
  const auto& c = pw_;
  if (theta <= c.t) return 0.5 * c.kh1 * theta * theta;
  const double d = theta - c.t;
  return 0.5 * c.kh1 * c.t * c.t + 0.5 * c.kh2 * d * d + c.kh1 * c.t * d;
}

bool ChargingFunction::zero_compensation() const {
  return kind_ != ChargingKind::PiecewiseGeneral || (pw_.kh1 == 0.0 && pw_.kh2 == 0.0);
}

std::vector<double> ChargingFunction::breakpoints() const {
  switch (kind_) {
    case ChargingKind::ExponentialBipartite: return {};
    case ChargingKind::CappedExponential: {
      if (lift_ <= 0.0 || lift_ >= 1.0) return {};
      const double cross = 1.0 + std::log(1.0 - lift_);
      if (cross > 0.0 && cross < 1.0) return {cross};
      return {};
    }
    case ChargingKind::PiecewiseGeneral:
      if (pw_.t > 0.0 && pw_.t < 1.0) return {pw_.t};
      return {};
  }
  return {};
}

std::string ChargingFunction::name() const {
  switch (kind_) {
    case ChargingKind::ExponentialBipartite: return "exponential";
    case ChargingKind::PiecewiseGeneral: return "piecewise";
    case ChargingKind::CappedExponential: return "capped";
  }
  return "?";
}

ChargingFunction charging_by_name(const std::string& name) {
  if (name == "exp" || name == "exponential") return ChargingFunction::exponential();
  if (name == "piecewise") return ChargingFunction::piecewise();
  if (name == "capped") return ChargingFunction::capped_exponential();
  throw Error(ErrorCode::UsageError, "unknown charging kind '" + name + "'");
}

std::string charging_to_json(const ChargingFunction& c) {
  nlohmann::ordered_json doc;
  doc["kind"] = c.name();
  nlohmann::ordered_json constants = nlohmann::ordered_json::object();
  if (c.kind() == ChargingKind::PiecewiseGeneral) {
    const auto& k = c.constants();
    constants = {{"t", k.t}, {"kg1", k.kg1}, {"kg2", k.kg2}, {"b", k.b}, {"kh1", k.kh1}, {"kh2", k.kh2}};
  } else if (c.kind() == ChargingKind::CappedExponential) {
    constants = {{"lift", c.lift()}};
  }
  doc["constants"] = std::move(constants);
  return doc.dump();
}

ChargingFunction charging_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto kind = doc.at("kind").get<std::string>();
    const auto constants = doc.value("constants", nlohmann::json::object());
    if (kind == "piecewise") {
      PiecewiseConstants k;
      k.t = constants.value("t", k.t);
      k.kg1 = constants.value("kg1", k.kg1);
      k.kg2 = constants.value("kg2", k.kg2);
      k.b = constants.value("b", k.b);
      k.kh1 = constants.value("kh1", k.kh1);
      k.kh2 = constants.value("kh2", k.kh2);
      return ChargingFunction::piecewise(k);
    }
    if (kind == "capped") return ChargingFunction::capped_exponential(constants.value("lift", 0.0128));
    return charging_by_name(kind);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("charging JSON: ") + e.what());
  }
}

bool PropertyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

PropertyReport check_properties(const ChargingFunction& c) {
  PropertyReport report;
  const auto add = [&](std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  std::vector<double> xs;
  constexpr int kDense = 10000;
  for (int i = 0; i < kDense; ++i) xs.push_back(static_cast<double>(i) / kDense);
  for (double bp : c.breakpoints()) {
    xs.push_back(bp);
    xs.push_back(std::nextafter(bp, 0.0));
    xs.push_back(std::nextafter(bp, 1.0));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // The sweep runs over [0,1) and closes with 1⁻.
  std::vector<UnitPoint> pts(xs.begin(), xs.end());
  pts.push_back(kOneMinus);

  const auto first_failure = [&](auto&& bad) -> std::string {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (bad(i)) {
        std::ostringstream os;
        os << "fails near x=" << pts[i].x << (pts[i].side == Side::JustBelow ? "-" : "");
        return os.str();
      }
    }
    return {};
  };

  {
    auto msg = first_failure([&](std::size_t i) {
      const double v = c.g(pts[i]);
      return v < -kTol || v > 1.0 + kTol;
    });
    add("g_range", msg.empty(), msg);
  }
  {
    auto msg = first_failure([&](std::size_t i) { return i > 0 && c.g(pts[i]) < c.g(pts[i - 1]) - kTol; });
    if (msg.empty() && c.g(kOneMinus) > 1.0 + kTol) msg = "g(1-) exceeds g(1)";
    add("g_nondecreasing", msg.empty(), msg);
  }
  add("g_one", std::abs(c.g(1.0) - 1.0) <= kTol);
  {
    auto msg = first_failure([&](std::size_t i) { return c.h(pts[i]) < -kTol; });
    add("h_nonnegative", msg.empty(), msg);
  }
  {
    auto msg = first_failure([&](std::size_t i) { return i > 0 && c.h(pts[i]) < c.h(pts[i - 1]) - kTol; });
    add("h_nondecreasing", msg.empty(), msg);
  }
  add("h_one_zero", std::abs(c.h(1.0)) <= kTol);
  {
    auto msg = first_failure([&](std::size_t i) {
      if (i < 2 || pts[i - 1].x <= 0.0) return false;
      return c.h(pts[i]) / pts[i].x > c.h(pts[i - 1]) / pts[i - 1].x + kTol;
    });
    add("h_over_y_nonincreasing", msg.empty(), msg);
  }
  {
    auto msg = first_failure([&](std::size_t i) { return c.phi(pts[i]) < -kTol; });
    add("phi_nonnegative", msg.empty(), msg);
  }

  if (c.kind() == ChargingKind::PiecewiseGeneral) {
    const auto& k = c.constants();
    const bool slopes = k.kg1 >= 0 && k.kg2 >= 0 && k.kh1 >= 0 && k.kh2 >= 0;
    add("piecewise_slopes_nonnegative", slopes);
    add("piecewise_breakpoint_interior", k.t > 0.0 && k.t < 1.0);
    // On (t,1), h(x)/x = kh2 + (kh1 − kh2)·t/x.
    add("piecewise_h_ratio_exact", k.kh2 <= k.kh1);
    // φ is linear on each piece, so its sign is decided at 0, t and 1⁻.
    const bool phi_exact = c.phi(0.0) >= -kTol && c.phi(k.t) >= -kTol && c.phi(kOneMinus) >= -kTol;
    add("piecewise_phi_exact", phi_exact);
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

void require_valid(const ChargingFunction& c) {
  const auto report = check_properties(c);
  if (!report.pass()) {
    std::string failed;
    for (const auto& chk : report.checks) {
      if (!chk.pass) failed += (failed.empty() ? "" : ", ") + chk.name;
    }
    throw Error(ErrorCode::ChargingInvalid, "charging function violates: " + failed);
  }
}

struct Sampled {
  double x;     // numeric position (1 for 1⁻)
  double G, g, h, phi;
  bool limit;   // x is 1⁻
};

Sampled sample(const ChargingFunction& c, UnitPoint p) {
  return {p.x, c.g_integral(p.x), c.g(p), c.h(p), c.phi(p), is_one_minus(p)};
}

// Grid nodes 0, 1/N, ..., (N−1)/N followed by 1⁻.
std::vector<Sampled> sample_grid(const ChargingFunction& c, int nodes) {
  std::vector<Sampled> s;
  s.reserve(nodes + 1);
  for (int i = 0; i < nodes; ++i) s.push_back(sample(c, static_cast<double>(i) / nodes));
  s.push_back(sample(c, kOneMinus));
  return s;
}

double bipartite_term(const Sampled& th, double gy) { return th.G + std::min(1.0 - th.g, gy); }

// The four per-(θ,τ) expressions of the general bound.
struct GeneralTerms {
  double phi_limit;  // φ(1⁻)

  double psi1(const Sampled& th, const Sampled& ta, double gy) const {
    return th.G + (ta.x - th.x) * th.h + (1.0 - th.x) * std::min(gy, th.phi) + th.x * std::min(gy, ta.phi);
  }
  double full_a(const Sampled& th, const Sampled& ta, double gy) const {
    return th.G + std::min((1.0 - th.x) * phi_limit, (ta.x - th.x) * th.h) + (1.0 - th.x) * std::min(gy, th.phi) +
           th.x * std::min(gy, ta.phi);
  }
  double psi2(const Sampled& th, double gy) const {
    return th.G + (1.0 - th.x) * th.h + (1.0 - th.x) * std::min(gy, 1.0 - th.g);
  }
  double full_b(const Sampled& th, double gy) const {
    return th.G + (1.0 - th.x) * std::min(phi_limit, th.h) + (1.0 - th.x) * std::min(gy, 1.0 - th.g);
  }
};

void consider(BoundPoint& best, double value, const Sampled& th, const Sampled* ta, int branch) {
  if (value < best.value) {
    best.value = value;
    best.theta = th.x;
    best.tau = ta ? ta->x : 0.0;
    best.tau_limit = ta ? ta->limit : false;
    best.branch = branch;
  }
}

BoundPoint fresh(UnitPoint y) {
  BoundPoint p;
  p.y_u = y.x;
  p.value = std::numeric_limits<double>::infinity();
  return p;
}

// Local sweep of [centre − step, centre + step] ∩ [0,1) at step/100.
std::vector<double> local_axis(double centre, double step) {
  std::vector<double> axis;
  const double fine = step / 100.0;
  for (int i = -100; i <= 100; ++i) {
    const double x = centre + i * fine;
    if (x >= 0.0 && x < 1.0) axis.push_back(x);
  }
  return axis;
}

BoundPoint bipartite_point(UnitPoint y, const ChargingFunction& c, const std::vector<Sampled>& grid, double step,
                           bool refine) {
  const double gy = c.g(y);
  BoundPoint best = fresh(y);
  for (const auto& th : grid) consider(best, bipartite_term(th, gy), th, nullptr, 2);
  // θ = 1 itself, where g jumps to 1.
  consider(best, bipartite_term(sample(c, 1.0), gy), sample(c, 1.0), nullptr, 2);
  if (refine) {
    const double centre = best.theta;
    for (double x : local_axis(centre, step)) {
      const auto th = sample(c, x);
      consider(best, bipartite_term(th, gy), th, nullptr, 2);
    }
  }
  return best;
}

struct GeneralEvaluator {
  const ChargingFunction& c;
  std::vector<Sampled> grid;
  double step;
  bool refine;
  GeneralTerms terms;
  bool clamp_inactive;

  GeneralEvaluator(const ChargingFunction& cf, const BoundGrid& g)
      : c(cf), grid(sample_grid(cf, grid_nodes(g.step))), step(1.0 / grid_nodes(g.step)), refine(g.refine),
        terms{cf.phi(kOneMinus)}, clamp_inactive(cf.phi(kOneMinus) >= cf.h(kOneMinus)) {}

  GeneralBound at(UnitPoint y) const {
    const double gy = c.g(y);
    GeneralBound out;
    out.full = fresh(y);
    out.simplified = fresh(y);
    out.clamp_inactive = clamp_inactive;
    const std::size_t m = grid.size();

    for (std::size_t i = 0; i < m; ++i) {
      const Sampled& th = grid[i];
      consider(out.simplified, terms.psi2(th, gy), th, nullptr, 2);
      consider(out.full, terms.full_b(th, gy), th, nullptr, 2);

      // τ ranges over [θ, 1⁻]. Split the τ-independent parts out of the
      // inner loop.
      const double base = th.G + (1.0 - th.x) * std::min(gy, th.phi);
      const double clamp = (1.0 - th.x) * terms.phi_limit;
      double best1 = std::numeric_limits<double>::infinity();
      double bestA = best1;
      std::size_t arg1 = i, argA = i;
      for (std::size_t j = i; j < m; ++j) {
        const Sampled& ta = grid[j];
        const double comp = (ta.x - th.x) * th.h;
        const double tail = th.x * std::min(gy, ta.phi);
        const double v1 = comp + tail;
        const double vA = std::min(clamp, comp) + tail;
        if (v1 < best1) {
          best1 = v1;
          arg1 = j;
        }
        if (vA < bestA) {
          bestA = vA;
          argA = j;
        }
      }
      consider(out.simplified, base + best1, th, &grid[arg1], 1);
      consider(out.full, base + bestA, th, &grid[argA], 1);
    }

    if (refine) {
      refine_point(out.simplified, gy, false);
      refine_point(out.full, gy, true);
    }

    if (clamp_inactive && std::abs(out.full.value - out.simplified.value) > 1e-12) {
      throw std::logic_error("general bound forms disagree although the clamp is inactive");
    }
    return out;
  }

  void refine_point(BoundPoint& best, double gy, bool full) const {
    const auto thetas = local_axis(best.theta, step);
    if (best.branch == 2) {
      for (double x : thetas) {
        const auto th = sample(c, x);
        consider(best, full ? terms.full_b(th, gy) : terms.psi2(th, gy), th, nullptr, 2);
      }
      return;
    }
    std::vector<Sampled> taus;
    if (best.tau_limit) {
      taus.push_back(sample(c, kOneMinus));
      for (double x : local_axis(1.0 - step, step)) taus.push_back(sample(c, x));
    } else {
      for (double x : local_axis(best.tau, step)) taus.push_back(sample(c, x));
    }
    for (double x : thetas) {
      const auto th = sample(c, x);
      for (const auto& ta : taus) {
        if (ta.x < th.x) continue;
        consider(best, full ? terms.full_a(th, ta, gy) : terms.psi1(th, ta, gy), th, &ta, 1);
      }
    }
  }
};

template <typename PointFn>
BoundReport integrate(int nodes, double step, PointFn&& point) {
  BoundReport report;
  report.grid_step = step;
  report.points.reserve(nodes + 1);
  double sum = 0.0;
  for (int i = 0; i <= nodes; ++i) {
    const UnitPoint y = i < nodes ? UnitPoint(static_cast<double>(i) / nodes) : kOneMinus;
    BoundPoint p = point(y);
    const double weight = (i == 0 || i == nodes) ? 0.5 : 1.0;
    sum += weight * p.value;
    report.points.push_back(p);
  }
  report.ratio = sum / nodes;
  return report;
}

}  // namespace

BoundPoint f_bipartite(UnitPoint y_u, const ChargingFunction& c, const BoundGrid& grid) {
  if (!(y_u.x >= 0.0 && y_u.x <= 1.0)) throw Error(ErrorCode::OutOfDomain, "y_u outside [0,1]");
  const int nodes = grid_nodes(grid.step);
  return bipartite_point(y_u, c, sample_grid(c, nodes), 1.0 / nodes, grid.refine);
}

BoundReport ratio_bipartite(const ChargingFunction& c, const BoundGrid& grid) {
  const int nodes = grid_nodes(grid.step);
  const double step = 1.0 / nodes;
  const auto samples = sample_grid(c, nodes);
  return integrate(nodes, step, [&](UnitPoint y) { return bipartite_point(y, c, samples, step, grid.refine); });
}

double psi1(UnitPoint y_u, UnitPoint theta, UnitPoint tau, const ChargingFunction& c) {
  const auto below_one = [](UnitPoint p) { return p.x < 1.0 || is_one_minus(p); };
  if (!(theta.x >= 0.0 && theta.x <= tau.x && below_one(theta) && below_one(tau) && y_u.x >= 0.0 && y_u.x <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "psi1 requires 0 <= theta <= tau < 1");
  }
  return GeneralTerms{c.phi(kOneMinus)}.psi1(sample(c, theta), sample(c, tau), c.g(y_u));
}

double psi2(UnitPoint y_u, UnitPoint theta, const ChargingFunction& c) {
  if (!(theta.x >= 0.0 && theta.x <= 1.0 && y_u.x >= 0.0 && y_u.x <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "psi2 requires theta, y_u in [0,1]");
  }
  return GeneralTerms{c.phi(kOneMinus)}.psi2(sample(c, theta), c.g(y_u));
}

GeneralBound f_general(UnitPoint y_u, const ChargingFunction& c, const BoundGrid& grid) {
  if (!(y_u.x >= 0.0 && y_u.x <= 1.0)) throw Error(ErrorCode::OutOfDomain, "y_u outside [0,1]");
  require_valid(c);
  return GeneralEvaluator(c, grid).at(y_u);
}

BoundReport ratio_general(const ChargingFunction& c, const BoundGrid& grid) {
  require_valid(c);
  const GeneralEvaluator eval(c, grid);
  const int nodes = static_cast<int>(eval.grid.size()) - 1;
  return integrate(nodes, eval.step, [&](UnitPoint y) { return eval.at(y).full; });
}

}  // namespace fomlab
