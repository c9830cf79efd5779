#include "fomlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "fomlab/charging.hpp"
#include "fomlab/dual.hpp"
#include "fomlab/engine.hpp"
#include "fomlab/error.hpp"
#include "fomlab/hardness.hpp"
#include "fomlab/instance.hpp"
#include "fomlab/oracle.hpp"
#include "fomlab/parallel.hpp"
#include "fomlab/report.hpp"
#include "fomlab/rng.hpp"

namespace fomlab {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string format = "json";
  std::string out_path;
  unsigned threads = 0;

  std::string kind;
  std::string instance_path;
  std::string family;
  std::string algorithm = "ranking";
  std::string charging = "exp";
  std::string bound = "auto";
  std::string charging_file;
  int n = 8;
  int k = 2;
  int h = 2;
  double p = 0.5;
  bool bipartite = false;
  bool trace = false;
  std::uint64_t seed = 0;
  std::int64_t trials = 1000;
  std::optional<double> target;
  double grid = 1e-3;
};

struct Outcome {
  Report report;
  bool verified = true;
};

unsigned workers(const Options& o) { return o.threads ? o.threads : default_parallelism(); }

Algorithm parse_algorithm(const std::string& name) {
  if (name == "ranking") return Algorithm::Ranking;
  if (name == "greedy") return Algorithm::Greedy;
  throw Error(ErrorCode::UsageError, "unknown algorithm '" + name + "'");
}

Instance random_one_sided(int offline, int online, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<VertexId>> adjacency(online);
  for (auto& row : adjacency) {
    for (int i = 0; i < offline; ++i) {
      if (rng.bernoulli(p)) row.push_back(i);
    }
  }
  return from_one_sided(offline, adjacency);
}

Report instance_report(const Instance& instance) {
  Report r;
  r.record = json::parse(instance_to_json(instance));
  r.columns = {"u", "v"};
  for (const auto& [u, v] : instance.edges()) r.rows.push_back({u, v});
  return r;
}

Outcome cmd_generate(const Options& o) {
  if (o.kind == "random") return {instance_report(random_instance(o.n, o.p, o.bipartite, o.seed))};
  if (o.kind == "one-sided") return {instance_report(random_one_sided(o.k, o.n, o.p, o.seed))};
  if (o.kind == "adversary-tree") return {instance_report(gen_adversary_tree({o.k, o.h, o.seed}))};
  return {instance_report(gen_ranking_hard({o.k, o.h}))};
}

Outcome cmd_run(const Options& o) {
  const Instance instance = load_instance(o.instance_path);
  const Algorithm alg = parse_algorithm(o.algorithm);
  std::vector<TraceEntry> trace;
  auto* sink = o.trace ? &trace : nullptr;
  const MatchingOutcome m = alg == Algorithm::Greedy ? run_greedy(instance, sink)
                                                     : run_ranking(instance, sample_ranks(instance, o.seed), sink);
  const int opt = max_matching(instance).size;

  Report r;
  r.record["algorithm"] = o.algorithm;
  r.record["seed"] = o.seed;
  r.record["vertices"] = instance.size();
  r.record["size"] = m.size();
  r.record["opt"] = opt;
  r.record["ratio"] = opt ? static_cast<double>(m.size()) / opt : 1.0;
  json pairs = json::array();
  for (const auto& [a, b] : m.pairs) pairs.push_back({a, b});
  r.record["pairs"] = pairs;
  if (o.trace) {
    json steps = json::array();
    for (const auto& t : trace) {
      json step;
      step["vertex"] = t.vertex;
      switch (t.decision) {
        case TraceEntry::Decision::Matched: step["decision"] = "match"; break;
        case TraceEntry::Decision::AlreadyMatched: step["decision"] = "already-matched"; break;
        case TraceEntry::Decision::NoCandidate: step["decision"] = "unmatched"; break;
      }
      step["partner"] = t.partner;
      step["rank"] = std::isnan(t.rank) ? json(nullptr) : json(t.rank);
      steps.push_back(step);
    }
    r.record["trace"] = steps;
  }
  r.columns = {"active", "passive"};
  for (const auto& [a, b] : m.pairs) r.rows.push_back({a, b});
  return {r};
}

Outcome cmd_ratio(const Options& o) {
  if (o.instance_path.empty() == o.family.empty()) {
    throw Error(ErrorCode::UsageError, "ratio needs exactly one of --instance or --family");
  }
  const Algorithm alg = parse_algorithm(o.algorithm);
  Report r;
  RatioEstimate est;
  if (!o.instance_path.empty()) {
    r.record["instance"] = o.instance_path;
    est = empirical_ratio(load_instance(o.instance_path), alg, o.trials, o.seed, workers(o));
  } else if (o.family == "ranking-hard") {
    r.record["family"] = o.family;
    r.record["k"] = o.k;
    r.record["h"] = o.h;
    est = empirical_ratio(gen_ranking_hard({o.k, o.h}), alg, o.trials, o.seed, workers(o));
  } else {
    std::function<Instance(std::uint64_t)> generator;
    r.record["family"] = o.family;
    if (o.family == "adversary-tree") {
      r.record["k"] = o.k;
      r.record["h"] = o.h;
      generator = [k = o.k, h = o.h](std::uint64_t s) { return gen_adversary_tree({k, h, s}); };
    } else if (o.family == "random" || o.family == "random-bipartite") {
      r.record["n"] = o.n;
      r.record["p"] = o.p;
      generator = [n = o.n, p = o.p, bip = o.family == "random-bipartite"](std::uint64_t s) {
        return random_instance(n, p, bip, s);
      };
    } else if (o.family == "one-sided") {
      r.record["k"] = o.k;
      r.record["n"] = o.n;
      r.record["p"] = o.p;
      generator = [k = o.k, n = o.n, p = o.p](std::uint64_t s) { return random_one_sided(k, n, p, s); };
    } else {
      throw Error(ErrorCode::UsageError, "unknown family '" + o.family + "'");
    }
    est = empirical_ratio(generator, alg, o.trials, o.seed, workers(o));
  }
  r.record["algorithm"] = o.algorithm;
  r.record["trials"] = est.trials;
  r.record["seed"] = o.seed;
  r.record["mean"] = est.mean;
  r.record["stderr"] = est.std_error;
  if (o.family.empty() || o.family == "ranking-hard") r.record["opt"] = est.opt;
  return {r};
}

double default_target(const ChargingFunction& c) {
  return c.kind() == ChargingKind::PiecewiseGeneral ? 0.5211 : 0.5541;
}

Outcome cmd_verify(const Options& o) {
  const Instance instance = load_instance(o.instance_path);
  const ChargingFunction charging = charging_by_name(o.charging);
  const double target = o.target.value_or(default_target(charging));
  const FeasibilityReport f = verify_feasibility(instance, charging, target, o.trials, o.seed, workers(o));

  Report r;
  r.record["instance"] = o.instance_path;
  r.record["charging"] = charging.name();
  r.record["target"] = target;
  r.record["trials"] = f.trials;
  r.record["seed"] = o.seed;
  r.record["min_mean"] = f.min_mean;
  r.record["sum_violations"] = f.sum_violations;
  r.record["failing"] = f.failing.size();
  r.record["pass"] = f.pass();
  json edges = json::array();
  r.columns = {"u", "v", "mean", "stderr", "trials"};
  for (const auto& e : f.edges) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"mean", e.mean}, {"stderr", e.std_error}, {"trials", e.trials}});
    r.rows.push_back({e.u, e.v, e.mean, e.std_error, e.trials});
  }
  r.record["edges"] = edges;
  return {r, f.pass()};
}

Outcome cmd_check_charging(const Options& o) {
  if (!(o.grid > 0.0) || o.grid > 0.5) throw Error(ErrorCode::UsageError, "--grid must lie in (0, 0.5]");
  ChargingFunction c;
  if (!o.charging_file.empty()) {
    std::ifstream in(o.charging_file);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + o.charging_file + "'");
    c = charging_from_json(std::string(std::istreambuf_iterator<char>(in), {}));
  } else {
    c = charging_by_name(o.kind);
  }
  const PropertyReport props = check_properties(c);

  Report r;
  r.record["kind"] = c.name();
  r.record["charging"] = json::parse(charging_to_json(c));
  r.record["grid"] = o.grid;
  json checks = json::array();
  for (const auto& pc : props.checks) checks.push_back({{"name", pc.name}, {"pass", pc.pass}, {"detail", pc.detail}});
  r.record["properties"] = checks;
  r.record["properties_pass"] = props.pass();

  std::string bound = o.bound;
  if (bound == "auto") bound = c.kind() == ChargingKind::PiecewiseGeneral ? "general" : "bipartite";
  r.record["bound"] = bound;
  bool ok = props.pass();
  r.columns = {"y_u", "value", "theta", "tau", "branch"};
  if (bound == "general" && !props.pass()) {
    r.record["ratio"] = nullptr;
  } else {
    const BoundGrid grid{o.grid, true};
    const BoundReport b = bound == "general" ? ratio_general(c, grid) : ratio_bipartite(c, grid);
    r.record["ratio"] = b.ratio;
    const auto argmin = std::min_element(b.points.begin(), b.points.end(),
                                         [](const BoundPoint& x, const BoundPoint& y) { return x.value < y.value; });
    if (argmin != b.points.end()) r.record["argmin_y_u"] = argmin->y_u;
    for (const auto& pt : b.points) r.rows.push_back({pt.y_u, pt.value, pt.theta, pt.tau, pt.branch});
    if (o.target) ok = ok && b.ratio >= *o.target;
  }
  if (o.target) r.record["target"] = *o.target;
  r.record["pass"] = ok;
  return {r, ok};
}

Outcome cmd_hardness(const Options& o) {
  Report r;
  if (o.kind == "omega") {
    r.record["omega"] = omega_fixed_point();
    return {r};
  }
  if (o.kind == "adversary") {
    const AdversaryPrediction a = adversary_ratio(o.k, o.h);
    r.record["k"] = a.k;
    r.record["h"] = a.h;
    r.record["p_h"] = a.p_h;
    r.record["p_h_seed_one"] = a.p_h_seed_one;
    r.record["t"] = a.t;
    r.record["t_fraction"] = a.t_fraction;
    r.record["ratio_finite"] = a.ratio_finite;
    r.record["ratio_display"] = a.ratio_display;
    r.record["display_discrepancy"] = a.ratio_display - a.ratio_finite;
    r.record["ratio_asymptotic"] = a.ratio_asymptotic;
    return {r};
  }
  const FluidPrediction f = fluid_recurrence(o.k, o.h);
  r.record["k"] = f.k;
  r.record["h"] = f.h;
  r.record["fluid_limit"] = f.fluid_limit;
  r.record["omega"] = f.omega;
  r.record["ratio_fluid"] = f.ratio_fluid;
  r.record["ratio_mean_field"] = f.ratio_mean_field;
  r.record["fluid"] = f.fluid;
  r.record["mean_field"] = f.mean_field;
  r.columns = {"group", "fluid", "mean_field"};
  for (std::size_t i = 0; i < f.fluid.size(); ++i) r.rows.push_back({i + 1, f.fluid[i], f.mean_field[i]});
  return {r};
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fully online matching experiments", "fomlab"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out_path, "Write the report to this file");
  app.add_option("--threads", o.threads, "Worker threads (default: FOMLAB_THREADS or all cores)");

  auto* gen = app.add_subcommand("generate", "Generate an instance");
  gen->add_option("family", o.kind)->required()->check(CLI::IsMember({"random", "one-sided", "adversary-tree", "ranking-hard"}));
  gen->add_option("--n", o.n, "Vertices (random) or online vertices (one-sided)");
  gen->add_option("--k", o.k, "Branching / group size / offline vertices");
  gen->add_option("--h", o.h, "Depth or group count");
  gen->add_option("--p", o.p, "Edge probability");
  gen->add_option("--seed", o.seed);
  gen->add_flag("--bipartite", o.bipartite, "Random bipartite instance");

  auto* run = app.add_subcommand("run", "Run an algorithm once");
  run->add_option("--instance", o.instance_path)->required();
  run->add_option("--alg", o.algorithm)->check(CLI::IsMember({"ranking", "greedy"}));
  run->add_option("--seed", o.seed);
  run->add_flag("--trace", o.trace, "Include the per-deadline trace");

  auto* ratio = app.add_subcommand("ratio", "Estimate the competitive ratio empirically");
  ratio->add_option("--instance", o.instance_path);
  ratio->add_option("--family", o.family, "random | random-bipartite | one-sided | adversary-tree | ranking-hard");
  ratio->add_option("--alg", o.algorithm)->check(CLI::IsMember({"ranking", "greedy"}));
  ratio->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  ratio->add_option("--seed", o.seed);
  ratio->add_option("--n", o.n);
  ratio->add_option("--k", o.k);
  ratio->add_option("--h", o.h);
  ratio->add_option("--p", o.p);

  auto* verify = app.add_subcommand("verify-duals", "Monte Carlo check of the dual edge cover");
  verify->add_option("--instance", o.instance_path)->required();
  verify->add_option("--charging", o.charging)->check(CLI::IsMember({"exp", "exponential", "piecewise", "capped"}));
  verify->add_option("--target", o.target);
  verify->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  verify->add_option("--seed", o.seed);

  auto* check = app.add_subcommand("check-charging", "Check charging properties and the ratio bound");
  check->add_option("--kind", o.kind)->check(CLI::IsMember({"exp", "exponential", "piecewise", "capped"}));
  check->add_option("--file", o.charging_file, "Charging function JSON");
  check->add_option("--grid", o.grid);
  check->add_option("--bound", o.bound)->check(CLI::IsMember({"auto", "bipartite", "general"}));
  check->add_option("--target", o.target, "Exit 1 if the bound is below this value");

  auto* hard = app.add_subcommand("hardness", "Hardness predictions");
  hard->add_option("kind", o.kind)->required()->check(CLI::IsMember({"adversary", "layered", "omega"}));
  hard->add_option("--k", o.k);
  hard->add_option("--h", o.h);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Outcome result;
    if (app.got_subcommand(gen)) {
      result = cmd_generate(o);
    } else if (app.got_subcommand(run)) {
      result = cmd_run(o);
    } else if (app.got_subcommand(ratio)) {
      result = cmd_ratio(o);
    } else if (app.got_subcommand(verify)) {
      result = cmd_verify(o);
    } else if (app.got_subcommand(check)) {
      if (o.kind.empty()) o.kind = "piecewise";
      result = cmd_check_charging(o);
    } else {
      if (hard->count("--k") == 0) o.k = o.kind == "layered" ? 100 : 7;
      if (hard->count("--h") == 0) o.h = o.kind == "layered" ? 50 : 8;
      result = cmd_hardness(o);
    }
    const ReportFormat format = parse_format(o.format);
    if (o.out_path.empty()) {
      write_report(result.report, format, out);
    } else {
      write_report(result.report, format, std::filesystem::path(o.out_path));
    }
    return result.verified ? kExitOk : kExitVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace fomlab
