#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fomlab/charging.hpp"
#include "fomlab/cli.hpp"
#include "fomlab/dual.hpp"
#include "fomlab/engine.hpp"
#include "fomlab/error.hpp"
#include "fomlab/hardness.hpp"
#include "fomlab/instance.hpp"
#include "fomlab/oracle.hpp"

namespace py = pybind11;
using namespace fomlab;

namespace {

Instance make_instance(int n, const std::vector<std::pair<std::string, VertexId>>& events,
                       std::vector<Edge> edges, std::optional<std::vector<int>> bipartition) {
  std::vector<Event> stream;
  stream.reserve(events.size());
  for (const auto& [kind, v] : events) {
    if (kind != "arrival" && kind != "deadline") {
      throw Error(ErrorCode::MalformedEvents, "event kind must be 'arrival' or 'deadline', got '" + kind + "'");
    }
    stream.push_back({kind == "arrival" ? EventKind::Arrival : EventKind::Deadline, v});
  }
  return build_instance(n, std::move(stream), std::move(edges), std::move(bipartition));
}

std::vector<std::pair<std::string, VertexId>> event_list(const Instance& instance) {
  std::vector<std::pair<std::string, VertexId>> out;
  for (const Event& ev : instance.events()) {
    out.emplace_back(ev.kind == EventKind::Arrival ? "arrival" : "deadline", ev.vertex);
  }
  return out;
}

RankAssignment to_ranks(const std::vector<double>& ranks) { return RankAssignment(ranks); }

Algorithm algorithm_by_name(const std::string& name) {
  if (name == "ranking") return Algorithm::Ranking;
  if (name == "greedy") return Algorithm::Greedy;
  throw Error(ErrorCode::UsageError, "unknown algorithm '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_fomlab, m) {
  m.doc() = "Fully online matching lab";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("n"), py::arg("events"), py::arg("edges"),
           py::arg("bipartition") = std::nullopt)
      .def_property_readonly("n", &Instance::size)
      .def_property_readonly("events", &event_list)
      .def_property_readonly("edges", [](const Instance& i) { return std::vector<Edge>(i.edges().begin(), i.edges().end()); })
      .def_property_readonly("bipartition", &Instance::bipartition)
      .def("neighbors", [](const Instance& i, VertexId v) {
        if (v < 0 || v >= i.size()) throw Error(ErrorCode::IndexOutOfRange, "vertex " + std::to_string(v));
        return std::vector<VertexId>(i.neighbors(v).begin(), i.neighbors(v).end());
      })
      .def("to_json", &instance_to_json)
      .def(py::self == py::self)
      .def("__len__", &Instance::size)
      .def("__repr__", [](const Instance& i) {
        return "Instance(n=" + std::to_string(i.size()) + ", edges=" + std::to_string(i.edges().size()) + ")";
      });

  m.def("instance_from_json", &instance_from_json, py::arg("text"));
  m.def("random_instance", &random_instance, py::arg("n"), py::arg("edge_prob"), py::arg("bipartite") = false,
        py::arg("seed") = 0);
  m.def("gen_adversary_tree",
        [](int k, int h, std::uint64_t seed) { return gen_adversary_tree({k, h, seed}); }, py::arg("k"),
        py::arg("h"), py::arg("seed") = 0);
  m.def("gen_ranking_hard", [](int k, int h) { return gen_ranking_hard({k, h}); }, py::arg("k"), py::arg("h"));

  py::enum_<Role>(m, "Role")
      .value("Unmatched", Role::Unmatched)
      .value("Active", Role::Active)
      .value("Passive", Role::Passive);

  py::class_<MatchingOutcome>(m, "MatchingOutcome")
      .def_readonly("pairs", &MatchingOutcome::pairs)
      .def_readonly("partner", &MatchingOutcome::partner)
      .def_readonly("role", &MatchingOutcome::role)
      .def_property_readonly("size", &MatchingOutcome::size)
      .def("__len__", &MatchingOutcome::size);

  m.def("sample_ranks", [](const Instance& i, std::uint64_t seed) { return sample_ranks(i, seed).rank; },
        py::arg("instance"), py::arg("seed"));
  m.def("run_ranking", [](const Instance& i, const std::vector<double>& ranks) { return run_ranking(i, to_ranks(ranks)); },
        py::arg("instance"), py::arg("ranks"));
  m.def("run_greedy", [](const Instance& i) { return run_greedy(i); }, py::arg("instance"));
  m.def("max_matching", [](const Instance& i) { return max_matching(i).size; }, py::arg("instance"));

  py::enum_<Algorithm>(m, "Algorithm").value("Ranking", Algorithm::Ranking).value("Greedy", Algorithm::Greedy);

  m.def(
      "empirical_ratio",
      [](const Instance& i, const std::string& alg, std::int64_t trials, std::uint64_t seed, unsigned workers) {
        const RatioEstimate r = empirical_ratio(i, algorithm_by_name(alg), trials, seed, workers);
        return py::dict(py::arg("mean") = r.mean, py::arg("stderr") = r.std_error, py::arg("trials") = r.trials,
                        py::arg("opt") = r.opt);
      },
      py::arg("instance"), py::arg("algorithm") = "ranking", py::arg("trials") = 1000, py::arg("seed") = 0,
      py::arg("workers") = 0);

  py::class_<ChargingFunction>(m, "ChargingFunction")
      .def_static("exponential", &ChargingFunction::exponential)
      .def_static("piecewise", [] { return ChargingFunction::piecewise(); })
      .def_static("capped_exponential", &ChargingFunction::capped_exponential, py::arg("lift") = 0.0128)
      .def_property_readonly("name", &ChargingFunction::name)
      .def("g", [](const ChargingFunction& c, double x) { return c.eval(Component::G, x); })
      .def("h", [](const ChargingFunction& c, double x) { return c.eval(Component::H, x); })
      .def("phi", [](const ChargingFunction& c, double x) { return c.eval(Component::Phi, x); })
      .def("__repr__", [](const ChargingFunction& c) { return "ChargingFunction(" + c.name() + ")"; });

  m.def("charging_by_name", &charging_by_name, py::arg("name"));
  m.def(
      "check_properties",
      [](const ChargingFunction& c) {
        py::dict out;
        for (const PropertyCheck& check : check_properties(c).checks) out[py::str(check.name)] = check.pass;
        return out;
      },
      py::arg("charging"));

  py::class_<BoundPoint>(m, "BoundPoint")
      .def_readonly("y_u", &BoundPoint::y_u)
      .def_readonly("value", &BoundPoint::value)
      .def_readonly("theta", &BoundPoint::theta)
      .def_readonly("tau", &BoundPoint::tau)
      .def_readonly("branch", &BoundPoint::branch);
  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("ratio", &BoundReport::ratio)
      .def_readonly("grid_step", &BoundReport::grid_step)
      .def_readonly("points", &BoundReport::points);

  m.def("ratio_bipartite", [](const ChargingFunction& c, double step) { return ratio_bipartite(c, {step, true}); },
        py::arg("charging"), py::arg("step") = 1e-3);
  m.def("ratio_general", [](const ChargingFunction& c, double step) { return ratio_general(c, {step, true}); },
        py::arg("charging"), py::arg("step") = 1e-2);

  m.def("marginal_rank",
        [](const Instance& i, const std::vector<double>& ranks, VertexId v) { return marginal_rank(i, to_ranks(ranks), v); },
        py::arg("instance"), py::arg("ranks"), py::arg("v"));
  m.def(
      "assign_duals",
      [](const Instance& i, const std::vector<double>& ranks, const ChargingFunction& c) {
        return assign_duals(i, to_ranks(ranks), c).alpha;
      },
      py::arg("instance"), py::arg("ranks"), py::arg("charging"));

  py::class_<EdgeEstimate>(m, "EdgeEstimate")
      .def_readonly("u", &EdgeEstimate::u)
      .def_readonly("v", &EdgeEstimate::v)
      .def_readonly("mean", &EdgeEstimate::mean)
      .def_readonly("stderr", &EdgeEstimate::std_error)
      .def_readonly("trials", &EdgeEstimate::trials);
  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("edges", &FeasibilityReport::edges)
      .def_readonly("failing", &FeasibilityReport::failing)
      .def_readonly("target", &FeasibilityReport::target)
      .def_readonly("min_mean", &FeasibilityReport::min_mean)
      .def_readonly("sum_violations", &FeasibilityReport::sum_violations)
      .def_property_readonly("passed", &FeasibilityReport::pass);

  m.def("verify_feasibility", &verify_feasibility, py::arg("instance"), py::arg("charging"), py::arg("target"),
        py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("exact_edge_cover", &exact_edge_cover, py::arg("instance"), py::arg("edge"), py::arg("charging"));

  m.def(
      "adversary_ratio",
      [](int k, int h) {
        const AdversaryPrediction p = adversary_ratio(k, h);
        return py::dict(py::arg("k") = p.k, py::arg("h") = p.h, py::arg("p_h") = p.p_h,
                        py::arg("p_h_seed_one") = p.p_h_seed_one, py::arg("t") = p.t,
                        py::arg("t_fraction") = p.t_fraction, py::arg("ratio_finite") = p.ratio_finite,
                        py::arg("ratio_display") = p.ratio_display, py::arg("ratio_asymptotic") = p.ratio_asymptotic);
      },
      py::arg("k") = 7, py::arg("h") = 8);
  m.def("omega_fixed_point", &omega_fixed_point);
  m.def(
      "fluid_recurrence",
      [](int k, int h) {
        const FluidPrediction f = fluid_recurrence(k, h);
        return py::dict(py::arg("fluid") = f.fluid, py::arg("mean_field") = f.mean_field,
                        py::arg("fluid_limit") = f.fluid_limit, py::arg("omega") = f.omega,
                        py::arg("ratio_fluid") = f.ratio_fluid, py::arg("ratio_mean_field") = f.ratio_mean_field);
      },
      py::arg("k"), py::arg("h"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = execute(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
