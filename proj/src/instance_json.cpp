#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fomlab/instance.hpp"

namespace fomlab {

using nlohmann::ordered_json;

std::string instance_to_json(const Instance& instance) {
  ordered_json doc;
  doc["n"] = instance.size();
  ordered_json events = ordered_json::array();
  for (const Event& ev : instance.events()) {
    events.push_back({{"kind", ev.kind == EventKind::Arrival ? "arrival" : "deadline"}, {"v", ev.vertex}});
  }
  doc["events"] = std::move(events);
  ordered_json edges = ordered_json::array();
  for (const auto& [a, b] : instance.edges()) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  if (instance.bipartition()) {
    doc["bipartition"] = *instance.bipartition();
  } else {
    doc["bipartition"] = nullptr;
  }
  return doc.dump();
}

Instance instance_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::IoError, std::string("instance JSON does not parse: ") + e.what());
  }
  try {
    const int n = doc.at("n").get<int>();
    std::vector<Event> events;
    for (const auto& ev : doc.at("events")) {
      const auto kind = ev.at("kind").get<std::string>();
      if (kind != "arrival" && kind != "deadline") {
        throw Error(ErrorCode::MalformedEvents, "unknown event kind '" + kind + "'");
      }
      events.push_back({kind == "arrival" ? EventKind::Arrival : EventKind::Deadline, ev.at("v").get<int>()});
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::IoError, "edge must be a pair");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    std::optional<std::vector<int>> sides;
    if (doc.contains("bipartition") && !doc["bipartition"].is_null()) {
      sides = doc["bipartition"].get<std::vector<int>>();
    }
    return build_instance(n, std::move(events), std::move(edges), std::move(sides));
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("instance JSON has wrong shape: ") + e.what());
  }
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << instance_to_json(instance) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

}  // namespace fomlab
