#include "fomlab/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fomlab/error.hpp"

namespace fomlab {

using json = nlohmann::ordered_json;

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::UsageError, "unknown format '" + name + "' (expected json or csv)");
}

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json round_floats(const json& value) {
  if (value.is_number_float()) return round12(value.get<double>());
  if (value.is_array() || value.is_object()) {
    json copy = value;
    for (auto& item : copy) item = round_floats(item);
    return copy;
  }
  return value;
}

namespace {

std::string csv_cell(const json& value) {
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  if (value.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value.get<double>());
    return buf;
  }
  if (value.is_null()) return "";
  return value.dump();
}

void write_row(std::ostream& out, const std::vector<json>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << csv_cell(cells[i]);
  }
  out << '\n';
}

}  // namespace

void write_report(const Report& report, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Json) {
    out << round_floats(report.record).dump(2) << '\n';
    return;
  }
  if (!report.columns.empty()) {
    for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
    out << '\n';
    for (const auto& row : report.rows) write_row(out, row);
    return;
  }
  std::vector<json> header, values;
  for (const auto& [key, value] : report.record.items()) {
    if (value.is_structured()) continue;
    header.emplace_back(key);
    values.push_back(value);
  }
  write_row(out, header);
  write_row(out, values);
}

void write_report(const Report& report, ReportFormat format, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_report(report, format, buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  file << buffer.str();
  if (!file.flush()) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace fomlab
