#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace fomlab {

enum class ReportFormat { Json, Csv };

/// A structured record plus an optional table. JSON output is the record;
/// CSV output is the table (header row always present), or a one-row table
/// of the record's scalar fields when no table columns are set.
struct Report {
  nlohmann::ordered_json record = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
};

ReportFormat parse_format(const std::string& name);

/// Rounds every floating-point value to 12 significant digits.
nlohmann::ordered_json round_floats(const nlohmann::ordered_json& value);
double round12(double x);

void write_report(const Report& report, ReportFormat format, std::ostream& out);
/// Writes to `path`, throwing IoError if the file cannot be written.
void write_report(const Report& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace fomlab
