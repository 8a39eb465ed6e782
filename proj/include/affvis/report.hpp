#pragma once

// Report plumbing: ordered JSON documents, RFC-4180 CSV tables, SVG plots,
// and atomic file output.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "affvis/dimension.hpp"
#include "affvis/regularity.hpp"
#include "affvis/visibility.hpp"

namespace affvis {

using Json = nlohmann::ordered_json;

/// Writes to a sibling temporary file, then renames it over `path`. Parent
/// directories are created. Throws Error(InvalidArgument) on I/O failure.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip decimal form ("%.17g" trimmed), locale independent.
std::string format_number(double v);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  /// CRLF line endings as in RFC 4180.
  std::string str() const;
};

/// Skeleton {"command", "parameters", "results", "assertions"}.
Json run_report(const std::string& command, Json parameters);

/// Appends {"name", "passed", "measured", "tolerance"} to report["assertions"].
void add_assertion(Json& report, const std::string& name, bool passed, Json measured, Json tolerance);
bool all_assertions_pass(const Json& report);

Json to_json(const DimEstimate& est);
Json to_json(const AngularInterval& arc);
Json to_json(const Word& w);

/// Attractor cells, with `overlay` cells (e.g. the visible part) drawn in a
/// second layer on top.
std::string svg_cells(const OccupancyGrid& base, const OccupancyGrid* overlay = nullptr, double size_px = 640.0);

struct LogLogSeries {
  std::string label;
  DimEstimate estimate;
};

/// log2 N against log2(1/delta) with the fitted lines.
std::string svg_loglog(const std::vector<LogLogSeries>& series, double size_px = 480.0);

}  // namespace affvis
