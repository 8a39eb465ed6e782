#include "affvis/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace affvis {

namespace {

constexpr const char* kModule = "report";
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(kModule, ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw Error(kModule, ErrorCode::InvalidArgument, "write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(kModule, ErrorCode::InvalidArgument, "cannot rename onto " + path.string());
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += csv_field(row[k]);
    }
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

Json run_report(const std::string& command, Json parameters) {
  Json doc;
  doc["command"] = command;
  doc["parameters"] = std::move(parameters);
  doc["results"] = Json::object();
  doc["assertions"] = Json::array();
  return doc;
}

void add_assertion(Json& report, const std::string& name, bool passed, Json measured, Json tolerance) {
  report["assertions"].push_back(
      {{"name", name}, {"passed", passed}, {"measured", std::move(measured)}, {"tolerance", std::move(tolerance)}});
}

bool all_assertions_pass(const Json& report) {
  if (!report.contains("assertions")) return true;
  return std::all_of(report["assertions"].begin(), report["assertions"].end(),
                     [](const Json& a) { return a["passed"].get<bool>(); });
}

Json to_json(const DimEstimate& est) {
  Json j;
  j["slope"] = est.slope;
  j["intercept"] = est.intercept;
  j["residual_log2"] = est.residual;
  j["dropped_coarse"] = est.dropped_coarse;
  j["scales"] = est.scales;
  j["counts"] = est.counts;
  return j;
}

Json to_json(const AngularInterval& arc) { return {{"lo", arc.lo}, {"hi", arc.hi()}, {"width", arc.width}}; }

Json to_json(const Word& w) {
  std::string s;
  for (Symbol c : w) {
    if (!s.empty()) s += ' ';
    s += std::to_string(c + 1);
  }
  return s;
}

std::string svg_cells(const OccupancyGrid& base, const OccupancyGrid* overlay, double size_px) {
  std::int64_t i0 = std::numeric_limits<std::int64_t>::max(), j0 = i0, i1 = -i0, j1 = -i0;
  for (const Cell& c : base.cells) {
    i0 = std::min(i0, c.i), i1 = std::max(i1, c.i);
    j0 = std::min(j0, c.j), j1 = std::max(j1, c.j);
  }
  if (base.cells.empty()) i0 = j0 = i1 = j1 = 0;
  const double span = static_cast<double>(std::max(i1 - i0, j1 - j0) + 1);
  const double px = size_px / span;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(size_px) << "\" height=\""
     << format_number(size_px) << "\" viewBox=\"0 0 " << format_number(size_px) << ' ' << format_number(size_px)
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  auto layer = [&](const OccupancyGrid& g, const char* id, const char* fill) {
    // Cells are mapped through the base grid's index frame.
    const double ratio = g.delta / base.delta;
    os << "<g id=\"" << id << "\" fill=\"" << fill << "\">\n";
    for (const Cell& c : g.cells) {
      const double x = (static_cast<double>(c.i) * ratio - static_cast<double>(i0)) * px;
      const double y = size_px - (static_cast<double>(c.j + 1) * ratio - static_cast<double>(j0)) * px;
      os << "<rect x=\"" << format_number(x) << "\" y=\"" << format_number(y) << "\" width=\""
         << format_number(px * ratio) << "\" height=\"" << format_number(px * ratio) << "\"/>\n";
    }
    os << "</g>\n";
  };
  layer(base, "attractor", "#9e9e9e");
  if (overlay) layer(*overlay, "visible", "#d62728");
  os << "</svg>\n";
  return os.str();
}

std::string svg_loglog(const std::vector<LogLogSeries>& series, double size_px) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.estimate.scales.size(); ++k) {
      const double x = -std::log2(s.estimate.scales[k]);
      const double y = std::log2(static_cast<double>(s.estimate.counts[k]));
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x0 = 0, x1 = 1;
  if (!(y1 > y0)) y0 = 0, y1 = 1;
  const double pad = 40.0;
  auto X = [&](double x) { return pad + (x - x0) / (x1 - x0) * (size_px - 2 * pad); };
  auto Y = [&](double y) { return size_px - pad - (y - y0) / (y1 - y0) * (size_px - 2 * pad); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(size_px) << "\" height=\""
     << format_number(size_px) << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << pad << "\" y=\"" << pad << "\" width=\""
     << format_number(size_px - 2 * pad) << "\" height=\"" << format_number(size_px - 2 * pad) << "\"/></g>\n";
  os << "<text x=\"" << format_number(size_px / 2) << "\" y=\"" << format_number(size_px - 8)
     << "\" text-anchor=\"middle\" font-size=\"12\">log2(1/delta)</text>\n";
  os << "<text x=\"12\" y=\"" << format_number(size_px / 2) << "\" font-size=\"12\" transform=\"rotate(-90 12 "
     << format_number(size_px / 2) << ")\" text-anchor=\"middle\">log2 N(delta)</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const DimEstimate& e = series[s].estimate;
    const char* color = kPalette[s % std::size(kPalette)];
    os << "<g fill=\"" << color << "\" stroke=\"" << color << "\">\n";
    for (std::size_t k = 0; k < e.scales.size(); ++k) {
      os << "<circle cx=\"" << format_number(X(-std::log2(e.scales[k]))) << "\" cy=\""
         << format_number(Y(std::log2(static_cast<double>(e.counts[k])))) << "\" r=\"3\"/>\n";
    }
    if (!e.scales.empty()) {
      // Fit is in natural logs: ln N = intercept + slope ln(1/delta).
      auto fit = [&](double x) { return (e.intercept + e.slope * x * std::log(2.0)) / std::log(2.0); };
      const double a = -std::log2(e.scales.front()), b = -std::log2(e.scales.back());
      os << "<line x1=\"" << format_number(X(a)) << "\" y1=\"" << format_number(Y(fit(a))) << "\" x2=\""
         << format_number(X(b)) << "\" y2=\"" << format_number(Y(fit(b))) << "\"/>\n";
    }
    os << "<text x=\"" << format_number(pad + 6) << "\" y=\"" << format_number(pad + 16 + 14.0 * static_cast<double>(s))
       << "\" stroke=\"none\" font-size=\"12\">" << series[s].label << " slope "
       << format_number(std::round(e.slope * 1e4) / 1e4) << "</text>\n</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace affvis
