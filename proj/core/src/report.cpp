#include "l96sp/report.hpp"

#include <fstream>
#include <iomanip>

#include "l96sp/error.hpp"

namespace l96sp {

void CsvTable::write(const std::filesystem::path& path) const {
  if (header.size() != columns.size()) throw ConfigError("CsvTable: header and columns differ");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  out << std::setprecision(17);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ',';
      if (r < columns[i].size()) out << columns[i][r];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json to_json(const WeatherCurves& c) {
  return {{"lead_time", c.lead}, {"error", c.error}, {"spread", c.spread},
          {"init_rows", c.init_rows}};
}

nlohmann::json to_json(const Histogram& h) {
  return {{"edges", h.spec.edges()}, {"mass", h.mass}, {"count", h.count},
          {"below_range", h.below}, {"above_range", h.above}};
}

nlohmann::json to_json(const Histogram2d& h) {
  return {{"x_edges", h.xspec.edges()}, {"y_edges", h.yspec.edges()}, {"mass", h.mass},
          {"shape", {h.xspec.bins, h.yspec.bins}}, {"count", h.count}, {"out_of_range", h.clamped}};
}

CsvTable weather_csv(const WeatherCurves& c) {
  return {{"lead_time", "error", "spread"}, {c.lead, c.error, c.spread}};
}

CsvTable histogram_csv(const std::vector<std::string>& names, const std::vector<Histogram>& hs) {
  if (names.size() != hs.size() || hs.empty()) throw ConfigError("histogram_csv: bad arguments");
  CsvTable t;
  t.header.push_back("bin_center");
  const auto& spec = hs.front().spec;
  std::vector<double> centers(spec.bins);
  for (std::size_t i = 0; i < spec.bins; ++i)
    centers[i] = spec.lo + (static_cast<double>(i) + 0.5) * spec.width();
  t.columns.push_back(std::move(centers));
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i].spec.bins != spec.bins || hs[i].spec.lo != spec.lo || hs[i].spec.hi != spec.hi)
      throw ConfigError("histogram_csv: histograms use different binning");
    t.header.push_back(names[i]);
    t.columns.push_back(hs[i].mass);
  }
  return t;
}

EvalReport::EvalReport() {
  data_ = {{"format", kReportFormat}, {"version", kReportVersion}};
}

void EvalReport::add_csv(const std::string& name, CsvTable table) {
  csvs_.emplace_back(name, std::move(table));
}

void EvalReport::write(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  validate_report(data_);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw IoError("cannot write " + (dir / "report.json").string());
    out << data_.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + (dir / "report.json").string());
  }
  for (const auto& [name, table] : csvs_) table.write(dir / (name + ".csv"));
}

void validate_report(const nlohmann::json& r) {
  auto fail = [](const std::string& what) { throw IoError("invalid report: " + what); };
  if (!r.is_object()) fail("not an object");
  if (r.value("format", "") != kReportFormat) fail("format");
  if (!r.contains("version") || r["version"] != kReportVersion) fail("version");
  if (r.contains("weather")) {
    for (const auto& [name, c] : r["weather"].items())
      for (const char* key : {"lead_time", "error", "spread"})
        if (!c.contains(key) || !c[key].is_array()) fail("weather." + name + "." + key);
  }
  if (r.contains("kl") && !r["kl"].is_object()) fail("kl");
  if (r.contains("likelihood") && !r["likelihood"].is_array()) fail("likelihood");
  if (r.contains("cost") && !r["cost"].is_object()) fail("cost");
}

}  // namespace l96sp
