#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l96sp/climate.hpp"
#include "l96sp/weather.hpp"

namespace l96sp {

inline constexpr const char* kReportFormat = "l96sp-eval-report";
inline constexpr int kReportVersion = 1;

/// Column-oriented table written as CSV.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  void write(const std::filesystem::path& path) const;
};

nlohmann::json to_json(const WeatherCurves& c);
nlohmann::json to_json(const Histogram& h);
nlohmann::json to_json(const Histogram2d& h);

CsvTable weather_csv(const WeatherCurves& c);
/// Bin centres plus one mass column per histogram (same spec required).
CsvTable histogram_csv(const std::vector<std::string>& names, const std::vector<Histogram>& hs);

/// Report JSON plus per-figure CSVs, written together under one directory.
class EvalReport {
 public:
  EvalReport();

  nlohmann::json& data() { return data_; }
  const nlohmann::json& data() const { return data_; }
  void add_csv(const std::string& name, CsvTable table);

  /// Writes report.json and <name>.csv files. Throws IoError.
  void write(const std::filesystem::path& dir) const;

 private:
  nlohmann::json data_;
  std::vector<std::pair<std::string, CsvTable>> csvs_;
};

/// Checks format/version and the types of known sections. Throws IoError.
void validate_report(const nlohmann::json& report);

}  // namespace l96sp
