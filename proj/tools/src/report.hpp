#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace wulffcurv::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// One row of the tabular projection of a report.
struct CsvRow {
  std::string section;
  std::string name;
  std::string r;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Report document: a JSON object with fixed top-level sections. Everything
/// except "timings" is a deterministic function of the configuration.
class ReportDocument {
 public:
  ReportDocument();

  Json& section(const std::string& name);
  void add_row(const CsvRow& row) { rows_.push_back(row); }
  void time(const std::string& name, double seconds);
  void merge(const ReportDocument& other);

  const Json& json() const { return doc_; }
  /// The document without its timings, serialized.
  std::string deterministic_dump() const;

  void write_json(const std::filesystem::path& path) const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  Json doc_;
  std::vector<CsvRow> rows_;
};

}  // namespace wulffcurv::cli
