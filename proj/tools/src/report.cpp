#include "report.hpp"

#include <charconv>
#include <fstream>

#include "wulffcurv/error.hpp"

namespace wulffcurv::cli {
namespace {

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ReportDocument::ReportDocument() {
  doc_["schema"] = "wulffcurv.report";
  doc_["version"] = kSchemaVersion;
  doc_["config"] = Json::object();
  doc_["timings"] = Json::object();
}

Json& ReportDocument::section(const std::string& name) {
  if (!doc_.contains(name)) doc_[name] = Json::array();
  return doc_[name];
}

void ReportDocument::time(const std::string& name, double seconds) { doc_["timings"][name] = seconds; }

void ReportDocument::merge(const ReportDocument& other) {
  for (const auto& [key, value] : other.doc_.items()) {
    if (key == "schema" || key == "version" || key == "config") continue;
    if (key == "timings") {
      for (const auto& [name, t] : value.items()) doc_["timings"][name] = t;
      continue;
    }
    Json& target = section(key);
    for (const auto& item : value) target.push_back(item);
  }
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

std::string ReportDocument::deterministic_dump() const {
  Json copy = doc_;
  copy.erase("timings");
  return copy.dump(2);
}

void ReportDocument::write_json(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << doc_.dump(2) << '\n';
}

void ReportDocument::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << "section,name,r,value,tolerance,pass\n";
  for (const auto& row : rows_) {
    out << csv_field(row.section) << ',' << csv_field(row.name) << ',' << row.r << ',' << number(row.value) << ','
        << number(row.tolerance) << ',' << (row.pass ? "true" : "false") << '\n';
  }
}

}  // namespace wulffcurv::cli
