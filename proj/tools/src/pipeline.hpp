#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "report.hpp"
#include "wulffcurv/error.hpp"

namespace wulffcurv::cli {

enum ExitCode : int { kPass = 0, kToleranceFailure = 2, kPreconditionFailure = 3, kParseFailure = 4 };

struct RunConfig {
  std::string F;  // empty: const:c=1 in the surface dimension
  std::string surface = "sphere:R=1";
  std::vector<int> r;  // empty: every valid r for the command
  int level = 4;
  int subdiv = 4;
  int fields = 3;
  std::uint64_t seed = 1;
  int eigenvalues = 16;
  double fd_h = 1e-3;
  double fd_step = 1e-4;
  double stab_tol = 1e-2;
  double kernel_tol = 1e-3;
  double tol_identity = 1e-10;
  double tol_minkowski = 1e-8;
  double tol_divergence = 1e-4;
  double tol_order = 1.8;
  double tol_variation = 1e-5;
  double tol_volume = 1e-6;
  double tol_el = 1e-6;
  double tol_wulff = 1e-6;
  double tol_oracle = 1e-5;
  std::filesystem::path out = ".";

  /// Throws InvalidArgument on non-positive tolerances or out-of-range sizes.
  void validate() const;
  Json to_json() const;
};

struct CommandResult {
  ReportDocument report;
  int exit_code = kPass;
  std::vector<std::string> messages;

  void absorb(const CommandResult& other);
};

CommandResult run_wulff(const RunConfig& config);
CommandResult run_identities(const RunConfig& config);
CommandResult run_variation(const RunConfig& config);
CommandResult run_stability(const RunConfig& config);
CommandResult run_all(const RunConfig& config);

int exit_code_for(ErrorKind kind);

/// Writes report.json and report.csv into config.out.
void write_reports(const CommandResult& result, const RunConfig& config);

}  // namespace wulffcurv::cli
