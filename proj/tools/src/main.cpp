#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "pipeline.hpp"

using namespace wulffcurv::cli;

namespace {

void add_common(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--F", config.F, "Anisotropy, e.g. norm:B=[2,1,1]");
  cmd->add_option("--surface", config.surface, "Surface, e.g. ellipsoid:a=1,b=1,c=2");
  cmd->add_option("--r", config.r, "Comma-separated r values")->delimiter(',');
  cmd->add_option("--level", config.level, "Quadrature grid level")->check(CLI::Range(1, 9));
  cmd->add_option("--subdiv", config.subdiv, "Icosphere subdivision count")->check(CLI::Range(0, 8));
  cmd->add_option("--out", config.out, "Output directory");
  cmd->add_option("--seed", config.seed, "Seed for randomized checks");
  cmd->add_option("--fields", config.fields, "Number of random variation fields")->check(CLI::NonNegativeNumber);
  cmd->add_option("--eigenvalues", config.eigenvalues, "Number of constrained eigenvalues")->check(CLI::Range(3, 200));
  cmd->add_option("--fd-h", config.fd_h, "Step of the variation finite differences")->check(CLI::PositiveNumber);
  cmd->add_option("--fd-step", config.fd_step, "Step of pointwise divergence checks")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-stab", config.stab_tol, "Stability tolerance, relative")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-kernel", config.kernel_tol, "Near-kernel tolerance, relative")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-identity", config.tol_identity)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-minkowski", config.tol_minkowski)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-divergence", config.tol_divergence)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-order", config.tol_order)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-variation", config.tol_variation)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-volume", config.tol_volume)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-el", config.tol_el)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-wulff", config.tol_wulff)->check(CLI::PositiveNumber);
  cmd->add_option("--tol-oracle", config.tol_oracle)->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic curvature identities, variations and Wulff-shape stability"};
  app.require_subcommand(1);
  RunConfig config;
  std::function<CommandResult(const RunConfig&)> command;
  const std::pair<const char*, std::function<CommandResult(const RunConfig&)>> commands[] = {
      {"wulff", run_wulff},
      {"identities", run_identities},
      {"variation", run_variation},
      {"stability", run_stability},
      {"all", run_all},
  };
  for (const auto& [name, fn] : commands) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common(cmd, config);
    cmd->callback([&command, fn = fn] { command = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseFailure;
  }

  try {
    const CommandResult result = command(config);
    write_reports(result, config);
    for (const auto& m : result.messages) std::cerr << m << '\n';
    std::cout << (result.exit_code == kPass ? "all checks passed" : "some checks failed") << " ("
              << (config.out / "report.json").string() << ")\n";
    return result.exit_code;
  } catch (const wulffcurv::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
