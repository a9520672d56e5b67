#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pipeline.hpp"

namespace fs = std::filesystem;
using namespace wulffcurv::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wulffcurv_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(WULFFCURV_CLI_PATH) + " " + args + " --out " + out.string() + " > " +
                          (out / "stdout.txt").string() + " 2> " + (out / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

}  // namespace

TEST(Cli, WulffConstantIsUnitSphere) {
  const fs::path out = scratch("wulff_const");
  ASSERT_EQ(run("wulff --F const:c=1 --subdiv 3", out), kPass);
  ASSERT_TRUE(fs::exists(out / "wulff.obj"));
  const Json mesh = load(out / "report.json")["wulff"][0]["mesh"];
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(mesh["bbox_min"][k].get<double>(), -1.0, 1e-3);
    EXPECT_NEAR(mesh["bbox_max"][k].get<double>(), 1.0, 1e-3);
  }
}

TEST(Cli, WulffLinearCentroid) {
  const fs::path out = scratch("wulff_linear");
  ASSERT_EQ(run("wulff --F linear:a=[0.3,0,0]", out), kPass);
  const Json mesh = load(out / "report.json")["wulff"][0]["mesh"];
  EXPECT_NEAR(mesh["centroid"][0].get<double>(), 0.3, 1e-3);
  EXPECT_NEAR(mesh["centroid"][1].get<double>(), 0.0, 1e-3);
  EXPECT_NEAR(mesh["centroid"][2].get<double>(), 0.0, 1e-3);
}

TEST(Cli, WulffNormBoundingBox) {
  const fs::path out = scratch("wulff_norm");
  ASSERT_EQ(run("wulff --F norm:B=[2,1,1]", out), kPass);
  const Json mesh = load(out / "report.json")["wulff"][0]["mesh"];
  const double expected[] = {2.0, 1.0, 1.0};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(mesh["bbox_max"][k].get<double>(), expected[k], 1e-2);
    EXPECT_NEAR(mesh["bbox_min"][k].get<double>(), -expected[k], 1e-2);
  }
  const std::string obj = slurp(out / "wulff.obj");
  EXPECT_NE(obj.find("\nf "), std::string::npos);
}

TEST(Cli, NonConvexAnisotropyIsPreconditionFailure) {
  const fs::path out = scratch("nonconvex");
  EXPECT_EQ(run("wulff --F quad:c=1.5,d=[0,0,1]", out), kPreconditionFailure);
  EXPECT_NE(slurp(out / "stderr.txt").find("ConvexityViolation"), std::string::npos);
  EXPECT_EQ(run("identities --surface wulff:F=quad:c=1.5 --level 2", out), kPreconditionFailure);
}

TEST(Cli, ParseFailures) {
  const fs::path out = scratch("parse");
  EXPECT_EQ(run("wulff --F norm:B=[2,x,1]", out), kParseFailure);
  EXPECT_EQ(run("identities --surface torus:R=1", out), kParseFailure);
  EXPECT_EQ(run("identities --level 0", out), kParseFailure);
  EXPECT_EQ(run("bogus", out), kParseFailure);
  EXPECT_EQ(run("identities --tol-minkowski -1", out), kParseFailure);
}

TEST(Cli, SphereIdentitiesPass) {
  const fs::path out = scratch("identities_sphere");
  EXPECT_EQ(run("identities --surface sphere:R=1 --F const:c=1 --level 3", out), kPass);
  const Json doc = load(out / "report.json");
  EXPECT_EQ(doc["schema"], "wulffcurv.report");
  EXPECT_EQ(doc["version"], kSchemaVersion);
  EXPECT_TRUE(doc.contains("identities"));
  const std::string csv = slurp(out / "report.csv");
  EXPECT_EQ(csv.rfind("section,name,r,value,tolerance,pass\n", 0), 0u);
}

TEST(Cli, ToleranceFailureExitCode) {
  const fs::path out = scratch("tolerance");
  EXPECT_EQ(run("identities --surface ellipsoid:a=1,b=1,c=2 --level 2 --r 0 --tol-minkowski 1e-30", out),
            kToleranceFailure);
  EXPECT_NE(slurp(out / "report.csv").find(",false"), std::string::npos);
}

TEST(Cli, StabilityOnNonCriticalSurface) {
  const fs::path out = scratch("not_critical");
  EXPECT_EQ(run("stability --surface ellipsoid:a=1,b=1,c=2 --F const:c=1 --level 3 --subdiv 2 --r 0", out),
            kPreconditionFailure);
  EXPECT_TRUE(fs::exists(out / "report.json"));
}

TEST(Cli, StabilityOnSphere) {
  const fs::path out = scratch("stability_sphere");
  ASSERT_EQ(run("stability --surface sphere:R=1 --F const:c=1 --level 3 --subdiv 3 --r 0", out), kPass);
  EXPECT_TRUE(fs::exists(out / "stability.obj"));
  EXPECT_TRUE(fs::exists(out / "mode_r0.txt"));
}

TEST(Cli, InProcessRunsAreDeterministic) {
  RunConfig config;
  config.surface = "ellipsoid:a=1,b=1.5,c=2";
  config.F = "norm:B=[2,1,1]";
  config.level = 3;
  config.fields = 1;
  config.seed = 42;
  config.r = {0};
  config.out = scratch("determinism");
  const CommandResult a = run_variation(config);
  const CommandResult b = run_variation(config);
  EXPECT_EQ(a.report.deterministic_dump(), b.report.deterministic_dump());
  config.seed = 43;
  const CommandResult c = run_variation(config);
  EXPECT_NE(a.report.deterministic_dump(), c.report.deterministic_dump());
}

TEST(Cli, BinaryRunsAreByteIdentical) {
  const fs::path one = scratch("bytes_1");
  const fs::path two = scratch("bytes_2");
  const std::string args = "identities --surface wulff:F=norm:B=[2,1,1] --level 3 --r 0";
  ASSERT_EQ(run(args, one), run(args, two));
  Json a = load(one / "report.json");
  Json b = load(two / "report.json");
  a.erase("timings");
  b.erase("timings");
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(slurp(one / "report.csv"), slurp(two / "report.csv"));
}

TEST(Cli, ConfigValidation) {
  RunConfig config;
  config.stab_tol = -1.0;
  EXPECT_THROW(config.validate(), wulffcurv::Error);
  EXPECT_EQ(exit_code_for(wulffcurv::ErrorKind::ParseError), kParseFailure);
  EXPECT_EQ(exit_code_for(wulffcurv::ErrorKind::NotCritical), kPreconditionFailure);
  EXPECT_EQ(exit_code_for(wulffcurv::ErrorKind::ConvexityViolation), kPreconditionFailure);
}
