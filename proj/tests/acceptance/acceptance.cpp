#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pipeline.hpp"
#include "wulffcurv/curvature.hpp"
#include "wulffcurv/functionals.hpp"
#include "wulffcurv/mesh.hpp"
#include "wulffcurv/oracle.hpp"
#include "wulffcurv/stability.hpp"

using namespace wulffcurv;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

std::vector<AnisotropyModel> catalog() {
  return {AnisotropyModel::constant(2, 1.0), AnisotropyModel::linear(vec3(0.3, 0, 0)),
          AnisotropyModel::norm(vec3(2, 1, 1)), AnisotropyModel::quadratic(0.2, vec3(0, 0, 1))};
}

Mat random_symmetric(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  }
  return 0.5 * (m + m.transpose());
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

// Trace identities and route agreement on random (A, h) pairs.
void criterion_1(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  double trace_worst = 0.0;
  double route_worst = 0.0;
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Mat b = random_symmetric(rng, n, 1.0);
      const Mat A = b * b.transpose() + 0.2 * Mat::Identity(n, n);
      const Mat h = random_symmetric(rng, n, 2.0);
      const CurvatureBundle bundle = make_bundle(A, h);
      const double scale = 1.0 + bundle.lambda.cwiseAbs().sum();
      trace_worst = std::max(trace_worst, trace_identities(bundle).max_relative);
      for (int r = 0; r <= n; ++r) {
        const double norm = std::pow(scale, r);
        route_worst = std::max(route_worst, std::abs(bundle.sigma(r) - sigma_kronecker(bundle.s, r)) / norm);
        route_worst = std::max(route_worst, std::abs(bundle.sigma(r) - sym_poly_expand(bundle.lambda, r)) / norm);
        route_worst =
            std::max(route_worst, (bundle.P[r] - newton_kronecker(bundle.s, r)).cwiseAbs().maxCoeff() / norm);
      }
    }
  }
  const double elapsed = seconds_since(start);
  out.require(trace_worst <= 1e-10, "trace identities");
  out.require(route_worst <= 1e-10, "route agreement");
  out.require(elapsed < 5.0, "runtime");
  out.detail << "trace " << fmt(trace_worst) << ", routes " << fmt(route_worst) << ", " << fmt(elapsed) << " s";
}

void criterion_2(Outcome& out) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const AnisotropyModel& F : catalog()) {
    const QuadratureGrid grid = build_grid(ParametricSurface::wulff(F), 4);
    for (const PointFrame& frame : grid.frames) {
      const PointFrame f = with_anisotropy(frame, F);
      worst = std::max(worst, (f.s - Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
  }
  const double elapsed = seconds_since(start);
  out.require(worst <= 1e-6, "|s - I|");
  out.require(elapsed < 10.0, "runtime");
  out.detail << "max |s - I| " << fmt(worst) << ", " << fmt(elapsed) << " s";
}

void criterion_3(Outcome& out) {
  const auto start = Clock::now();
  std::vector<std::pair<ParametricSurface, AnisotropyModel>> cases = {
      {ParametricSurface::sphere(2), AnisotropyModel::constant(2, 1.0)},
      {ParametricSurface::ellipsoid(vec3(1, 1, 2)), AnisotropyModel::constant(2, 1.0)},
      {ParametricSurface::ellipsoid(vec3(1, 1, 2)), AnisotropyModel::norm(vec3(2, 1, 1))}};
  for (const AnisotropyModel& F : catalog()) cases.emplace_back(ParametricSurface::wulff(F), F);
  double worst = 0.0;
  for (const auto& [surface, F] : cases) {
    const AnisotropicSample sample = sample_surface(build_grid(surface, 5), F);
    for (int r = 0; r <= 1; ++r) worst = std::max(worst, minkowski_residual(sample, r).relative());
  }
  const double elapsed = seconds_since(start);
  out.require(worst <= 1e-8, "relative residual");
  out.require(elapsed < 30.0, "runtime");
  out.detail << "max relative residual " << fmt(worst) << " over " << cases.size() << " surfaces, " << fmt(elapsed)
             << " s";
}

void criterion_4(Outcome& out) {
  const auto start = Clock::now();
  const std::vector<std::pair<ParametricSurface, AnisotropyModel>> pairs = {
      {ParametricSurface::sphere(2), AnisotropyModel::constant(2, 1.0)},
      {ParametricSurface::ellipsoid(vec3(1, 1, 2)), AnisotropyModel::norm(vec3(2, 1, 1))},
      {ParametricSurface::wulff(AnisotropyModel::norm(vec3(2, 1, 1))), AnisotropyModel::norm(vec3(2, 1, 1))},
      {ParametricSurface::radial(2, {0.1}, {Polynomial::parse("x1*x2")}),
       AnisotropyModel::quadratic(0.2, vec3(0, 0, 1))}};
  double worst = 0.0;
  double worst_volume = 0.0;
  int checks = 0;
  for (const auto& [surface, F] : pairs) {
    const QuadratureGrid grid = build_grid(surface, 4);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const VariationField field = VariationField::random(2, seed);
      for (int r = 0; r <= 2; ++r) {
        const FirstVariationCheck c = first_variation_check(surface, F, grid, r, field);
        worst = std::max(worst, c.mismatch);
        worst_volume = std::max(worst_volume, c.volume_mismatch);
        ++checks;
      }
    }
  }
  const double elapsed = seconds_since(start);
  out.require(worst <= 1e-5, "first variation");
  out.require(worst_volume <= 1e-6, "volume derivative");
  out.require(elapsed < 120.0, "runtime");
  out.detail << checks << " checks, mismatch " << fmt(worst) << ", volume " << fmt(worst_volume) << ", "
             << fmt(elapsed) << " s";
}

void criterion_5(Outcome& out) {
  const ParametricSurface e = ParametricSurface::ellipsoid(vec3(1, 1, 2));
  const AnisotropyModel F = AnisotropyModel::norm(vec3(2, 1, 1));
  std::vector<QuadratureGrid> grids;
  for (int level = 3; level <= 5; ++level) grids.push_back(build_grid(e, level));
  double worst = 1e300;
  for (int r = 0; r <= 1; ++r) {
    std::vector<double> aniso;
    std::vector<double> pos;
    for (const QuadratureGrid& grid : grids) {
      const DivergenceLemmaResiduals res = divergence_lemma_residuals(e, F, grid, r);
      aniso.push_back(res.sup_anisotropy());
      pos.push_back(res.sup_position());
    }
    for (const auto* sup : {&aniso, &pos}) {
      for (std::size_t k = 0; k + 1 < sup->size(); ++k) worst = std::min(worst, order((*sup)[k], (*sup)[k + 1]));
    }
  }
  out.require(worst >= 1.8, "observed order");
  out.detail << "min observed order " << fmt(worst) << " (levels 3-4-5, r = 0, 1)";
}

void criterion_6(Outcome& out) {
  const auto start = Clock::now();
  int checked = 0;
  for (const AnisotropyModel& F : catalog()) {
    const SurfaceMesh mesh = build_mesh(ParametricSurface::wulff(F), 5);
    for (int r = 0; r <= 1; ++r) {
      const SpectrumReport rep = constrained_spectrum(assemble_form(mesh, F, r));
      const double mu4 = rep.eigenvalues.at(3);
      int kernel = 0;
      for (double mu : rep.eigenvalues) kernel += std::abs(mu) <= 1e-2 * mu4;
      out.require(mu4 > 0.0 && kernel == 3, F.describe() + " r=" + std::to_string(r) + " kernel " +
                                                std::to_string(kernel));
      ++checked;
      if (F.kind() == AnisotropyKind::Constant) {
        std::vector<double> expected;
        for (const auto& [mu, mult] : harmonic_spectrum(3)) expected.insert(expected.end(), mult, mu * (r + 1));
        double dev = 0.0;
        for (std::size_t k = 3; k < expected.size(); ++k) {
          dev = std::max(dev, std::abs(rep.eigenvalues.at(k) - expected[k]) / expected[k]);
        }
        out.require(dev <= 0.02, "sphere spectrum r=" + std::to_string(r));
        if (r == 0) out.detail << "sphere deviation " << fmt(100.0 * dev) << "%, ";
      }
    }
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < 180.0, "runtime");
  out.detail << checked << " spectra, " << fmt(elapsed) << " s";
}

void criterion_7(Outcome& out) {
  const ParametricSurface sphere = ParametricSurface::sphere(2);
  const AnisotropyModel one = AnisotropyModel::constant(2, 1.0);
  const SurfaceMesh sphere_mesh = build_mesh(sphere, 5);
  double worst = 0.0;
  for (const char* psi : {"x1*x2", "x1*x2*x3"}) {
    const SecondVariationCheck c =
        second_variation_fd(sphere, one, 5, sphere_mesh, 0, VariationField::normal(Polynomial::parse(psi)));
    worst = std::max(worst, c.mismatch);
  }
  const AnisotropyModel F = AnisotropyModel::norm(vec3(2, 1, 1));
  const ParametricSurface w = ParametricSurface::wulff(F);
  const SurfaceMesh w_mesh = build_mesh(w, 5);
  for (std::uint64_t seed : {1u, 2u}) {
    const SecondVariationCheck c = second_variation_fd(w, F, 5, w_mesh, 0, VariationField::random_normal(2, seed));
    worst = std::max(worst, c.mismatch);
  }
  out.require(worst <= 0.02, "mismatch");
  out.detail << "max mismatch " << fmt(100.0 * worst) << "%";
}

void criterion_8(Outcome& out) {
  const Vec a = vec3(0.3, 0, 0);
  const AnisotropyModel lin = AnisotropyModel::linear(a);
  const ParametricSurface w = ParametricSurface::wulff(lin);
  const QuadratureGrid grid = build_grid(w, 4);
  const SurfaceMesh mesh = build_mesh(w, 7);
  const TestFunctionDiagnostics d = test_function(w, lin, grid, mesh, 0);
  double nodal = 0.0;
  for (std::size_t k = 0; k < mesh.vertex_count(); ++k) {
    nodal = std::max(nodal, std::abs(d.psi_mesh(static_cast<Eigen::Index>(k)) + 2.0 * a.dot(mesh.directions[k])));
  }
  out.require(nodal <= 1e-6, "psi* nodal");
  out.require(std::abs(d.form_value) <= 1e-4, "Q[psi*]");
  out.require(std::abs(d.rhs_closed_form) <= 1e-4, "closed-form rhs");
  out.detail << "psi* error " << fmt(nodal) << ", Q " << fmt(d.form_value) << ", rhs " << fmt(d.rhs_closed_form);

  double worst_order = 1e300;
  const AnisotropyModel F = AnisotropyModel::norm(vec3(2, 1, 1));
  for (const Vec& axes : {vec3(1, 1, 2), vec3(1, 1.5, 2)}) {
    const ParametricSurface e = ParametricSurface::ellipsoid(axes);
    std::vector<QuadratureGrid> grids;
    for (int level = 4; level <= 6; ++level) grids.push_back(build_grid(e, level));
    for (int r = 0; r <= 1; ++r) {
      std::vector<double> aniso;
      std::vector<double> pos;
      for (const QuadratureGrid& g : grids) {
        const IrResiduals res = ir_residuals(e, F, g, r);
        aniso.push_back(res.sup_anisotropy());
        pos.push_back(res.sup_position());
      }
      for (const auto* sup : {&aniso, &pos}) {
        for (std::size_t k = 0; k + 1 < sup->size(); ++k) {
          worst_order = std::min(worst_order, order((*sup)[k], (*sup)[k + 1]));
        }
      }
    }
  }
  out.require(worst_order >= 1.8, "I_r order");
  out.detail << ", I_r order " << fmt(worst_order);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  double gap_min = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    for (int n : {3, 4}) {
      Vec lambda(n);
      for (int i = 0; i < n; ++i) lambda(i) = u(rng);
      for (int r = 0; r + 2 <= n; ++r) gap_min = std::min(gap_min, maclaurin_gap(lambda, r));
    }
  }
  double umbilic_max = 0.0;
  for (double c : {0.5, 1.0, 3.0}) {
    for (int n : {3, 4}) {
      for (int r = 0; r + 2 <= n; ++r) umbilic_max = std::max(umbilic_max, std::abs(maclaurin_gap(Vec::Constant(n, c), r)));
    }
  }
  out.require(gap_min >= -1e-12, "maclaurin gap sign");
  out.require(umbilic_max == 0.0, "maclaurin gap at umbilic data");
  out.detail << ", gap min " << fmt(gap_min) << ", umbilic gap " << fmt(umbilic_max);

  const ParametricSurface e = ParametricSurface::ellipsoid(vec3(1, 1.5, 2));
  const ChainTerms chain = chain_terms(sample_surface(build_grid(e, 4), AnisotropyModel::constant(2, 1.0)), 0);
  out.require(chain.gap_term_1 > 0.0 && chain.gap_term_2 > 0.0, "obstruction terms");
  out.detail << ", obstruction terms " << fmt(chain.gap_term_1) << ", " << fmt(chain.gap_term_2);
}

void criterion_9(Outcome& out) {
  cli::RunConfig config;
  config.surface = "wulff:F=norm:B=[2,1,1]";
  config.F = "norm:B=[2,1,1]";
  config.level = 3;
  config.subdiv = 3;
  config.fields = 2;
  config.seed = 11;
  const auto base = std::filesystem::temp_directory_path() / "wulffcurv_acceptance";
  std::vector<std::string> dumps;
  for (int run = 0; run < 2; ++run) {
    config.out = base / ("run" + std::to_string(run));
    std::filesystem::create_directories(config.out);
    const cli::CommandResult result = cli::run_all(config);
    cli::write_reports(result, config);
    dumps.push_back(result.report.deterministic_dump());
  }
  const auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  cli::Json a = cli::Json::parse(read(base / "run0" / "report.json"));
  cli::Json b = cli::Json::parse(read(base / "run1" / "report.json"));
  a.erase("timings");
  b.erase("timings");
  out.require(dumps[0] == dumps[1], "in-memory reports differ");
  out.require(a.dump() == b.dump(), "report.json differs");
  out.require(read(base / "run0" / "report.csv") == read(base / "run1" / "report.csv"), "report.csv differs");
  out.detail << "report bytes " << dumps[0].size();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"algebraic identities on random pairs", criterion_1},
      {"Wulff shape has s = I", criterion_2},
      {"Minkowski formulas", criterion_3},
      {"first variation", criterion_4},
      {"divergence lemma convergence", criterion_5},
      {"Wulff shape stability spectrum", criterion_6},
      {"second variation against the discrete form", criterion_7},
      {"test-function chain", criterion_8},
      {"determinism", criterion_9}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    failures += !out.pass;
    std::printf("%s criterion %zu: %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
