#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include "wulffcurv/anisotropy.hpp"
#include "wulffcurv/curvature.hpp"
#include "wulffcurv/functionals.hpp"
#include "wulffcurv/mesh.hpp"
#include "wulffcurv/oracle.hpp"
#include "wulffcurv/spec_parser.hpp"
#include "wulffcurv/stability.hpp"

namespace wulffcurv::cli {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (int k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

struct Inputs {
  ParametricSurface surface;
  AnisotropyModel model;
};

Inputs resolve(const RunConfig& config) {
  ParametricSurface surface = parse_surface(config.surface);
  const std::string F = config.F.empty() ? "const:c=1" : config.F;
  AnisotropyModel model = parse_anisotropy(F, surface.dimension());
  if (model.dimension() != surface.dimension()) {
    fail(ErrorKind::ParseError, "anisotropy '" + F + "' does not match the surface dimension");
  }
  return {std::move(surface), std::move(model)};
}

std::vector<int> r_values(const RunConfig& config, int lo, int hi) {
  std::vector<int> out;
  if (config.r.empty()) {
    for (int r = lo; r <= hi; ++r) out.push_back(r);
    return out;
  }
  for (int r : config.r) {
    if (r < lo || r > hi) {
      fail(ErrorKind::InvalidArgument, "r = " + std::to_string(r) + " outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
    }
    out.push_back(r);
  }
  return out;
}

// Adds a checked row to the document and the CSV projection.
bool check(CommandResult& res, const std::string& section, const std::string& name, int r, double value,
           double tolerance, bool pass, Json extra = Json::object()) {
  Json row = Json::object();
  row["name"] = name;
  if (r >= 0) row["r"] = r;
  row["value"] = value;
  row["tolerance"] = tolerance;
  row["pass"] = pass;
  for (auto& [key, v] : extra.items()) row[key] = v;
  res.report.section(section).push_back(row);
  res.report.add_row({section, name, r >= 0 ? std::to_string(r) : "", value, tolerance, pass});
  if (!pass) {
    res.exit_code = std::max(res.exit_code, static_cast<int>(kToleranceFailure));
    res.messages.push_back(section + "/" + name + (r >= 0 ? " r=" + std::to_string(r) : "") + " failed");
  }
  return pass;
}

Json oracle_json(const OracleReport& o) {
  Json j = Json::object();
  j["check"] = o.check;
  j["inputs"] = o.inputs;
  j["labels"] = o.labels;
  j["oracle"] = o.oracle_values;
  j["main"] = o.main_values;
  j["max_deviation"] = o.max_deviation;
  j["tolerance"] = o.tolerance;
  j["pass"] = o.pass;
  return j;
}

void record_oracle(CommandResult& res, const OracleReport& o) {
  res.report.section("oracles").push_back(oracle_json(o));
  res.report.add_row({"oracles", o.check + ":" + o.inputs, "", o.max_deviation, o.tolerance, o.pass});
  if (!o.pass) {
    res.exit_code = std::max(res.exit_code, static_cast<int>(kToleranceFailure));
    res.messages.push_back("oracle " + o.check + " failed");
  }
}

void write_polyline_obj(const ParametricSurface& surface, int count, std::ostream& out) {
  for (int j = 0; j < count; ++j) {
    const double t = 2.0 * 3.14159265358979323846 * j / count;
    Vec x(2);
    x << std::cos(t), std::sin(t);
    const Vec p = surface.position(x);
    out << "v " << p(0) << ' ' << p(1) << " 0\n";
  }
  out << 'l';
  for (int j = 0; j <= count; ++j) out << ' ' << (j % count) + 1;
  out << '\n';
}

std::vector<Vec> seeded_points(int n, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    Vec v(n + 1);
    for (int k = 0; k <= n; ++k) v(k) = normal(rng);
    out.push_back(v.normalized());
  }
  return out;
}

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

void RunConfig::validate() const {
  for (double tol : {fd_h, fd_step, stab_tol, kernel_tol, tol_identity, tol_minkowski, tol_divergence, tol_order,
                     tol_variation, tol_volume, tol_el, tol_wulff, tol_oracle}) {
    if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerances and steps must be positive");
  }
  if (level < 1 || level > 9) fail(ErrorKind::InvalidArgument, "level must be in 1..9");
  if (subdiv < 0 || subdiv > 8) fail(ErrorKind::InvalidArgument, "subdiv must be in 0..8");
  if (fields < 0) fail(ErrorKind::InvalidArgument, "fields must be non-negative");
  if (eigenvalues < 3) fail(ErrorKind::InvalidArgument, "need at least 3 eigenvalues");
}

Json RunConfig::to_json() const {
  Json j = Json::object();
  j["F"] = F.empty() ? "const:c=1" : F;
  j["surface"] = surface;
  j["r"] = r;
  j["level"] = level;
  j["subdiv"] = subdiv;
  j["fields"] = fields;
  j["seed"] = seed;
  j["eigenvalues"] = eigenvalues;
  j["fd_h"] = fd_h;
  j["fd_step"] = fd_step;
  j["stab_tol"] = stab_tol;
  j["kernel_tol"] = kernel_tol;
  j["tol_identity"] = tol_identity;
  j["tol_minkowski"] = tol_minkowski;
  j["tol_divergence"] = tol_divergence;
  j["tol_order"] = tol_order;
  j["tol_variation"] = tol_variation;
  j["tol_volume"] = tol_volume;
  j["tol_el"] = tol_el;
  j["tol_wulff"] = tol_wulff;
  j["tol_oracle"] = tol_oracle;
  return j;
}

void CommandResult::absorb(const CommandResult& other) {
  report.merge(other.report);
  exit_code = std::max(exit_code, other.exit_code);
  messages.insert(messages.end(), other.messages.begin(), other.messages.end());
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
      return kParseFailure;
    case ErrorKind::ConvexityViolation:
    case ErrorKind::NotCritical:
      return kPreconditionFailure;
    default:
      return 1;
  }
}

CommandResult run_wulff(const RunConfig& config) {
  config.validate();
  const Stopwatch clock;
  CommandResult res;
  res.report.section("config") = config.to_json();
  const std::string F = config.F.empty() ? "const:c=1" : config.F;
  const AnisotropyModel model = parse_anisotropy(F, 2);
  const ConvexityReport conv = check_convexity(model, 2);
  Json block = Json::object();
  block["F"] = model.describe();
  block["convexity"] = {{"samples", conv.sample_count},
                        {"min_eigenvalue", conv.min_eigenvalue},
                        {"argmin", vec_json(conv.argmin_point)},
                        {"pass", conv.pass}};
  res.report.add_row({"wulff", "convexity_min_eigenvalue", "", conv.min_eigenvalue, 0.0, conv.pass});
  if (!conv.pass) {
    res.report.section("wulff").push_back(block);
    res.exit_code = kPreconditionFailure;
    std::string where;
    for (int k = 0; k < conv.argmin_point.size(); ++k) where += (k ? "," : "") + std::to_string(conv.argmin_point(k));
    res.messages.push_back("ConvexityViolation: min eigenvalue of A_F " + std::to_string(conv.min_eigenvalue) +
                           " at [" + where + "]");
    return res;
  }
  const ParametricSurface surface = ParametricSurface::wulff(model);
  std::filesystem::create_directories(config.out);
  std::ofstream obj(config.out / "wulff.obj");
  if (surface.dimension() == 2) {
    const SurfaceMesh mesh = build_mesh(surface, config.subdiv);
    write_obj(mesh, obj);
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    Eigen::Vector3d lo = mesh.vertices.front(), hi = mesh.vertices.front();
    for (const auto& v : mesh.vertices) {
      centroid += v;
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    centroid /= static_cast<double>(mesh.vertex_count());
    block["mesh"] = {{"vertices", mesh.vertex_count()},
                     {"faces", mesh.face_count()},
                     {"area", mesh.total_area()},
                     {"centroid", vec_json(Vec(centroid))},
                     {"bbox_min", vec_json(Vec(lo))},
                     {"bbox_max", vec_json(Vec(hi))}};
    res.report.add_row({"wulff", "mesh_area", "", mesh.total_area(), 0.0, true});
  } else {
    const int count = 8 << config.level;
    write_polyline_obj(surface, count, obj);
    block["mesh"] = {{"vertices", count}};
  }
  res.report.section("wulff").push_back(block);
  res.report.time("wulff", clock.seconds());
  return res;
}

CommandResult run_identities(const RunConfig& config) {
  config.validate();
  const Stopwatch clock;
  CommandResult res;
  res.report.section("config") = config.to_json();
  const auto [surface, model] = resolve(config);
  const int n = surface.dimension();
  const std::vector<int> rs = r_values(config, 0, n);
  const QuadratureGrid grid = build_grid(surface, config.level);
  const AnisotropicSample sample = sample_surface(grid, model);

  double trace_worst = 0.0, route_worst = 0.0;
  for (const auto& b : sample.bundles) {
    trace_worst = std::max(trace_worst, trace_identities(b).max_relative);
    const double scale = 1.0 + b.lambda.cwiseAbs().sum();
    for (int r = 0; r <= n; ++r) {
      const double sr = std::pow(scale, r);
      route_worst = std::max(route_worst, std::abs(sigma_kronecker(b.s, r) - b.sigma(r)) / sr);
      route_worst = std::max(route_worst, (newton_kronecker(b.s, r) - b.P[r]).cwiseAbs().maxCoeff() / sr);
    }
  }
  check(res, "identities", "trace_identities", -1, trace_worst, config.tol_identity, trace_worst <= config.tol_identity);
  check(res, "identities", "sigma_newton_routes", -1, route_worst, config.tol_identity, route_worst <= config.tol_identity);

  for (int r : rs) {
    const FunctionalReport fr = functional_report(sample, r);
    Json row = {{"r", r}, {"value", fr.value}, {"volume", fr.volume}};
    if (r < n) {
      row["lambda_fit"] = fr.lambda_fit;
      row["el_residual_sup"] = fr.el_residual_sup;
    }
    res.report.section("functionals").push_back(row);
    if (r >= n) continue;
    const double mink = minkowski_residual(sample, r).relative();
    check(res, "identities", "minkowski", r, mink, config.tol_minkowski, mink <= config.tol_minkowski);
    const auto pointwise = divergence_lemma_residuals(surface, model, grid, r, config.fd_step);
    const double sup = std::max(pointwise.sup_anisotropy(), pointwise.sup_position());
    check(res, "identities", "divergence_lemma", r, sup, config.tol_divergence, sup <= config.tol_divergence);
    if (config.level >= 3) {
      Json table = Json::array();
      std::vector<double> sups;
      for (int L = config.level - 2; L <= config.level; ++L) {
        const auto d = divergence_lemma_residuals(surface, model, build_grid(surface, L), r);
        sups.push_back(std::max(d.sup_anisotropy(), d.sup_position()));
        table.push_back({{"level", L}, {"sup_residual", sups.back()}});
      }
      const double order = std::min(observed_order(sups[0], sups[1]), observed_order(sups[1], sups[2]));
      const bool negligible = *std::max_element(sups.begin(), sups.end()) <= config.tol_divergence;
      check(res, "identities", "divergence_lemma_order", r, negligible ? 0.0 : order, config.tol_order,
            negligible || order >= config.tol_order, {{"levels", table}, {"negligible", negligible}});
    }
  }
  const bool is_wulff = surface.describe() == ParametricSurface::wulff(model).describe();
  if (is_wulff) {
    double dev = 0.0;
    for (const auto& f : sample.frames) dev = std::max(dev, (f.s - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
    check(res, "identities", "wulff_weingarten_identity", -1, dev, config.tol_wulff, dev <= config.tol_wulff);
  }
  if (n == 1) record_oracle(res, curve_case(surface, model));
  res.report.time("identities", clock.seconds());
  return res;
}

CommandResult run_variation(const RunConfig& config) {
  config.validate();
  const Stopwatch clock;
  CommandResult res;
  res.report.section("config") = config.to_json();
  const auto [surface, model] = resolve(config);
  const int n = surface.dimension();
  const std::vector<int> rs = r_values(config, 0, n);
  const QuadratureGrid grid = build_grid(surface, config.level);
  const AnisotropicSample sample = sample_surface(grid, model);

  std::vector<VariationField> fields{VariationField::normal(Polynomial::constant(1.0), "normal"),
                                     VariationField::translation(unit_axis(n + 1, 0)), VariationField::homothety()};
  for (int i = 0; i < config.fields; ++i) fields.push_back(VariationField::random(n, config.seed + i));

  for (const auto& field : fields) {
    Json entry = {{"field", field.describe()}};
    try {
      Json per_r = Json::array();
      for (int r : rs) {
        const FirstVariationCheck c = first_variation_check(surface, model, grid, r, field, config.fd_h);
        per_r.push_back({{"r", r}, {"fd", c.fd_derivative}, {"formula", c.formula_value}, {"mismatch", c.mismatch}});
        check(res, "variation", "first_variation:" + field.describe(), r, c.mismatch, config.tol_variation,
              c.mismatch <= config.tol_variation);
        if (r == rs.front()) {
          entry["volume"] = {{"fd", c.fd_volume}, {"formula", c.formula_volume}, {"mismatch", c.volume_mismatch}};
          check(res, "variation", "volume_derivative:" + field.describe(), -1, c.volume_mismatch, config.tol_volume,
                c.volume_mismatch <= config.tol_volume);
        }
        if (r < n) {
          const auto el = euler_lagrange_residual(sample, r);
          if (el.sup_residual <= config.tol_el * std::max(1.0, std::abs(el.lambda_fit))) {
            const double dev = std::abs(c.fd_constrained - c.formula_constrained) / std::max(1.0, std::abs(c.fd_derivative));
            check(res, "variation", "constrained_first_variation:" + field.describe(), r, dev, config.tol_variation,
                  dev <= config.tol_variation, {{"fd", c.fd_constrained}, {"formula", c.formula_constrained}});
          }
        }
      }
      entry["per_r"] = per_r;
      record_oracle(res, area_element_variation_check(surface, field, config.fd_h));
      for (const Vec& x : seeded_points(n, config.seed, 2)) record_oracle(res, gauss_map_variation_check(surface, field, x));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ImmersionLoss) throw;
      entry["status"] = "immersion_loss";
      check(res, "variation", "immersion:" + field.describe(), -1, 1.0, 0.0, false);
    }
    res.report.section("variations").push_back(entry);
  }
  res.report.time("variation", clock.seconds());
  return res;
}

CommandResult run_stability(const RunConfig& config) {
  config.validate();
  const Stopwatch clock;
  CommandResult res;
  res.report.section("config") = config.to_json();
  const auto [surface, model] = resolve(config);
  const int n = surface.dimension();
  if (n != 2) fail(ErrorKind::InvalidArgument, "stability needs a surface in R^3");
  const std::vector<int> rs = r_values(config, 0, n - 1);
  const QuadratureGrid grid = build_grid(surface, config.level);
  const SurfaceMesh mesh = build_mesh(surface, config.subdiv);
  std::filesystem::create_directories(config.out);
  {
    std::ofstream obj(config.out / "stability.obj");
    write_obj(mesh, obj);
  }
  SpectrumSettings settings;
  settings.k = config.eigenvalues;
  settings.stab_tol = config.stab_tol;
  settings.kernel_tol = config.kernel_tol;
  settings.seed = config.seed;

  for (int r : rs) {
    Json block = {{"r", r}, {"surface", surface.describe()}, {"F", model.describe()}};
    TestFunctionDiagnostics diag;
    try {
      diag = test_function(surface, model, grid, mesh, r, config.tol_el);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotCritical) throw;
      const auto el = euler_lagrange_residual(sample_surface(grid, model), r);
      block["status"] = "not_critical";
      block["el_residual_sup"] = el.sup_residual;
      block["lambda_fit"] = el.lambda_fit;
      res.report.section("spectra").push_back(block);
      res.report.add_row({"spectra", "not_critical", std::to_string(r), el.sup_residual, config.tol_el, false});
      res.exit_code = std::max(res.exit_code, static_cast<int>(kPreconditionFailure));
      res.messages.push_back("NotCritical: r=" + std::to_string(r) + " sup residual " + std::to_string(el.sup_residual));
      continue;
    }
    const QuadraticForm form = assemble_form(mesh, model, r);
    const SpectrumReport sp = constrained_spectrum(form, settings);
    block["status"] = "critical";
    block["eigenvalues"] = sp.eigenvalues;
    block["reference"] = sp.reference;
    block["near_kernel"] = sp.near_kernel;
    block["kernel_threshold"] = sp.kernel_threshold;
    block["stab_threshold"] = sp.stab_threshold;
    block["verdict"] = to_string(sp.verdict);
    block["test_function"] = {{"alpha", diag.alpha},
                              {"H_next", diag.H_next},
                              {"psi_integral", diag.psi_integral},
                              {"area", diag.area},
                              {"form_value", diag.form_value},
                              {"rhs_closed_form", diag.rhs_closed_form},
                              {"gap_term_1", diag.gaps.gap_term_1},
                              {"gap_term_2", diag.gaps.gap_term_2}};
    res.report.section("spectra").push_back(block);
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
      res.report.add_row({"spectrum", "mu_" + std::to_string(i + 1), std::to_string(r), sp.eigenvalues[i], 0.0, true});
    }
    check(res, "stability", "verdict_stable", r, sp.eigenvalues.front(), sp.stab_threshold,
          sp.verdict == Verdict::Stable, {{"verdict", to_string(sp.verdict)}});
    const int mode = std::min<int>(sp.near_kernel, static_cast<int>(sp.eigenvalues.size()) - 1);
    std::ofstream scalars(config.out / ("mode_r" + std::to_string(r) + ".txt"));
    const Eigen::VectorXd column = sp.modes.col(mode);
    write_vertex_scalars(std::span<const double>(column.data(), static_cast<std::size_t>(column.size())), scalars);
  }
  res.report.time("stability", clock.seconds());
  return res;
}

CommandResult run_all(const RunConfig& config) {
  CommandResult res;
  res.report.section("config") = config.to_json();
  const auto [surface, model] = resolve(config);
  if (model.dimension() == 2) res.absorb(run_wulff(config));
  res.absorb(run_identities(config));
  res.absorb(run_variation(config));
  if (surface.dimension() == 2) res.absorb(run_stability(config));
  return res;
}

void write_reports(const CommandResult& result, const RunConfig& config) {
  std::filesystem::create_directories(config.out);
  result.report.write_json(config.out / "report.json");
  result.report.write_csv(config.out / "report.csv");
}

}  // namespace wulffcurv::cli
