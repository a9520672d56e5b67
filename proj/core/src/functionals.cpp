#include "wulffcurv/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wulffcurv/error.hpp"

namespace wulffcurv {
namespace {

Polynomial random_polynomial(int m, std::mt19937_64& rng, double magnitude, int max_degree) {
  std::uniform_real_distribution<double> coeff(-magnitude, magnitude);
  std::vector<Polynomial::Term> terms;
  terms.push_back({coeff(rng), {}});
  for (int i = 0; i < m; ++i) {
    Polynomial::Term t{coeff(rng), {}};
    t.exponent[i] = 1;
    terms.push_back(t);
  }
  if (max_degree >= 2) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        Polynomial::Term t{coeff(rng), {}};
        t.exponent[i] += 1;
        t.exponent[j] += 1;
        terms.push_back(t);
      }
    }
  }
  return Polynomial(std::move(terms));
}

std::string seed_tag(const char* prefix, std::uint64_t seed) { return std::string(prefix) + "(seed=" + std::to_string(seed) + ")"; }

ParametricSurface checked_deform(const ParametricSurface& surface, const VariationField& field, double t) {
  return deform(surface, field, t);
}

QuadratureGrid grid_on(const ParametricSurface& surface, int level) {
  try {
    return build_grid(surface, level);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateParametrization) fail(ErrorKind::ImmersionLoss, e.what());
    throw;
  }
}

}  // namespace

VariationField VariationField::normal(Polynomial psi, std::string tag) {
  VariationField f;
  f.normal_part = std::move(psi);
  f.tag = tag.empty() ? "normal(" + f.normal_part.to_string() + ")" : std::move(tag);
  return f;
}

VariationField VariationField::translation(const Vec& a) {
  VariationField f;
  f.constant = a;
  f.tag = "translation";
  return f;
}

VariationField VariationField::homothety(double c) {
  VariationField f;
  f.position_coeff = c;
  f.tag = "homothety";
  return f;
}

VariationField VariationField::ambient_field(std::vector<Polynomial> components, std::string tag) {
  VariationField f;
  f.ambient = std::move(components);
  f.tag = tag.empty() ? "ambient" : std::move(tag);
  return f;
}

VariationField VariationField::random(int n, std::uint64_t seed, double magnitude) {
  std::mt19937_64 rng(seed);
  VariationField f;
  for (int k = 0; k <= n; ++k) f.ambient.push_back(random_polynomial(n + 1, rng, magnitude, 2));
  f.normal_part = random_polynomial(n + 1, rng, magnitude, 2);
  f.tag = seed_tag("random", seed);
  return f;
}

VariationField VariationField::random_normal(int n, std::uint64_t seed, double magnitude) {
  std::mt19937_64 rng(seed);
  VariationField f;
  f.normal_part = random_polynomial(n + 1, rng, magnitude, 2);
  f.tag = seed_tag("random_normal", seed);
  return f;
}

VariationField VariationField::plus(const VariationField& other) const {
  VariationField f = *this;
  f.position_coeff += other.position_coeff;
  if (other.constant.size()) f.constant = f.constant.size() ? Vec(f.constant + other.constant) : other.constant;
  f.normal_part = f.normal_part + other.normal_part;
  if (f.ambient.size() < other.ambient.size()) f.ambient.resize(other.ambient.size());
  for (std::size_t k = 0; k < other.ambient.size(); ++k) f.ambient[k] = f.ambient[k] + other.ambient[k];
  f.tag = tag + "+" + other.tag;
  return f;
}

JetVec VariationField::evaluate(const ParametricSurface& base, const LocalChart& chart, int order) const {
  const int m = base.ambient_dimension();
  JetVec w(m, Jet(0.0));
  const JetVec x = chart.sphere_point(order);
  if (position_coeff != 0.0) {
    const JetVec p = base.position(chart, order);
    for (int k = 0; k < m; ++k) w[k] += position_coeff * p[k];
  }
  if (constant.size()) {
    if (constant.size() != m) fail(ErrorKind::SizeMismatch, "translation vector has wrong dimension");
    for (int k = 0; k < m; ++k) w[k] += constant(k);
  }
  if (!normal_part.empty()) {
    const JetVec nu = base.inner_normal(chart, order);
    const Jet psi = normal_part(x);
    for (int k = 0; k < m; ++k) w[k] += psi * nu[k];
  }
  for (std::size_t k = 0; k < ambient.size() && static_cast<int>(k) < m; ++k) {
    if (!ambient[k].empty()) w[k] += ambient[k](x);
  }
  return w;
}

Vec VariationField::at(const ParametricSurface& base, const Vec& x) const {
  const JetVec w = evaluate(base, LocalChart::at(x), 0);
  Vec v(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) v(k) = w[k].value();
  return v;
}

std::string VariationField::describe() const { return tag.empty() ? "field" : tag; }

VariationDecomposition decompose(const ParametricSurface& surface, const VariationField& field, const Vec& x) {
  const PointFrame f = frame_at(surface, x);
  const Vec w = field.at(surface, x);
  VariationDecomposition d;
  d.psi = w.dot(f.normal);
  d.xi = w - d.psi * f.normal;
  return d;
}

AnisotropicSample sample_surface(const QuadratureGrid& grid, const AnisotropyModel& model) {
  AnisotropicSample s;
  s.dimension = grid.dimension;
  s.weights = grid.weights;
  s.frames.resize(grid.size());
  s.bundles.resize(grid.size());
  s.F.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    s.frames[k] = with_anisotropy(grid.frames[k], model);
    s.bundles[k] = make_bundle(s.frames[k]);
    s.F[k] = model.value(s.frames[k].normal.normalized());
  });
  return s;
}

double area_functional(const AnisotropicSample& sample, int r) {
  if (r < 0 || r > sample.dimension) fail(ErrorKind::InvalidArgument, "r out of range");
  return sample.integrate([&](std::size_t k) { return sample.F[k] * sample.bundles[k].sigma_at(r); });
}

double area_functional(const ParametricSurface& surface, const AnisotropyModel& model, const QuadratureGrid& grid, int r) {
  if (surface.dimension() != grid.dimension) fail(ErrorKind::SizeMismatch, "grid does not belong to surface");
  return area_functional(sample_surface(grid, model), r);
}

double volume_functional(const ParametricSurface& surface, const QuadratureGrid& grid) { return orient_check(surface, grid); }

MinkowskiResidual minkowski_residual(const AnisotropicSample& sample, int r) {
  if (r < 0 || r > sample.dimension - 1) fail(ErrorKind::InvalidArgument, "r out of range");
  MinkowskiResidual m;
  m.value = sample.integrate([&](std::size_t k) {
    const auto& b = sample.bundles[k];
    const auto& f = sample.frames[k];
    return b.H_at(r) * sample.F[k] + b.H_at(r + 1) * f.position.dot(f.normal);
  });
  m.scale = sample.integrate([&](std::size_t k) { return std::abs(sample.bundles[k].H_at(r) * sample.F[k]); });
  return m;
}

MinkowskiResidual minkowski_residual(const ParametricSurface& surface, const AnisotropyModel& model,
                                     const QuadratureGrid& grid, int r) {
  if (surface.dimension() != grid.dimension) fail(ErrorKind::SizeMismatch, "grid does not belong to surface");
  return minkowski_residual(sample_surface(grid, model), r);
}

EulerLagrangeResidual euler_lagrange_residual(const AnisotropicSample& sample, int r) {
  if (r < 0 || r > sample.dimension - 1) fail(ErrorKind::InvalidArgument, "r out of range");
  const double area = sample.integrate([](std::size_t) { return 1.0; });
  EulerLagrangeResidual e;
  e.lambda_fit = sample.integrate([&](std::size_t k) { return (r + 1) * sample.bundles[k].sigma_at(r + 1); }) / area;
  for (const auto& b : sample.bundles) e.sup_residual = std::max(e.sup_residual, std::abs((r + 1) * b.sigma_at(r + 1) - e.lambda_fit));
  return e;
}

FunctionalReport functional_report(const AnisotropicSample& sample, int r) {
  FunctionalReport rep;
  rep.r = r;
  rep.value = area_functional(sample, r);
  rep.volume = sample.integrate([&](std::size_t k) {
    return sample.frames[k].position.dot(sample.frames[k].normal) / (sample.dimension + 1);
  });
  for (int q = 0; q < sample.dimension; ++q) rep.minkowski_residuals.push_back(minkowski_residual(sample, q).relative());
  if (r < sample.dimension) {
    const auto el = euler_lagrange_residual(sample, r);
    rep.lambda_fit = el.lambda_fit;
    rep.el_residual_sup = el.sup_residual;
  }
  return rep;
}

ParametricSurface deform(const ParametricSurface& surface, const VariationField& field, double t) {
  return surface.displaced(std::make_shared<VariationField>(field), t);
}

double richardson_first(const std::function<double(double)>& f, double h) {
  const double d1 = (f(h) - f(-h)) / (2.0 * h);
  const double d2 = (f(h / 2) - f(-h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

double richardson_second(const std::function<double(double)>& f, double h) {
  const double f0 = f(0.0);
  const double d1 = (f(h) - 2.0 * f0 + f(-h)) / (h * h);
  const double d2 = (f(h / 2) - 2.0 * f0 + f(-h / 2)) / (h * h / 4);
  return (4.0 * d2 - d1) / 3.0;
}

FirstVariationCheck first_variation_check(const ParametricSurface& surface, const AnisotropyModel& model,
                                          const QuadratureGrid& grid, int r, const VariationField& field, double h) {
  const int n = surface.dimension();
  if (r < 0 || r > n) fail(ErrorKind::InvalidArgument, "r out of range");
  const AnisotropicSample base = sample_surface(grid, model);
  std::vector<double> psi(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { psi[k] = field.at(surface, grid.nodes[k]).dot(grid.frames[k].normal); });

  FirstVariationCheck c;
  c.formula_value = -(r + 1) * base.integrate([&](std::size_t k) { return psi[k] * base.bundles[k].sigma_at(r + 1); });
  const double reference =
      (r + 1) * base.integrate([&](std::size_t k) { return std::abs(psi[k] * base.bundles[k].sigma_at(r + 1)); });
  c.formula_volume = base.integrate([&](std::size_t k) { return psi[k]; });
  const double base_value = area_functional(base, r);
  const double volume_reference = base.integrate([&](std::size_t k) { return std::abs(psi[k]); });

  struct Values {
    double area;
    double volume;
  };
  std::vector<std::pair<double, Values>> cache;
  auto values = [&](double t) {
    for (const auto& [key, v] : cache) {
      if (key == t) return v;
    }
    const ParametricSurface moved = checked_deform(surface, field, t);
    const QuadratureGrid g = grid_on(moved, grid.level);
    const Values v{area_functional(sample_surface(g, model), r), orient_check(moved, g)};
    cache.emplace_back(t, v);
    return v;
  };
  c.fd_derivative = richardson_first([&](double t) { return values(t).area; }, h);
  c.fd_volume = richardson_first([&](double t) { return values(t).volume; }, h);
  const double floor = reference > 0.0 ? reference : std::max(1.0, std::abs(base_value));
  c.mismatch = std::abs(c.fd_derivative - c.formula_value) / std::max(std::abs(c.formula_value), floor);
  c.volume_mismatch = std::abs(c.fd_volume - c.formula_volume) / std::max({std::abs(c.formula_volume), volume_reference, 1e-300});
  if (r < n) {
    c.lambda_fit = euler_lagrange_residual(base, r).lambda_fit;
    c.fd_constrained = c.fd_derivative + c.lambda_fit * c.fd_volume;
    c.formula_constrained =
        -base.integrate([&](std::size_t k) { return psi[k] * ((r + 1) * base.bundles[k].sigma_at(r + 1) - c.lambda_fit); });
  }
  return c;
}

double DivergenceLemmaResiduals::sup_anisotropy() const {
  double m = 0.0;
  for (double v : anisotropy_form) m = std::max(m, std::abs(v));
  return m;
}

double DivergenceLemmaResiduals::sup_position() const {
  double m = 0.0;
  for (double v : position_form) m = std::max(m, std::abs(v));
  return m;
}

DivergenceLemmaResiduals divergence_lemma_residuals(const ParametricSurface& surface, const AnisotropyModel& model,
                                                    const QuadratureGrid& grid, int r, double step) {
  const int n = surface.dimension();
  if (r < 0 || r > n) fail(ErrorKind::InvalidArgument, "r out of range");
  if (step <= 0.0) step = 0.5 * grid.spacing();
  auto pr_field = [&](bool anisotropy_form) -> VectorField {
    return [&, anisotropy_form](const Vec& x) {
      const PointFrame f = frame_at(surface, x, model);
      const CurvatureBundle b = make_bundle(f);
      const Vec nu = f.normal.normalized();
      const Vec v = anisotropy_form ? model.sphere_gradient(nu) : Vec(f.position - f.position.dot(nu) * nu);
      return Vec(f.ambient(b.P[r] * f.components(v)));
    };
  };
  const VectorField vf = pr_field(true);
  const VectorField vx = pr_field(false);
  DivergenceLemmaResiduals res;
  res.anisotropy_form.resize(grid.size());
  res.position_form.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const PointFrame f = with_anisotropy(grid.frames[k], model);
    const CurvatureBundle b = make_bundle(f);
    const double tr_ph = (b.P[r] * f.h).trace();
    const double F = model.value(f.normal.normalized());
    res.anisotropy_form[k] = surface_divergence(surface, vf, grid.nodes[k], step) - F * tr_ph + (r + 1) * b.sigma_at(r + 1);
    res.position_form[k] =
        surface_divergence(surface, vx, grid.nodes[k], step) - f.position.dot(f.normal) * tr_ph - (n - r) * b.sigma_at(r);
  });
  return res;
}

SigmaVariationCheck sigma_variation_check(const ParametricSurface& surface, const AnisotropyModel& model,
                                          const VariationField& field, const Vec& x, int r, double step) {
  const int n = surface.dimension();
  if (r < 1 || r > n) fail(ErrorKind::InvalidArgument, "r out of range");
  const PointFrame f = frame_at(surface, x, model);
  const CurvatureBundle b = make_bundle(f);
  const ScalarField psi = [&](const Vec& y) {
    const PointFrame g = frame_at(surface, y);
    return field.at(surface, y).dot(g.normal);
  };
  const ScalarField sigma = [&](const Vec& y) { return make_bundle(frame_at(surface, y, model)).sigma_at(r); };
  const VectorField flux = [&](const Vec& y) {
    const PointFrame g = frame_at(surface, y, model);
    const CurvatureBundle gb = make_bundle(g);
    return Vec(g.ambient(gb.T[r - 1] * g.components(tangential_gradient(surface, psi, y, step))));
  };
  const Vec w = field.at(surface, x);
  const double psi0 = w.dot(f.normal);
  const Vec xi = w - psi0 * f.normal;

  SigmaVariationCheck c;
  c.formula_value = surface_divergence(surface, flux, x, step) + psi0 * b.t_contraction(r - 1) +
                    tangential_gradient(surface, sigma, x, step).dot(xi);
  c.fd_derivative = richardson_first(
      [&](double t) { return make_bundle(frame_at(deform(surface, field, t), x, model)).sigma_at(r); }, step);
  c.mismatch = std::abs(c.fd_derivative - c.formula_value) / std::max(1.0, std::abs(c.formula_value));
  return c;
}

SigmaVariationCheck sigma_integral_variation_check(const ParametricSurface& surface, const AnisotropyModel& model,
                                                   const QuadratureGrid& grid, const VariationField& field, int r,
                                                   double h) {
  const int n = surface.dimension();
  if (r < 1 || r > n) fail(ErrorKind::InvalidArgument, "r out of range");
  const AnisotropicSample base = sample_surface(grid, model);
  std::vector<double> psi(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { psi[k] = field.at(surface, grid.nodes[k]).dot(grid.frames[k].normal); });
  auto integral = [&](double t) {
    const AnisotropicSample s = sample_surface(grid_on(deform(surface, field, t), grid.level), model);
    return base.integrate([&](std::size_t k) { return s.bundles[k].sigma_at(r); });
  };
  SigmaVariationCheck c;
  c.fd_derivative = richardson_first(integral, h);
  c.formula_value = base.integrate([&](std::size_t k) { return psi[k] * base.bundles[k].t_contraction(r - 1); });
  const double reference = base.integrate([&](std::size_t k) { return std::abs(psi[k] * base.bundles[k].t_contraction(r - 1)); });
  c.mismatch = std::abs(c.fd_derivative - c.formula_value) / std::max({std::abs(c.formula_value), reference, 1e-300});
  return c;
}

}  // namespace wulffcurv
