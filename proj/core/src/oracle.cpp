#include "wulffcurv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "wulffcurv/error.hpp"

namespace wulffcurv {
namespace {

constexpr double kPi = std::numbers::pi;

using PositionMap = std::function<Vec(const Vec&)>;

double deviation(double oracle, double main) { return std::abs(oracle - main) / std::max(1.0, std::abs(oracle)); }

void finish(OracleReport& rep) {
  rep.max_deviation = 0.0;
  for (std::size_t i = 0; i < rep.oracle_values.size(); ++i) {
    rep.max_deviation = std::max(rep.max_deviation, deviation(rep.oracle_values[i], rep.main_values[i]));
  }
  rep.pass = rep.max_deviation <= rep.tolerance;
}

// Fourth-order central difference of a vector-valued function of one variable.
template <class Fn>
auto d1(const Fn& f, double h) -> decltype(f(0.0)) {
  return (8.0 * (f(h) - f(-h)) - (f(2 * h) - f(-2 * h))) / (12.0 * h);
}

template <class Fn>
auto d2(const Fn& f, double h) -> decltype(f(0.0)) {
  return (-(f(2 * h) + f(-2 * h)) + 16.0 * (f(h) + f(-h)) - 30.0 * f(0.0)) / (12.0 * h * h);
}

// Sixth-order second derivative: Richardson combination of the rule above.
template <class Fn>
auto d2_fine(const Fn& f, double h) -> decltype(f(0.0)) {
  return (16.0 * d2(f, 0.5 * h) - d2(f, h)) / 15.0;
}

// Exponential-map chart of the unit sphere around y.
struct GeodesicChart {
  Vec center;
  Mat basis;

  explicit GeodesicChart(const Vec& y) : center(y.normalized()) {
    const int m = static_cast<int>(y.size());
    basis.resize(m, m - 1);
    if (m == 2) {
      basis.col(0) = Vec((Eigen::Vector2d() << -center(1), center(0)).finished());
      return;
    }
    Eigen::Index axis = 0;
    center.cwiseAbs().minCoeff(&axis);
    Vec e = unit_axis(m, static_cast<int>(axis));
    const Eigen::Vector3d t1 = Eigen::Vector3d(e - e.dot(center) * center).normalized();
    const Eigen::Vector3d c = center;
    basis.col(0) = Vec(t1);
    basis.col(1) = Vec(c.cross(t1));
  }

  Vec point(double u, double v) const {
    Vec w = basis.col(0) * u;
    if (basis.cols() > 1) w += basis.col(1) * v;
    const double len = w.norm();
    if (len == 0.0) return center;
    return std::cos(len) * center + std::sin(len) * (w / len);
  }
};

struct LocalGeometry {
  Mat xu;     // coordinate tangents
  Vec normal; // inner unit normal
  Mat ginv;
};

Vec oriented_normal(const Mat& xu, int orientation) {
  if (xu.cols() == 1) {
    Vec v(2);
    v << xu(1, 0), -xu(0, 0);
    return orientation * v.normalized();
  }
  const Eigen::Vector3d a = xu.col(0);
  const Eigen::Vector3d b = xu.col(1);
  return orientation * Vec(a.cross(b).normalized());
}

LocalGeometry local_geometry(const PositionMap& X, const GeodesicChart& chart, int orientation, double h) {
  const int n = static_cast<int>(chart.basis.cols());
  LocalGeometry g;
  g.xu.resize(chart.center.size(), n);
  g.xu.col(0) = d1([&](double s) { return Vec(X(chart.point(s, 0.0))); }, h);
  if (n == 2) g.xu.col(1) = d1([&](double s) { return Vec(X(chart.point(0.0, s))); }, h);
  g.normal = oriented_normal(g.xu, orientation);
  g.ginv = (g.xu.transpose() * g.xu).inverse();
  return g;
}

Vec normal_at(const PositionMap& X, const Vec& y, int orientation, double h) {
  return local_geometry(X, GeodesicChart(y), orientation, h).normal;
}

// Product rule in (colatitude, longitude) for n = 2, trapezoid for n = 1.
struct AngleRule {
  std::vector<Vec> points;
  std::vector<double> weights;   // parameter weights, without the area element
  std::vector<double> theta;
  std::vector<double> phi;
};

AngleRule angle_rule(int n) {
  AngleRule rule;
  if (n == 1) {
    const int m = 512;
    for (int j = 0; j < m; ++j) {
      const double t = 2.0 * kPi * j / m;
      rule.points.push_back(Vec((Eigen::Vector2d() << std::cos(t), std::sin(t)).finished()));
      rule.weights.push_back(2.0 * kPi / m);
      rule.theta.push_back(t);
      rule.phi.push_back(0.0);
    }
    return rule;
  }
  using Gauss = boost::math::quadrature::gauss<double, 64>;
  std::vector<std::pair<double, double>> nodes;
  const auto& abscissa = Gauss::abscissa();
  const auto& weight = Gauss::weights();
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    nodes.emplace_back(abscissa[i], weight[i]);
    if (abscissa[i] != 0.0) nodes.emplace_back(-abscissa[i], weight[i]);
  }
  const int m = 128;
  for (const auto& [s, w] : nodes) {
    const double th = 0.5 * kPi * (s + 1.0);
    for (int j = 0; j < m; ++j) {
      const double ph = 2.0 * kPi * (j + 0.5) / m;
      rule.points.push_back(
          Vec((Eigen::Vector3d() << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)).finished()));
      rule.weights.push_back(0.5 * kPi * w * 2.0 * kPi / m);
      rule.theta.push_back(th);
      rule.phi.push_back(ph);
    }
  }
  return rule;
}

Vec angle_point(int n, double th, double ph) {
  if (n == 1) return Vec((Eigen::Vector2d() << std::cos(th), std::sin(th)).finished());
  return Vec((Eigen::Vector3d() << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)).finished());
}

// Coordinate tangents of X in (theta, phi).
Mat angle_tangents(const PositionMap& X, int n, double th, double ph, double h) {
  Mat xu(n + 1, n);
  xu.col(0) = d1([&](double s) { return Vec(X(angle_point(n, th + s, ph))); }, h);
  if (n == 2) xu.col(1) = d1([&](double s) { return Vec(X(angle_point(n, th, ph + s))); }, h);
  return xu;
}

double area_element(const Mat& xu) {
  if (xu.cols() == 1) return xu.col(0).norm();
  return Eigen::Vector3d(xu.col(0)).cross(Eigen::Vector3d(xu.col(1))).norm();
}

double angle_area(const PositionMap& X, int n, const AngleRule& rule) {
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    sum += rule.weights[k] * area_element(angle_tangents(X, n, rule.theta[k], rule.phi[k], 1e-4));
  }
  return sum;
}

}  // namespace

OracleReport curve_case(const ParametricSurface& surface, const AnisotropyModel& model, int samples, int pointwise) {
  if (surface.dimension() != 1 || model.dimension() != 1) fail(ErrorKind::InvalidArgument, "curve oracle needs n = 1");
  const double dt = 2.0 * kPi / samples;
  const double step = 1e-3;
  const double step2 = 8e-3;
  auto X = [&](double t) { return Vec(surface.position(angle_point(1, t, 0.0))); };
  auto Fang = [&](double a) { return model.value(angle_point(1, a, 0.0)); };

  double signed_area = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double t = j * dt;
    const Vec p = X(t);
    const Vec v = d1([&](double s) { return X(t + s); }, step);
    signed_area += 0.5 * (p(0) * v(1) - p(1) * v(0)) * dt;
  }
  const double sgn = signed_area > 0.0 ? 1.0 : -1.0;

  struct Point {
    double speed, F, s, support;
  };
  auto at = [&](double t) {
    const Vec p = X(t);
    const Vec v = d1([&](double s) { return X(t + s); }, step);
    const Vec a = d2_fine([&](double s) { return X(t + s); }, step2);
    const double speed = v.norm();
    Vec nu(2);
    nu << -v(1), v(0);
    nu *= sgn / speed;
    const double kappa = sgn * (v(0) * a(1) - v(1) * a(0)) / (speed * speed * speed);
    const double ang = std::atan2(nu(1), nu(0));
    const double A = Fang(ang) + d2_fine([&](double s) { return Fang(ang + s); }, step2);
    return Point{speed, Fang(ang), A * kappa, p.dot(nu)};
  };

  double a0 = 0.0, a1 = 0.0, vol = 0.0, mink = 0.0;
  for (int j = 0; j < samples; ++j) {
    const Point q = at(j * dt);
    a0 += q.F * q.speed * dt;
    a1 += q.F * q.s * q.speed * dt;
    vol += 0.5 * q.support * q.speed * dt;
    mink += (q.F + q.s * q.support) * q.speed * dt;
  }

  OracleReport rep;
  rep.check = "curve_case";
  rep.inputs = surface.describe() + "|" + model.describe();
  rep.tolerance = 1e-8;
  const QuadratureGrid grid = build_grid(surface, 8);
  const AnisotropicSample sample = sample_surface(grid, model);
  rep.labels = {"A_0", "A_1", "V", "minkowski_0"};
  rep.oracle_values = {a0, a1, vol, mink};
  rep.main_values = {area_functional(sample, 0), area_functional(sample, 1), volume_functional(surface, grid),
                     minkowski_residual(sample, 0).value};
  for (int j = 0; j < pointwise; ++j) {
    const double t = 2.0 * kPi * (j + 0.25) / pointwise;
    rep.labels.push_back("s(" + std::to_string(j) + ")");
    rep.oracle_values.push_back(at(t).s);
    rep.main_values.push_back(frame_at(surface, angle_point(1, t, 0.0), model).s(0, 0));
  }
  finish(rep);
  return rep;
}

OracleReport gauss_map_variation_check(const ParametricSurface& surface, const VariationField& field, const Vec& x) {
  const int orientation = surface.orientation();
  const double hs = 1e-3;
  auto normal_t = [&](double t) {
    const PositionMap X = [&](const Vec& y) { return Vec(surface.position(y) + t * field.at(surface, y)); };
    return normal_at(X, x, orientation, hs);
  };
  const Vec fd = d1(normal_t, 1e-3);

  const PointFrame f = frame_at(surface, x);
  const ScalarField psi = [&](const Vec& y) { return field.at(surface, y).dot(frame_at(surface, y).normal); };
  const Vec w = field.at(surface, x);
  const Vec xi = w - w.dot(f.normal) * f.normal;
  const Vec dnu_xi = -f.ambient(f.h * f.components(xi));
  const Vec formula = -tangential_gradient(surface, psi, x, 1e-4) + dnu_xi;

  OracleReport rep;
  rep.check = "gauss_map_variation";
  rep.inputs = surface.describe() + "|" + field.describe();
  rep.tolerance = 1e-6;
  for (int k = 0; k < fd.size(); ++k) {
    rep.labels.push_back("dnu_" + std::to_string(k + 1));
    rep.oracle_values.push_back(fd(k));
    rep.main_values.push_back(formula(k));
  }
  finish(rep);
  return rep;
}

double oracle_area(const ParametricSurface& surface) {
  const int n = surface.dimension();
  const PositionMap X = [&](const Vec& y) { return surface.position(y); };
  return angle_area(X, n, angle_rule(n));
}

OracleReport area_element_variation_check(const ParametricSurface& surface, const VariationField& field, double h) {
  const int n = surface.dimension();
  const int orientation = surface.orientation();
  const AngleRule rule = angle_rule(n);
  auto area_t = [&](double t) {
    const PositionMap X = [&](const Vec& y) { return Vec(surface.position(y) + t * field.at(surface, y)); };
    return angle_area(X, n, rule);
  };
  const double fd = d1(area_t, h);

  const PositionMap X = [&](const Vec& y) { return surface.position(y); };
  const double hs = 1e-4;
  auto xi_at = [&](double th, double ph) {
    const Mat xu = angle_tangents(X, n, th, ph, hs);
    const Vec nu = oriented_normal(xu, orientation);
    const Vec w = field.at(surface, angle_point(n, th, ph));
    return Vec(w - w.dot(nu) * nu);
  };
  double with_div = 0.0, raw = 0.0;
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    const double th = rule.theta[k], ph = rule.phi[k];
    const Mat xu = angle_tangents(X, n, th, ph, hs);
    const Vec nu = oriented_normal(xu, orientation);
    const Mat ginv = (xu.transpose() * xu).inverse();
    Mat b(n, n);
    b(0, 0) = d2([&](double s) { return Vec(X(angle_point(n, th + s, ph))); }, hs * 10).dot(nu);
    if (n == 2) {
      b(1, 1) = d2([&](double s) { return Vec(X(angle_point(n, th, ph + s))); }, hs * 10).dot(nu);
      b(0, 1) = b(1, 0) = d1([&](double s) { return Vec(angle_tangents(X, n, th + s, ph, hs).col(1)); }, hs * 10).dot(nu);
    }
    const double H = (ginv * b).trace() / n;
    const Vec w = field.at(surface, angle_point(n, th, ph));
    const double psi = w.dot(nu);
    Mat dxi(n + 1, n);
    dxi.col(0) = d1([&](double s) { return xi_at(th + s, ph); }, hs * 10);
    if (n == 2) dxi.col(1) = d1([&](double s) { return xi_at(th, ph + s); }, hs * 10);
    const double div = (ginv * xu.transpose() * dxi).trace();
    const double dA = rule.weights[k] * area_element(xu);
    with_div += (div - n * H * psi) * dA;
    raw += (-n * H * psi) * dA;
  }

  OracleReport rep;
  rep.check = "area_element_variation";
  rep.inputs = surface.describe() + "|" + field.describe();
  rep.tolerance = 1e-5;
  rep.labels = {"dA_integrated", "dA_raw"};
  rep.oracle_values = {fd, fd};
  rep.main_values = {with_div, raw};
  finish(rep);
  return rep;
}

double sym_poly_expand(const Vec& lambda, int r) {
  const int n = static_cast<int>(lambda.size());
  if (n > 4) fail(ErrorKind::InvalidArgument, "expansion limited to n <= 4");
  if (r == 0) return 1.0;
  if (r < 0 || r > n) return 0.0;
  double total = 0.0;
  std::function<void(int, int, double)> walk = [&](int start, int depth, double product) {
    if (depth == r) {
      total += product;
      return;
    }
    for (int i = start; i < n; ++i) walk(i + 1, depth + 1, product * lambda(i));
  };
  walk(0, 0, 1.0);
  return total;
}

std::vector<std::pair<double, int>> harmonic_spectrum(int l_max) {
  if (l_max < 1 || l_max > 6) fail(ErrorKind::InvalidArgument, "l_max must be in 1..6");
  std::vector<std::pair<double, int>> out;
  for (int l = 1; l <= l_max; ++l) out.emplace_back(l * (l + 1) - 2.0, 2 * l + 1);
  return out;
}

}  // namespace wulffcurv
