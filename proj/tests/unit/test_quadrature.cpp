#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wulffcurv/error.hpp"
#include "wulffcurv/geometry.hpp"

using namespace wulffcurv;
using wulffcurv::testing::kPi;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

std::vector<double> values_of(const QuadratureGrid& grid, const std::function<double(const PointFrame&)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = f(grid.frames[k]);
  return v;
}

// Area of a surface of revolution about x3 with radial profile of the parameter
// point, from an adaptive Gauss-Kronrod rule in the colatitude.
double spheroid_area_oracle(double a, double c) {
  auto integrand = [&](double t) {
    const double r = a * std::sin(t);
    const double dr = a * std::cos(t);
    const double dz = -c * std::sin(t);
    return 2.0 * kPi * r * std::sqrt(dr * dr + dz * dz);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, kPi, 15, 1e-14);
}

}  // namespace

TEST(Quadrature, GaussLegendreMatchesBoostTables) {
  for (int count : {4, 8, 16, 32}) {
    const auto [x, w] = gauss_legendre(count);
    ASSERT_EQ(static_cast<int>(x.size()), count);
    // integrate polynomials of degree up to 2 count - 1 exactly
    for (int d = 0; d < 2 * count; ++d) {
      double q = 0.0;
      for (int i = 0; i < count; ++i) q += w[i] * std::pow(x[i], d);
      const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(q, exact, 1e-13) << count << " " << d;
    }
  }
  const auto [x, w] = gauss_legendre(20);
  const auto& bx = boost::math::quadrature::gauss<double, 20>::abscissa();
  const auto& bw = boost::math::quadrature::gauss<double, 20>::weights();
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(x[10 + i], bx[i], 1e-14);
    EXPECT_NEAR(w[10 + i], bw[i], 1e-14);
  }
}

TEST(Quadrature, GridShape) {
  const ParametricSurface s = ParametricSurface::sphere(2);
  const QuadratureGrid g = build_grid(s, 3);
  EXPECT_EQ(g.size(), 32u * 64u);
  for (double w : g.weights) EXPECT_GT(w, 0.0);
  for (const Vec& x : g.nodes) EXPECT_LT(std::abs(x(2)), 1.0);
  EXPECT_NEAR(g.spacing(), kPi / 32.0, 1e-15);
  const QuadratureGrid c = build_grid(ParametricSurface::sphere(1), 3);
  EXPECT_EQ(c.size(), 64u);
}

TEST(Quadrature, SphereMoments) {
  const ParametricSurface s = ParametricSurface::sphere(2);
  const QuadratureGrid g = build_grid(s, 3);
  EXPECT_NEAR(integrate(g, values_of(g, [](const PointFrame&) { return 1.0; })), 4.0 * kPi, 1e-10);
  EXPECT_NEAR(integrate(g, values_of(g, [](const PointFrame& f) { return f.position(2) * f.position(2); })),
              4.0 * kPi / 3.0, 1e-10);
  EXPECT_NEAR(integrate(g, values_of(g, [](const PointFrame& f) { return std::pow(f.position(0), 4); })),
              4.0 * kPi / 5.0, 1e-10);
}

TEST(Quadrature, SpheroidArea) {
  const ParametricSurface e = ParametricSurface::ellipsoid(vec3(1, 1, 2));
  const QuadratureGrid g = build_grid(e, 5);
  const double area = integrate(g, values_of(g, [](const PointFrame&) { return 1.0; }));
  const double oracle = spheroid_area_oracle(1.0, 2.0);
  EXPECT_NEAR(oracle, 2.0 * kPi * (1.0 + 4.0 * kPi / (3.0 * std::sqrt(3.0))), 1e-12);
  EXPECT_NEAR(area, oracle, 1e-8);
  EXPECT_NEAR(area, 21.4784, 1e-4);
}

TEST(Quadrature, CircleLength) {
  const ParametricSurface c = ParametricSurface::sphere(1, 1.5);
  const QuadratureGrid g = build_grid(c, 2);
  EXPECT_NEAR(integrate(g, values_of(g, [](const PointFrame&) { return 1.0; })), 3.0 * kPi, 1e-12);
}

TEST(Quadrature, SpectralConvergence) {
  const ParametricSurface r = ParametricSurface::radial(2, {0.15}, {Polynomial::parse("x1*x2*x3")});
  double prev = 0.0;
  std::vector<double> diffs;
  for (int level = 2; level <= 5; ++level) {
    const QuadratureGrid g = build_grid(r, level);
    const double a = integrate(g, values_of(g, [](const PointFrame&) { return 1.0; }));
    if (level > 2) diffs.push_back(std::abs(a - prev));
    prev = a;
  }
  EXPECT_LT(diffs.back(), 1e-12);
}

TEST(Quadrature, SizeMismatch) {
  const QuadratureGrid g = build_grid(ParametricSurface::sphere(2), 1);
  std::vector<double> v(3, 1.0);
  try {
    integrate(g, v);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeMismatch);
  }
}
