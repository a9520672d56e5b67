#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wulffcurv/curvature.hpp"
#include "wulffcurv/error.hpp"
#include "wulffcurv/oracle.hpp"

using namespace wulffcurv;
using wulffcurv::testing::random_spd;
using wulffcurv::testing::random_symmetric;

namespace {

Vec values(std::initializer_list<double> v) {
  Vec out(static_cast<int>(v.size()));
  int k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

Mat diag(std::initializer_list<double> v) { return Mat(values(v).asDiagonal()); }

Mat random_rotation(std::mt19937_64& rng, int n) {
  const Mat m = random_symmetric(rng, n) + Mat::Identity(n, n) * 0.1;
  Eigen::HouseholderQR<Mat> qr(m);
  return qr.householderQ() * Mat::Identity(n, n);
}

}  // namespace

TEST(Curvature, EigenExamples) {
  EXPECT_TRUE(eigen_anisotropic(diag({1, 2}), Mat::Identity(2, 2)).isApprox(values({1, 2}), 1e-14));
  Mat a(2, 2);
  a << 2, 1, 1, 2;
  const Mat h = diag({1, -1});
  const Vec ev = eigen_anisotropic(a * h, a);
  EXPECT_NEAR(ev(0), -std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(ev(1), std::sqrt(3.0), 1e-14);
}

TEST(Curvature, EigenRejectsIndefiniteA) {
  const Mat a = diag({1, -1});
  try {
    eigen_anisotropic(a, a);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(Curvature, SigmaExamples) {
  EXPECT_TRUE(sigma_charpoly(values({1, 1})).isApprox(values({1, 2, 1})));
  EXPECT_TRUE(sigma_charpoly(values({1, 2, 3})).isApprox(values({1, 6, 11, 6})));
  EXPECT_TRUE(sigma_charpoly(values({2, 2})).isApprox(values({1, 4, 4})));
  EXPECT_DOUBLE_EQ(sigma_kronecker(Mat::Identity(2, 2), 1), 2.0);
  EXPECT_DOUBLE_EQ(sigma_kronecker(diag({1, 2, 3}), 0), 1.0);
  EXPECT_NEAR(sigma_kronecker(diag({1, 2, 3}), 2), 11.0, 1e-13);
}

TEST(Curvature, NewtonExamples) {
  const Mat s = diag({1, 2, 3});
  const auto P = newton_recursion(s, sigma_charpoly(values({1, 2, 3})));
  ASSERT_EQ(P.size(), 4u);
  EXPECT_TRUE(P[1].isApprox(diag({5, 4, 3})));
  EXPECT_NEAR(P[1].trace(), 12.0, 1e-13);
  EXPECT_LT(P[3].cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(newton_kronecker(s, 0).isApprox(Mat::Identity(3, 3)));
  EXPECT_TRUE(newton_kronecker(s, 1).isApprox(diag({5, 4, 3})));
  const auto Q = newton_recursion(Mat::Identity(2, 2), values({1, 2, 1}));
  EXPECT_TRUE(Q[1].isApprox(Mat::Identity(2, 2)));
}

TEST(Curvature, TraceExamples) {
  const CurvatureBundle b = make_bundle(Mat::Identity(3, 3), diag({1, 2, 3}));
  EXPECT_NEAR((b.P[1] * b.s).trace(), 22.0, 1e-12);
  EXPECT_NEAR((b.P[1] * b.s * b.s).trace(), 48.0, 1e-12);
  const TraceResiduals r = trace_identities(b);
  EXPECT_LT(r.max_relative, 1e-13);
  const CurvatureBundle sphere = make_bundle(Mat::Identity(2, 2), Mat::Identity(2, 2));
  EXPECT_NEAR((sphere.P[0] * sphere.s).trace(), 2.0, 1e-15);
  EXPECT_NEAR(sphere.H(1), 1.0, 1e-15);
  EXPECT_NEAR(sphere.H(2), 1.0, 1e-15);
}

TEST(Curvature, RouteAgreementOnRandomPairs) {
  std::mt19937_64 rng(2024);
  for (int n : {2, 3}) {
    double sigma_worst = 0.0;
    double newton_worst = 0.0;
    double trace_worst = 0.0;
    double symmetry_worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Mat A = random_spd(rng, n);
      const Mat h = random_symmetric(rng, n, 2.0);
      const CurvatureBundle b = make_bundle(A, h);
      const double scale = 1.0 + b.lambda.cwiseAbs().sum();
      for (int r = 0; r <= n; ++r) {
        const double kr = sigma_kronecker(b.s, r);
        sigma_worst = std::max(sigma_worst, std::abs(b.sigma(r) - kr) / std::pow(scale, r));
        const double expand = sym_poly_expand(b.lambda, r);
        sigma_worst = std::max(sigma_worst, std::abs(b.sigma(r) - expand) / std::pow(scale, r));
        const Mat pk = newton_kronecker(b.s, r);
        newton_worst = std::max(newton_worst, (b.P[r] - pk).cwiseAbs().maxCoeff() / std::pow(scale, r));
      }
      for (const Mat& t : b.T) symmetry_worst = std::max(symmetry_worst, (t - t.transpose()).cwiseAbs().maxCoeff() / (1.0 + t.cwiseAbs().maxCoeff()));
      trace_worst = std::max(trace_worst, trace_identities(b).max_relative);
    }
    EXPECT_LE(sigma_worst, 1e-10) << n;
    EXPECT_LE(newton_worst, 1e-10) << n;
    EXPECT_LE(trace_worst, 1e-10) << n;
    EXPECT_LE(symmetry_worst, 1e-9) << n;
  }
}

TEST(Curvature, PnVanishes) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat A = random_spd(rng, 3);
    const Mat h = random_symmetric(rng, 3, 2.0);
    const CurvatureBundle b = make_bundle(A, h);
    const double ref = (b.P[2] * b.s).cwiseAbs().maxCoeff();
    EXPECT_LE(b.P[3].cwiseAbs().maxCoeff(), 1e-9 * std::max(ref, 1.0));
  }
}

TEST(Curvature, FrameInvariance) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat A = random_spd(rng, 3);
    const Mat h = random_symmetric(rng, 3);
    const Mat R = random_rotation(rng, 3);
    const CurvatureBundle a = make_bundle(A, h);
    const CurvatureBundle b = make_bundle(R.transpose() * A * R, R.transpose() * h * R);
    for (int r = 0; r <= 3; ++r) EXPECT_NEAR(a.sigma(r), b.sigma(r), 1e-10 * (1.0 + std::abs(a.sigma(r))));
    EXPECT_LT(trace_identities(b).max_relative, 1e-10);
    EXPECT_NEAR(a.t_contraction(1), b.t_contraction(1), 1e-10 * (1.0 + std::abs(a.t_contraction(1))));
  }
}

TEST(Curvature, TContractionDefinition) {
  std::mt19937_64 rng(7);
  const Mat A = random_spd(rng, 2);
  const Mat h = random_symmetric(rng, 2);
  const CurvatureBundle b = make_bundle(A, h);
  EXPECT_NEAR(b.t_contraction(0), (A * h * h).trace(), 1e-13);
  EXPECT_NEAR(b.t_contraction(1), (b.P[1] * A * h * h).trace(), 1e-13);
}

TEST(Curvature, PositivityCascade) {
  const std::vector<Vec> wulff(10, values({1, 1, 1}));
  EXPECT_TRUE(positivity_cascade(wulff, 1).holds);
  EXPECT_FALSE(positivity_cascade(wulff, 1).premise_false);

  // ellipsoid (1,1,2) curvature data sampled on a grid
  const ParametricSurface e = ParametricSurface::ellipsoid(values({1, 1, 2}));
  const QuadratureGrid g = build_grid(e, 2);
  std::vector<Vec> H;
  for (const auto& f : g.frames) H.push_back(make_bundle(f).H);
  const CascadeResult c = positivity_cascade(H, 1);
  EXPECT_TRUE(c.holds);
  EXPECT_FALSE(c.premise_false);

  std::vector<Vec> synthetic{values({1, 1, 1}), values({1, 0.5, -0.1}), values({1, 2, 1})};
  const CascadeResult s = positivity_cascade(synthetic, 1);
  EXPECT_TRUE(s.holds);
  EXPECT_TRUE(s.premise_false);

  std::vector<Vec> broken{values({1, -1, 1}), values({1, 2, 1})};
  EXPECT_FALSE(positivity_cascade(broken, 1).holds);
}

TEST(Curvature, MaclaurinGap) {
  EXPECT_NEAR(maclaurin_gap(values({1, 1}), 0), 0.0, 1e-15);
  EXPECT_NEAR(maclaurin_gap(values({1, 2, 3}), 0), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(maclaurin_gap(values({2, 2}), 0), 0.0, 1e-15);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec l = values({u(rng), u(rng), u(rng)});
    EXPECT_GE(maclaurin_gap(l, 0), -1e-12);
    EXPECT_GE(maclaurin_gap(l, 1), -1e-12);
  }
  try {
    maclaurin_gap(values({1, -1}), 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveSpectrum);
  }
}

TEST(Curvature, UmbilicDetection) {
  EXPECT_TRUE(is_umbilic(values({2, 2 + 1e-10})));
  EXPECT_FALSE(is_umbilic(values({2, 2 + 1e-6})));
}

TEST(Curvature, WulffShapeHasUnitWeingarten) {
  const std::vector<AnisotropyModel> models{AnisotropyModel::constant(2, 1.0),
                                            AnisotropyModel::linear(values({0.3, 0, 0})),
                                            AnisotropyModel::norm(values({2, 1, 1})),
                                            AnisotropyModel::quadratic(0.2, values({0, 0, 1}))};
  for (const auto& m : models) {
    const ParametricSurface w = ParametricSurface::wulff(m);
    const QuadratureGrid g = build_grid(w, 4);
    double worst = 0.0;
    for (const auto& f : g.frames) {
      const PointFrame fa = with_anisotropy(f, m);
      worst = std::max(worst, (fa.s - Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
      const Vec l = eigen_anisotropic(fa.s, fa.A);
      EXPECT_NEAR(l(0), 1.0, 1e-6);
    }
    EXPECT_LE(worst, 1e-6) << m.describe();
  }
}
