#include <cmath>

#include <gtest/gtest.h>

#include "wulffcurv/error.hpp"
#include "wulffcurv/jet.hpp"

using wulffcurv::Jet;

namespace {

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }

}  // namespace

TEST(Jet, VariableSeedsHaveUnitFirstDerivative) {
  const Jet u = Jet::variable(0, 4);
  const Jet v = Jet::variable(1, 4);
  EXPECT_EQ(u.value(), 0.0);
  EXPECT_EQ(u.derivative(1, 0), 1.0);
  EXPECT_EQ(u.derivative(0, 1), 0.0);
  EXPECT_EQ(v.derivative(0, 1), 1.0);
}

TEST(Jet, ProductMatchesMonomialDerivatives) {
  const Jet u = Jet::variable(0, 4);
  const Jet v = Jet::variable(1, 4);
  const Jet m = u * u * v;
  // d^3/du^2 dv of u^2 v = 2
  EXPECT_DOUBLE_EQ(m.derivative(2, 1), 2.0);
  EXPECT_DOUBLE_EQ(m.coeff(2, 1), 1.0);
  EXPECT_DOUBLE_EQ(m.derivative(1, 1), 0.0);
}

TEST(Jet, ExpansionOfSqrtMatchesTaylorSeries) {
  const double a = 1.7;
  const Jet f = sqrt(Jet(a) + Jet::variable(0, 4));
  // d^k/du^k sqrt(a + u) = prod_{j<k} (1/2 - j) a^{1/2 - k}
  double falling = 1.0;
  for (int k = 0; k <= 4; ++k) {
    EXPECT_NEAR(f.derivative(k, 0), falling * std::pow(a, 0.5 - k), 1e-13) << k;
    falling *= 0.5 - k;
  }
}

TEST(Jet, TrigonometricCompositionMatchesClosedForm) {
  const double a = 0.4;
  const Jet x = Jet(a) + Jet::variable(0, 4) + 2.0 * Jet::variable(1, 4);
  const Jet s = sin(x);
  const Jet c = cos(x);
  const double ds[] = {std::sin(a), std::cos(a), -std::sin(a), -std::cos(a), std::sin(a)};
  for (int k = 0; k <= 4; ++k) {
    EXPECT_NEAR(s.derivative(k, 0), ds[k], 1e-13);
    // mixed derivatives pick up the chain factor 2 per v
    EXPECT_NEAR(s.derivative(0, k), ds[k] * std::pow(2.0, k), 1e-12);
  }
  const Jet one = s * s + c * c;
  EXPECT_NEAR(one.value(), 1.0, 1e-15);
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; i + j <= 4; ++j) {
      if (i + j > 0) EXPECT_NEAR(one.derivative(i, j), 0.0, 1e-12);
    }
  }
}

TEST(Jet, DivisionInvertsMultiplication) {
  const Jet u = Jet::variable(0, 4);
  const Jet v = Jet::variable(1, 4);
  const Jet a = Jet(2.0) + u - 0.5 * v * u + u * u * u;
  const Jet b = Jet(1.5) + 3.0 * v + u * v;
  const Jet back = (a / b) * b;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; i + j <= 4; ++j) EXPECT_NEAR(back.coeff(i, j), a.coeff(i, j), 1e-13);
  }
}

TEST(Jet, PowerOfGeometricSeries) {
  // (1 - u)^{-1} = sum u^k
  const Jet g = pow(Jet(1.0) - Jet::variable(0, 4), -1.0);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(g.derivative(k, 0), factorial(k), 1e-12);
}

TEST(Jet, TruncationTakesTheSmallerOrder) {
  const Jet u2 = Jet::variable(0, 2);
  const Jet u4 = Jet::variable(0, 4);
  const Jet p = u2 * u4;
  EXPECT_EQ(p.order(), 2);
  EXPECT_DOUBLE_EQ(p.coeff(2, 0), 1.0);
  const Jet q = (u4 * u4 * u4).truncated(2);
  EXPECT_EQ(q.order(), 2);
  EXPECT_EQ(q.coeff(2, 0), 0.0);
}

TEST(Jet, PartialDerivativeShiftsCoefficients) {
  const Jet u = Jet::variable(0, 4);
  const Jet v = Jet::variable(1, 4);
  const Jet f = u * u * v + 3.0 * v * v;
  const Jet fu = f.partial(0);
  const Jet fv = f.partial(1);
  EXPECT_DOUBLE_EQ(fu.coeff(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(fv.coeff(2, 0), 1.0);
  EXPECT_DOUBLE_EQ(fv.coeff(0, 1), 6.0);
}

TEST(Jet, VectorHelpers) {
  const Jet u = Jet::variable(0, 3);
  wulffcurv::JetVec a{Jet(1.0) + u, Jet(2.0)};
  wulffcurv::JetVec b{Jet(3.0), u};
  EXPECT_DOUBLE_EQ(wulffcurv::dot_value(a, b), 3.0);
  const Jet d = wulffcurv::dot(a, b);
  EXPECT_DOUBLE_EQ(d.derivative(1, 0), 5.0);
  EXPECT_DOUBLE_EQ(wulffcurv::squared_norm(a).derivative(1, 0), 2.0);
}

TEST(Jet, RejectsBadSeed) {
  EXPECT_THROW(Jet::variable(2, 3), wulffcurv::Error);
  EXPECT_THROW(Jet::variable(0, Jet::kMaxOrder + 1), wulffcurv::Error);
}
