#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "wulffcurv/types.hpp"

namespace wulffcurv::testing {

inline constexpr double kPi = 3.14159265358979323846;

inline Vec random_unit(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> g;
  Vec v(m);
  for (int k = 0; k < m; ++k) v(k) = g(rng);
  return v.normalized();
}

inline Mat random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  }
  return 0.5 * (m + m.transpose());
}

inline Mat random_spd(std::mt19937_64& rng, int n) {
  const Mat b = random_symmetric(rng, n);
  return b * b.transpose() + 0.2 * Mat::Identity(n, n);
}

inline double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace wulffcurv::testing
