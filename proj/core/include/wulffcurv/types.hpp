#pragma once

#include <Eigen/Dense>

namespace wulffcurv {

// Ambient vectors live in R^{n+1} with n <= 3, and every pointwise matrix is
// at most 4x4, so the small types carry inline storage and never allocate.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

inline constexpr int kMaxSphereDimension = 3;

inline Vec unit_axis(int size, int index) {
  Vec v = Vec::Zero(size);
  v(index) = 1.0;
  return v;
}

}  // namespace wulffcurv
