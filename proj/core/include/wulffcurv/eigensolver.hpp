#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace wulffcurv {

struct ConstrainedEigenResult {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // unit columns, orthogonal to q
  double shift = 0.0;
  int basis_size = 0;
};

/// Lowest k eigenpairs of the symmetric matrix S restricted to the orthogonal
/// complement of q. Shift-invert block Krylov iteration with full
/// reorthogonalization; the block size covers repeated eigenvalues.
ConstrainedEigenResult lowest_constrained_eigenpairs(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& q,
                                                     int k, std::uint64_t seed = 1, int block_size = 8);

}  // namespace wulffcurv
