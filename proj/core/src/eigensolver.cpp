#include "wulffcurv/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wulffcurv/error.hpp"

namespace wulffcurv {
namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Solver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

bool positive_definite(const Solver& solver) {
  return solver.info() == Eigen::Success && (solver.vectorD().array() > 0.0).all();
}

// Orthonormalizes the columns of `block` against the first `m` columns of
// `basis`, the unit vector q and each other; returns the surviving columns.
Matrix orthonormalize(Matrix block, const Matrix& basis, int m, const Vector& q) {
  for (int pass = 0; pass < 2; ++pass) {
    block -= q * (q.transpose() * block);
    if (m > 0) block -= basis.leftCols(m) * (basis.leftCols(m).transpose() * block);
  }
  Matrix out(block.rows(), 0);
  for (int j = 0; j < block.cols(); ++j) {
    Vector v = block.col(j);
    const double before = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < out.cols(); ++i) v -= out.col(i).dot(v) * out.col(i);
    }
    const double after = v.norm();
    if (after <= 1e-10 * std::max(before, 1e-300) || after == 0.0) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / after;
  }
  return out;
}

}  // namespace

ConstrainedEigenResult lowest_constrained_eigenpairs(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& q_in,
                                                     int k, std::uint64_t seed, int block_size) {
  const int N = static_cast<int>(S.rows());
  if (S.cols() != N || q_in.size() != N) fail(ErrorKind::SizeMismatch, "eigenproblem dimensions differ");
  if (k < 1 || k > N - 2) fail(ErrorKind::InvalidArgument, "requested eigenpair count out of range");
  const Vector q = q_in.normalized();

  double diag = 0.0;
  for (int i = 0; i < N; ++i) diag = std::max(diag, std::abs(S.coeff(i, i)));
  if (diag == 0.0) diag = 1.0;
  Eigen::SparseMatrix<double> identity(N, N);
  identity.setIdentity();

  Solver solver;
  double shift = -1e-3 * diag;
  bool factored = false;
  for (int attempt = 0; attempt < 40 && !factored; ++attempt, shift *= 4.0) {
    solver.compute(S - shift * identity);
    factored = positive_definite(solver);
    if (factored) break;
  }
  if (!factored) fail(ErrorKind::SolverFailure, "no shift below the spectrum found");

  const Vector zq = solver.solve(q);
  const double qzq = q.dot(zq);
  auto apply = [&](const Matrix& b) {
    Matrix z = solver.solve(b);
    const Eigen::RowVectorXd coeff = (q.transpose() * z) / qzq;
    z -= zq * coeff;
    return z;
  };

  const int max_dim = std::min(N - 1, std::max(12 * k, 400));
  Matrix V(N, max_dim);
  Matrix W(N, max_dim);
  int m = 0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix start(N, block_size);
  for (int j = 0; j < block_size; ++j) {
    for (int i = 0; i < N; ++i) start(i, j) = normal(rng);
  }
  Matrix block = orthonormalize(start, V, 0, q);

  const double tol = 1e-9;
  ConstrainedEigenResult result;
  result.shift = shift;
  while (true) {
    const int b = std::min<int>(static_cast<int>(block.cols()), max_dim - m);
    if (b <= 0) break;
    V.middleCols(m, b) = block.leftCols(b);
    W.middleCols(m, b) = apply(block.leftCols(b));
    m += b;

    if (m >= k + block_size || m == max_dim) {
      Matrix H = V.leftCols(m).transpose() * W.leftCols(m);
      H = 0.5 * (H + H.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Matrix> es(H);
      const Vector theta = es.eigenvalues();
      const Matrix& s = es.eigenvectors();
      bool converged = true;
      const double scale = std::abs(theta(m - 1));
      for (int j = 0; j < k && converged; ++j) {
        const int idx = m - 1 - j;
        const Vector residual = W.leftCols(m) * s.col(idx) - theta(idx) * (V.leftCols(m) * s.col(idx));
        if (residual.norm() > tol * scale) converged = false;
      }
      if (converged || m == max_dim) {
        if (!converged) fail(ErrorKind::SolverFailure, "eigen iteration stagnated");
        for (int j = 0; j < k; ++j) {
          const int idx = m - 1 - j;
          if (theta(idx) <= 0.0) fail(ErrorKind::SolverFailure, "non-positive inverse eigenvalue");
          result.values.push_back(shift + 1.0 / theta(idx));
        }
        result.vectors = V.leftCols(m) * s.rightCols(k).rowwise().reverse();
        break;
      }
    }
    block = orthonormalize(W.middleCols(m - b, b), V, m, q);
    if (block.cols() == 0) fail(ErrorKind::SolverFailure, "Krylov space exhausted");
  }
  result.basis_size = m;
  std::vector<int> order(result.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return result.values[a] < result.values[c]; });
  std::vector<double> values;
  Matrix vectors(N, k);
  for (int i = 0; i < k; ++i) {
    values.push_back(result.values[order[i]]);
    vectors.col(i) = result.vectors.col(order[i]);
  }
  result.values = std::move(values);
  result.vectors = std::move(vectors);
  return result;
}

}  // namespace wulffcurv
