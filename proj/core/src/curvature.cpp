#include "wulffcurv/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "wulffcurv/error.hpp"

namespace wulffcurv {
namespace {

int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

// Visits every ordered tuple of `r` distinct indices from [0, n) avoiding `excluded`.
template <class Fn>
void for_each_injective(int n, int r, int excluded, Fn&& fn) {
  std::vector<int> tuple(r);
  std::vector<bool> used(n, false);
  if (excluded >= 0) used[excluded] = true;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == r) {
      fn(tuple);
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple[depth] = i;
      self(self, depth + 1);
      used[i] = false;
    }
  };
  rec(rec, 0);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double CurvatureBundle::t_contraction(int r) const {
  if (r < 0 || r >= static_cast<int>(T.size())) return 0.0;
  return (T[r] * h * h).trace();
}

Vec eigen_anisotropic(const Mat& s, const Mat& A) {
  if (s.rows() != A.rows() || s.cols() != A.cols() || s.rows() != s.cols()) {
    fail(ErrorKind::SizeMismatch, "s and A must be square of equal size");
  }
  Eigen::LLT<Mat> llt(0.5 * (A + A.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::NotPositiveDefinite, "A_F is not positive definite");
  const Mat L = llt.matrixL();
  // L^{-1} s L = L^T h L with h = A^{-1} s.
  const Mat m = L.triangularView<Eigen::Lower>().solve(s * L);
  const Mat sym = 0.5 * (m + m.transpose());
  Vec lambda = Eigen::SelfAdjointEigenSolver<Mat>(sym, Eigen::EigenvaluesOnly).eigenvalues();
  std::sort(lambda.data(), lambda.data() + lambda.size());
  return lambda;
}

Vec sigma_charpoly(const Vec& lambda) {
  const int n = static_cast<int>(lambda.size());
  Vec e = Vec::Zero(n + 1);
  e(0) = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int r = i + 1; r >= 1; --r) e(r) += lambda(i) * e(r - 1);
  }
  return e;
}

double sigma_kronecker(const Mat& s, int r) {
  const int n = static_cast<int>(s.rows());
  if (r == 0) return 1.0;
  if (r < 0 || r > n) return 0.0;
  double total = 0.0;
  std::vector<int> perm(r);
  for_each_injective(n, r, -1, [&](const std::vector<int>& rows) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double prod = permutation_sign(perm);
      for (int k = 0; k < r; ++k) prod *= s(rows[k], rows[perm[k]]);
      total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  return total / factorial(r);
}

std::vector<Mat> newton_recursion(const Mat& s, const Vec& sigma) {
  const int n = static_cast<int>(s.rows());
  std::vector<Mat> p;
  p.reserve(n + 1);
  p.push_back(Mat::Identity(n, n));
  for (int r = 1; r <= n; ++r) p.push_back(sigma(r) * Mat::Identity(n, n) - p.back() * s);
  return p;
}

Mat newton_kronecker(const Mat& s, int r) {
  const int n = static_cast<int>(s.rows());
  Mat p = Mat::Zero(n, n);
  if (r == 0) return Mat::Identity(n, n);
  if (r >= n) return p;
  // delta^{j_1..j_r i}_{i_1..i_r j}: lower tuple (i_1..i_r, j) distinct and the
  // upper tuple a permutation of it whose last entry is i.
  std::vector<int> perm(r + 1);
  for (int j = 0; j < n; ++j) {
    for_each_injective(n, r, j, [&](const std::vector<int>& rows) {
      std::vector<int> lower(rows);
      lower.push_back(j);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        const int i = lower[perm[r]];
        double prod = permutation_sign(perm);
        for (int k = 0; k < r; ++k) prod *= s(lower[k], lower[perm[k]]);
        p(i, j) += prod;
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
  }
  return p / factorial(r);
}

CurvatureBundle make_bundle(const Mat& A, const Mat& h) {
  const int n = static_cast<int>(A.rows());
  CurvatureBundle b;
  b.A = A;
  b.h = h;
  b.s = A * h;
  b.lambda = eigen_anisotropic(b.s, A);
  b.sigma = sigma_charpoly(b.lambda);
  b.H.resize(n + 1);
  for (int r = 0; r <= n; ++r) b.H(r) = b.sigma(r) / binomial(n, r);
  b.P = newton_recursion(b.s, b.sigma);
  b.T.reserve(n);
  for (int r = 0; r < n; ++r) {
    const Mat t = b.P[r] * A;
    b.T.push_back(t);
  }
  return b;
}

CurvatureBundle make_bundle(const PointFrame& frame) { return make_bundle(frame.A, frame.h); }

TraceResiduals trace_identities(const CurvatureBundle& b) {
  const int n = b.dimension();
  TraceResiduals res;
  const double scale = 1.0 + b.lambda.cwiseAbs().sum();
  const Mat s2 = b.s * b.s;
  for (int r = 0; r <= n; ++r) {
    const double ii = (b.P[r] * b.s).trace() - (r + 1) * b.sigma_at(r + 1);
    const double iii = b.P[r].trace() - (n - r) * b.sigma_at(r);
    const double iv = (b.P[r] * s2).trace() - (b.sigma_at(1) * b.sigma_at(r + 1) - (r + 2) * b.sigma_at(r + 2));
    res.product.push_back(ii);
    res.trace.push_back(iii);
    res.square.push_back(iv);
    res.max_relative = std::max({res.max_relative, std::abs(ii) / std::pow(scale, r + 1),
                                 std::abs(iii) / std::pow(scale, r), std::abs(iv) / std::pow(scale, r + 2)});
  }
  return res;
}

CascadeResult positivity_cascade(std::span<const Vec> H_nodes, int r) {
  CascadeResult result;
  const bool premise = std::all_of(H_nodes.begin(), H_nodes.end(), [&](const Vec& H) { return H(r + 1) > 0.0; });
  if (!premise) {
    result.premise_false = true;
    return result;
  }
  for (const auto& H : H_nodes) {
    for (int k = 1; k <= r; ++k) {
      if (!(H(k) > 0.0)) result.holds = false;
    }
  }
  return result;
}

double maclaurin_gap(const Vec& lambda, int r) {
  const int n = static_cast<int>(lambda.size());
  if (r < 0 || r + 2 > n) fail(ErrorKind::InvalidArgument, "maclaurin_gap needs 0 <= r <= n-2");
  if (!(lambda.minCoeff() > 0.0)) fail(ErrorKind::NonPositiveSpectrum, "all anisotropic principal curvatures must be positive");
  const Vec sigma = sigma_charpoly(lambda);
  auto H = [&](int k) { return sigma(k) / binomial(n, k); };
  return H(1) * H(r + 1) - H(r + 2);
}

bool is_umbilic(const Vec& lambda) {
  return lambda.maxCoeff() - lambda.minCoeff() <= 1e-8 * (1.0 + lambda.cwiseAbs().maxCoeff());
}

}  // namespace wulffcurv
