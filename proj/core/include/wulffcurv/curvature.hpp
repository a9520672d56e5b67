#pragma once

#include <span>
#include <vector>

#include "wulffcurv/geometry.hpp"
#include "wulffcurv/types.hpp"

namespace wulffcurv {

/// Anisotropic curvature data at one point. sigma and H are indexed 0..n;
/// sigma_at / H_at extend them by zero above n.
struct CurvatureBundle {
  Mat s;
  Vec lambda;
  Vec sigma;
  Vec H;
  std::vector<Mat> P;  // P_0 .. P_n
  std::vector<Mat> T;  // T_0 .. T_{n-1}
  Mat A;
  Mat h;

  int dimension() const { return static_cast<int>(s.rows()); }
  double sigma_at(int r) const { return r >= 0 && r < sigma.size() ? sigma(r) : 0.0; }
  double H_at(int r) const { return r >= 0 && r < H.size() ? H(r) : 0.0; }
  /// <T_r o d nu, d nu> in the frame, i.e. tr(T_r h h).
  double t_contraction(int r) const;
};

double binomial(int n, int k);

/// Real spectrum of s = A h through the symmetric similar matrix L^T h L,
/// A = L L^T. Throws NotPositiveDefinite if the Cholesky factorization fails.
Vec eigen_anisotropic(const Mat& s, const Mat& A);

/// sigma_0..sigma_n of the given eigenvalues by the product recurrence.
Vec sigma_charpoly(const Vec& lambda);

/// sigma_r from the generalized Kronecker expansion over index tuples.
double sigma_kronecker(const Mat& s, int r);

/// P_0 = I, P_r = sigma_r I - P_{r-1} s, r = 1..n.
std::vector<Mat> newton_recursion(const Mat& s, const Vec& sigma);

/// (P_r)_ij from the generalized Kronecker expansion.
Mat newton_kronecker(const Mat& s, int r);

CurvatureBundle make_bundle(const Mat& A, const Mat& h);
CurvatureBundle make_bundle(const PointFrame& frame);

/// Residuals per r = 0..n of
///   tr(P_r s)   - (r+1) sigma_{r+1}
///   tr(P_r)     - (n-r) sigma_r
///   tr(P_r s^2) - (sigma_1 sigma_{r+1} - (r+2) sigma_{r+2})
/// `relative` divides each by (1 + sum |lambda_i|)^degree of the identity.
struct TraceResiduals {
  std::vector<double> product;
  std::vector<double> trace;
  std::vector<double> square;
  double max_relative = 0.0;
};

TraceResiduals trace_identities(const CurvatureBundle& bundle);

struct CascadeResult {
  bool holds = true;
  bool premise_false = false;
};

/// (H_{r+1} > 0 at every node) implies (H_k > 0 at every node, k = 1..r).
CascadeResult positivity_cascade(std::span<const Vec> H_nodes, int r);

/// H_1 H_{r+1} - H_{r+2} from the eigenvalues; requires all lambda_i > 0 and r + 2 <= n.
double maclaurin_gap(const Vec& lambda, int r);

/// max lambda - min lambda <= 1e-8 (1 + max |lambda|).
bool is_umbilic(const Vec& lambda);

}  // namespace wulffcurv
