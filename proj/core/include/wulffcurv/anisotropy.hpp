#pragma once

#include <string>
#include <vector>

#include "wulffcurv/jet.hpp"
#include "wulffcurv/types.hpp"

namespace wulffcurv {

enum class AnisotropyKind { Constant, Linear, Norm, Quadratic };

enum class DerivativeMode { Analytic, FiniteDifference };

struct ConvexityReport {
  int sample_count = 0;
  double min_eigenvalue = 0.0;
  Vec argmin_point;
  bool pass = false;
};

/// Anisotropy function F: S^n -> R^+ from a closed catalog:
///   Constant   F = c
///   Linear     F = 1 + <a, x>
///   Norm       F = |B x|, B = diag(b)
///   Quadratic  F = 1 + c <d, x>^2
/// Intrinsic derivatives are taken from the degree-1 homogeneous extension
/// G(y) = |y| F(y / |y|): the sphere gradient is the tangential part of grad G,
/// and D^2F + F*1 is the Euclidean Hessian of G restricted to x^perp.
class AnisotropyModel {
 public:
  static constexpr double kUnitTolerance = 1e-12;
  static constexpr double kDefaultStep = 1e-5;

  static AnisotropyModel constant(int n, double c);
  static AnisotropyModel linear(const Vec& a);
  static AnisotropyModel norm(const Vec& diag_b);
  static AnisotropyModel quadratic(double c, const Vec& direction);

  /// Same F, with gradient and A_F taken from geodesic central differences.
  AnisotropyModel with_finite_differences(double step = kDefaultStep) const;
  AnisotropyModel with_analytic_derivatives() const;
  /// F -> factor * F.
  AnisotropyModel scaled(double factor) const;

  int dimension() const { return n_; }
  int ambient_dimension() const { return n_ + 1; }
  AnisotropyKind kind() const { return kind_; }
  DerivativeMode derivative_mode() const { return mode_; }
  double step() const { return step_; }
  double coefficient() const { return coeff_; }
  const Vec& vector_parameter() const { return vec_; }
  double scale() const { return scale_; }
  /// Mini-language form, e.g. `norm:B=[2,1,1]`.
  std::string describe() const;

  /// Result of the coarse convexity check run at construction.
  bool convex() const { return convex_; }

  double value(const Vec& x) const;
  Vec sphere_gradient(const Vec& x) const;
  /// A_F in the orthonormal tangent frame given by the columns of `frame`.
  Mat a_matrix(const Vec& x, const Mat& frame) const;
  /// phi(x) = F(x) x + grad F(x).
  Vec wulff_point(const Vec& x) const;

  double extension(const Vec& y) const;
  Vec extension_gradient(const Vec& y) const;
  Mat extension_hessian(const Vec& y) const;
  /// grad G on jets; used to parametrize Wulff shapes with exact derivatives.
  JetVec extension_gradient(const JetVec& y) const;

 private:
  AnisotropyModel(int n, AnisotropyKind kind, double coeff, Vec vec);

  void check_unit(const Vec& x) const;
  Vec fd_gradient(const Vec& x) const;
  Mat fd_hessian(const Vec& x, const Mat& frame) const;
  double raw_value(const Vec& x) const;

  int n_ = 2;
  AnisotropyKind kind_ = AnisotropyKind::Constant;
  double coeff_ = 1.0;
  Vec vec_;
  double scale_ = 1.0;
  DerivativeMode mode_ = DerivativeMode::Analytic;
  double step_ = kDefaultStep;
  bool convex_ = true;
};

/// Quasi-uniform points on S^n: at least 100 * 4^(level-1), plus the
/// coordinate axis points.
std::vector<Vec> sphere_samples(int n, int level);

/// Orthonormal basis of x^perp as columns. For n = 2 it is right-handed
/// (t1 x t2 = x); for n = 1 it is the counter-clockwise tangent.
Mat tangent_basis(const Vec& x);

ConvexityReport check_convexity(const AnisotropyModel& model, int sample_level);

}  // namespace wulffcurv
