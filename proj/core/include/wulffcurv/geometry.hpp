#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wulffcurv/anisotropy.hpp"
#include "wulffcurv/jet.hpp"
#include "wulffcurv/polynomial.hpp"
#include "wulffcurv/types.hpp"

namespace wulffcurv {

/// Gnomonic chart of S^n around `center`: u -> normalize(center + basis * u).
/// Every catalog surface is parametrized over S^n, so this chart is the
/// local coordinate system for all derivative computations.
struct LocalChart {
  Vec center;
  Mat basis;

  static LocalChart at(const Vec& x);
  static LocalChart at(const Vec& x, const Mat& basis);

  int dimension() const { return static_cast<int>(basis.cols()); }
  JetVec sphere_point(int order) const;
  Vec sphere_point(const Vec& u) const;
};

class ParametricSurface;

/// Smooth vector field along a surface, used to build variations X + tW.
class DisplacementField {
 public:
  virtual ~DisplacementField() = default;
  virtual JetVec evaluate(const ParametricSurface& base, const LocalChart& chart, int order) const = 0;
  virtual std::string describe() const = 0;
};

/// Position map S^n -> R^{n+1} evaluated on jets.
class SurfaceShape {
 public:
  virtual ~SurfaceShape() = default;
  virtual int dimension() const = 0;
  virtual JetVec position(const LocalChart& chart, int order) const = 0;
  virtual std::string describe() const = 0;
};

/// Closed hypersurface X: S^n -> R^{n+1}, n in {1, 2}. The orientation sign
/// is fixed once at construction so that the stored normal is the inner one
/// (negative algebraic volume).
class ParametricSurface {
 public:
  static constexpr double kDefaultStep = 1e-4;

  static ParametricSurface sphere(int n, double radius = 1.0);
  static ParametricSurface ellipsoid(const Vec& axes);
  static ParametricSurface wulff(const AnisotropyModel& model);
  /// rho(x) x with rho = 1 + sum_k eps_k p_k(x).
  static ParametricSurface radial(int n, std::vector<double> eps, std::vector<Polynomial> polys);
  static ParametricSurface from_shape(std::shared_ptr<const SurfaceShape> shape);

  ParametricSurface scaled(double s) const;
  ParametricSurface translated(const Vec& a) const;
  /// X + t W; keeps this surface's orientation sign.
  ParametricSurface displaced(std::shared_ptr<const DisplacementField> field, double t) const;
  ParametricSurface with_finite_differences(double step = kDefaultStep) const;
  ParametricSurface with_analytic_derivatives() const;

  int dimension() const { return shape_->dimension(); }
  int ambient_dimension() const { return dimension() + 1; }
  DerivativeMode derivative_mode() const { return mode_; }
  double step() const { return step_; }
  int orientation() const { return orientation_; }
  std::string describe() const { return shape_->describe(); }

  Vec position(const Vec& x) const;
  JetVec position(const LocalChart& chart, int order) const;
  /// Inner unit normal on jets (needs the position one order higher).
  JetVec inner_normal(const LocalChart& chart, int order) const;

 private:
  ParametricSurface(std::shared_ptr<const SurfaceShape> shape, int orientation);

  std::shared_ptr<const SurfaceShape> shape_;
  int orientation_ = -1;
  DerivativeMode mode_ = DerivativeMode::Analytic;
  double step_ = kDefaultStep;
};

/// Per-point geometric state. h follows d nu = -sum h_ij omega_j e_i, so the
/// unit sphere with inner normal has h = identity. A is A_F at nu in the same
/// frame (identity when no anisotropy was supplied), and s = A h.
struct PointFrame {
  Vec parameter;
  Mat chart_basis;
  Vec position;
  Mat position_derivatives;
  Vec normal;
  Mat tangents;
  Mat h;
  Mat A;
  Mat s;
  double jacobian = 0.0;

  int dimension() const { return static_cast<int>(tangents.cols()); }
  /// Frame components of an ambient vector.
  Vec components(const Vec& v) const { return tangents.transpose() * v; }
  /// Ambient vector from frame components.
  Vec ambient(const Vec& c) const { return tangents * c; }
};

PointFrame frame_at(const ParametricSurface& surface, const LocalChart& chart);
PointFrame frame_at(const ParametricSurface& surface, const Vec& x);
PointFrame frame_at(const ParametricSurface& surface, const Vec& x, const AnisotropyModel& model);
/// Fills A and s from the model, evaluated at the frame's normal.
PointFrame with_anisotropy(PointFrame frame, const AnisotropyModel& model);

/// Product Gauss-Legendre (in cos of colatitude) x trapezoid (longitude) rule
/// for n = 2, uniform trapezoid for n = 1. Weights carry the area element.
struct QuadratureGrid {
  int dimension = 2;
  int level = 1;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::vector<PointFrame> frames;

  std::size_t size() const { return nodes.size(); }
  /// Nominal node spacing in the sphere parametrization.
  double spacing() const;
};

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count);

QuadratureGrid build_grid(const ParametricSurface& surface, int level);
double integrate(const QuadratureGrid& grid, std::span<const double> values);
/// Algebraic volume (1/(n+1)) int <X, nu> dA; negative for inner normals.
double orient_check(const ParametricSurface& surface, const QuadratureGrid& grid);

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

/// Surface gradient of a scalar field given on sphere parameters, by central
/// differences of step `step` in the local chart. Returns an ambient vector.
Vec tangential_gradient(const ParametricSurface& surface, const ScalarField& field, const Vec& x,
                        double step = 1e-5);

/// sum_i <nabla_{e_i} V, e_i> for a tangent field V, by central differences.
double surface_divergence(const ParametricSurface& surface, const VectorField& field, const Vec& x,
                          double step = 1e-5);

}  // namespace wulffcurv
