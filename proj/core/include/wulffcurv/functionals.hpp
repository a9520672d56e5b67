#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wulffcurv/anisotropy.hpp"
#include "wulffcurv/curvature.hpp"
#include "wulffcurv/geometry.hpp"
#include "wulffcurv/parallel.hpp"

namespace wulffcurv {

/// W = position_coeff * X + constant + normal_part(x) * nu + sum_k ambient[k](x) e_k,
/// every coefficient a polynomial in the sphere parameter x.
class VariationField final : public DisplacementField {
 public:
  static VariationField normal(Polynomial psi, std::string tag = {});
  static VariationField translation(const Vec& a);
  static VariationField homothety(double c = 1.0);
  static VariationField ambient_field(std::vector<Polynomial> components, std::string tag = {});
  /// Seeded smooth field with both normal and tangential parts.
  static VariationField random(int n, std::uint64_t seed, double magnitude = 0.2);
  /// Seeded normal field psi nu with polynomial psi of degree <= 2.
  static VariationField random_normal(int n, std::uint64_t seed, double magnitude = 0.2);

  VariationField plus(const VariationField& other) const;

  JetVec evaluate(const ParametricSurface& base, const LocalChart& chart, int order) const override;
  Vec at(const ParametricSurface& base, const Vec& x) const;
  std::string describe() const override;

  double position_coeff = 0.0;
  Vec constant;
  Polynomial normal_part;
  std::vector<Polynomial> ambient;
  std::string tag;
};

struct VariationDecomposition {
  double psi = 0.0;  // <W, nu>
  Vec xi;            // tangential part
};

VariationDecomposition decompose(const ParametricSurface& surface, const VariationField& field, const Vec& x);

/// Per-node data of a grid combined with an anisotropy model.
struct AnisotropicSample {
  int dimension = 2;
  std::vector<PointFrame> frames;
  std::vector<CurvatureBundle> bundles;
  std::vector<double> F;
  std::vector<double> weights;

  std::size_t size() const { return frames.size(); }
  template <class Fn>
  double integrate(Fn&& f) const;
};

AnisotropicSample sample_surface(const QuadratureGrid& grid, const AnisotropyModel& model);

double area_functional(const AnisotropicSample& sample, int r);
double area_functional(const ParametricSurface& surface, const AnisotropyModel& model, const QuadratureGrid& grid, int r);
double volume_functional(const ParametricSurface& surface, const QuadratureGrid& grid);

struct MinkowskiResidual {
  double value = 0.0;
  double scale = 0.0;  // int |H_r F| dA
  double relative() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

/// int (H_r F(nu) + H_{r+1} <X, nu>) dA.
MinkowskiResidual minkowski_residual(const AnisotropicSample& sample, int r);
MinkowskiResidual minkowski_residual(const ParametricSurface& surface, const AnisotropyModel& model,
                                     const QuadratureGrid& grid, int r);

struct EulerLagrangeResidual {
  double lambda_fit = 0.0;
  double sup_residual = 0.0;
};

/// Lambda_fit = area-weighted mean of (r+1) sigma_{r+1}; sup_residual = max |(r+1) sigma_{r+1} - Lambda_fit|.
EulerLagrangeResidual euler_lagrange_residual(const AnisotropicSample& sample, int r);

struct FunctionalReport {
  int r = 0;
  double value = 0.0;
  double volume = 0.0;
  double lambda_fit = 0.0;
  std::vector<double> minkowski_residuals;  // relative, r = 0..n-1
  double el_residual_sup = 0.0;
};

FunctionalReport functional_report(const AnisotropicSample& sample, int r);

ParametricSurface deform(const ParametricSurface& surface, const VariationField& field, double t);

/// Richardson-extrapolated central first derivative at 0, steps h and h/2.
double richardson_first(const std::function<double(double)>& f, double h);
/// Richardson-extrapolated central second derivative at 0, steps h and h/2.
double richardson_second(const std::function<double(double)>& f, double h);

struct FirstVariationCheck {
  double fd_derivative = 0.0;
  double formula_value = 0.0;  // -(r+1) int psi sigma_{r+1} dA
  double mismatch = 0.0;       // relative to max(|formula|, (r+1) int |psi sigma_{r+1}| dA)
  double fd_volume = 0.0;
  double formula_volume = 0.0;  // int psi dA
  double volume_mismatch = 0.0;
  double lambda_fit = 0.0;
  double fd_constrained = 0.0;       // d/dt (A + Lambda_fit V)
  double formula_constrained = 0.0;  // -int psi ((r+1) sigma_{r+1} - Lambda_fit) dA
};

FirstVariationCheck first_variation_check(const ParametricSurface& surface, const AnisotropyModel& model,
                                          const QuadratureGrid& grid, int r, const VariationField& field,
                                          double h = 1e-3);

struct DivergenceLemmaResiduals {
  std::vector<double> anisotropy_form;  // DIV(P_r grad F(nu)) - F tr(P_r h) + (r+1) sigma_{r+1}
  std::vector<double> position_form;    // DIV(P_r X^T) - <X,nu> tr(P_r h) - (n-r) sigma_r
  double sup_anisotropy() const;
  double sup_position() const;
};

/// Pointwise residuals at every grid node, with divergences taken by central
/// differences of step `step`. The default spans one grid cell (half the
/// spacing on each side), so the residual is O(h^2) in the grid spacing.
DivergenceLemmaResiduals divergence_lemma_residuals(const ParametricSurface& surface, const AnisotropyModel& model,
                                                    const QuadratureGrid& grid, int r, double step = 0.0);

struct SigmaVariationCheck {
  double fd_derivative = 0.0;
  double formula_value = 0.0;  // L_{r-1} psi + psi tr(T_{r-1} h h) + <grad sigma_r, xi>
  double mismatch = 0.0;
};

/// Pointwise d sigma_r / dt at parameter x for X + tW, r >= 1.
SigmaVariationCheck sigma_variation_check(const ParametricSurface& surface, const AnisotropyModel& model,
                                          const VariationField& field, const Vec& x, int r, double step = 1e-3);

/// d/dt of int sigma_r(X_t) dA_X, with the area element frozen at t = 0, against
/// int psi tr(T_{r-1} h h) dA; the divergence term L_{r-1} psi integrates to zero.
SigmaVariationCheck sigma_integral_variation_check(const ParametricSurface& surface, const AnisotropyModel& model,
                                                   const QuadratureGrid& grid, const VariationField& field, int r,
                                                   double h = 1e-3);

template <class Fn>
double AnisotropicSample::integrate(Fn&& f) const {
  std::vector<double> terms(size());
  for (std::size_t k = 0; k < size(); ++k) terms[k] = weights[k] * f(k);
  return pairwise_sum(terms);
}

}  // namespace wulffcurv
