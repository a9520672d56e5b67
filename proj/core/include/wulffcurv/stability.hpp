#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "wulffcurv/anisotropy.hpp"
#include "wulffcurv/functionals.hpp"
#include "wulffcurv/geometry.hpp"
#include "wulffcurv/mesh.hpp"

namespace wulffcurv {

/// Piecewise-linear discretization of the second variation:
/// Q[psi] = (r+1) (psi^T K psi - psi^T Z psi), with lumped mass and
/// constraint vector c_i = int phi_i dA.
struct QuadraticForm {
  Eigen::SparseMatrix<double> K;
  Eigen::SparseMatrix<double> Z;
  Eigen::VectorXd mass;
  Eigen::VectorXd constraint;
  int r = 0;
  std::string surface_tag;
  std::string model_tag;

  std::size_t size() const { return static_cast<std::size_t>(mass.size()); }
  double evaluate(const Eigen::VectorXd& psi) const;
  Eigen::SparseMatrix<double> mass_matrix() const;
  /// psi - (c^T psi / c^T 1) 1.
  Eigen::VectorXd deflate(const Eigen::VectorXd& psi) const;
};

QuadraticForm assemble_form(const SurfaceMesh& mesh, const AnisotropyModel& model, int r);
/// The form with T_r replaced by A_F and tr(T_r h h) by tr(A_F h h).
QuadraticForm assemble_reference_form(const SurfaceMesh& mesh, const AnisotropyModel& model);

enum class Verdict { Stable, Unstable, Indeterminate };
std::string to_string(Verdict v);

struct SpectrumSettings {
  int k = 16;
  /// Relative to the reference eigenvalue.
  double stab_tol = 1e-2;
  double kernel_tol = 1e-3;
  std::uint64_t seed = 1;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending, scaled by (r+1)
  Eigen::MatrixXd modes;            // nodal psi, one column per eigenvalue
  int near_kernel = 0;
  double reference = 0.0;           // first clearly positive eigenvalue
  double stab_threshold = 0.0;      // absolute
  double kernel_threshold = 0.0;    // absolute
  Verdict verdict = Verdict::Indeterminate;
  SpectrumSettings settings;
};

SpectrumReport constrained_spectrum(const QuadraticForm& form, const SpectrumSettings& settings = {});

struct ChainTerms {
  double gap_term_1 = 0.0;  // int F (H_1 H_{r+1} - H_{r+2}) dA
  double gap_term_2 = 0.0;  // int F H_1 dA * int F H_r / H_{r+1} dA - (int F dA)^2
};

ChainTerms chain_terms(const AnisotropicSample& sample, int r);

struct TestFunctionDiagnostics {
  double alpha = 0.0;
  double H_next = 0.0;               // the constant H_{r+1}
  std::vector<double> psi_grid;      // psi* at quadrature nodes
  Eigen::VectorXd psi_mesh;          // psi* at mesh vertices
  double psi_integral = 0.0;
  double area = 0.0;
  double form_value = 0.0;           // Q[psi*]
  double rhs_closed_form = 0.0;      // equals Q[psi*] / (r+1)
  ChainTerms gaps;
  double el_residual_sup = 0.0;
};

/// Throws NotCritical when sup |(r+1) sigma_{r+1} - Lambda_fit| > el_tolerance * max(1, |Lambda_fit|).
TestFunctionDiagnostics test_function(const ParametricSurface& surface, const AnisotropyModel& model,
                                      const QuadratureGrid& grid, const SurfaceMesh& mesh, int r,
                                      double el_tolerance = 1e-6);

struct IrResiduals {
  std::vector<double> anisotropy_form;  // I_r[F(nu)] - (-<grad sigma_{r+1}, grad F(nu)> + sigma_1 sigma_{r+1} - (r+2) sigma_{r+2})
  std::vector<double> position_form;    // I_r[<X,nu>] - (-<grad sigma_{r+1}, X^T> - (r+1) sigma_{r+1})
  double sup_anisotropy() const;
  double sup_position() const;
};

/// I_r[f] = div(T_r grad f) + f tr(T_r h h), with all derivatives by central
/// differences of step `step` (half the grid spacing by default).
IrResiduals ir_residuals(const ParametricSurface& surface, const AnisotropyModel& model, const QuadratureGrid& grid,
                         int r, double step = 0.0);

struct SecondVariationCheck {
  double fd_value = 0.0;
  double form_value = 0.0;
  double mismatch = 0.0;  // |fd - form| / |form|
  double scale = 0.0;     // (r+1) (psi^T K psi + |psi^T Z psi|), for judging zero modes
  double lambda_fit = 0.0;
};

/// Second derivative of A_r + Lambda_fit V along X + t psi nu (or X + t W for
/// a general field) against Q of the nodal interpolant of psi. The field's
/// normal part is deflated to zero mean beforehand.
SecondVariationCheck second_variation_fd(const ParametricSurface& surface, const AnisotropyModel& model, int level,
                                         const SurfaceMesh& mesh, int r, const VariationField& field,
                                         double h = 1e-2, double el_tolerance = 1e-6);

}  // namespace wulffcurv
