#include "wulffcurv/stability.hpp"

#include <algorithm>
#include <cmath>

#include "wulffcurv/curvature.hpp"
#include "wulffcurv/eigensolver.hpp"
#include "wulffcurv/error.hpp"
#include "wulffcurv/parallel.hpp"

namespace wulffcurv {
namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Triplet = Eigen::Triplet<double>;

struct VertexTensor {
  Matrix3d T;
  double zeroth = 0.0;
};

QuadraticForm assemble(const SurfaceMesh& mesh, const std::vector<VertexTensor>& data, int r) {
  check_topology(mesh);
  const int N = static_cast<int>(mesh.vertex_count());
  std::vector<Triplet> k_entries;
  k_entries.reserve(mesh.face_count() * 9);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(N);
  for (std::size_t t = 0; t < mesh.face_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.face_areas[t];
    const Vector3d n = mesh.face_normals[t];
    Vector3d grad[3];
    for (int a = 0; a < 3; ++a) {
      const Vector3d edge = mesh.vertices[tri[(a + 2) % 3]] - mesh.vertices[tri[(a + 1) % 3]];
      grad[a] = n.cross(edge) / (2.0 * area);
    }
    const Matrix3d P = Matrix3d::Identity() - n * n.transpose();
    const Matrix3d T = P * ((data[tri[0]].T + data[tri[1]].T + data[tri[2]].T) / 3.0) * P;
    for (int a = 0; a < 3; ++a) {
      mass(tri[a]) += area / 3.0;
      for (int b = 0; b < 3; ++b) k_entries.emplace_back(tri[a], tri[b], area * grad[b].dot(T * grad[a]));
    }
  }
  QuadraticForm form;
  form.r = r;
  form.K.resize(N, N);
  form.K.setFromTriplets(k_entries.begin(), k_entries.end());
  const Eigen::SparseMatrix<double> Kt = form.K.transpose();
  form.K = 0.5 * (form.K + Kt);
  std::vector<Triplet> z_entries;
  for (int v = 0; v < N; ++v) z_entries.emplace_back(v, v, data[v].zeroth * mass(v));
  form.Z.resize(N, N);
  form.Z.setFromTriplets(z_entries.begin(), z_entries.end());
  form.mass = mass;
  form.constraint = mass;
  return form;
}

Matrix3d ambient_tensor(const PointFrame& f, const Mat& T) {
  const Mat E = f.tangents;
  const Mat sym = 0.5 * (T + T.transpose());
  return Matrix3d(E * sym * E.transpose());
}

void require_surface_mesh(const SurfaceMesh& mesh, const AnisotropyModel& model) {
  if (mesh.frames.empty() || mesh.frames.front().dimension() != 2 || model.dimension() != 2) {
    fail(ErrorKind::SizeMismatch, "stability forms need n = 2 meshes and models");
  }
}

QuadratureGrid grid_on(const ParametricSurface& surface, int level) {
  try {
    return build_grid(surface, level);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateParametrization) fail(ErrorKind::ImmersionLoss, e.what());
    throw;
  }
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double QuadraticForm::evaluate(const Eigen::VectorXd& psi) const {
  if (psi.size() != K.rows()) fail(ErrorKind::SizeMismatch, "nodal field has wrong length");
  return (r + 1) * (psi.dot(K * psi) - psi.dot(Z * psi));
}

Eigen::SparseMatrix<double> QuadraticForm::mass_matrix() const {
  Eigen::SparseMatrix<double> m(mass.size(), mass.size());
  std::vector<Triplet> entries;
  for (int i = 0; i < mass.size(); ++i) entries.emplace_back(i, i, mass(i));
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Eigen::VectorXd QuadraticForm::deflate(const Eigen::VectorXd& psi) const {
  return psi - Eigen::VectorXd::Constant(psi.size(), constraint.dot(psi) / constraint.sum());
}

QuadraticForm assemble_form(const SurfaceMesh& mesh, const AnisotropyModel& model, int r) {
  require_surface_mesh(mesh, model);
  if (r < 0 || r > 1) fail(ErrorKind::InvalidArgument, "r out of range");
  std::vector<VertexTensor> data(mesh.vertex_count());
  parallel_for(data.size(), [&](std::size_t v) {
    const PointFrame f = with_anisotropy(mesh.frames[v], model);
    const CurvatureBundle b = make_bundle(f);
    data[v].T = ambient_tensor(f, b.T[r]);
    data[v].zeroth = b.t_contraction(r);
  });
  QuadraticForm form = assemble(mesh, data, r);
  form.model_tag = model.describe();
  return form;
}

QuadraticForm assemble_reference_form(const SurfaceMesh& mesh, const AnisotropyModel& model) {
  require_surface_mesh(mesh, model);
  std::vector<VertexTensor> data(mesh.vertex_count());
  parallel_for(data.size(), [&](std::size_t v) {
    const PointFrame f = with_anisotropy(mesh.frames[v], model);
    data[v].T = ambient_tensor(f, f.A);
    data[v].zeroth = (f.A * f.h * f.h).trace();
  });
  QuadraticForm form = assemble(mesh, data, 0);
  form.model_tag = model.describe();
  return form;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable:
      return "stable";
    case Verdict::Unstable:
      return "unstable";
    case Verdict::Indeterminate:
      break;
  }
  return "indeterminate";
}

SpectrumReport constrained_spectrum(const QuadraticForm& form, const SpectrumSettings& settings) {
  if (settings.k < 3) fail(ErrorKind::InvalidArgument, "need at least 3 eigenvalues");
  if (settings.stab_tol <= 0.0 || settings.kernel_tol <= 0.0) fail(ErrorKind::InvalidArgument, "tolerances must be positive");
  if ((form.mass.array() <= 0.0).any()) fail(ErrorKind::NotPositiveDefinite, "mass matrix is not positive definite");
  const Eigen::VectorXd inv_sqrt = form.mass.cwiseSqrt().cwiseInverse();
  const Eigen::SparseMatrix<double> D = Eigen::SparseMatrix<double>(inv_sqrt.asDiagonal());
  const Eigen::SparseMatrix<double> S = D * (form.K - form.Z) * D;
  const Eigen::VectorXd q = inv_sqrt.cwiseProduct(form.constraint);

  const auto eig = lowest_constrained_eigenpairs(S, q, settings.k, settings.seed);
  SpectrumReport rep;
  rep.settings = settings;
  for (double mu : eig.values) rep.eigenvalues.push_back((form.r + 1) * mu);
  rep.modes = inv_sqrt.asDiagonal() * eig.vectors;

  const double top = std::abs(rep.eigenvalues.back());
  for (double mu : rep.eigenvalues) {
    if (mu > 0.05 * top) {
      rep.reference = mu;
      break;
    }
  }
  if (rep.reference <= 0.0) return rep;
  rep.kernel_threshold = settings.kernel_tol * rep.reference;
  rep.stab_threshold = settings.stab_tol * rep.reference;
  for (double mu : rep.eigenvalues) rep.near_kernel += std::abs(mu) <= rep.kernel_threshold ? 1 : 0;
  rep.verdict = rep.eigenvalues.front() >= -rep.stab_threshold ? Verdict::Stable : Verdict::Unstable;
  return rep;
}

ChainTerms chain_terms(const AnisotropicSample& sample, int r) {
  const double intF = sample.integrate([&](std::size_t k) { return sample.F[k]; });
  ChainTerms c;
  c.gap_term_1 = sample.integrate([&](std::size_t k) {
    const auto& b = sample.bundles[k];
    return sample.F[k] * (b.H_at(1) * b.H_at(r + 1) - b.H_at(r + 2));
  });
  const double a = sample.integrate([&](std::size_t k) { return sample.F[k] * sample.bundles[k].H_at(1); });
  const double b = sample.integrate([&](std::size_t k) {
    const auto& bu = sample.bundles[k];
    return sample.F[k] * bu.H_at(r) / bu.H_at(r + 1);
  });
  c.gap_term_2 = a * b - intF * intF;
  return c;
}

TestFunctionDiagnostics test_function(const ParametricSurface& surface, const AnisotropyModel& model,
                                      const QuadratureGrid& grid, const SurfaceMesh& mesh, int r, double el_tolerance) {
  const int n = surface.dimension();
  if (r < 0 || r > n - 1) fail(ErrorKind::InvalidArgument, "r out of range");
  const AnisotropicSample sample = sample_surface(grid, model);
  const auto el = euler_lagrange_residual(sample, r);
  if (el.sup_residual > el_tolerance * std::max(1.0, std::abs(el.lambda_fit))) {
    fail(ErrorKind::NotCritical, "H_" + std::to_string(r + 1) + " is not constant (sup residual " +
                                     std::to_string(el.sup_residual) + ")");
  }
  TestFunctionDiagnostics d;
  d.el_residual_sup = el.sup_residual;
  const double intF = sample.integrate([&](std::size_t k) { return sample.F[k]; });
  d.alpha = sample.integrate([&](std::size_t k) { return sample.F[k] * sample.bundles[k].H_at(r); }) / intF;
  const double c = binomial(n, r + 1);
  d.H_next = el.lambda_fit / ((r + 1) * c);
  d.psi_grid.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& f = sample.frames[k];
    d.psi_grid[k] = d.alpha * sample.F[k] + d.H_next * f.position.dot(f.normal);
  }
  d.psi_integral = sample.integrate([&](std::size_t k) { return d.psi_grid[k]; });
  d.area = sample.integrate([](std::size_t) { return 1.0; });

  d.psi_mesh.resize(static_cast<Eigen::Index>(mesh.vertex_count()));
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const auto& f = mesh.frames[v];
    d.psi_mesh(static_cast<Eigen::Index>(v)) = d.alpha * model.value(f.normal.normalized()) + d.H_next * f.position.dot(f.normal);
  }
  d.form_value = assemble_form(mesh, model, r).evaluate(d.psi_mesh);

  d.gaps = chain_terms(sample, r);
  d.rhs_closed_form = -d.alpha * d.alpha * (n - r - 1) * c * d.gaps.gap_term_1 -
                      d.alpha * (r + 1) * c * d.H_next * d.H_next / intF * d.gaps.gap_term_2;
  return d;
}

double IrResiduals::sup_anisotropy() const { return sup_abs(anisotropy_form); }
double IrResiduals::sup_position() const { return sup_abs(position_form); }

IrResiduals ir_residuals(const ParametricSurface& surface, const AnisotropyModel& model, const QuadratureGrid& grid,
                         int r, double step) {
  const int n = surface.dimension();
  if (r < 0 || r > n - 1) fail(ErrorKind::InvalidArgument, "r out of range");
  if (step <= 0.0) step = 0.5 * grid.spacing();
  const ScalarField f_aniso = [&](const Vec& y) { return model.value(frame_at(surface, y).normal.normalized()); };
  const ScalarField f_support = [&](const Vec& y) {
    const PointFrame f = frame_at(surface, y);
    return f.position.dot(f.normal);
  };
  const ScalarField sigma_next = [&](const Vec& y) { return make_bundle(frame_at(surface, y, model)).sigma_at(r + 1); };
  auto flux = [&](const ScalarField& f) -> VectorField {
    return [&](const Vec& y) {
      const PointFrame g = frame_at(surface, y, model);
      const CurvatureBundle b = make_bundle(g);
      return Vec(g.ambient(b.T[r] * g.components(tangential_gradient(surface, f, y, step))));
    };
  };
  const VectorField flux_aniso = flux(f_aniso);
  const VectorField flux_support = flux(f_support);

  IrResiduals res;
  res.anisotropy_form.resize(grid.size());
  res.position_form.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const Vec& x = grid.nodes[k];
    const PointFrame f = with_anisotropy(grid.frames[k], model);
    const CurvatureBundle b = make_bundle(f);
    const Vec nu = f.normal.normalized();
    const Vec grad_sigma = tangential_gradient(surface, sigma_next, x, step);
    const Vec x_tan = f.position - f.position.dot(nu) * nu;
    const double tc = b.t_contraction(r);
    const double i_aniso = surface_divergence(surface, flux_aniso, x, step) + model.value(nu) * tc;
    const double i_support = surface_divergence(surface, flux_support, x, step) + f.position.dot(nu) * tc;
    res.anisotropy_form[k] = i_aniso - (-grad_sigma.dot(model.sphere_gradient(nu)) + b.sigma_at(1) * b.sigma_at(r + 1) -
                                        (r + 2) * b.sigma_at(r + 2));
    res.position_form[k] = i_support - (-grad_sigma.dot(x_tan) - (r + 1) * b.sigma_at(r + 1));
  });
  return res;
}

SecondVariationCheck second_variation_fd(const ParametricSurface& surface, const AnisotropyModel& model, int level,
                                         const SurfaceMesh& mesh, int r, const VariationField& field, double h,
                                         double el_tolerance) {
  const QuadratureGrid grid = build_grid(surface, level);
  const AnisotropicSample sample = sample_surface(grid, model);
  const auto el = euler_lagrange_residual(sample, r);
  if (el.sup_residual > el_tolerance * std::max(1.0, std::abs(el.lambda_fit))) {
    fail(ErrorKind::NotCritical, "surface is not a critical point");
  }
  const double area = sample.integrate([](std::size_t) { return 1.0; });
  const double mean =
      sample.integrate([&](std::size_t k) { return field.at(surface, grid.nodes[k]).dot(grid.frames[k].normal); }) / area;
  const VariationField deflated = field.plus(VariationField::normal(Polynomial::constant(-mean), "deflation"));

  SecondVariationCheck c;
  c.lambda_fit = el.lambda_fit;
  c.fd_value = richardson_second(
      [&](double t) {
        const ParametricSurface moved = deform(surface, deflated, t);
        const QuadratureGrid g = grid_on(moved, level);
        return area_functional(sample_surface(g, model), r) + el.lambda_fit * orient_check(moved, g);
      },
      h);

  const QuadraticForm form = assemble_form(mesh, model, r);
  Eigen::VectorXd psi(static_cast<Eigen::Index>(mesh.vertex_count()));
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    psi(static_cast<Eigen::Index>(v)) = deflated.at(surface, mesh.directions[v]).dot(mesh.frames[v].normal);
  }
  psi = form.deflate(psi);
  c.form_value = form.evaluate(psi);
  c.scale = (r + 1) * (psi.dot(form.K * psi) + std::abs(psi.dot(form.Z * psi)));
  c.mismatch = std::abs(c.fd_value - c.form_value) / std::max(std::abs(c.form_value), 1e-300);
  return c;
}

}  // namespace wulffcurv
