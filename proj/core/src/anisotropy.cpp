#include "wulffcurv/anisotropy.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wulffcurv/error.hpp"

namespace wulffcurv {
namespace {

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string vector_text(const Vec& v) {
  std::string s = "[";
  for (int k = 0; k < v.size(); ++k) {
    if (k) s += ',';
    s += number(v(k));
  }
  return s + "]";
}

Vec geodesic(const Vec& x, const Vec& v) {
  const double len = v.norm();
  if (len == 0.0) return x;
  return std::cos(len) * x + std::sin(len) * (v / len);
}

}  // namespace

AnisotropyModel::AnisotropyModel(int n, AnisotropyKind kind, double coeff, Vec vec)
    : n_(n), kind_(kind), coeff_(coeff), vec_(std::move(vec)) {
  if (n_ < 1 || n_ > kMaxSphereDimension) {
    fail(ErrorKind::InvalidArgument, "anisotropy dimension must be 1, 2 or 3");
  }
  convex_ = check_convexity(*this, 1).pass;
}

AnisotropyModel AnisotropyModel::constant(int n, double c) {
  if (!(c > 0.0)) fail(ErrorKind::NonPositiveValue, "constant anisotropy needs c > 0");
  return AnisotropyModel(n, AnisotropyKind::Constant, c, Vec::Zero(n + 1));
}

AnisotropyModel AnisotropyModel::linear(const Vec& a) {
  if (a.size() < 2) fail(ErrorKind::InvalidArgument, "linear anisotropy needs a in R^{n+1}, n >= 1");
  if (!(a.norm() < 1.0)) fail(ErrorKind::NonPositiveValue, "linear anisotropy needs |a| < 1");
  return AnisotropyModel(static_cast<int>(a.size()) - 1, AnisotropyKind::Linear, 0.0, a);
}

AnisotropyModel AnisotropyModel::norm(const Vec& diag_b) {
  if (diag_b.size() < 2) fail(ErrorKind::InvalidArgument, "norm anisotropy needs B in R^{n+1}, n >= 1");
  if (!(diag_b.minCoeff() > 0.0)) fail(ErrorKind::NonPositiveValue, "norm anisotropy needs B > 0");
  return AnisotropyModel(static_cast<int>(diag_b.size()) - 1, AnisotropyKind::Norm, 0.0, diag_b);
}

AnisotropyModel AnisotropyModel::quadratic(double c, const Vec& direction) {
  if (direction.size() < 2) fail(ErrorKind::InvalidArgument, "quadratic anisotropy needs d in R^{n+1}");
  if (!(direction.norm() > 0.0)) fail(ErrorKind::InvalidArgument, "quadratic anisotropy needs d != 0");
  if (!(c > -1.0)) fail(ErrorKind::NonPositiveValue, "quadratic anisotropy needs c > -1");
  return AnisotropyModel(static_cast<int>(direction.size()) - 1, AnisotropyKind::Quadratic, c,
                         direction.normalized());
}

AnisotropyModel AnisotropyModel::with_finite_differences(double step) const {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  AnisotropyModel m = *this;
  m.mode_ = DerivativeMode::FiniteDifference;
  m.step_ = step;
  return m;
}

AnisotropyModel AnisotropyModel::with_analytic_derivatives() const {
  AnisotropyModel m = *this;
  m.mode_ = DerivativeMode::Analytic;
  return m;
}

AnisotropyModel AnisotropyModel::scaled(double factor) const {
  if (!(factor > 0.0)) fail(ErrorKind::InvalidArgument, "anisotropy scale must be positive");
  AnisotropyModel m = *this;
  m.scale_ *= factor;
  return m;
}

std::string AnisotropyModel::describe() const {
  std::string s;
  switch (kind_) {
    case AnisotropyKind::Constant: s = "const:c=" + number(coeff_); break;
    case AnisotropyKind::Linear: s = "linear:a=" + vector_text(vec_); break;
    case AnisotropyKind::Norm: s = "norm:B=" + vector_text(vec_); break;
    case AnisotropyKind::Quadratic: s = "quad:c=" + number(coeff_) + ",d=" + vector_text(vec_); break;
  }
  if (kind_ == AnisotropyKind::Constant && n_ != 2) s += ",n=" + std::to_string(n_);
  if (scale_ != 1.0) s += "*scale=" + number(scale_);
  return s;
}

void AnisotropyModel::check_unit(const Vec& x) const {
  if (x.size() != n_ + 1) fail(ErrorKind::SizeMismatch, "point has wrong ambient dimension");
  if (std::abs(x.norm() - 1.0) > kUnitTolerance) {
    fail(ErrorKind::NonUnitInput, "|x| deviates from 1 by " + number(std::abs(x.norm() - 1.0)));
  }
}

double AnisotropyModel::extension(const Vec& y) const {
  const double r = y.norm();
  double g = 0.0;
  switch (kind_) {
    case AnisotropyKind::Constant: g = coeff_ * r; break;
    case AnisotropyKind::Linear: g = r + vec_.dot(y); break;
    case AnisotropyKind::Norm: g = vec_.cwiseProduct(y).norm(); break;
    case AnisotropyKind::Quadratic: {
      const double t = vec_.dot(y);
      g = r + coeff_ * t * t / r;
      break;
    }
  }
  return scale_ * g;
}

double AnisotropyModel::raw_value(const Vec& x) const { return extension(x); }

double AnisotropyModel::value(const Vec& x) const {
  check_unit(x);
  const double f = raw_value(x);
  if (!(f > 0.0)) fail(ErrorKind::NonPositiveValue, "F(x) = " + number(f));
  return f;
}

Vec AnisotropyModel::extension_gradient(const Vec& y) const {
  const double r = y.norm();
  Vec g(y.size());
  switch (kind_) {
    case AnisotropyKind::Constant: g = coeff_ * y / r; break;
    case AnisotropyKind::Linear: g = y / r + vec_; break;
    case AnisotropyKind::Norm: {
      const Vec b2y = vec_.cwiseProduct(vec_).cwiseProduct(y);
      g = b2y / vec_.cwiseProduct(y).norm();
      break;
    }
    case AnisotropyKind::Quadratic: {
      const double t = vec_.dot(y);
      g = y / r + coeff_ * (2.0 * t * vec_ / r - t * t * y / (r * r * r));
      break;
    }
  }
  return scale_ * g;
}

JetVec AnisotropyModel::extension_gradient(const JetVec& y) const {
  const int m = static_cast<int>(y.size());
  const Jet r2 = squared_norm(y);
  const Jet r = sqrt(r2);
  JetVec g(m);
  switch (kind_) {
    case AnisotropyKind::Constant:
      for (int k = 0; k < m; ++k) g[k] = coeff_ * y[k] / r;
      break;
    case AnisotropyKind::Linear:
      for (int k = 0; k < m; ++k) g[k] = y[k] / r + vec_(k);
      break;
    case AnisotropyKind::Norm: {
      Jet by2(0.0);
      for (int k = 0; k < m; ++k) by2 += (vec_(k) * vec_(k)) * y[k] * y[k];
      const Jet inv = pow(by2, -0.5);
      for (int k = 0; k < m; ++k) g[k] = (vec_(k) * vec_(k)) * y[k] * inv;
      break;
    }
    case AnisotropyKind::Quadratic: {
      Jet t(0.0);
      for (int k = 0; k < m; ++k) t += vec_(k) * y[k];
      const Jet inv_r = pow(r2, -0.5);
      const Jet inv_r3 = inv_r / r2;
      for (int k = 0; k < m; ++k) {
        g[k] = y[k] * inv_r + coeff_ * (2.0 * t * vec_(k) * inv_r - t * t * y[k] * inv_r3);
      }
      break;
    }
  }
  for (auto& v : g) v *= scale_;
  return g;
}

Mat AnisotropyModel::extension_hessian(const Vec& y) const {
  const int m = static_cast<int>(y.size());
  const double r = y.norm();
  const Mat id = Mat::Identity(m, m);
  const Mat radial = id / r - y * y.transpose() / (r * r * r);
  Mat h(m, m);
  switch (kind_) {
    case AnisotropyKind::Constant: h = coeff_ * radial; break;
    case AnisotropyKind::Linear: h = radial; break;
    case AnisotropyKind::Norm: {
      const Vec b2 = vec_.cwiseProduct(vec_);
      const Vec b2y = b2.cwiseProduct(y);
      const double g = vec_.cwiseProduct(y).norm();
      h = Mat(b2.asDiagonal()) / g - b2y * b2y.transpose() / (g * g * g);
      break;
    }
    case AnisotropyKind::Quadratic: {
      const Vec& d = vec_;
      const double t = d.dot(y);
      const double r3 = r * r * r;
      const double r5 = r3 * r * r;
      h = radial + coeff_ * (2.0 * d * d.transpose() / r - 2.0 * t * (d * y.transpose() + y * d.transpose()) / r3 -
                             t * t * id / r3 + 3.0 * t * t * y * y.transpose() / r5);
      break;
    }
  }
  return scale_ * h;
}

Vec AnisotropyModel::fd_gradient(const Vec& x) const {
  const Mat basis = tangent_basis(x);
  Vec g = Vec::Zero(x.size());
  for (int i = 0; i < basis.cols(); ++i) {
    const Vec t = basis.col(i);
    const double fp = raw_value(geodesic(x, step_ * t));
    const double fm = raw_value(geodesic(x, -step_ * t));
    g += ((fp - fm) / (2.0 * step_)) * t;
  }
  return g;
}

Mat AnisotropyModel::fd_hessian(const Vec& x, const Mat& frame) const {
  const int n = static_cast<int>(frame.cols());
  const double e = step_;
  const double f0 = raw_value(x);
  Mat h(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec ti = frame.col(i);
    h(i, i) = (raw_value(geodesic(x, e * ti)) - 2.0 * f0 + raw_value(geodesic(x, -e * ti))) / (e * e);
    for (int j = i + 1; j < n; ++j) {
      const Vec tj = frame.col(j);
      const double pp = raw_value(geodesic(x, e * (ti + tj)));
      const double pm = raw_value(geodesic(x, e * (ti - tj)));
      const double mp = raw_value(geodesic(x, e * (-ti + tj)));
      const double mm = raw_value(geodesic(x, -e * (ti + tj)));
      h(i, j) = h(j, i) = (pp - pm - mp + mm) / (4.0 * e * e);
    }
  }
  return h;
}

Vec AnisotropyModel::sphere_gradient(const Vec& x) const {
  check_unit(x);
  if (mode_ == DerivativeMode::FiniteDifference) return fd_gradient(x);
  const Vec g = extension_gradient(x);
  return g - g.dot(x) * x;
}

Mat AnisotropyModel::a_matrix(const Vec& x, const Mat& frame) const {
  check_unit(x);
  if (frame.rows() != x.size() || frame.cols() != n_) {
    fail(ErrorKind::SizeMismatch, "tangent frame must be (n+1) x n");
  }
  const Mat gram = frame.transpose() * frame;
  const double off_identity = (gram - Mat::Identity(n_, n_)).cwiseAbs().maxCoeff();
  const double off_tangent = (frame.transpose() * x).cwiseAbs().maxCoeff();
  if (off_identity > 1e-10 || off_tangent > 1e-10) {
    fail(ErrorKind::NonOrthonormalFrame, "frame is not an orthonormal basis of x^perp");
  }
  if (mode_ == DerivativeMode::FiniteDifference) {
    return fd_hessian(x, frame) + raw_value(x) * Mat::Identity(n_, n_);
  }
  const Mat a = frame.transpose() * extension_hessian(x) * frame;
  return 0.5 * (a + a.transpose());
}

Vec AnisotropyModel::wulff_point(const Vec& x) const {
  if (!convex_) {
    fail(ErrorKind::ConvexityViolation, describe() + " fails the convexity condition (D^2F + F) > 0");
  }
  check_unit(x);
  return value(x) * x + sphere_gradient(x);
}

Mat tangent_basis(const Vec& x) {
  const int m = static_cast<int>(x.size());
  if (m == 2) {
    Mat t(2, 1);
    t << -x(1), x(0);
    return t;
  }
  if (m == 3) {
    Eigen::Index k = 0;
    x.cwiseAbs().minCoeff(&k);
    Eigen::Vector3d axis = Eigen::Vector3d::Unit(k);
    const Eigen::Vector3d xv = x;
    const Eigen::Vector3d t1 = (axis - axis.dot(xv) * xv).normalized();
    const Eigen::Vector3d t2 = xv.cross(t1);
    Mat t(3, 2);
    t.col(0) = t1;
    t.col(1) = t2;
    return t;
  }
  // General Gram-Schmidt against the coordinate axes.
  Mat t(m, m - 1);
  int filled = 0;
  for (int k = 0; k < m && filled < m - 1; ++k) {
    Vec v = unit_axis(m, k);
    v -= v.dot(x) * x;
    for (int j = 0; j < filled; ++j) v -= v.dot(t.col(j)) * t.col(j);
    if (v.norm() > 1e-3) t.col(filled++) = v.normalized();
  }
  return t;
}

std::vector<Vec> sphere_samples(int n, int level) {
  if (level < 1) fail(ErrorKind::InvalidArgument, "sample level must be >= 1");
  const int count = 100 * (1 << (2 * (level - 1)));
  std::vector<Vec> pts;
  pts.reserve(count + 2 * (n + 1));
  if (n == 1) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * M_PI * (k + 0.5) / count;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      pts.push_back(v);
    }
  } else if (n == 2) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double rho = std::sqrt(1.0 - z * z);
      Vec v(3);
      v << rho * std::cos(golden * k), rho * std::sin(golden * k), z;
      pts.push_back(v);
    }
  } else {
    std::mt19937_64 rng(0x5eedULL + level);
    std::normal_distribution<double> g;
    for (int k = 0; k < count; ++k) {
      Vec v(n + 1);
      for (int i = 0; i <= n; ++i) v(i) = g(rng);
      pts.push_back(v.normalized());
    }
  }
  for (int k = 0; k <= n; ++k) {
    pts.push_back(unit_axis(n + 1, k));
    pts.push_back(-unit_axis(n + 1, k));
  }
  return pts;
}

ConvexityReport check_convexity(const AnisotropyModel& model, int sample_level) {
  ConvexityReport report;
  const auto pts = sphere_samples(model.dimension(), sample_level);
  report.sample_count = static_cast<int>(pts.size());
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& x : pts) {
    const Mat frame = tangent_basis(x);
    const Mat a = model.a_matrix(x, frame);
    const double mu = Eigen::SelfAdjointEigenSolver<Mat>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (mu < report.min_eigenvalue) {
      report.min_eigenvalue = mu;
      report.argmin_point = x;
    }
  }
  report.pass = report.min_eigenvalue > 0.0;
  return report;
}

}  // namespace wulffcurv
