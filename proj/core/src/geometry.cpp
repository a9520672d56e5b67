#include "wulffcurv/geometry.hpp"

#include <charconv>
#include <cmath>

#include <Eigen/SVD>

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

class SphereShape final : public SurfaceShape {
 public:
  SphereShape(int n, double radius) : n_(n), radius_(radius) {}
  int dimension() const override { return n_; }
  JetVec position(const LocalChart& chart, int order) const override {
    return scaled(chart.sphere_point(order), Jet(radius_));
  }
  std::string describe() const override {
    return "sphere:R=" + number(radius_) + (n_ != 2 ? ",n=" + std::to_string(n_) : "");
  }

 private:
  int n_;
  double radius_;
};

class EllipsoidShape final : public SurfaceShape {
 public:
  explicit EllipsoidShape(Vec axes) : axes_(std::move(axes)) {}
  int dimension() const override { return static_cast<int>(axes_.size()) - 1; }
  JetVec position(const LocalChart& chart, int order) const override {
    JetVec x = chart.sphere_point(order);
    for (int k = 0; k < axes_.size(); ++k) x[k] *= axes_(k);
    return x;
  }
  std::string describe() const override {
    static const char* names[] = {"a", "b", "c", "d"};
    std::string s = "ellipsoid:";
    for (int k = 0; k < axes_.size(); ++k) s += std::string(k ? "," : "") + names[k] + "=" + number(axes_(k));
    return s;
  }

 private:
  Vec axes_;
};

class WulffShape final : public SurfaceShape {
 public:
  explicit WulffShape(AnisotropyModel model) : model_(std::move(model)) {}
  int dimension() const override { return model_.dimension(); }
  JetVec position(const LocalChart& chart, int order) const override {
    return model_.extension_gradient(chart.sphere_point(order));
  }
  std::string describe() const override { return "wulff:F=" + model_.describe(); }

 private:
  AnisotropyModel model_;
};

class RadialShape final : public SurfaceShape {
 public:
  RadialShape(int n, std::vector<double> eps, std::vector<Polynomial> polys)
      : n_(n), eps_(std::move(eps)), polys_(std::move(polys)) {}
  int dimension() const override { return n_; }
  JetVec position(const LocalChart& chart, int order) const override {
    const JetVec x = chart.sphere_point(order);
    Jet rho(1.0);
    for (std::size_t k = 0; k < eps_.size(); ++k) rho += eps_[k] * polys_[k](x);
    if (!(rho.value() > 0.0)) fail(ErrorKind::ProjectionFailure, "radial profile rho <= 0 along a ray");
    return scaled(x, rho);
  }
  std::string describe() const override {
    std::string e = "[";
    std::string p = "[";
    for (std::size_t k = 0; k < eps_.size(); ++k) {
      e += std::string(k ? "," : "") + number(eps_[k]);
      p += std::string(k ? "," : "") + polys_[k].to_string();
    }
    return "radial:eps=" + e + "],poly=" + p + "]" + (n_ != 2 ? ",n=" + std::to_string(n_) : "");
  }

 private:
  int n_;
  std::vector<double> eps_;
  std::vector<Polynomial> polys_;
};

class ScaledShape final : public SurfaceShape {
 public:
  ScaledShape(std::shared_ptr<const SurfaceShape> base, double s) : base_(std::move(base)), s_(s) {}
  int dimension() const override { return base_->dimension(); }
  JetVec position(const LocalChart& chart, int order) const override {
    return scaled(base_->position(chart, order), Jet(s_));
  }
  std::string describe() const override { return base_->describe() + "*scale=" + number(s_); }

 private:
  std::shared_ptr<const SurfaceShape> base_;
  double s_;
};

class TranslatedShape final : public SurfaceShape {
 public:
  TranslatedShape(std::shared_ptr<const SurfaceShape> base, Vec a) : base_(std::move(base)), a_(std::move(a)) {}
  int dimension() const override { return base_->dimension(); }
  JetVec position(const LocalChart& chart, int order) const override {
    JetVec x = base_->position(chart, order);
    for (int k = 0; k < a_.size(); ++k) x[k] += a_(k);
    return x;
  }
  std::string describe() const override { return base_->describe() + "*translate=" + vector_text(a_); }

 private:
  std::shared_ptr<const SurfaceShape> base_;
  Vec a_;
};

class DisplacedShape final : public SurfaceShape {
 public:
  DisplacedShape(ParametricSurface base, std::shared_ptr<const DisplacementField> field, double t)
      : base_(std::move(base)), field_(std::move(field)), t_(t) {}
  int dimension() const override { return base_.dimension(); }
  JetVec position(const LocalChart& chart, int order) const override {
    JetVec x = base_.position(chart, order);
    if (t_ == 0.0) return x;
    const JetVec w = field_->evaluate(base_, chart, order);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += t_ * w[k];
    return x;
  }
  std::string describe() const override {
    return base_.describe() + "*displace(" + field_->describe() + ",t=" + number(t_) + ")";
  }

 private:
  ParametricSurface base_;
  std::shared_ptr<const DisplacementField> field_;
  double t_;
};

// Outward-for-counter-clockwise normal before the orientation sign is applied.
JetVec raw_normal(const JetVec& x, int n) {
  if (n == 1) {
    const JetVec xu = partial(x, 0);
    const Jet inv = pow(squared_norm(xu), -0.5);
    return {xu[1] * inv, -xu[0] * inv};
  }
  const JetVec a = partial(x, 0);
  const JetVec b = partial(x, 1);
  JetVec c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  const Jet inv = pow(squared_norm(c), -0.5);
  return scaled(c, inv);
}

Vec raw_normal(const Mat& xu) {
  if (xu.cols() == 1) {
    Vec v(2);
    v << xu(1, 0), -xu(0, 0);
    return v.normalized();
  }
  const Eigen::Vector3d a = xu.col(0);
  const Eigen::Vector3d b = xu.col(1);
  return Vec(a.cross(b).normalized());
}

// Sign of the algebraic volume with raw normals on a coarse grid.
int orientation_of(const SurfaceShape& shape) {
  const int n = shape.dimension();
  double volume = 0.0;
  auto accumulate = [&](const LocalChart& chart, double weight) {
    const JetVec x = shape.position(chart, 1);
    Mat xu(n + 1, n);
    for (int k = 0; k <= n; ++k) {
      xu(k, 0) = x[k].derivative(1, 0);
      if (n == 2) xu(k, 1) = x[k].derivative(0, 1);
    }
    Vec pos(n + 1);
    for (int k = 0; k <= n; ++k) pos(k) = x[k].value();
    const double jac = n == 1 ? xu.col(0).norm() : Eigen::Vector3d(xu.col(0)).cross(Eigen::Vector3d(xu.col(1))).norm();
    volume += weight * jac * pos.dot(raw_normal(xu));
  };
  if (n == 1) {
    const int m = 64;
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * M_PI * j / m;
      Vec x(2);
      x << std::cos(a), std::sin(a);
      accumulate(LocalChart::at(x), 2.0 * M_PI / m);
    }
  } else {
    const auto [z, w] = gauss_legendre(16);
    const int m = 32;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double theta = std::acos(z[i]);
      for (int j = 0; j < m; ++j) {
        const double phi = 2.0 * M_PI * j / m;
        Vec x(3);
        x << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
        accumulate(LocalChart::at(x), w[i] * 2.0 * M_PI / m);
      }
    }
  }
  if (!std::isfinite(volume) || volume == 0.0) {
    fail(ErrorKind::DegenerateParametrization, "cannot determine orientation of " + shape.describe());
  }
  return volume > 0.0 ? -1 : 1;
}

double condition_number(const Mat& xu) {
  Eigen::JacobiSVD<Mat> svd(xu);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace

LocalChart LocalChart::at(const Vec& x) { return {x, tangent_basis(x)}; }

LocalChart LocalChart::at(const Vec& x, const Mat& basis) { return {x, basis}; }

JetVec LocalChart::sphere_point(int order) const {
  const int m = static_cast<int>(center.size());
  const int n = dimension();
  JetVec p(m);
  for (int k = 0; k < m; ++k) {
    p[k] = Jet(center(k)) + Jet::variable(0, order) * basis(k, 0);
    if (n == 2) p[k] += Jet::variable(1, order) * basis(k, 1);
    p[k] = p[k].truncated(order);
  }
  return scaled(p, pow(squared_norm(p), -0.5));
}

Vec LocalChart::sphere_point(const Vec& u) const { return (center + basis * u).normalized(); }

ParametricSurface::ParametricSurface(std::shared_ptr<const SurfaceShape> shape, int orientation)
    : shape_(std::move(shape)), orientation_(orientation) {}

ParametricSurface ParametricSurface::from_shape(std::shared_ptr<const SurfaceShape> shape) {
  if (shape->dimension() < 1 || shape->dimension() > 2) {
    fail(ErrorKind::InvalidArgument, "surfaces are supported for n = 1 and n = 2");
  }
  const int o = orientation_of(*shape);
  return ParametricSurface(std::move(shape), o);
}

ParametricSurface ParametricSurface::sphere(int n, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "sphere radius must be positive");
  return from_shape(std::make_shared<SphereShape>(n, radius));
}

ParametricSurface ParametricSurface::ellipsoid(const Vec& axes) {
  if (axes.size() < 2 || axes.size() > 3) fail(ErrorKind::InvalidArgument, "ellipsoid needs 2 or 3 axes");
  if (!(axes.minCoeff() > 0.0)) fail(ErrorKind::InvalidArgument, "ellipsoid axes must be positive");
  return from_shape(std::make_shared<EllipsoidShape>(axes));
}

ParametricSurface ParametricSurface::wulff(const AnisotropyModel& model) {
  if (!model.convex()) {
    fail(ErrorKind::ConvexityViolation, model.describe() + " fails the convexity condition");
  }
  return from_shape(std::make_shared<WulffShape>(model));
}

ParametricSurface ParametricSurface::radial(int n, std::vector<double> eps, std::vector<Polynomial> polys) {
  if (eps.size() != polys.size()) fail(ErrorKind::SizeMismatch, "radial: eps and poly lists differ in length");
  for (const auto& p : polys) {
    if (p.variables_used() > n + 1) fail(ErrorKind::InvalidArgument, "radial: polynomial uses too many coordinates");
  }
  return from_shape(std::make_shared<RadialShape>(n, std::move(eps), std::move(polys)));
}

ParametricSurface ParametricSurface::scaled(double s) const {
  if (!(s > 0.0)) fail(ErrorKind::InvalidArgument, "scale must be positive");
  ParametricSurface out = *this;
  out.shape_ = std::make_shared<ScaledShape>(shape_, s);
  return out;
}

ParametricSurface ParametricSurface::translated(const Vec& a) const {
  if (a.size() != ambient_dimension()) fail(ErrorKind::SizeMismatch, "translation has wrong dimension");
  ParametricSurface out = *this;
  out.shape_ = std::make_shared<TranslatedShape>(shape_, a);
  return out;
}

ParametricSurface ParametricSurface::displaced(std::shared_ptr<const DisplacementField> field, double t) const {
  ParametricSurface out = *this;
  out.shape_ = std::make_shared<DisplacedShape>(*this, std::move(field), t);
  return out;
}

ParametricSurface ParametricSurface::with_finite_differences(double step) const {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  ParametricSurface out = *this;
  out.mode_ = DerivativeMode::FiniteDifference;
  out.step_ = step;
  return out;
}

ParametricSurface ParametricSurface::with_analytic_derivatives() const {
  ParametricSurface out = *this;
  out.mode_ = DerivativeMode::Analytic;
  return out;
}

Vec ParametricSurface::position(const Vec& x) const {
  const JetVec p = shape_->position(LocalChart::at(x), 0);
  Vec v(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) v(k) = p[k].value();
  return v;
}

JetVec ParametricSurface::position(const LocalChart& chart, int order) const {
  return shape_->position(chart, order);
}

JetVec ParametricSurface::inner_normal(const LocalChart& chart, int order) const {
  if (order + 1 > Jet::kMaxOrder) fail(ErrorKind::InvalidArgument, "normal jet order too high");
  const JetVec x = shape_->position(chart, order + 1);
  return wulffcurv::scaled(raw_normal(x, dimension()), Jet(static_cast<double>(orientation_)));
}

PointFrame frame_at(const ParametricSurface& surface, const LocalChart& chart) {
  const int n = surface.dimension();
  const int m = n + 1;
  if (chart.center.size() != m) fail(ErrorKind::SizeMismatch, "parameter has wrong ambient dimension");
  PointFrame f;
  f.parameter = chart.center;
  f.chart_basis = chart.basis;
  Mat xu(m, n);
  Mat xuu[2][2];
  for (auto& row : xuu) {
    for (auto& v : row) v = Mat::Zero(m, 1);
  }
  if (surface.derivative_mode() == DerivativeMode::Analytic) {
    const JetVec x = surface.position(chart, 2);
    f.position.resize(m);
    for (int k = 0; k < m; ++k) {
      f.position(k) = x[k].value();
      xu(k, 0) = x[k].derivative(1, 0);
      xuu[0][0](k) = x[k].derivative(2, 0);
      if (n == 2) {
        xu(k, 1) = x[k].derivative(0, 1);
        xuu[0][1](k) = xuu[1][0](k) = x[k].derivative(1, 1);
        xuu[1][1](k) = x[k].derivative(0, 2);
      }
    }
  } else {
    const double h = surface.step();
    auto at = [&](double a, double b) {
      Vec u(n);
      u(0) = a;
      if (n == 2) u(1) = b;
      return surface.position(chart.sphere_point(u));
    };
    f.position = at(0, 0);
    for (int a = 0; a < n; ++a) {
      const Vec p = at(a == 0 ? h : 0, a == 1 ? h : 0);
      const Vec q = at(a == 0 ? -h : 0, a == 1 ? -h : 0);
      xu.col(a) = (p - q) / (2.0 * h);
      xuu[a][a] = (p - 2.0 * f.position + q) / (h * h);
    }
    if (n == 2) {
      xuu[0][1] = xuu[1][0] = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
    }
  }
  if (!xu.allFinite() || condition_number(xu) > 1e8) {
    fail(ErrorKind::DegenerateParametrization, "tangent vectors are (nearly) dependent");
  }
  f.position_derivatives = xu;
  f.normal = surface.orientation() * raw_normal(xu);

  // Gram-Schmidt: xu = E R.
  Mat r = Mat::Zero(n, n);
  f.tangents.resize(m, n);
  r(0, 0) = xu.col(0).norm();
  f.tangents.col(0) = xu.col(0) / r(0, 0);
  if (n == 2) {
    r(0, 1) = xu.col(1).dot(f.tangents.col(0));
    const Vec w = xu.col(1) - r(0, 1) * f.tangents.col(0);
    r(1, 1) = w.norm();
    f.tangents.col(1) = w / r(1, 1);
  }
  f.jacobian = std::abs(r.diagonal().prod());

  Mat b(n, n);
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) b(a, c) = xuu[a][c].col(0).dot(f.normal);
  }
  const Mat rinv = r.inverse();
  f.h = rinv.transpose() * b * rinv;
  f.h = 0.5 * (f.h + f.h.transpose());
  f.A = Mat::Identity(n, n);
  f.s = f.h;
  return f;
}

PointFrame frame_at(const ParametricSurface& surface, const Vec& x) {
  return frame_at(surface, LocalChart::at(x));
}

PointFrame frame_at(const ParametricSurface& surface, const Vec& x, const AnisotropyModel& model) {
  return with_anisotropy(frame_at(surface, x), model);
}

PointFrame with_anisotropy(PointFrame frame, const AnisotropyModel& model) {
  if (model.dimension() != frame.dimension()) fail(ErrorKind::SizeMismatch, "anisotropy dimension differs from surface");
  const Vec nu = frame.normal.normalized();
  frame.A = model.a_matrix(nu, frame.tangents);
  frame.s = frame.A * frame.h;
  return frame;
}

namespace {

struct ChartDerivatives {
  Mat xu;
  Mat ginv;
  LocalChart chart;
};

ChartDerivatives chart_derivatives(const ParametricSurface& surface, const Vec& x) {
  const LocalChart chart = LocalChart::at(x);
  const PointFrame f = frame_at(surface, chart);
  const Mat g = f.position_derivatives.transpose() * f.position_derivatives;
  return {f.position_derivatives, g.inverse(), chart};
}

Vec offset(int n, int a, double h) {
  Vec u = Vec::Zero(n);
  u(a) = h;
  return u;
}

}  // namespace

Vec tangential_gradient(const ParametricSurface& surface, const ScalarField& field, const Vec& x, double step) {
  const int n = surface.dimension();
  const auto d = chart_derivatives(surface, x);
  Vec fu(n);
  for (int a = 0; a < n; ++a) {
    fu(a) = (field(d.chart.sphere_point(offset(n, a, step))) - field(d.chart.sphere_point(offset(n, a, -step)))) /
            (2.0 * step);
  }
  return d.xu * (d.ginv * fu);
}

double surface_divergence(const ParametricSurface& surface, const VectorField& field, const Vec& x, double step) {
  const int n = surface.dimension();
  const auto d = chart_derivatives(surface, x);
  const Vec v0 = field(x);
  const Vec nu = surface.orientation() * raw_normal(d.xu);
  if (std::abs(v0.dot(nu)) > 1e-8 * std::max(1.0, v0.norm())) {
    fail(ErrorKind::NonTangentField, "field has normal component " + number(v0.dot(nu)));
  }
  Mat dv(x.size(), n);
  for (int a = 0; a < n; ++a) {
    dv.col(a) = (field(d.chart.sphere_point(offset(n, a, step))) - field(d.chart.sphere_point(offset(n, a, -step)))) /
                (2.0 * step);
  }
  return (d.ginv * d.xu.transpose() * dv).trace();
}

}  // namespace wulffcurv
