#include "wulffcurv/jet.hpp"

#include <algorithm>
#include <cmath>

#include "wulffcurv/error.hpp"

namespace wulffcurv {
namespace {

struct Monomial {
  int i;
  int j;
};

const std::array<Monomial, Jet::kSize>& monomials() {
  static const auto table = [] {
    std::array<Monomial, Jet::kSize> t{};
    for (int d = 0; d <= Jet::kMaxOrder; ++d) {
      for (int j = 0; j <= d; ++j) t[Jet::index(d - j, j)] = {d - j, j};
    }
    return t;
  }();
  return table;
}

struct ProductTerm {
  int a;
  int b;
  int out;
};

// Index triples for the truncated product at each order.
const std::vector<ProductTerm>& product_terms(int order) {
  static const auto tables = [] {
    std::array<std::vector<ProductTerm>, Jet::kMaxOrder + 1> t;
    const auto& m = monomials();
    for (int order = 0; order <= Jet::kMaxOrder; ++order) {
      const int n = Jet::count(order);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const int i = m[a].i + m[b].i;
          const int j = m[a].j + m[b].j;
          if (i + j <= order) t[order].push_back({a, b, Jet::index(i, j)});
        }
      }
    }
    return t;
  }();
  return tables[order];
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Jet Jet::variable(int var, int order) {
  if (var < 0 || var > 1 || order < 0 || order > kMaxOrder) {
    fail(ErrorKind::InvalidArgument, "Jet::variable: bad variable or order");
  }
  Jet j;
  j.order_ = order;
  if (order >= 1) j.c_[var == 0 ? index(1, 0) : index(0, 1)] = 1.0;
  return j;
}

double Jet::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > order_) return 0.0;
  return c_[index(i, j)];
}

double Jet::derivative(int i, int j) const { return coeff(i, j) * factorial(i) * factorial(j); }

Jet Jet::partial(int var) const {
  Jet out;
  out.order_ = std::max(order_ - 1, 0);
  if (order_ == 0) {
    out.c_[0] = 0.0;
    return out;
  }
  for (int d = 0; d <= order_ - 1; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      out.c_[index(i, j)] = var == 0 ? (i + 1) * c_[index(i + 1, j)] : (j + 1) * c_[index(i, j + 1)];
    }
  }
  return out;
}

Jet Jet::truncated(int order) const {
  Jet out = *this;
  out.order_ = std::min(order_, order);
  for (int k = count(out.order_); k < kSize; ++k) out.c_[k] = 0.0;
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k < count(order_); ++k) c_[k] += o.c_[k];
  for (int k = count(order_); k < kSize; ++k) c_[k] = 0.0;
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k < count(order_); ++k) c_[k] -= o.c_[k];
  for (int k = count(order_); k < kSize; ++k) c_[k] = 0.0;
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  const int order = std::min(order_, o.order_);
  std::array<double, kSize> r{};
  for (const auto& t : product_terms(order)) r[t.out] += c_[t.a] * o.c_[t.b];
  c_ = r;
  order_ = order;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) { return *this *= pow(o, -1.0); }

Jet operator-(Jet a) {
  for (auto& v : a.c_) v = -v;
  return a;
}

Jet Jet::compose(const Jet& a, const std::array<double, kMaxOrder + 1>& derivs) {
  Jet delta = a;
  delta.c_[0] = 0.0;
  Jet r;
  r.c_[0] = derivs[a.order_] / factorial(a.order_);
  r.order_ = a.order_;
  for (int k = a.order_ - 1; k >= 0; --k) {
    r *= delta;
    r.c_[0] += derivs[k] / factorial(k);
  }
  return r;
}

Jet pow(const Jet& a, double p) {
  const double x = a.value();
  std::array<double, Jet::kMaxOrder + 1> d{};
  double falling = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    d[k] = falling * std::pow(x, p - k);
    falling *= (p - k);
  }
  return Jet::compose(a, d);
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet sin(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const std::array<double, 4> cycle{s, c, -s, -c};
  std::array<double, Jet::kMaxOrder + 1> d{};
  for (int k = 0; k <= a.order(); ++k) d[k] = cycle[k % 4];
  return Jet::compose(a, d);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const std::array<double, 4> cycle{c, -s, -c, s};
  std::array<double, Jet::kMaxOrder + 1> d{};
  for (int k = 0; k <= a.order(); ++k) d[k] = cycle[k % 4];
  return Jet::compose(a, d);
}

double dot_value(const JetVec& a, const JetVec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].value() * b[k].value();
  return s;
}

Jet dot(const JetVec& a, const JetVec& b) {
  Jet s(0.0);
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

Jet squared_norm(const JetVec& a) { return dot(a, a); }

JetVec scaled(const JetVec& a, const Jet& s) {
  JetVec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * s;
  return out;
}

JetVec partial(const JetVec& a, int var) {
  JetVec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k].partial(var);
  return out;
}

}  // namespace wulffcurv
