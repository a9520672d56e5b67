#pragma once

#include <array>
#include <vector>

namespace wulffcurv {

/// Truncated Taylor polynomial in two local variables (u, v) around a chart
/// origin. Forward-mode arithmetic on Jets yields exact parameter derivatives
/// of closed-form surface parametrizations up to `kMaxOrder`.
///
/// A Jet built from a plain double is an exact constant; every other Jet
/// carries a truncation order and the result of an operation is truncated at
/// the smaller order of its operands.
class Jet {
 public:
  static constexpr int kMaxOrder = 4;
  static constexpr int kSize = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

  Jet() = default;
  Jet(double value) { c_[0] = value; }  // NOLINT(google-explicit-constructor)

  /// Seed for local variable `var` (0 or 1) at the chart origin.
  static Jet variable(int var, int order);

  int order() const { return order_; }
  double value() const { return c_[0]; }

  /// Coefficient of u^i v^j.
  double coeff(int i, int j) const;
  /// Partial derivative d^{i+j} / du^i dv^j at the origin.
  double derivative(int i, int j) const;

  Jet partial(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator-(Jet a);

  friend Jet sqrt(const Jet& a);
  friend Jet pow(const Jet& a, double p);
  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);

  static int index(int i, int j) {
    const int d = i + j;
    return d * (d + 1) / 2 + j;
  }
  static int count(int order) { return (order + 1) * (order + 2) / 2; }

 private:
  // f(a0 + delta) = sum_k derivs[k] / k! * delta^k.
  static Jet compose(const Jet& a, const std::array<double, kMaxOrder + 1>& derivs);

  std::array<double, kSize> c_{};
  int order_ = kMaxOrder;
};

using JetVec = std::vector<Jet>;

double dot_value(const JetVec& a, const JetVec& b);
Jet dot(const JetVec& a, const JetVec& b);
Jet squared_norm(const JetVec& a);
JetVec scaled(const JetVec& a, const Jet& s);
JetVec partial(const JetVec& a, int var);

}  // namespace wulffcurv
