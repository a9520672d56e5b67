#pragma once

#include <array>
#include <string>
#include <vector>

#include "wulffcurv/jet.hpp"
#include "wulffcurv/types.hpp"

namespace wulffcurv {

/// Polynomial in the ambient coordinates x_1..x_{n+1}, evaluated on sphere
/// points. Text form: `x1*x2`, `x3^2`, `0.5*x1^2*x2`, `1`.
class Polynomial {
 public:
  struct Term {
    double coeff = 0.0;
    std::array<int, 4> exponent{};
  };

  Polynomial() = default;
  explicit Polynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static Polynomial constant(double c);
  static Polynomial coordinate(int index, double coeff = 1.0);
  static Polynomial parse(const std::string& text);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int degree() const;
  /// Number of ambient coordinates referenced (highest index + 1).
  int variables_used() const;

  double operator()(const Vec& x) const;
  Jet operator()(const JetVec& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

}  // namespace wulffcurv
