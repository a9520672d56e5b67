#include "wulffcurv/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "wulffcurv/error.hpp"

namespace wulffcurv {
namespace {

template <class T>
T power(const T& base, int e) {
  T r(1.0);
  for (int k = 0; k < e; ++k) r = r * base;
  return r;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Polynomial::Term parse_term(const std::string& text) {
  Polynomial::Term term;
  term.coeff = 1.0;
  std::stringstream ss(text);
  std::string factor;
  bool any = false;
  while (std::getline(ss, factor, '*')) {
    factor = trim(factor);
    if (factor.empty()) fail(ErrorKind::ParseError, "empty factor in monomial '" + text + "'");
    any = true;
    if (factor[0] == 'x') {
      const auto caret = factor.find('^');
      const std::string idx = factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
      int exponent = 1;
      int index = 0;
      try {
        std::size_t used = 0;
        index = std::stoi(idx, &used);
        if (used != idx.size()) throw std::invalid_argument(idx);
        if (caret != std::string::npos) {
          const std::string ex = factor.substr(caret + 1);
          exponent = std::stoi(ex, &used);
          if (used != ex.size()) throw std::invalid_argument(ex);
        }
      } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "bad monomial factor '" + factor + "'");
      }
      if (index < 1 || index > 4 || exponent < 0) {
        fail(ErrorKind::ParseError, "monomial factor out of range '" + factor + "'");
      }
      term.exponent[index - 1] += exponent;
    } else {
      try {
        std::size_t used = 0;
        term.coeff *= std::stod(factor, &used);
        if (used != factor.size()) throw std::invalid_argument(factor);
      } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "bad coefficient '" + factor + "'");
      }
    }
  }
  if (!any) fail(ErrorKind::ParseError, "empty monomial");
  return term;
}

}  // namespace

Polynomial Polynomial::constant(double c) { return Polynomial({Term{c, {0, 0, 0, 0}}}); }

Polynomial Polynomial::coordinate(int index, double coeff) {
  Term t{coeff, {0, 0, 0, 0}};
  t.exponent.at(index) = 1;
  return Polynomial({t});
}

Polynomial Polynomial::parse(const std::string& text) {
  // Sums are written with '+' between monomials; subtraction is a negative coefficient.
  std::vector<Term> terms;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, '+')) terms.push_back(parse_term(trim(piece)));
  if (terms.empty()) fail(ErrorKind::ParseError, "empty polynomial");
  return Polynomial(std::move(terms));
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exponent[0] + t.exponent[1] + t.exponent[2] + t.exponent[3]);
  return d;
}

int Polynomial::variables_used() const {
  int used = 0;
  for (const auto& t : terms_) {
    for (int k = 0; k < 4; ++k) {
      if (t.exponent[k] > 0) used = std::max(used, k + 1);
    }
  }
  return used;
}

double Polynomial::operator()(const Vec& x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int k = 0; k < 4; ++k) {
      if (t.exponent[k] > 0) m *= std::pow(x(k), t.exponent[k]);
    }
    s += m;
  }
  return s;
}

Jet Polynomial::operator()(const JetVec& x) const {
  Jet s(0.0);
  for (const auto& t : terms_) {
    Jet m(t.coeff);
    for (int k = 0; k < 4; ++k) {
      if (t.exponent[k] > 0) m *= power(x.at(k), t.exponent[k]);
    }
    s += m;
  }
  return s;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  auto terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(std::move(terms));
}

Polynomial Polynomial::operator*(double s) const {
  auto terms = terms_;
  for (auto& t : terms) t.coeff *= s;
  return Polynomial(std::move(terms));
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t n = 0; n < terms_.size(); ++n) {
    if (n) os << '+';
    os << terms_[n].coeff;
    for (int k = 0; k < 4; ++k) {
      const int e = terms_[n].exponent[k];
      if (e == 0) continue;
      os << "*x" << (k + 1);
      if (e > 1) os << '^' << e;
    }
  }
  return os.str();
}

}  // namespace wulffcurv
