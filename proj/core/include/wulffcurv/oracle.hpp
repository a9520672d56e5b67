#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wulffcurv/anisotropy.hpp"
#include "wulffcurv/functionals.hpp"
#include "wulffcurv/geometry.hpp"

namespace wulffcurv {

/// Outcome of comparing an independent computation against the main path.
struct OracleReport {
  std::string check;
  std::string inputs;
  std::vector<std::string> labels;
  std::vector<double> oracle_values;
  std::vector<double> main_values;
  double max_deviation = 0.0;  // max |oracle - main| / max(1, |oracle|)
  double tolerance = 0.0;
  bool pass = false;
};

/// Closed plane curve (n = 1, r = 0) recomputed by arc-length calculus on a
/// uniform angle grid. Values, in order: A_0, A_1, V, Minkowski residual,
/// then the F-Weingarten scalar s at `pointwise` equally spaced parameters.
OracleReport curve_case(const ParametricSurface& surface, const AnisotropyModel& model, int samples = 4096,
                        int pointwise = 16);

/// d nu_t / dt at parameter x from finite differences of an independently
/// computed normal, against -grad psi + d nu(xi) from the main frame.
OracleReport gauss_map_variation_check(const ParametricSurface& surface, const VariationField& field, const Vec& x);

/// d/dt of the total area of X + tW on an independent (colatitude, longitude)
/// Gauss rule, against int (DIV xi - n H psi) dA and the raw int (-n H psi) dA.
OracleReport area_element_variation_check(const ParametricSurface& surface, const VariationField& field,
                                          double h = 1e-3);

/// Total area on the independent Gauss rule.
double oracle_area(const ParametricSurface& surface);

/// sum over i_1 < ... < i_r of lambda_{i_1} ... lambda_{i_r}.
double sym_poly_expand(const Vec& lambda, int r);

/// (l(l+1) - 2, 2l+1) for l = 1..l_max: the constrained spectrum of
/// int (|grad psi|^2 - 2 psi^2) on the unit 2-sphere.
std::vector<std::pair<double, int>> harmonic_spectrum(int l_max);

}  // namespace wulffcurv
