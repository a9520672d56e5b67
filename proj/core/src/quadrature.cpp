#include <cmath>

#include "wulffcurv/error.hpp"
#include "wulffcurv/geometry.hpp"
#include "wulffcurv/parallel.hpp"

namespace wulffcurv {

// Newton iteration on P_count from the Chebyshev-like initial guesses.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count) {
  if (count < 1) fail(ErrorKind::InvalidArgument, "Gauss-Legendre needs at least one node");
  std::vector<double> x(count);
  std::vector<double> w(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= count; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = count * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Refresh the derivative at the converged root.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= count; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = count * (z * p1 - p2) / (z * z - 1.0);
    x[i] = -z;
    x[count - 1 - i] = z;
    w[i] = w[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

double QuadratureGrid::spacing() const {
  if (dimension == 1) return 2.0 * M_PI / static_cast<double>(nodes.size());
  return M_PI / (4.0 * static_cast<double>(1 << level));
}

QuadratureGrid build_grid(const ParametricSurface& surface, int level) {
  if (level < 1) fail(ErrorKind::InvalidArgument, "grid level must be >= 1");
  if (level > 9) fail(ErrorKind::InvalidArgument, "grid level too large");
  QuadratureGrid grid;
  grid.dimension = surface.dimension();
  grid.level = level;
  std::vector<Mat> bases;
  std::vector<double> base_weights;
  if (grid.dimension == 1) {
    const int m = 8 * (1 << level);
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * M_PI * j / m;
      Vec x(2);
      x << std::cos(a), std::sin(a);
      Mat t(2, 1);
      t << -std::sin(a), std::cos(a);
      grid.nodes.push_back(x);
      bases.push_back(t);
      base_weights.push_back(2.0 * M_PI / m);
    }
  } else {
    const int nt = 4 * (1 << level);
    const int np = 8 * (1 << level);
    const auto [z, w] = gauss_legendre(nt);
    for (int i = 0; i < nt; ++i) {
      const double theta = std::acos(z[i]);
      const double st = std::sin(theta);
      for (int j = 0; j < np; ++j) {
        const double phi = 2.0 * M_PI * j / np;
        Vec x(3);
        x << st * std::cos(phi), st * std::sin(phi), z[i];
        Mat t(3, 2);
        t << z[i] * std::cos(phi), -std::sin(phi),
             z[i] * std::sin(phi), std::cos(phi),
             -st, 0.0;
        grid.nodes.push_back(x);
        bases.push_back(t);
        base_weights.push_back(w[i] * 2.0 * M_PI / np);
      }
    }
  }
  const std::size_t count = grid.nodes.size();
  grid.frames.resize(count);
  grid.weights.resize(count);
  parallel_for(count, [&](std::size_t k) {
    grid.frames[k] = frame_at(surface, LocalChart::at(grid.nodes[k], bases[k]));
    grid.weights[k] = base_weights[k] * grid.frames[k].jacobian;
  });
  return grid;
}

double integrate(const QuadratureGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    fail(ErrorKind::SizeMismatch, "integrand has " + std::to_string(values.size()) + " values for " +
                                      std::to_string(grid.size()) + " nodes");
  }
  std::vector<double> terms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) terms[k] = grid.weights[k] * values[k];
  return pairwise_sum(terms);
}

double orient_check(const ParametricSurface& surface, const QuadratureGrid& grid) {
  std::vector<double> f(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) f[k] = grid.frames[k].position.dot(grid.frames[k].normal);
  return integrate(grid, f) / (surface.dimension() + 1);
}

}  // namespace wulffcurv
