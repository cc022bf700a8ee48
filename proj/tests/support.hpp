#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "bihcert/hypersurface.hpp"
#include "bihcert/sampling.hpp"

namespace bihcert::test {

/// 6th-order central finite differences of a scalar function: first, second
/// and third derivatives from a 9-point stencil. Used as the independent
/// oracle for jet values.
struct Fd6 {
  double d1;
  double d2;
  double d3;
};

inline Fd6 fd_derivs_6(const std::function<double(double)>& f, double z,
                       double h) {
  double v[9];
  for (int i = -4; i <= 4; ++i) v[i + 4] = f(z + i * h);

  Fd6 out;
  out.d1 = (-v[1] + 9.0 * v[2] - 45.0 * v[3] + 45.0 * v[5] - 9.0 * v[6] +
            v[7]) /
           (60.0 * h);
  out.d2 = (2.0 * v[1] - 27.0 * v[2] + 270.0 * v[3] - 490.0 * v[4] +
            270.0 * v[5] - 27.0 * v[6] + 2.0 * v[7]) /
           (180.0 * h * h);
  out.d3 = (-7.0 / 240.0 * v[0] + 3.0 / 10.0 * v[1] - 169.0 / 120.0 * v[2] +
            61.0 / 30.0 * v[3] - 61.0 / 30.0 * v[5] + 169.0 / 120.0 * v[6] -
            3.0 / 10.0 * v[7] + 7.0 / 240.0 * v[8]) /
           (h * h * h);
  return out;
}

inline double rel_err(double got, double expected, double floor = 1e-12) {
  return std::abs(got - expected) / std::max(std::abs(expected), floor);
}

/// Random z strictly inside the family's scan window, away from the domain
/// boundary by the given margin.
inline double random_domain_z(GaussianSampler& rng, const FactorFamily& fam,
                              double margin = 0.05) {
  const std::vector<double> window = default_z_grid(fam, 2);
  const double lo = window.front() + margin;
  const double hi = window.back() - margin;
  return rng.uniform(lo, hi);
}

/// Random factor family among the closed-form kinds. kind: 0 constant,
/// 1 power-law, 2 reciprocal, -1 uniform over {1, 2}.
inline FactorFamily random_family(GaussianSampler& rng, int kind = -1) {
  if (kind < 0) kind = rng.uniform() < 0.5 ? 1 : 2;
  switch (kind) {
    case 0:
      return FactorFamily::constant(rng.uniform(0.5, 3.0));
    case 1:
      return FactorFamily::power_law(rng.uniform(0.5, 2.0),
                                     rng.uniform(0.5, 2.0),
                                     rng.uniform(-1.5, 1.5));
    default:
      return FactorFamily::reciprocal(rng.uniform(0.5, 2.0),
                                      rng.uniform(0.5, 2.0));
  }
}

inline Eigen::VectorXd random_coefficients(GaussianSampler& rng, int m,
                                           double scale = 1.0) {
  Eigen::VectorXd a(m);
  for (int i = 0; i < m; ++i) a[i] = scale * rng.gaussian();
  return a;
}

/// Random h-orthonormal plane in frame components.
inline PlaneSection random_plane(GaussianSampler& rng, int n) {
  Eigen::VectorXd x = rng.gaussian_vector(n);
  x /= x.norm();
  Eigen::VectorXd y = rng.gaussian_vector(n);
  y -= y.dot(x) * x;
  while (y.norm() < 1e-6) {
    y = rng.gaussian_vector(n);
    y -= y.dot(x) * x;
  }
  y /= y.norm();
  return PlaneSection{x, y};
}

}  // namespace bihcert::test
