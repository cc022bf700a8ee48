#pragma once

#include <string>
#include <vector>

#include "bihcert/hypersurface.hpp"

namespace bihcert {

/// Outcome of classifying a (hyperplane, metric) configuration.
enum class CaseLabel {
  Minimal,               ///< f' vanishes on the sample grid
  ReciprocalHorizontal,  ///< a = 0 and f f'' - 2 (f')^2 vanishes
  SingleEquationM4,      ///< m = 4 and the single residual vanishes
  NotBiharmonic,
};

const char* to_string(CaseLabel label);

/// The two lines of the biharmonic system, reported in the reduced
/// normalization (the common positive frame factors divided out so that the
/// assembled route and the direct polynomial route are the same numbers):
///   normal       = -(1-k_m^2) f^2 f''' - [3-m+(2m-3)k_m^2] f f' f''
///                  + m (1+k_m^2) (f')^3
///   tangential_i = (m-4) f f' f'' a_i
struct ResidualPair {
  double normal = 0.0;
  Eigen::VectorXd tangential;

  double max_abs() const {
    double t = tangential.size() > 0 ? tangential.cwiseAbs().maxCoeff() : 0.0;
    return std::max(std::abs(normal), t);
  }
};

/// Residual assembled from the hypersurface closed forms through the
/// codimension-one biharmonic system
///   Lap H - H |A|^2 + H Ric(xi,xi) = 0
///   2 A(grad H) + (m/2) grad H^2 - 2 H (Ric(xi))^T = 0
/// with A(grad H) = H grad H and grad H^2 = 2 H grad H on the umbilical
/// leaves, then rescaled to the reduced normalization above.
ResidualPair residual_general(const Hyperplane& hp,
                              const ConformalMetric& metric, double z);

/// Residual evaluated directly as the reduced polynomial system from the
/// jet and the k coefficients. Algebraically identical to residual_general;
/// their numerical agreement certifies the whole derivation chain.
ResidualPair residual_reduced(int m, const Hyperplane& hp, const Jet3& f);

/// m = 4 single equation:
///   sum a_i^2 f^2 f''' + (4 - sum a_i^2) f f' f'' - 4 (2 + sum a_i^2) (f')^3.
double residual_single(const Eigen::VectorXd& a, const Jet3& f);

/// Scale-free residual: |residual_single| / max(|f^2 f'''|, |f f' f''|,
/// |(f')^3|). Zero when the raw residual is exactly zero.
double residual_single_normalized(const Eigen::VectorXd& a, const Jet3& f);

/// Left side of the constant-mean-curvature branch equation
///   [1 + (m-1) k_m^2] f f'' - m (1 + k_m^2) (f')^2.
double case2_residual(int m, double km, const Jet3& f);

/// f f'' - 2 (f')^2, the horizontal-leaf branch whose solutions are
/// f = 1/(Az+B).
double reciprocal_branch_residual(const Jet3& f);

/// Classification report over a z-sample grid. Residuals are normalized by
/// max(|f^2 f'''|, |f f' f''|, |(f')^3|) pointwise and the maxima over the
/// grid are reported.
struct ResidualReport {
  double normal_residual = 0.0;          ///< max over grid, normalized
  Eigen::VectorXd tangential_residual;   ///< per-component max, normalized
  CaseLabel case_label = CaseLabel::NotBiharmonic;
  bool proper = false;
  double max_abs_residual = 0.0;
  double min_abs_H = 0.0;
  double max_abs_H = 0.0;
  double tolerance = 0.0;
  std::vector<double> z_grid;
};

/// Labels the configuration per the case split (most degenerate first:
/// Minimal, then ReciprocalHorizontal, then SingleEquationM4). Throws
/// std::invalid_argument on an empty sample set.
ResidualReport classify(const Hyperplane& hp, const ConformalMetric& metric,
                        const std::vector<double>& z_samples,
                        double tolerance = 1e-9);

}  // namespace bihcert
