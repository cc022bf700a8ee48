#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bihcert/biharmonic.hpp"

namespace bihcert {

/// A tilted hyperplane in a 5-dimensional power-law conformally flat space
/// with |a|^2 on the constraint sphere 2t/(1-2t). Instances built through
/// make_counterexample satisfy the constraint by construction.
struct Counterexample {
  ConformalMetric metric;  ///< PowerLaw family, ambient dimension 5
  Hyperplane hyperplane;   ///< 4 coefficients
  double t = 0.0;          ///< exponent, in (0, 1/2)
};

/// Product of the conformal base with a Euclidean factor; hosts the
/// codimension-k construction.
struct ProductSpace {
  Counterexample base;
  int euclidean_dim = 0;  ///< n + k - 1
  int codim = 1;          ///< k
};

/// Radius sqrt(2t/(1-2t)) of the constraint sphere. Throws
/// std::domain_error unless t lies in (0, 1/2).
double constraint_radius(double t);

/// Builds the counterexample with hyperplane coefficients
/// constraint_radius(t) * direction. `direction` must be a unit 4-vector.
Counterexample make_counterexample(double t, const Eigen::Vector4d& direction,
                                   double c, double A, double B);

struct CertifyOptions {
  int z_count = 64;
  int plane_count = 1024;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
};

/// One certified check: a named value against a tolerance.
struct StageResult {
  std::string name;
  std::string module;
  std::string op;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct Certificate {
  bool pass = false;
  std::string failed_stage;  ///< first failing stage, empty when passing
  std::vector<StageResult> stages;
  std::optional<ScanReport> scan;
  std::vector<double> z_grid;

  const StageResult* find_stage(const std::string& name) const;
};

/// Runs the three certification stages on an arbitrary m = 4 configuration:
///   (i)   single-equation residual vanishes (normalized) on the z-grid,
///   (ii)  proper: H bounded away from zero on the grid,
///   (iii) max sampled sectional curvature strictly negative.
Certificate certify_counterexample(const ConformalMetric& metric,
                                   const Hyperplane& hp,
                                   const CertifyOptions& opt = {});
Certificate certify_counterexample(const Counterexample& ce,
                                   const CertifyOptions& opt = {});

/// Certifies a horizontal (a = 0) foliation leaf for an arbitrary factor
/// family: the constant-mean-curvature branch equation f f'' - 2 (f')^2
/// must vanish, the full residual system must vanish, and H must not.
Certificate horizontal_leaf_check(const FactorFamily& family, int m,
                                  const CertifyOptions& opt = {});

/// horizontal_leaf_check for the reciprocal family f = 1/(Az+B), which
/// solves the branch equation exactly.
Certificate reciprocal_leaf_check(double A, double B, int m,
                                  const CertifyOptions& opt = {});

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double f_min = 1e-8;  ///< singularity guard: stop when f <= f_min
  int sample_count = 65;
};

struct OdeSample {
  double z = 0.0;
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double residual = 0.0;  ///< normalized single-equation residual
};

struct OdeTrajectory {
  std::vector<OdeSample> samples;
  double sum_a_sq = 0.0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  bool completed = false;
  bool blew_up = false;
  std::string stop_reason;
  long steps_accepted = 0;
  long steps_rejected = 0;
  double max_error_estimate = 0.0;
  double max_residual = 0.0;
};

/// Integrates the single equation as the explicit third-order ODE
///   f''' = [-(4 - s) f f' f'' + 4 (2 + s) (f')^3] / (s f^2),  s = sum a_i^2,
/// from (f, f', f'') at z0 to z1 with sample_count log-spaced outputs.
/// Throws std::invalid_argument when s = 0 (the equation cannot be solved
/// for f''' ; that branch is the constant-mean-curvature analysis) and
/// std::domain_error when f(z0) <= 0 or z1 <= z0.
OdeTrajectory ode_solve_single(double sum_a_sq, double z0, double f0,
                               double f1, double f2, double z1,
                               const OdeOptions& opt = {});

/// Wraps a trajectory as a tabulated factor family (piecewise cubic Hermite
/// in f, f', f''; f''' from the ODE right-hand side). The declared error
/// bound combines the integrator tolerance with an interpolation estimate
/// probed by coarsened re-interpolation at the stored nodes.
FactorFamily trajectory_family(const OdeTrajectory& traj, double sum_a_sq);

struct ProductCertificate {
  int euclidean_dim = 0;
  int codim = 1;
  Certificate base;
  std::vector<StageResult> stages;  ///< block-curvature and assumption stages
  bool pass = false;
  std::string failed_stage;
};

/// Codimension-k product construction over a certified base: the mixed and
/// Euclidean curvature blocks are checked exactly; the biharmonicity of the
/// product immersion is an external result and is recorded as an assumption
/// rather than re-verified.
ProductCertificate product_codim_k(const Counterexample& ce, int n, int k,
                                   const CertifyOptions& opt = {});

}  // namespace bihcert
