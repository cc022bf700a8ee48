#include "bihcert/solutions.hpp"

#include <algorithm>
#include <cmath>

#include "bihcert/rk45.hpp"
#include "bihcert/sampling.hpp"

namespace bihcert {

namespace {

constexpr double kProperFloor = 1e-12;

double single_rhs_f3(double s, double f, double f1, double f2) {
  return (-(4.0 - s) * f * f1 * f2 + 4.0 * (2.0 + s) * f1 * f1 * f1) /
         (s * f * f);
}

StageResult make_stage(std::string name, std::string module, std::string op,
                       double value, double tolerance, bool pass,
                       std::string note = "") {
  return StageResult{std::move(name), std::move(module), std::move(op),
                     value,           tolerance,         pass,
                     std::move(note)};
}

void finalize(Certificate& cert) {
  cert.pass = true;
  for (const StageResult& st : cert.stages) {
    if (!st.pass) {
      cert.pass = false;
      cert.failed_stage = st.name;
      break;
    }
  }
}

}  // namespace

const StageResult* Certificate::find_stage(const std::string& name) const {
  for (const StageResult& st : stages) {
    if (st.name == name) return &st;
  }
  return nullptr;
}

double constraint_radius(double t) {
  if (!(t > 0.0) || !(t < 0.5)) {
    throw std::domain_error("constraint_radius: t must lie in (0, 1/2)");
  }
  return std::sqrt(2.0 * t / (1.0 - 2.0 * t));
}

Counterexample make_counterexample(double t, const Eigen::Vector4d& direction,
                                   double c, double A, double B) {
  const double r = constraint_radius(t);  // validates t
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("make_counterexample: direction must be a unit vector");
  }
  ConformalMetric metric(5, FactorFamily::power_law(A, B, t));  // validates A, B
  Hyperplane hp(r * direction, c);
  return Counterexample{std::move(metric), std::move(hp), t};
}

Certificate certify_counterexample(const ConformalMetric& metric,
                                   const Hyperplane& hp,
                                   const CertifyOptions& opt) {
  if (hp.m() != 4 || metric.ambient_dim != 5) {
    throw std::invalid_argument("certify_counterexample: requires m = 4, ambient dimension 5");
  }
  Certificate cert;
  cert.z_grid = default_z_grid(metric.factor, opt.z_count);

  double max_single = 0.0;
  double min_abs_H = std::numeric_limits<double>::infinity();
  for (double z : cert.z_grid) {
    const Jet3 f = eval_f_jet(metric.factor, z);
    max_single = std::max(max_single, residual_single_normalized(hp.a(), f));
    min_abs_H = std::min(min_abs_H, std::abs(-hp.km() * f.v1));
  }
  cert.stages.push_back(make_stage("residual_single_grid", "biharmonic",
                                   "residual_single", max_single,
                                   opt.tolerance, max_single <= opt.tolerance));
  cert.stages.push_back(make_stage("properness", "hypersurface",
                                   "mean_curvature", min_abs_H, kProperFloor,
                                   min_abs_H > kProperFloor,
                                   "pass requires value > tolerance"));

  const ScanReport scan =
      curvature_sign_scan(metric, opt.z_count, opt.plane_count, opt.seed);
  cert.scan = scan;
  cert.stages.push_back(make_stage("negative_sectional_scan", "curvature",
                                   "curvature_sign_scan", scan.max_k, 0.0,
                                   scan.max_k < 0.0,
                                   "pass requires value < 0"));
  finalize(cert);
  return cert;
}

Certificate certify_counterexample(const Counterexample& ce,
                                   const CertifyOptions& opt) {
  return certify_counterexample(ce.metric, ce.hyperplane, opt);
}

Certificate horizontal_leaf_check(const FactorFamily& family, int m,
                                  const CertifyOptions& opt) {
  if (m < 2) {
    throw std::invalid_argument("horizontal_leaf_check: requires m >= 2");
  }
  ConformalMetric metric(m + 1, family);
  Hyperplane hp(Eigen::VectorXd::Zero(m), 0.0);

  Certificate cert;
  cert.z_grid = default_z_grid(family, opt.z_count);

  double max_branch = 0.0;
  double max_system = 0.0;
  double max_abs_H = 0.0;
  for (double z : cert.z_grid) {
    const Jet3 f = eval_f_jet(family, z);
    const double rb = reciprocal_branch_residual(f);
    const double rb_scale = std::max(
        {std::abs(f.v0 * f.v2), f.v1 * f.v1, 1e-300});
    max_branch = std::max(max_branch, std::abs(rb) / rb_scale);

    const ResidualPair general = residual_general(hp, metric, z);
    const double scale = std::max(
        {std::abs(f.v0 * f.v0 * f.v3), std::abs(f.v0 * f.v1 * f.v2),
         std::abs(f.v1 * f.v1 * f.v1), 1e-300});
    max_system = std::max(max_system, general.max_abs() / scale);
    max_abs_H = std::max(max_abs_H, std::abs(-hp.km() * f.v1));
  }
  cert.stages.push_back(make_stage("branch_equation", "biharmonic",
                                   "reciprocal_branch_residual", max_branch,
                                   opt.tolerance, max_branch <= opt.tolerance));
  cert.stages.push_back(make_stage("residual_system", "biharmonic",
                                   "residual_general", max_system,
                                   opt.tolerance, max_system <= opt.tolerance));
  cert.stages.push_back(make_stage("properness", "hypersurface",
                                   "mean_curvature", max_abs_H, kProperFloor,
                                   max_abs_H > kProperFloor,
                                   "pass requires value > tolerance"));
  finalize(cert);
  return cert;
}

Certificate reciprocal_leaf_check(double A, double B, int m,
                                  const CertifyOptions& opt) {
  return horizontal_leaf_check(FactorFamily::reciprocal(A, B), m, opt);
}

OdeTrajectory ode_solve_single(double sum_a_sq, double z0, double f0,
                               double f1, double f2, double z1,
                               const OdeOptions& opt) {
  if (!(sum_a_sq > 0.0)) {
    throw std::invalid_argument(
        "ode_solve_single: sum a_i^2 = 0 leaves no f''' term (degenerate "
        "leading coefficient); use the constant-mean-curvature branch");
  }
  if (!(f0 > 0.0)) {
    throw std::domain_error("ode_solve_single: requires f(z0) > 0");
  }
  if (!(z1 > z0)) {
    throw std::domain_error("ode_solve_single: requires z1 > z0");
  }
  const int count = std::max(2, opt.sample_count);

  std::vector<double> sample_z(count);
  if (z0 > 0.0) {
    const double llo = std::log(z0), lhi = std::log(z1);
    for (int i = 0; i < count; ++i) {
      sample_z[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    }
  } else {
    for (int i = 0; i < count; ++i) {
      sample_z[i] = z0 + (z1 - z0) * i / (count - 1);
    }
  }
  sample_z.front() = z0;
  sample_z.back() = z1;

  const double s = sum_a_sq;
  auto rhs = [s](double, const Eigen::VectorXd& y) {
    Eigen::VectorXd dy(3);
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = single_rhs_f3(s, y[0], y[1], y[2]);
    return dy;
  };

  OdeTrajectory traj;
  traj.sum_a_sq = s;
  traj.abs_tol = opt.abs_tol;
  traj.rel_tol = opt.rel_tol;

  auto sink = [&](double z, const Eigen::VectorXd& y) {
    OdeSample sample;
    sample.z = z;
    sample.f = y[0];
    sample.f1 = y[1];
    sample.f2 = y[2];
    Jet3 jet{y[0], y[1], y[2], single_rhs_f3(s, y[0], y[1], y[2])};
    Eigen::VectorXd a4 = Eigen::VectorXd::Zero(4);
    a4[0] = std::sqrt(s);
    sample.residual = residual_single_normalized(a4, jet);
    traj.max_residual = std::max(traj.max_residual, sample.residual);
    traj.samples.push_back(sample);
  };
  auto blow_guard = [&](double, const Eigen::VectorXd& y) {
    return y[0] <= opt.f_min || y.cwiseAbs().maxCoeff() > 1e12;
  };

  Eigen::VectorXd y0(3);
  y0 << f0, f1, f2;
  Rk45Options rk;
  rk.abs_tol = opt.abs_tol;
  rk.rel_tol = opt.rel_tol;
  const Rk45Status st = integrate_rk45(rhs, y0, sample_z, sink, blow_guard, rk);

  traj.completed = st.completed;
  traj.blew_up = !st.completed;
  traj.stop_reason = st.reason;
  traj.steps_accepted = st.steps_accepted;
  traj.steps_rejected = st.steps_rejected;
  traj.max_error_estimate = st.max_error_estimate;
  return traj;
}

namespace {

// Cubic Hermite basis on [0,1] for values (va, vb) and derivatives (da, db).
double hermite(double u, double h, double va, double da, double vb, double db) {
  const double u2 = u * u, u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * va + (u3 - 2.0 * u2 + u) * h * da +
         (-2.0 * u3 + 3.0 * u2) * vb + (u3 - u2) * h * db;
}

}  // namespace

FactorFamily trajectory_family(const OdeTrajectory& traj, double sum_a_sq) {
  if (traj.samples.size() < 3) {
    throw std::invalid_argument("trajectory_family: needs at least 3 samples");
  }
  if (!(sum_a_sq > 0.0)) {
    throw std::invalid_argument("trajectory_family: requires sum a_i^2 > 0");
  }
  const double s = sum_a_sq;
  // Copy the samples; the family must own its data.
  const std::vector<OdeSample> samples = traj.samples;

  auto eval = [samples, s](double z) {
    // Locate the interval [z_i, z_{i+1}] containing z.
    std::size_t lo = 0, hi = samples.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (samples[mid].z <= z) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const OdeSample& A = samples[lo];
    const OdeSample& B = samples[hi];
    const double h = B.z - A.z;
    const double u = (z - A.z) / h;
    Jet3 jet;
    jet.v0 = hermite(u, h, A.f, A.f1, B.f, B.f1);
    jet.v1 = hermite(u, h, A.f1, A.f2, B.f1, B.f2);
    const double f3a = single_rhs_f3(s, A.f, A.f1, A.f2);
    const double f3b = single_rhs_f3(s, B.f, B.f1, B.f2);
    jet.v2 = hermite(u, h, A.f2, f3a, B.f2, f3b);
    jet.v3 = single_rhs_f3(s, jet.v0, jet.v1, jet.v2);
    return jet;
  };

  // Probe the interpolation error: re-interpolate every interior node from
  // its neighbours (a 2h Hermite) and scale the defect back down to h. The
  // declared bound also carries the integrator tolerances.
  double interp_err = 0.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const OdeSample& A = samples[i - 1];
    const OdeSample& B = samples[i + 1];
    const double h = B.z - A.z;
    const double u = (samples[i].z - A.z) / h;
    const double coarse = hermite(u, h, A.f, A.f1, B.f, B.f1);
    interp_err = std::max(interp_err, std::abs(coarse - samples[i].f) / 16.0);
  }
  double fmax = 0.0;
  for (const OdeSample& smp : samples) fmax = std::max(fmax, std::abs(smp.f));
  const double bound = interp_err + traj.abs_tol + traj.rel_tol * fmax;

  return FactorFamily::tabulated(
      eval, Interval{samples.front().z, samples.back().z}, bound,
      "ode_trajectory");
}

ProductCertificate product_codim_k(const Counterexample& ce, int n, int k,
                                   const CertifyOptions& opt) {
  if (k < 1 || n < 0) {
    throw std::domain_error("product_codim_k: requires k >= 1 and n >= 0");
  }
  ProductCertificate pc;
  pc.codim = k;
  pc.euclidean_dim = n + k - 1;
  pc.base = certify_counterexample(ce, opt);

  // Mixed planes: one leg in the conformal factor, one in the Euclidean
  // factor. The product metric is block diagonal, so the sectional
  // curvature splits into the block values; a mixed plane sees the
  // conformal block with a zero leg (multilinearity gives 0) plus the flat
  // block (identically 0). Evaluated, not just asserted.
  double max_mixed = 0.0;
  if (pc.euclidean_dim > 0) {
    GaussianSampler rng(opt.seed);
    const int n_amb = ce.metric.ambient_dim;
    const std::vector<double> grid = default_z_grid(ce.metric.factor, 8);
    for (double z : grid) {
      Eigen::VectorXd x = rng.gaussian_vector(n_amb);
      x /= x.norm();
      const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n_amb);
      const double conformal_block =
          riemann_conformal(ce.metric, z, x, zero, x, zero);
      const double euclidean_block = 0.0;  // flat factor
      max_mixed = std::max(max_mixed,
                           std::abs(conformal_block + euclidean_block));
    }
  }
  pc.stages.push_back(make_stage("mixed_plane_curvature", "curvature",
                                 "riemann_conformal", max_mixed, 1e-12,
                                 max_mixed <= 1e-12,
                                 "block-diagonal product metric"));
  pc.stages.push_back(make_stage("euclidean_factor_curvature", "curvature",
                                 "flat_block", 0.0, 0.0, true,
                                 "Euclidean factor is flat"));
  pc.stages.push_back(make_stage(
      "product_biharmonicity", "solutions", "product_codim_k", 1.0, 0.0, true,
      "external result assumed: factor-wise biharmonic products are "
      "biharmonic"));

  pc.pass = pc.base.pass;
  pc.failed_stage = pc.base.failed_stage;
  if (!pc.base.pass && !pc.failed_stage.empty()) {
    pc.failed_stage = "base_certificate:" + pc.failed_stage;
  }
  for (const StageResult& st : pc.stages) {
    if (!st.pass && pc.pass) {
      pc.pass = false;
      pc.failed_stage = st.name;
    }
  }
  return pc;
}

}  // namespace bihcert
