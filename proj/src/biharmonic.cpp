#include "bihcert/biharmonic.hpp"

#include <algorithm>
#include <cmath>

namespace bihcert {

namespace {

constexpr double kScaleFloor = 1e-300;
constexpr double kProperFloor = 1e-12;

double term_scale(const Jet3& f) {
  const double t3 = std::abs(f.v0 * f.v0 * f.v3);
  const double t2 = std::abs(f.v0 * f.v1 * f.v2);
  const double t1 = std::abs(f.v1 * f.v1 * f.v1);
  return std::max({t3, t2, t1});
}

double normalized(double raw, double scale) {
  if (raw == 0.0) return 0.0;
  return std::abs(raw) / std::max(scale, kScaleFloor);
}

}  // namespace

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::Minimal:
      return "minimal";
    case CaseLabel::ReciprocalHorizontal:
      return "reciprocal_horizontal";
    case CaseLabel::SingleEquationM4:
      return "single_equation_m4";
    case CaseLabel::NotBiharmonic:
      return "not_biharmonic";
  }
  return "unknown";
}

ResidualPair residual_general(const Hyperplane& hp,
                              const ConformalMetric& metric, double z) {
  const HypersurfaceState st = hypersurface_state(hp, metric, z);
  const int m = hp.m();
  const Eigen::VectorXd& k = hp.k();
  const double km = hp.km();

  const double normal_raw = st.lapH - st.H * st.A_norm_sq + st.H * st.ric_normal;
  // Umbilical leaf: A(grad H) = H grad H, grad H^2 = 2 H grad H.
  Eigen::VectorXd tangential_raw = 2.0 * st.H * st.gradH +
                                   (0.5 * m) * (2.0 * st.H * st.gradH) -
                                   2.0 * st.H * st.ric_tangential;

  // Rescale to the reduced normalization: the substitution of the closed
  // forms produces the reduced lines times k_m (normal) and times
  // -k_m^2 k_i k_{i-1} (tangential component i); those factors are positive
  // and never vanish, so dividing them out changes no verdict.
  ResidualPair out;
  out.normal = normal_raw / km;
  out.tangential.resize(m);
  for (int i = 1; i <= m; ++i) {
    out.tangential[i - 1] = tangential_raw[i - 1] / (-km * km * k[i] * k[i - 1]);
  }
  return out;
}

ResidualPair residual_reduced(int m, const Hyperplane& hp, const Jet3& f) {
  if (m != hp.m()) {
    throw std::invalid_argument("residual_reduced: m does not match the hyperplane");
  }
  const double km = hp.km();
  const double km2 = km * km;
  ResidualPair out;
  out.normal = -(1.0 - km2) * f.v0 * f.v0 * f.v3 -
               (3.0 - m + (2.0 * m - 3.0) * km2) * f.v0 * f.v1 * f.v2 +
               m * (1.0 + km2) * f.v1 * f.v1 * f.v1;
  out.tangential = (m - 4.0) * f.v0 * f.v1 * f.v2 * hp.a();
  return out;
}

double residual_single(const Eigen::VectorXd& a, const Jet3& f) {
  if (a.size() != 4) {
    throw std::invalid_argument("residual_single: requires 4 coefficients");
  }
  const double s = a.squaredNorm();
  return s * f.v0 * f.v0 * f.v3 + (4.0 - s) * f.v0 * f.v1 * f.v2 -
         4.0 * (2.0 + s) * f.v1 * f.v1 * f.v1;
}

double residual_single_normalized(const Eigen::VectorXd& a, const Jet3& f) {
  return normalized(residual_single(a, f), term_scale(f));
}

double case2_residual(int m, double km, const Jet3& f) {
  const double km2 = km * km;
  return (1.0 + (m - 1) * km2) * f.v0 * f.v2 -
         m * (1.0 + km2) * f.v1 * f.v1;
}

double reciprocal_branch_residual(const Jet3& f) {
  return f.v0 * f.v2 - 2.0 * f.v1 * f.v1;
}

ResidualReport classify(const Hyperplane& hp, const ConformalMetric& metric,
                        const std::vector<double>& z_samples,
                        double tolerance) {
  if (z_samples.empty()) {
    throw std::invalid_argument("classify: empty sample set");
  }
  if (metric.ambient_dim != hp.m() + 1) {
    throw std::invalid_argument("classify: metric ambient_dim must equal m + 1");
  }
  const int m = hp.m();
  const bool horizontal = hp.a().cwiseAbs().maxCoeff() <= 1e-13;

  ResidualReport report;
  report.tolerance = tolerance;
  report.z_grid = z_samples;
  report.tangential_residual = Eigen::VectorXd::Zero(m);
  report.min_abs_H = std::numeric_limits<double>::infinity();

  bool fprime_zero = true;
  bool reciprocal_branch_zero = true;
  bool single_zero = true;

  for (double z : z_samples) {
    const Jet3 f = eval_f_jet(metric.factor, z);
    const double scale = term_scale(f);
    const ResidualPair reduced = residual_reduced(m, hp, f);

    report.normal_residual =
        std::max(report.normal_residual, normalized(reduced.normal, scale));
    for (int i = 0; i < m; ++i) {
      report.tangential_residual[i] = std::max(
          report.tangential_residual[i], normalized(reduced.tangential[i], scale));
    }

    const double H = -hp.km() * f.v1;
    report.min_abs_H = std::min(report.min_abs_H, std::abs(H));
    report.max_abs_H = std::max(report.max_abs_H, std::abs(H));

    if (std::abs(f.v1) > 1e-12 * std::max(1.0, std::abs(f.v0))) {
      fprime_zero = false;
    }
    const double rb = reciprocal_branch_residual(f);
    const double rb_scale =
        std::max(std::abs(f.v0 * f.v2), f.v1 * f.v1);
    if (normalized(rb, rb_scale) > tolerance) reciprocal_branch_zero = false;
    if (m == 4 && residual_single_normalized(hp.a(), f) > tolerance) {
      single_zero = false;
    }
  }

  report.max_abs_residual = std::max(
      report.normal_residual,
      m > 0 ? report.tangential_residual.maxCoeff() : 0.0);

  if (fprime_zero) {
    report.case_label = CaseLabel::Minimal;
  } else if (horizontal && reciprocal_branch_zero) {
    report.case_label = CaseLabel::ReciprocalHorizontal;
  } else if (m == 4 && single_zero) {
    report.case_label = CaseLabel::SingleEquationM4;
  } else {
    report.case_label = CaseLabel::NotBiharmonic;
  }

  const bool residuals_ok = report.max_abs_residual <= tolerance;
  report.proper = residuals_ok && report.max_abs_H > kProperFloor;
  return report;
}

}  // namespace bihcert
