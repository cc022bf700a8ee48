#include "bihcert/hypersurface.hpp"

#include <cmath>

namespace bihcert {

namespace {

void check_pair(const Hyperplane& hp, const ConformalMetric& metric,
                const char* what) {
  if (metric.ambient_dim != hp.m() + 1) {
    throw std::invalid_argument(std::string(what) +
                                ": metric ambient_dim must equal m + 1");
  }
}

}  // namespace

Hyperplane::Hyperplane(Eigen::VectorXd a, double c) : a_(std::move(a)), c_(c) {
  if (a_.size() < 1) {
    throw std::invalid_argument("Hyperplane requires at least one coefficient");
  }
  if (!a_.allFinite() || !std::isfinite(c_)) {
    throw std::invalid_argument("Hyperplane coefficients must be finite");
  }
  const int m = static_cast<int>(a_.size());
  k_.resize(m + 1);
  k_[0] = 1.0;
  double sum = 0.0;
  for (int i = 1; i <= m; ++i) {
    sum += a_[i - 1] * a_[i - 1];
    k_[i] = 1.0 / std::sqrt(1.0 + sum);
  }
}

AdaptedFrame adapted_frame(const Hyperplane& hp) {
  const int m = hp.m();
  const Eigen::VectorXd& a = hp.a();
  const Eigen::VectorXd& k = hp.k();

  AdaptedFrame frame;
  frame.tangent = Eigen::MatrixXd::Zero(m + 1, m);
  for (int i = 1; i <= m; ++i) {
    Eigen::Ref<Eigen::VectorXd> e = frame.tangent.col(i - 1);
    const double kk = k[i] * k[i - 1];
    for (int l = 1; l < i; ++l) {
      e[l - 1] = -a[i - 1] * kk * a[l - 1];
    }
    e[i - 1] = k[i] / k[i - 1];
    e[m] = a[i - 1] * kk;
  }
  frame.normal = FrameVector::Zero(m + 1);
  const double km = hp.km();
  for (int l = 0; l < m; ++l) frame.normal[l] = a[l] * km;
  frame.normal[m] = -km;
  return frame;
}

Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& columns) {
  const auto n = columns.rows();
  const auto cols = columns.cols();
  if (cols > n) {
    throw std::invalid_argument("gram_schmidt: more vectors than dimensions");
  }
  const double scale = columns.norm();
  Eigen::MatrixXd q = columns;
  for (Eigen::Index j = 0; j < cols; ++j) {
    // Modified Gram-Schmidt step plus one re-orthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
      }
    }
    const double norm = q.col(j).norm();
    if (norm <= 1e-12 * std::max(1.0, scale)) {
      throw std::invalid_argument("gram_schmidt: rank-deficient input");
    }
    q.col(j) /= norm;
  }
  return q;
}

double mean_curvature(const Hyperplane& hp, const ConformalMetric& metric,
                      double z) {
  check_pair(hp, metric, "mean_curvature");
  const Jet3 f = eval_f_jet(metric.factor, z);
  return -hp.km() * f.v1;
}

double shape_operator_norm_sq(const Hyperplane& hp,
                              const ConformalMetric& metric, double z) {
  check_pair(hp, metric, "shape_operator_norm_sq");
  const Jet3 f = eval_f_jet(metric.factor, z);
  const double km = hp.km();
  return hp.m() * km * km * f.v1 * f.v1;
}

Eigen::VectorXd grad_mean_curvature(const Hyperplane& hp,
                                    const ConformalMetric& metric, double z) {
  check_pair(hp, metric, "grad_mean_curvature");
  const Jet3 f = eval_f_jet(metric.factor, z);
  const int m = hp.m();
  const Eigen::VectorXd& a = hp.a();
  const Eigen::VectorXd& k = hp.k();
  const double km = hp.km();
  Eigen::VectorXd grad(m);
  for (int i = 1; i <= m; ++i) {
    grad[i - 1] = -a[i - 1] * k[i] * k[i - 1] * km * f.v0 * f.v2;
  }
  return grad;
}

double laplacian_mean_curvature(const Hyperplane& hp,
                                const ConformalMetric& metric, double z) {
  check_pair(hp, metric, "laplacian_mean_curvature");
  const Jet3 f = eval_f_jet(metric.factor, z);
  const double km = hp.km();
  const double km2 = km * km;
  const int m = hp.m();
  return -(1.0 - km2) * km *
         ((2.0 - m) * f.v0 * f.v1 * f.v2 + f.v0 * f.v0 * f.v3);
}

double ricci_normal(const Hyperplane& hp, const ConformalMetric& metric,
                    double z) {
  check_pair(hp, metric, "ricci_normal");
  const Jet3 f = eval_f_jet(metric.factor, z);
  const double km2 = hp.km() * hp.km();
  const int m = hp.m();
  return (1.0 + (m - 1) * km2) * f.v0 * f.v2 - m * f.v1 * f.v1;
}

Eigen::VectorXd ricci_tangential(const Hyperplane& hp,
                                 const ConformalMetric& metric, double z) {
  check_pair(hp, metric, "ricci_tangential");
  return (hp.m() - 1) * grad_mean_curvature(hp, metric, z);
}

HypersurfaceState hypersurface_state(const Hyperplane& hp,
                                     const ConformalMetric& metric, double z) {
  HypersurfaceState st;
  st.H = mean_curvature(hp, metric, z);
  st.A_norm_sq = shape_operator_norm_sq(hp, metric, z);
  st.gradH = grad_mean_curvature(hp, metric, z);
  st.lapH = laplacian_mean_curvature(hp, metric, z);
  st.ric_normal = ricci_normal(hp, metric, z);
  st.ric_tangential = ricci_tangential(hp, metric, z);
  return st;
}

double laplacian_mean_curvature_fd(const Hyperplane& hp,
                                   const ConformalMetric& metric, double z,
                                   double step) {
  check_pair(hp, metric, "laplacian_mean_curvature_fd");
  const int m = hp.m();
  const Eigen::VectorXd& a = hp.a();
  const double km = hp.km();
  const double norm_sq = a.squaredNorm();

  // Chart the leaf through height z (the geometry is offset-invariant, so
  // anchor it at x0 = 0 regardless of the hyperplane's own c).
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(m);
  auto z_of = [&](const Eigen::VectorXd& x) { return a.dot(x) + z; };
  auto u_of = [&](const Eigen::VectorXd& x) {
    return -km * eval_f_jet(metric.factor, z_of(x)).v1;
  };
  // sqrt(det g) = f^{-m} sqrt(1 + |a|^2), taken in closed form.
  auto sqrt_det = [&](const Eigen::VectorXd& x) {
    const double f = eval_f_jet(metric.factor, z_of(x)).v0;
    return std::pow(f, -m) * std::sqrt(1.0 + norm_sq);
  };
  // g^{ij} = f^2 (delta_ij - a_i a_j / (1 + |a|^2)).
  auto flux = [&](const Eigen::VectorXd& x) {
    const double f = eval_f_jet(metric.factor, z_of(x)).v0;
    Eigen::VectorXd du(m);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      du[j] = (u_of(xp) - u_of(xm)) / (2.0 * step);
    }
    Eigen::VectorXd gdu = du - a * (a.dot(du) / (1.0 + norm_sq));
    return Eigen::VectorXd((f * f * sqrt_det(x)) * gdu);
  };

  double div = 0.0;
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp[i] += step;
    xm[i] -= step;
    div += (flux(xp)[i] - flux(xm)[i]) / (2.0 * step);
  }
  return div / sqrt_det(x0);
}

}  // namespace bihcert
