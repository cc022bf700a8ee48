#include "bihcert/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "bihcert/sampling.hpp"

namespace bihcert {

namespace {

void check_dim(const ConformalMetric& metric, const Eigen::VectorXd& v,
               const char* what) {
  if (v.size() != metric.ambient_dim) {
    throw std::invalid_argument(std::string(what) +
                                ": vector size does not match ambient_dim");
  }
}

double coordinate_scale(double x) { return std::max(1.0, std::abs(x)); }

// 4th-order central first derivative of a matrix-valued function of one
// coordinate of the evaluation point.
template <typename F>
Eigen::MatrixXd central4(const F& f, const Eigen::VectorXd& p, int dir,
                         double h) {
  Eigen::VectorXd q = p;
  q[dir] = p[dir] + h;
  Eigen::MatrixXd fp1 = f(q);
  q[dir] = p[dir] - h;
  Eigen::MatrixXd fm1 = f(q);
  q[dir] = p[dir] + 2.0 * h;
  Eigen::MatrixXd fp2 = f(q);
  q[dir] = p[dir] - 2.0 * h;
  Eigen::MatrixXd fm2 = f(q);
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

template <typename F>
Eigen::MatrixXd central4_maybe_richardson(const F& f, const Eigen::VectorXd& p,
                                          int dir, double h, bool richardson) {
  Eigen::MatrixXd d = central4(f, p, dir, h);
  if (!richardson) return d;
  Eigen::MatrixXd d2 = central4(f, p, dir, 0.5 * h);
  return (16.0 * d2 - d) / 15.0;  // cancels the h^4 truncation term
}

void check_fd_margin(const ConformalMetric& metric, double z, double reach) {
  const Interval& dom = metric.factor.domain();
  if (!(z - reach > dom.lo) || !(z + reach < dom.hi)) {
    throw std::domain_error(
        "finite-difference stencil leaves the factor domain; move the point "
        "inward or shrink the step");
  }
}

}  // namespace

ConnectionTable frame_connection(const ConformalMetric& metric, double z) {
  const Jet3 f = eval_f_jet(metric.factor, z);
  return ConnectionTable{metric.ambient_dim, f.v1};
}

Eigen::MatrixXd metric_components(const ConformalMetric& metric,
                                  const Eigen::VectorXd& point) {
  check_dim(metric, point, "metric_components");
  const double f = eval_f_jet(metric.factor, point[point.size() - 1]).v0;
  const int n = metric.ambient_dim;
  return Eigen::MatrixXd::Identity(n, n) / (f * f);
}

std::vector<Eigen::MatrixXd> coordinate_christoffels_fd(
    const ConformalMetric& metric, const Eigen::VectorXd& point,
    const FdOptions& opt) {
  check_dim(metric, point, "coordinate_christoffels_fd");
  const int n = metric.ambient_dim;
  const double z = point[n - 1];
  const double hz = opt.metric_step * coordinate_scale(z);
  check_fd_margin(metric, z, 2.0 * hz * 1.0001);

  auto h_of = [&](const Eigen::VectorXd& p) {
    return metric_components(metric, p);
  };

  std::vector<Eigen::MatrixXd> dh(n);
  for (int a = 0; a < n; ++a) {
    const double step = opt.metric_step * coordinate_scale(point[a]);
    dh[a] = central4_maybe_richardson(h_of, point, a, step, opt.richardson);
  }

  const Eigen::MatrixXd h = metric_components(metric, point);
  const Eigen::MatrixXd hinv = h.inverse();

  std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        double sum = 0.0;
        for (int d = 0; d < n; ++d) {
          sum += hinv(c, d) * (dh[a](d, b) + dh[b](d, a) - dh[d](a, b));
        }
        gamma[c](a, b) = 0.5 * sum;
        gamma[c](b, a) = gamma[c](a, b);  // symmetrized exactly
      }
    }
  }
  return gamma;
}

double riemann_coordinate_fd(const ConformalMetric& metric,
                             const Eigen::VectorXd& point,
                             const Eigen::VectorXd& Wc,
                             const Eigen::VectorXd& Zc,
                             const Eigen::VectorXd& Xc,
                             const Eigen::VectorXd& Yc, const FdOptions& opt) {
  check_dim(metric, point, "riemann_coordinate_fd");
  check_dim(metric, Wc, "riemann_coordinate_fd");
  const int n = metric.ambient_dim;
  const double z = point[n - 1];
  const double hz = opt.christoffel_step * coordinate_scale(z);
  const double hm = opt.metric_step * coordinate_scale(z);
  check_fd_margin(metric, z, (2.0 * hz + 2.0 * hm) * 1.0001);

  const std::vector<Eigen::MatrixXd> gamma =
      coordinate_christoffels_fd(metric, point, opt);

  // dgamma[a][c](b,d) = d_a Gamma^c_{bd}, 4th-order central differences.
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(n);
  for (int a = 0; a < n; ++a) {
    const double step = opt.christoffel_step * coordinate_scale(point[a]);
    std::vector<std::vector<Eigen::MatrixXd>> shifted(4);
    const double offs[4] = {step, -step, 2.0 * step, -2.0 * step};
    for (int s = 0; s < 4; ++s) {
      Eigen::VectorXd q = point;
      q[a] += offs[s];
      shifted[s] = coordinate_christoffels_fd(metric, q, opt);
    }
    dgamma[a].resize(n);
    for (int c = 0; c < n; ++c) {
      dgamma[a][c] = (shifted[3][c] - 8.0 * shifted[1][c] +
                      8.0 * shifted[0][c] - shifted[2][c]) /
                     (12.0 * step);
    }
  }

  // R^d_{abg} = d_a Gamma^d_{bg} - d_b Gamma^d_{ag}
  //           + Gamma^d_{al} Gamma^l_{bg} - Gamma^d_{bl} Gamma^l_{ag}.
  // value = h_{de} W^e R^d_{abg} X^a Y^b Z^g.
  const Eigen::MatrixXd h = metric_components(metric, point);
  const Eigen::VectorXd hW = h * Wc;  // lowered W
  double value = 0.0;
  for (int a = 0; a < n; ++a) {
    if (Xc[a] == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      if (Yc[b] == 0.0) continue;
      for (int g = 0; g < n; ++g) {
        if (Zc[g] == 0.0) continue;
        for (int d = 0; d < n; ++d) {
          double r = dgamma[a][d](b, g) - dgamma[b][d](a, g);
          for (int l = 0; l < n; ++l) {
            r += gamma[d](a, l) * gamma[l](b, g) -
                 gamma[d](b, l) * gamma[l](a, g);
          }
          value += hW[d] * r * Xc[a] * Yc[b] * Zc[g];
        }
      }
    }
  }
  return value;
}

double conformal_riemann_flat_base(double e2u, const Eigen::VectorXd& grad_u,
                                   const Eigen::MatrixXd& hess_u,
                                   const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y) {
  auto dot = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b);
  };
  auto hess = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(hess_u * b);
  };
  auto du = [&](const Eigen::VectorXd& a) { return grad_u.dot(a); };
  const double gn2 = grad_u.squaredNorm();

  const double terms =
      hess(x, z) * dot(y, w) - hess(y, z) * dot(x, w) +
      dot(x, z) * hess(y, w) - dot(y, z) * hess(x, w) +
      (du(y) * du(z) - dot(y, z) * gn2) * dot(x, w) -
      (du(x) * du(z) - dot(x, z) * gn2) * dot(y, w) +
      (du(x) * dot(y, z) - du(y) * dot(x, z)) * du(w);
  return e2u * terms;
}

namespace {

// Gradient/Hessian data of u = -ln f for the z-only conformal factor.
struct ZOnlyConformalData {
  double f;
  Eigen::VectorXd grad_u;
  Eigen::MatrixXd hess_u;
  double e2u;
};

ZOnlyConformalData z_only_data(const ConformalMetric& metric, double z) {
  const Jet3 f = eval_f_jet(metric.factor, z);
  const Jet3 s = sigma_jet(f);
  const int n = metric.ambient_dim;
  ZOnlyConformalData d;
  d.f = f.v0;
  d.grad_u = Eigen::VectorXd::Zero(n);
  d.grad_u[n - 1] = -s.v1;
  d.hess_u = Eigen::MatrixXd::Zero(n, n);
  d.hess_u(n - 1, n - 1) = -s.v2;
  d.e2u = 1.0 / (f.v0 * f.v0);
  return d;
}

}  // namespace

double riemann_conformal(const ConformalMetric& metric, double z,
                         const FrameVector& W, const FrameVector& Z,
                         const FrameVector& X, const FrameVector& Y) {
  check_dim(metric, W, "riemann_conformal");
  check_dim(metric, Z, "riemann_conformal");
  check_dim(metric, X, "riemann_conformal");
  check_dim(metric, Y, "riemann_conformal");
  const ZOnlyConformalData d = z_only_data(metric, z);
  // Coordinate components of frame vectors are f times frame components.
  return conformal_riemann_flat_base(d.e2u, d.grad_u, d.hess_u, d.f * W,
                                     d.f * Z, d.f * X, d.f * Y);
}

double ricci_conformal(const ConformalMetric& metric, double z,
                       const FrameVector& X, const FrameVector& Y) {
  check_dim(metric, X, "ricci_conformal");
  check_dim(metric, Y, "ricci_conformal");
  const Jet3 f = eval_f_jet(metric.factor, z);
  const Jet3 s = sigma_jet(f);
  const int n = metric.ambient_dim;
  const int zi = n - 1;
  // Contracted conformal transformation with flat base and u = -sigma:
  //   Ric_jk = -(n-2) u_jk - delta_jk [Lap u + (n-2) |grad u|^2],
  //   u_jk = dd u - (du)(du).
  const double sp = s.v1, spp = s.v2;
  const double u_zz = -spp - sp * sp;
  const double trace_part = -(-spp + (n - 2) * sp * sp);
  const double zz_part = -(n - 2) * u_zz;
  // Contract with coordinate components f*X, f*Y.
  return f.v0 * f.v0 *
         (zz_part * X[zi] * Y[zi] + trace_part * X.dot(Y));
}

double sectional(const ConformalMetric& metric, double z,
                 const PlaneSection& P) {
  check_dim(metric, P.X, "sectional");
  check_dim(metric, P.Y, "sectional");
  const double tol = 1e-9;
  if (std::abs(P.X.squaredNorm() - 1.0) > tol ||
      std::abs(P.Y.squaredNorm() - 1.0) > tol ||
      std::abs(P.X.dot(P.Y)) > tol) {
    throw std::invalid_argument("sectional: plane basis is not orthonormal");
  }
  const Jet3 f = eval_f_jet(metric.factor, z);
  const int zi = metric.ambient_dim - 1;
  const double xz = P.X[zi], yz = P.Y[zi];
  return (xz * xz + yz * yz) * f.v0 * f.v2 - f.v1 * f.v1;
}

std::vector<double> default_z_grid(const FactorFamily& family, int count) {
  if (count < 1) {
    throw std::invalid_argument("default_z_grid: count must be >= 1");
  }
  double lo = 0.1, hi = 10.0;
  switch (family.kind()) {
    case FactorFamily::Kind::PowerLaw:
    case FactorFamily::Kind::Reciprocal: {
      const double A = family.coeff_a();
      const double B = family.coeff_b();
      if (A > 0.0) {
        lo = B / (10.0 * A);
        hi = 10.0 * (1.0 + B) / A;
        break;
      }
      [[fallthrough]];  // A <= 0 reciprocal: fall back to the domain window
    }
    case FactorFamily::Kind::Tabulated: {
      const Interval& dom = family.domain();
      if (dom.bounded()) {
        const double margin = 0.01 * (dom.hi - dom.lo);
        lo = dom.lo + margin;
        hi = dom.hi - margin;
      } else if (std::isfinite(dom.lo)) {
        lo = dom.lo + 0.01 * std::max(1.0, std::abs(dom.lo));
        hi = lo + 9.9;
      } else if (std::isfinite(dom.hi)) {
        hi = dom.hi - 0.01 * std::max(1.0, std::abs(dom.hi));
        lo = hi - 9.9;
      }
      break;
    }
    case FactorFamily::Kind::Constant:
      break;
  }
  // Clip to the declared open domain.
  const Interval& dom = family.domain();
  if (std::isfinite(dom.lo)) {
    lo = std::max(lo, dom.lo + 1e-6 * std::max(1.0, std::abs(dom.lo)));
  }
  if (std::isfinite(dom.hi)) {
    hi = std::min(hi, dom.hi - 1e-6 * std::max(1.0, std::abs(dom.hi)));
  }
  if (!(lo < hi)) {
    throw std::domain_error("default_z_grid: empty sampling window");
  }

  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    return grid;
  }
  if (lo > 0.0) {
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i) {
      grid[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    }
  } else {
    for (int i = 0; i < count; ++i) {
      grid[i] = lo + (hi - lo) * i / (count - 1);
    }
  }
  return grid;
}

ScanReport curvature_sign_scan(const ConformalMetric& metric, int z_count,
                               int plane_count, std::uint64_t seed) {
  if (z_count < 1 || plane_count < 1) {
    throw std::invalid_argument("curvature_sign_scan: sample counts >= 1");
  }
  const int n = metric.ambient_dim;
  const int zi = n - 1;
  GaussianSampler rng(seed);

  ScanReport report;
  report.seed = seed;
  report.z_count = z_count;
  report.plane_count = plane_count;
  report.z_grid = default_z_grid(metric.factor, z_count);
  report.max_k = -std::numeric_limits<double>::infinity();

  for (int iz = 0; iz < z_count; ++iz) {
    const double z = report.z_grid[iz];
    const Jet3 f = eval_f_jet(metric.factor, z);
    const double ffpp = f.v0 * f.v2;
    const double fp2 = f.v1 * f.v1;
    for (int ip = 0; ip < plane_count; ++ip) {
      Eigen::VectorXd x = rng.gaussian_vector(n);
      Eigen::VectorXd y = rng.gaussian_vector(n);
      double xn = x.norm();
      while (xn < 1e-8) {
        x = rng.gaussian_vector(n);
        xn = x.norm();
      }
      x /= xn;
      y -= y.dot(x) * x;
      double yn = y.norm();
      while (yn < 1e-8) {
        y = rng.gaussian_vector(n);
        y -= y.dot(x) * x;
        yn = y.norm();
      }
      y /= yn;
      const double k = (x[zi] * x[zi] + y[zi] * y[zi]) * ffpp - fp2;
      if (k > report.max_k) {
        report.max_k = k;
        report.argmax_z_index = iz;
        report.argmax_z = z;
        report.argmax_plane_index = ip;
        report.argmax_plane = PlaneSection{x, y};
      }
    }
  }
  return report;
}

}  // namespace bihcert
