#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bihcert/jets.hpp"

namespace bihcert {

/// Conformally flat metric h = f^{-2}(z) (sum_i dx_i^2 + dz^2) on a slab of
/// R^n, n = m + 1, with z the last coordinate.
struct ConformalMetric {
  ConformalMetric(int ambient_dim_, FactorFamily factor_)
      : ambient_dim(ambient_dim_), factor(std::move(factor_)) {
    if (ambient_dim < 3) {
      throw std::invalid_argument("ConformalMetric requires ambient_dim >= 3");
    }
  }

  int ambient_dim;      ///< n = m + 1
  FactorFamily factor;  ///< conformal factor f(z)

  int hypersurface_dim() const { return ambient_dim - 1; }
};

/// Vectors carry components in the h-orthonormal frame eb_a = f(z) d_a,
/// so the h-inner product of two FrameVectors is the Euclidean dot product
/// of their components. Coordinate components are f times frame components.
using FrameVector = Eigen::VectorXd;

/// 2-plane spanned by an orthonormal pair of frame vectors.
struct PlaneSection {
  FrameVector X;
  FrameVector Y;
};

/// Levi-Civita connection of h in the frame {eb_a}: nabla_{eb_i} eb_i =
/// f' eb_z, nabla_{eb_i} eb_z = -f' eb_i for i < z, nabla_{eb_z} . = 0,
/// all other entries zero. The whole table is determined by (dim, f').
struct ConnectionTable {
  int dim = 0;
  double fprime = 0.0;

  /// <nabla_{eb_a} eb_b, eb_c>.
  double coeff(int a, int b, int c) const {
    const int z = dim - 1;
    if (a == z) return 0.0;
    if (a == b && c == z) return fprime;
    if (b == z && c == a) return -fprime;
    return 0.0;
  }

  /// nabla_{eb_a} eb_b as frame components.
  FrameVector entry(int a, int b) const {
    FrameVector v = FrameVector::Zero(dim);
    const int z = dim - 1;
    if (a == z) return v;
    if (a == b) v[z] = fprime;
    if (b == z) v[a] = -fprime;
    return v;
  }

  /// nabla_X Y for fields whose frame components are the constant vectors
  /// x, y. (The adapted-frame fields of a graph hyperplane are of this form.)
  FrameVector covariant_constant_fields(const FrameVector& x,
                                        const FrameVector& y) const {
    const int z = dim - 1;
    FrameVector out = FrameVector::Zero(dim);
    double diag = 0.0;
    for (int i = 0; i < z; ++i) {
      diag += x[i] * y[i];
      out[i] = -fprime * x[i] * y[z];
    }
    out[z] = fprime * diag;
    return out;
  }
};

ConnectionTable frame_connection(const ConformalMetric& metric, double z);

/// Metric components h_ab(point) = f^{-2}(z) delta_ab in coordinates.
Eigen::MatrixXd metric_components(const ConformalMetric& metric,
                                  const Eigen::VectorXd& point);

/// Finite-difference settings for the coordinate-tensor oracle.
struct FdOptions {
  double metric_step = 1e-4;      ///< relative step for d(metric)
  double christoffel_step = 1e-3; ///< relative step for d(Christoffel)
  bool richardson = false;        ///< extrapolate the metric derivatives
};

/// Christoffel symbols Gamma^c_{ab} of h at an interior point, from
/// 4th-order central differences of the metric components. Symmetric in
/// (a, b) by construction. Throws std::domain_error when the stencil
/// would leave the factor domain.
std::vector<Eigen::MatrixXd> coordinate_christoffels_fd(
    const ConformalMetric& metric, const Eigen::VectorXd& point,
    const FdOptions& opt = {});

/// (0,4) curvature h(R(X,Y)Z, W) with R(X,Y)Z = [nabla_X, nabla_Y]Z -
/// nabla_{[X,Y]}Z, evaluated on coordinate-component vectors by
/// finite-differencing the Christoffel symbols. Fully independent of the
/// conformal transformation formulas; used as the convention-free oracle.
double riemann_coordinate_fd(const ConformalMetric& metric,
                             const Eigen::VectorXd& point,
                             const Eigen::VectorXd& Wc,
                             const Eigen::VectorXd& Zc,
                             const Eigen::VectorXd& Xc,
                             const Eigen::VectorXd& Yc,
                             const FdOptions& opt = {});

/// Curvature of gbar = e^{2u} delta over a flat base, evaluated on
/// coordinate-component vectors, from the gradient and Hessian of u.
/// This is the conformal transformation of the curvature tensor with the
/// base curvature set to zero; the z-only metrics and the constant-curvature
/// sanity checks both route through it.
double conformal_riemann_flat_base(double e2u, const Eigen::VectorXd& grad_u,
                                   const Eigen::MatrixXd& hess_u,
                                   const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y);

/// h(R(X,Y)Z, W) for frame-component vectors, via the conformal
/// transformation formulas applied to the flat base with u = -ln f.
double riemann_conformal(const ConformalMetric& metric, double z,
                         const FrameVector& W, const FrameVector& Z,
                         const FrameVector& X, const FrameVector& Y);

/// Ric(X, Y) for frame-component vectors, via the contracted conformal
/// transformation formula (an independent route from riemann_conformal;
/// the trace identity between them is a test invariant).
double ricci_conformal(const ConformalMetric& metric, double z,
                       const FrameVector& X, const FrameVector& Y);

/// Sectional curvature of the plane P. For these metrics
///   K(P) = (X_z^2 + Y_z^2) f f'' - (f')^2
/// with X_z, Y_z the z-frame-components of the orthonormal basis.
/// Throws std::invalid_argument when P is not orthonormal.
double sectional(const ConformalMetric& metric, double z,
                 const PlaneSection& P);

/// Default z-grid: count log-spaced points in the factor domain intersected
/// with [B/(10A), 10(1+B)/A] for the power-law and reciprocal families,
/// [0.1, 10] for constant factors, and the declared domain (1% margins)
/// otherwise.
std::vector<double> default_z_grid(const FactorFamily& family, int count);

/// Result of a curvature sign scan.
struct ScanReport {
  double max_k = 0.0;
  int argmax_z_index = 0;
  double argmax_z = 0.0;
  int argmax_plane_index = 0;
  PlaneSection argmax_plane;
  std::uint64_t seed = 0;
  int z_count = 0;
  int plane_count = 0;
  std::vector<double> z_grid;
};

/// Supremum of the sectional curvature over z_count grid points and
/// plane_count random planes per point. Planes are Gaussian pairs
/// orthonormalized; the draw is fully determined by the seed, and ties in
/// the maximum keep the lexicographically smallest (z, plane) index.
ScanReport curvature_sign_scan(const ConformalMetric& metric, int z_count,
                               int plane_count, std::uint64_t seed);

}  // namespace bihcert
