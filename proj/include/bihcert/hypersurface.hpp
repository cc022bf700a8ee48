#pragma once

#include <Eigen/Dense>

#include "bihcert/curvature.hpp"

namespace bihcert {

/// Graph hyperplane z = sum_i a_i x_i + c in the conformally flat space.
///
/// The derived coefficients k_0 = 1, k_i = 1/sqrt(1 + sum_{l<=i} a_l^2)
/// drive every adapted-frame and curvature formula; k_m in particular is
/// the cosine of the tilt of the plane against the horizontal.
class Hyperplane {
 public:
  Hyperplane(Eigen::VectorXd a, double c);

  const Eigen::VectorXd& a() const { return a_; }
  double c() const { return c_; }
  int m() const { return static_cast<int>(a_.size()); }

  /// k_0..k_m (m+1 entries).
  const Eigen::VectorXd& k() const { return k_; }
  double km() const { return k_[k_.size() - 1]; }

 private:
  Eigen::VectorXd a_;
  double c_ = 0.0;
  Eigen::VectorXd k_;
};

/// Orthonormal frame adapted to the hyperplane: m tangent vectors and the
/// unit normal, all as frame components in {eb_a}.
struct AdaptedFrame {
  Eigen::MatrixXd tangent;  ///< (m+1) x m, column i holds e_i
  FrameVector normal;       ///< xi

  FrameVector tangent_vector(int i) const { return tangent.col(i); }
};

/// Closed-form adapted frame:
///   e_i = -a_i k_i k_{i-1} sum_{l<i} a_l eb_l + (k_i/k_{i-1}) eb_i
///         + a_i k_i k_{i-1} eb_z,
///   xi  = k_m (sum_l a_l eb_l - eb_z).
AdaptedFrame adapted_frame(const Hyperplane& hp);

/// Modified Gram-Schmidt with one re-orthogonalization pass over the columns
/// of the input. Throws std::invalid_argument on rank deficiency. Spans are
/// preserved stepwise: the first j output columns span the same subspace as
/// the first j input columns.
Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& columns);

/// Mean curvature H = xi(sigma) = -k_m f'(z). The leaves are totally
/// umbilical, so H is also every principal curvature.
double mean_curvature(const Hyperplane& hp, const ConformalMetric& metric,
                      double z);

/// |A|^2 = m k_m^2 (f')^2 = m H^2.
double shape_operator_norm_sq(const Hyperplane& hp,
                              const ConformalMetric& metric, double z);

/// grad_g H in the adapted tangent basis: component_i = e_i(H)
/// = -a_i k_i k_{i-1} k_m f f''.
Eigen::VectorXd grad_mean_curvature(const Hyperplane& hp,
                                    const ConformalMetric& metric, double z);

/// Laplace-Beltrami of H on the leaf:
///   Lap H = -(1 - k_m^2) k_m [(2 - m) f f' f'' + f^2 f'''].
double laplacian_mean_curvature(const Hyperplane& hp,
                                const ConformalMetric& metric, double z);

/// Ric(xi, xi) = [1 + (m-1) k_m^2] f f'' - m (f')^2.
double ricci_normal(const Hyperplane& hp, const ConformalMetric& metric,
                    double z);

/// Tangential part of the Ricci operator applied to the normal:
/// (Ric(xi))^T = (m-1) grad_g H, in the adapted tangent basis.
Eigen::VectorXd ricci_tangential(const Hyperplane& hp,
                                 const ConformalMetric& metric, double z);

/// All hypersurface quantities at one z, computed from a single jet.
struct HypersurfaceState {
  double H = 0.0;
  double A_norm_sq = 0.0;
  Eigen::VectorXd gradH;
  double lapH = 0.0;
  double ric_normal = 0.0;
  Eigen::VectorXd ric_tangential;
};

HypersurfaceState hypersurface_state(const Hyperplane& hp,
                                     const ConformalMetric& metric, double z);

/// Finite-difference Laplace-Beltrami oracle for H on the leaf, in the graph
/// chart x -> (x, z(x)): divergence form
///   Lap u = |g|^{-1/2} d_i (|g|^{1/2} g^{ij} d_j u)
/// with the induced metric g = f^{-2}(z(x)) (delta + a a^T), its determinant
/// taken in closed form and all derivatives 2nd-order central differences of
/// step `step`. Independent of the closed-form Laplacian it checks.
double laplacian_mean_curvature_fd(const Hyperplane& hp,
                                   const ConformalMetric& metric, double z,
                                   double step = 1e-3);

}  // namespace bihcert
