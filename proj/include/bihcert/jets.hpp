#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace bihcert {

/// Value of a scalar function of z together with its first three
/// z-derivatives at a point. Third order is the highest derivative any
/// downstream formula consumes (f''' enters the normal residual and the
/// Laplacian of the mean curvature; nothing needs more).
struct Jet3 {
  double v0 = 0.0;  ///< value
  double v1 = 0.0;  ///< d/dz
  double v2 = 0.0;  ///< d2/dz2
  double v3 = 0.0;  ///< d3/dz3

  bool finite() const {
    return std::isfinite(v0) && std::isfinite(v1) && std::isfinite(v2) &&
           std::isfinite(v3);
  }
};

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double z) const { return z > lo && z < hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// One-parameter family of conformal factors f(z).
///
/// Closed-form variants:
///   Constant    f(z) = f0,            f0 > 0, domain R
///   PowerLaw    f(z) = (A z + B)^t,   A > 0, B > 0, domain z > 0
///   Reciprocal  f(z) = 1 / (A z + B), domain { z : A z + B > 0 }
///
/// The Tabulated variant wraps numeric data (typically an integrated
/// trajectory) behind a jet callback; it must declare its own error bound
/// since the closed-form guarantees do not apply.
class FactorFamily {
 public:
  enum class Kind { Constant, PowerLaw, Reciprocal, Tabulated };

  static FactorFamily constant(double f0);
  static FactorFamily power_law(double A, double B, double t);
  static FactorFamily reciprocal(double A, double B);
  static FactorFamily tabulated(std::function<Jet3(double)> eval,
                                Interval domain, double error_bound,
                                std::string label = "tabulated");

  Kind kind() const { return kind_; }
  const Interval& domain() const { return domain_; }
  bool contains(double z) const { return domain_.contains(z); }

  /// Declared evaluation error bound; exactly 0 for closed-form variants.
  double error_bound() const { return error_bound_; }

  /// Constant value f0. Valid only for Kind::Constant.
  double constant_value() const;
  /// Coefficients A, B of A z + B. Valid for PowerLaw and Reciprocal.
  double coeff_a() const;
  double coeff_b() const;
  /// Exponent t. Valid only for PowerLaw.
  double exponent() const;

  /// Short human-readable description, used in reports.
  std::string describe() const;

  friend Jet3 eval_f_jet(const FactorFamily& family, double z);

 private:
  FactorFamily() = default;

  Kind kind_ = Kind::Constant;
  Interval domain_;
  double p0_ = 0.0;  // f0 | A
  double p1_ = 0.0;  // B
  double p2_ = 0.0;  // t
  double error_bound_ = 0.0;
  std::function<Jet3(double)> eval_;
  std::string label_;
};

/// Jet of the conformal factor f at z. Throws std::domain_error when z lies
/// outside the family's declared domain or the evaluation is not finite.
Jet3 eval_f_jet(const FactorFamily& family, double z);

/// Jet of sigma = ln f from the jet of f. Throws std::domain_error when
/// f <= 0.
///
///   sigma'   = f'/f
///   sigma''  = f''/f - (f'/f)^2
///   sigma''' = f'''/f - 3 f' f''/f^2 + 2 (f'/f)^3
Jet3 sigma_jet(const Jet3& f);

}  // namespace bihcert
