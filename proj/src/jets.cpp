#include "bihcert/jets.hpp"

#include <cmath>

namespace bihcert {

namespace {

[[noreturn]] void domain_fail(const std::string& what) {
  throw std::domain_error(what);
}

}  // namespace

FactorFamily FactorFamily::constant(double f0) {
  if (!(f0 > 0.0) || !std::isfinite(f0)) {
    throw std::invalid_argument("constant factor requires f0 > 0");
  }
  FactorFamily fam;
  fam.kind_ = Kind::Constant;
  fam.p0_ = f0;
  fam.domain_ = Interval{};  // all of R
  return fam;
}

FactorFamily FactorFamily::power_law(double A, double B, double t) {
  if (!(A > 0.0) || !(B > 0.0) || !std::isfinite(A) || !std::isfinite(B) ||
      !std::isfinite(t)) {
    throw std::invalid_argument("power-law factor requires A > 0, B > 0");
  }
  FactorFamily fam;
  fam.kind_ = Kind::PowerLaw;
  fam.p0_ = A;
  fam.p1_ = B;
  fam.p2_ = t;
  fam.domain_ = Interval{0.0, std::numeric_limits<double>::infinity()};
  return fam;
}

FactorFamily FactorFamily::reciprocal(double A, double B) {
  if (!std::isfinite(A) || !std::isfinite(B)) {
    throw std::invalid_argument("reciprocal factor requires finite A, B");
  }
  FactorFamily fam;
  fam.kind_ = Kind::Reciprocal;
  fam.p0_ = A;
  fam.p1_ = B;
  // Az + B > 0 on the domain.
  if (A > 0.0) {
    fam.domain_ = Interval{-B / A, std::numeric_limits<double>::infinity()};
  } else if (A < 0.0) {
    fam.domain_ = Interval{-std::numeric_limits<double>::infinity(), -B / A};
  } else {
    if (!(B > 0.0)) {
      throw std::invalid_argument("reciprocal with A = 0 requires B > 0");
    }
    fam.domain_ = Interval{};
  }
  return fam;
}

FactorFamily FactorFamily::tabulated(std::function<Jet3(double)> eval,
                                     Interval domain, double error_bound,
                                     std::string label) {
  if (!eval) {
    throw std::invalid_argument("tabulated factor requires a jet callback");
  }
  if (!(error_bound >= 0.0)) {
    throw std::invalid_argument("tabulated factor requires error_bound >= 0");
  }
  FactorFamily fam;
  fam.kind_ = Kind::Tabulated;
  fam.eval_ = std::move(eval);
  fam.domain_ = domain;
  fam.error_bound_ = error_bound;
  fam.label_ = std::move(label);
  return fam;
}

double FactorFamily::constant_value() const {
  if (kind_ != Kind::Constant) {
    throw std::logic_error("constant_value: not a constant family");
  }
  return p0_;
}

double FactorFamily::coeff_a() const {
  if (kind_ != Kind::PowerLaw && kind_ != Kind::Reciprocal) {
    throw std::logic_error("coeff_a: family has no A coefficient");
  }
  return p0_;
}

double FactorFamily::coeff_b() const {
  if (kind_ != Kind::PowerLaw && kind_ != Kind::Reciprocal) {
    throw std::logic_error("coeff_b: family has no B coefficient");
  }
  return p1_;
}

double FactorFamily::exponent() const {
  if (kind_ != Kind::PowerLaw) {
    throw std::logic_error("exponent: not a power-law family");
  }
  return p2_;
}

std::string FactorFamily::describe() const {
  char buf[128];
  switch (kind_) {
    case Kind::Constant:
      std::snprintf(buf, sizeof(buf), "constant(f0=%.17g)", p0_);
      return buf;
    case Kind::PowerLaw:
      std::snprintf(buf, sizeof(buf), "powerlaw(A=%.17g, B=%.17g, t=%.17g)",
                    p0_, p1_, p2_);
      return buf;
    case Kind::Reciprocal:
      std::snprintf(buf, sizeof(buf), "reciprocal(A=%.17g, B=%.17g)", p0_,
                    p1_);
      return buf;
    case Kind::Tabulated:
      return label_;
  }
  return "unknown";
}

Jet3 eval_f_jet(const FactorFamily& family, double z) {
  if (!std::isfinite(z) || !family.contains(z)) {
    domain_fail("eval_f_jet: z outside the factor family domain");
  }
  Jet3 jet;
  switch (family.kind_) {
    case FactorFamily::Kind::Constant:
      jet = Jet3{family.p0_, 0.0, 0.0, 0.0};
      break;
    case FactorFamily::Kind::PowerLaw: {
      const double A = family.p0_, t = family.p2_;
      const double u = A * z + family.p1_;
      const double p = std::pow(u, t);
      jet.v0 = p;
      jet.v1 = t * A * p / u;
      jet.v2 = t * (t - 1.0) * A * A * p / (u * u);
      jet.v3 = t * (t - 1.0) * (t - 2.0) * A * A * A * p / (u * u * u);
      break;
    }
    case FactorFamily::Kind::Reciprocal: {
      const double A = family.p0_;
      const double u = A * z + family.p1_;
      const double inv = 1.0 / u;
      jet.v0 = inv;
      jet.v1 = -A * inv * inv;
      jet.v2 = 2.0 * A * A * inv * inv * inv;
      jet.v3 = -6.0 * A * A * A * inv * inv * inv * inv;
      break;
    }
    case FactorFamily::Kind::Tabulated:
      jet = family.eval_(z);
      break;
  }
  if (!jet.finite() || !(jet.v0 > 0.0)) {
    domain_fail("eval_f_jet: factor evaluation not finite and positive");
  }
  return jet;
}

Jet3 sigma_jet(const Jet3& f) {
  if (!(f.v0 > 0.0)) {
    domain_fail("sigma_jet: requires f > 0");
  }
  const double r1 = f.v1 / f.v0;
  const double r2 = f.v2 / f.v0;
  const double r3 = f.v3 / f.v0;
  Jet3 s;
  s.v0 = std::log(f.v0);
  s.v1 = r1;
  s.v2 = r2 - r1 * r1;
  s.v3 = r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1;
  return s;
}

}  // namespace bihcert
