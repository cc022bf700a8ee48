#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bihcert/biharmonic.hpp"
#include "support.hpp"

using namespace bihcert;
using test::random_coefficients;
using test::random_family;

namespace {

Eigen::VectorXd constraint_tilt(double t, int m = 4) {
  const double r = std::sqrt(2.0 * t / (1.0 - 2.0 * t));
  return Eigen::VectorXd::Constant(m, r / std::sqrt(double(m)));
}

}  // namespace

TEST_CASE("general residual: trivial and known-zero cases") {
  SUBCASE("constant factor is minimal, residual zero") {
    ConformalMetric metric(5, FactorFamily::constant(2.0));
    Eigen::VectorXd a(4);
    a << 0.7, -0.2, 0.1, 0.4;
    const ResidualPair r = residual_general(Hyperplane(a, 0.0), metric, 1.0);
    CHECK(r.normal == 0.0);
    CHECK(r.tangential.norm() == 0.0);
  }
  SUBCASE("reciprocal horizontal leaf: residual zero with H nonzero") {
    GaussianSampler rng(21);
    for (int m = 2; m <= 8; ++m) {
      const double A = rng.uniform(0.5, 2.0), B = rng.uniform(0.5, 2.0);
      ConformalMetric metric(m + 1, FactorFamily::reciprocal(A, B));
      const Hyperplane hp(Eigen::VectorXd::Zero(m), 0.0);
      for (int trial = 0; trial < 10; ++trial) {
        const double z = rng.uniform(0.1, 5.0);
        const ResidualPair r = residual_general(hp, metric, z);
        const Jet3 f = eval_f_jet(metric.factor, z);
        const double scale = std::abs(f.v0 * f.v0 * f.v3);
        CHECK(std::abs(r.normal) < 1e-12 * scale);
        CHECK(r.tangential.cwiseAbs().maxCoeff() < 1e-12 * scale);
        CHECK(mean_curvature(hp, metric, z) != 0.0);
      }
    }
  }
  SUBCASE("m = 3 tilted power law obstructs tangentially") {
    ConformalMetric metric(4, FactorFamily::power_law(1.0, 1.0, 0.3));
    Eigen::VectorXd a(3);
    a << 0.5, 0.2, -0.4;
    const Hyperplane hp(a, 0.0);
    const double z = 1.3;
    const Jet3 f = eval_f_jet(metric.factor, z);
    REQUIRE(f.v0 * f.v1 * f.v2 != 0.0);
    const ResidualPair r = residual_general(hp, metric, z);
    CHECK(r.tangential.cwiseAbs().maxCoeff() >
          0.1 * std::abs(f.v0 * f.v1 * f.v2) * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("reduced residual closed forms") {
  SUBCASE("f' = 0 gives the trivial solution") {
    Eigen::VectorXd a(5);
    a << 1.0, 0.0, -2.0, 0.3, 0.8;
    const Hyperplane hp(a, 0.0);
    const ResidualPair r = residual_reduced(5, hp, Jet3{2.0, 0.0, 0.0, 0.0});
    CHECK(r.normal == 0.0);
    CHECK(r.tangential.norm() == 0.0);
  }
  SUBCASE("m = 4 kills the tangential line identically") {
    GaussianSampler rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const Hyperplane hp(random_coefficients(rng, 4, 2.0), 0.0);
      const Jet3 jet{rng.uniform(0.5, 2.0), rng.gaussian(), rng.gaussian(),
                     rng.gaussian()};
      const ResidualPair r = residual_reduced(4, hp, jet);
      CHECK(r.tangential.cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("m != 4 obstruction bound is exact") {
    GaussianSampler rng(24);
    for (int trial = 0; trial < 200; ++trial) {
      int m = 2 + static_cast<int>(rng.uniform(0.0, 7.0));
      if (m == 4) m = 5;
      const Hyperplane hp(random_coefficients(rng, m, 1.5), 0.0);
      const Jet3 jet{rng.uniform(0.5, 2.0), rng.uniform(0.2, 1.5),
                     rng.uniform(0.2, 1.5), rng.gaussian()};
      const ResidualPair r = residual_reduced(m, hp, jet);
      const double bound = std::abs(m - 4.0) *
                           std::abs(jet.v0 * jet.v1 * jet.v2) *
                           hp.a().cwiseAbs().maxCoeff();
      CHECK(r.tangential.cwiseAbs().maxCoeff() >= bound - 1e-12);
    }
  }
}

TEST_CASE("general and reduced residuals are the same system") {
  // 500 random configurations across m in {2..8}; the assembled route must
  // reproduce the direct polynomial route to 1e-10. This is the numerical
  // certificate for the whole closed-form chain (H, |A|^2, grad H, Lap H,
  // Ric(xi,xi), (Ric(xi))^T) at once.
  GaussianSampler rng(2500);
  for (int trial = 0; trial < 500; ++trial) {
    const FactorFamily fam = random_family(rng);
    const int m = 2 + static_cast<int>(rng.uniform(0.0, 7.0));
    ConformalMetric metric(m + 1, fam);
    const bool horizontal = rng.uniform() < 0.1;
    const Hyperplane hp(horizontal ? Eigen::VectorXd::Zero(m)
                                   : random_coefficients(rng, m, 1.5),
                        rng.gaussian());
    const double z = test::random_domain_z(rng, fam, 0.2);
    const Jet3 f = eval_f_jet(fam, z);

    const ResidualPair general = residual_general(hp, metric, z);
    const ResidualPair reduced = residual_reduced(m, hp, f);

    const double scale = std::max({1.0, std::abs(general.normal),
                                   std::abs(reduced.normal)});
    CHECK(std::abs(general.normal - reduced.normal) < 1e-10 * scale);
    for (int i = 0; i < m; ++i) {
      const double ts = std::max({1.0, std::abs(general.tangential[i]),
                                  std::abs(reduced.tangential[i])});
      CHECK(std::abs(general.tangential[i] - reduced.tangential[i]) <
            1e-10 * ts);
    }
  }
}

TEST_CASE("single equation residual") {
  SUBCASE("power law on the constraint sphere vanishes") {
    GaussianSampler rng(26);
    for (int trial = 0; trial < 100; ++trial) {
      const double t = rng.uniform(0.01, 0.49);
      const FactorFamily fam = FactorFamily::power_law(
          rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), t);
      const Eigen::VectorXd a = constraint_tilt(t);
      const double z = rng.uniform(0.1, 20.0);
      CHECK(residual_single_normalized(a, eval_f_jet(fam, z)) < 1e-12);
    }
  }
  SUBCASE("constant f (the f' = 0 branch) vanishes") {
    Eigen::VectorXd a(4);
    a << 0.3, 0.3, 0.3, 0.3;
    CHECK(residual_single(a, Jet3{1.5, 0.0, 0.0, 0.0}) == 0.0);
    CHECK(residual_single_normalized(a, Jet3{1.5, 0.0, 0.0, 0.0}) == 0.0);
  }
  SUBCASE("off-constraint |a|^2 = 0.7 at t = 1/6 fails") {
    const FactorFamily fam = FactorFamily::power_law(1.0, 1.0, 1.0 / 6.0);
    Eigen::VectorXd a = Eigen::VectorXd::Constant(4, std::sqrt(0.7) / 2.0);
    const double z = 1.7;
    CHECK(residual_single_normalized(a, eval_f_jet(fam, z)) > 1e-3);
  }
  SUBCASE("consistency with the reduced normal line at m = 4") {
    // single = -(1 + |a|^2) * reduced_normal.
    GaussianSampler rng(27);
    for (int trial = 0; trial < 200; ++trial) {
      const Hyperplane hp(random_coefficients(rng, 4, 1.5), 0.0);
      const Jet3 jet{rng.uniform(0.5, 2.0), rng.gaussian(), rng.gaussian(),
                     rng.gaussian()};
      const double single = residual_single(hp.a(), jet);
      const ResidualPair reduced = residual_reduced(4, hp, jet);
      const double expected = -(1.0 + hp.a().squaredNorm()) * reduced.normal;
      CHECK(std::abs(single - expected) <
            1e-12 * std::max(1.0, std::abs(single)));
    }
  }
  SUBCASE("scale invariance of the normalized verdict") {
    GaussianSampler rng(28);
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::VectorXd a = random_coefficients(rng, 4, 1.0);
      const Jet3 jet{rng.uniform(0.5, 2.0), rng.gaussian(), rng.gaussian(),
                     rng.gaussian()};
      const double lambda = std::exp(rng.uniform(-6.0, 6.0));
      const Jet3 scaled{lambda * jet.v0, lambda * jet.v1, lambda * jet.v2,
                        lambda * jet.v3};
      const double r0 = residual_single_normalized(a, jet);
      const double r1 = residual_single_normalized(a, scaled);
      CHECK((r0 <= 1e-9) == (r1 <= 1e-9));
      if (r0 > 1e-12) {
        CHECK(std::abs(r0 - r1) < 1e-9 * r0);
      }
    }
  }
}

TEST_CASE("constant-mean-curvature branch equation") {
  SUBCASE("k_m = 1 reduces to m (f f'' - 2 f'^2)") {
    GaussianSampler rng(29);
    for (int trial = 0; trial < 100; ++trial) {
      const int m = 2 + static_cast<int>(rng.uniform(0.0, 7.0));
      const Jet3 jet{rng.uniform(0.5, 2.0), rng.gaussian(), rng.gaussian(),
                     rng.gaussian()};
      const double full = case2_residual(m, 1.0, jet);
      const double reduced = m * reciprocal_branch_residual(jet);
      CHECK(std::abs(full - reduced) < 1e-13 * std::max(1.0, std::abs(full)));
    }
  }
  SUBCASE("reciprocal family solves the branch equation identically") {
    GaussianSampler rng(30);
    for (int trial = 0; trial < 100; ++trial) {
      const FactorFamily fam = FactorFamily::reciprocal(
          rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
      const double z = test::random_domain_z(rng, fam, 0.1);
      const Jet3 f = eval_f_jet(fam, z);
      const double scale = std::max(std::abs(f.v0 * f.v2), f.v1 * f.v1);
      CHECK(std::abs(reciprocal_branch_residual(f)) < 1e-12 * scale);
    }
  }
}

TEST_CASE("classification") {
  SUBCASE("empty sample set is rejected") {
    ConformalMetric metric(5, FactorFamily::constant(1.0));
    const Hyperplane hp(Eigen::VectorXd::Zero(4), 0.0);
    CHECK_THROWS_AS(classify(hp, metric, {}), std::invalid_argument);
  }
  SUBCASE("constant factor labels minimal for any tilt") {
    ConformalMetric metric(5, FactorFamily::constant(2.5));
    Eigen::VectorXd a(4);
    a << 1.0, 0.0, -0.5, 0.25;
    const auto grid = default_z_grid(metric.factor, 16);
    const ResidualReport rep = classify(Hyperplane(a, 0.0), metric, grid);
    CHECK(rep.case_label == CaseLabel::Minimal);
    CHECK_FALSE(rep.proper);
    CHECK(rep.max_abs_residual == 0.0);
  }
  SUBCASE("reciprocal horizontal labels proper for m = 3") {
    ConformalMetric metric(4, FactorFamily::reciprocal(1.0, 1.0));
    const Hyperplane hp(Eigen::VectorXd::Zero(3), 0.0);
    const auto grid = default_z_grid(metric.factor, 64);
    const ResidualReport rep = classify(hp, metric, grid);
    CHECK(rep.case_label == CaseLabel::ReciprocalHorizontal);
    CHECK(rep.proper);
    CHECK(rep.min_abs_H > 0.0);
  }
  SUBCASE("power law on the constraint sphere labels the single equation") {
    const double t = 1.0 / 6.0;
    ConformalMetric metric(5, FactorFamily::power_law(1.0, 1.0, t));
    const Hyperplane hp(constraint_tilt(t), 0.0);
    const auto grid = default_z_grid(metric.factor, 64);
    const ResidualReport rep = classify(hp, metric, grid);
    CHECK(rep.case_label == CaseLabel::SingleEquationM4);
    CHECK(rep.proper);
  }
  SUBCASE("off-constraint tilt labels not biharmonic") {
    ConformalMetric metric(5, FactorFamily::power_law(1.0, 1.0, 1.0 / 6.0));
    Eigen::VectorXd a = constraint_tilt(1.0 / 6.0) * std::sqrt(1.02);
    const auto grid = default_z_grid(metric.factor, 64);
    const ResidualReport rep = classify(Hyperplane(a, 0.0), metric, grid);
    CHECK(rep.case_label == CaseLabel::NotBiharmonic);
    CHECK_FALSE(rep.proper);
    CHECK(rep.max_abs_residual > 1e-9);
  }
  SUBCASE("tilted reciprocal at m = 4 satisfies the single equation") {
    // f = 1/(Az+B) solves the m = 4 equation for every tilt; the case
    // priority must still route a = 0 to the reciprocal label.
    ConformalMetric metric(5, FactorFamily::reciprocal(1.0, 2.0));
    Eigen::VectorXd a(4);
    a << 0.4, -0.3, 0.2, 0.1;
    const auto grid = default_z_grid(metric.factor, 32);
    const ResidualReport tilted = classify(Hyperplane(a, 0.0), metric, grid);
    CHECK(tilted.case_label == CaseLabel::SingleEquationM4);
    CHECK(tilted.proper);
    const ResidualReport flat =
        classify(Hyperplane(Eigen::VectorXd::Zero(4), 0.0), metric, grid);
    CHECK(flat.case_label == CaseLabel::ReciprocalHorizontal);
  }
  SUBCASE("constant factor beats the single equation in priority") {
    ConformalMetric metric(5, FactorFamily::constant(1.0));
    const Hyperplane hp(constraint_tilt(0.2), 0.0);
    const auto grid = default_z_grid(metric.factor, 16);
    CHECK(classify(hp, metric, grid).case_label == CaseLabel::Minimal);
  }
}
