#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bihcert {

/// Settings for the embedded Dormand-Prince 5(4) integrator.
struct Rk45Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 0.0;  ///< 0: pick from the first RHS evaluation
  long max_steps = 2000000;
};

struct Rk45Status {
  bool completed = false;
  double final_z = 0.0;
  std::string reason;  ///< "completed", "guard", "step_underflow", ...
  long steps_accepted = 0;
  long steps_rejected = 0;
  double max_error_estimate = 0.0;  ///< max accepted scaled error
};

/// Integrates y' = rhs(z, y) forward from sample_z.front() and calls
/// sink(z, y) at every entry of sample_z (which must be strictly increasing).
/// `guard` is checked after every accepted step and at every sample; a true
/// return stops the integration with reason "guard".
///
/// Classic adaptive embedded pair with FSAL; the error is measured in the
/// mixed norm err_i / (abs_tol + rel_tol * max(|y_i|, |y_new_i|)).
template <typename Rhs, typename Sink, typename Guard>
Rk45Status integrate_rk45(Rhs&& rhs, Eigen::VectorXd y,
                          const std::vector<double>& sample_z, Sink&& sink,
                          Guard&& guard, const Rk45Options& opt = {}) {
  using Vec = Eigen::VectorXd;
  static const double kA[6][6] = {
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656, 0}};
  static const double kC[7] = {0,       1.0 / 5, 3.0 / 10, 4.0 / 5,
                               8.0 / 9, 1.0,     1.0};
  static const double kB5[7] = {35.0 / 384,    0.0,        500.0 / 1113,
                                125.0 / 192,   -2187.0 / 6784,
                                11.0 / 84,     0.0};
  static const double kB4[7] = {5179.0 / 57600,   0.0,
                                7571.0 / 16695,   393.0 / 640,
                                -92097.0 / 339200, 187.0 / 2100,
                                1.0 / 40};

  Rk45Status status;
  if (sample_z.size() < 2) {
    status.reason = "needs at least two sample points";
    return status;
  }
  double z = sample_z.front();
  status.final_z = z;

  Vec k[7];
  k[0] = rhs(z, y);
  if (!k[0].allFinite()) {
    status.reason = "non_finite_rhs";
    return status;
  }

  const double span = sample_z.back() - sample_z.front();
  double h = opt.initial_step > 0.0
                 ? opt.initial_step
                 : std::min(1e-2 * span,
                            0.1 / std::max(1.0, k[0].cwiseAbs().maxCoeff()));

  sink(z, y);
  if (guard(z, y)) {
    status.reason = "guard";
    return status;
  }

  std::size_t next_sample = 1;
  while (next_sample < sample_z.size()) {
    const double target = sample_z[next_sample];
    bool clipped = false;
    double h_step = h;
    if (z + h_step >= target) {
      h_step = target - z;
      clipped = true;
    }
    if (!(h_step > 1e-14 * std::max(1.0, std::abs(z)))) {
      status.reason = "step_underflow";
      return status;
    }
    if (status.steps_accepted + status.steps_rejected >= opt.max_steps) {
      status.reason = "max_steps";
      return status;
    }

    for (int s = 1; s < 6; ++s) {
      Vec ys = y;
      for (int j = 0; j < s; ++j) {
        if (kA[s][j] != 0.0) ys += (h_step * kA[s][j]) * k[j];
      }
      k[s] = rhs(z + kC[s] * h_step, ys);
      if (!k[s].allFinite()) {
        status.reason = "non_finite_rhs";
        return status;
      }
    }
    Vec y5 = y;
    for (int s = 0; s < 6; ++s) {
      if (kB5[s] != 0.0) y5 += (h_step * kB5[s]) * k[s];
    }
    k[6] = rhs(z + h_step, y5);  // FSAL stage
    if (!k[6].allFinite()) {
      status.reason = "non_finite_rhs";
      return status;
    }
    Vec y4 = y;
    for (int s = 0; s < 7; ++s) {
      if (kB4[s] != 0.0) y4 += (h_step * kB4[s]) * k[s];
    }

    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc =
          opt.abs_tol +
          opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / static_cast<double>(y.size()));

    if (err <= 1.0) {
      z = clipped ? target : z + h_step;
      y = y5;
      k[0] = k[6];
      ++status.steps_accepted;
      status.max_error_estimate = std::max(status.max_error_estimate, err);
      if (clipped) {
        sink(z, y);
        ++next_sample;
      }
      if (guard(z, y)) {
        status.final_z = z;
        status.reason = "guard";
        return status;
      }
      if (!clipped) {
        // A clipped step says nothing about the controller's step size.
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = h_step * std::min(5.0, std::max(0.2, grow));
      }
    } else {
      ++status.steps_rejected;
      h = h_step * std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }

  status.completed = true;
  status.final_z = z;
  status.reason = "completed";
  return status;
}

}  // namespace bihcert
