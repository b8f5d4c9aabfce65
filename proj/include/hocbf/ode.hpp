#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

namespace hocbf {

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// One classical fourth-order Runge-Kutta step.
inline Eigen::VectorXd rk4_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt) {
  const Eigen::VectorXd k1 = rhs(t, y);
  const Eigen::VectorXd k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = rhs(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Number of fixed steps covering [0, horizon]; horizon / dt must be integral
/// up to rounding.
inline long step_count(double horizon, double dt) {
  return std::lround(horizon / dt);
}

/// Samples y(t0 + k dt), k = 0..steps, of the fixed-step RK4 solution.
inline std::vector<Eigen::VectorXd> integrate_rk4(const OdeRhs& rhs, const Eigen::VectorXd& y0,
                                                  double t0, double dt, long steps) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(y0);
  Eigen::VectorXd y = y0;
  for (long k = 0; k < steps; ++k) {
    y = rk4_step(rhs, t0 + static_cast<double>(k) * dt, y, dt);
    out.push_back(y);
  }
  return out;
}

}  // namespace hocbf
