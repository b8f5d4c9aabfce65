#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "hocbf/barrier_chain.hpp"

namespace hocbf {

/// Control-affine dynamics x' = f(x) + g(x) u.
struct SystemModel {
  int state_dim = 0;
  int input_dim = 0;
  std::function<Vector(const Vector&)> drift;
  std::function<Matrix(const Vector&)> actuation;
  std::string label;
};

// ---------------------------------------------------------------------------
// Double integrator in the plane, x = (p, v), with the disk constraint
// b = d^2 - |p|^2.

struct DoubleIntegrator {
  SystemModel model;
  /// Closed-form Lie derivatives.
  ConstraintProvider constraint;
  /// Same constraint for forward differentiation.
  JetConstraint jet;
  double radius = 1.0;
};

DoubleIntegrator double_integrator_model(double radius);

/// u = -kp (p - target) - kd v.
std::function<Vector(const Vector&)> double_integrator_pd(double kp, double kd,
                                                         const Eigen::Vector2d& target);

// ---------------------------------------------------------------------------
// Rigid-body attitude on the embedding R^12: x = (r11, r12, ..., r33, w).

struct AttitudeParams {
  Eigen::Matrix3d inertia;
  std::vector<Eigen::Matrix3d> cell_centers;
  double epsilon = 0.1206;
  double delta = 0.05;
  double k1 = 0.2;
  double k2 = 0.2;
  double xi = 0.6;

  /// Throws InvalidInput on non-orthonormal centers, asymmetric or
  /// non-positive-definite inertia, or non-positive scalars.
  void validate() const;
};

/// Start, cell centers and target of the reference maneuver.
struct ReferenceOrientations {
  Eigen::Matrix3d r0;
  Eigen::Matrix3d r1;
  Eigen::Matrix3d r2;
  Eigen::Matrix3d r3;
  Eigen::Matrix3d target;
};

ReferenceOrientations reference_orientations();
/// J, cells {R1, R2, R3}, eps = 0.1206, delta = 0.05, k1 = k2 = 0.2, xi = 0.6.
AttitudeParams reference_attitude_params();

Eigen::Matrix3d rotation_part(const Vector& x);
Eigen::Vector3d angular_velocity_part(const Vector& x);
Vector attitude_state(const Eigen::Matrix3d& r, const Eigen::Vector3d& omega);

/// Replaces the rotation block by its nearest rotation (polar factor).
Vector project_attitude_state(const Vector& x);

Vector attitude_drift(const Vector& x, const AttitudeParams& params);
Matrix attitude_actuation(const AttitudeParams& params);
SystemModel attitude_model(const AttitudeParams& params);

/// sum_i s(r_i(R) / eps) - delta with r_i(R) = eps - |R - R_i|_F^2 / 2.
double cell_barrier(const Eigen::Matrix3d& r, const AttitudeParams& params);

/// 0 below 0, rho(v) / (rho(v) + rho(1 - v)) on [0, 1), 1 from 1 on, where
/// rho(v) = exp(-1/v) / v. Returns value and two derivatives.
ScalarJet smooth_transition(double v);

/// -k1 (R - R^T)^vee - k2 tanh(w).
Eigen::Vector3d nominal_attitude_controller(const Eigen::Matrix3d& r, const Eigen::Vector3d& omega,
                                            const AttitudeParams& params);

/// 0.3 (sin(2 pi (t-20)/5), sin(pi (t-20)/5), -sin(pi (t-20)/5)) on
/// [20, 25], zero elsewhere.
Eigen::Vector3d additive_signal(double t);

JetConstraint attitude_jet_constraint(const AttitudeParams& params);
ConstraintProvider attitude_constraint_provider(const AttitudeParams& params);

}  // namespace hocbf
