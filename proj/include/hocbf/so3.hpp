#pragma once

#include <Eigen/Dense>

namespace hocbf {

/// [v]x, so that hat(v) w = v x w.
Eigen::Matrix3d hat(const Eigen::Vector3d& v);
/// Inverse of hat. Throws InvalidInput if |M + M^T| >= 1e-10.
Eigen::Vector3d vee(const Eigen::Matrix3d& m);
/// I + sin(angle) [a]x + (1 - cos(angle)) [a]x^2. Throws InvalidInput unless
/// |axis| = 1 within 1e-10.
Eigen::Matrix3d rodrigues_exp(const Eigen::Vector3d& axis, double angle);

/// Geodesic angle between two rotations.
double rotation_angle_between(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

/// |R^T R - I|_F.
double orthonormality_error(const Eigen::Matrix3d& r);

}  // namespace hocbf
