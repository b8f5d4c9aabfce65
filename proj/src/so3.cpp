#include "hocbf/so3.hpp"

#include <algorithm>
#include <cmath>

#include "hocbf/errors.hpp"

namespace hocbf {

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  if (!m.allFinite() || (m + m.transpose()).norm() >= 1e-10) {
    throw InvalidInput("vee: matrix is not skew-symmetric");
  }
  return {m(2, 1), m(0, 2), m(1, 0)};
}

Eigen::Matrix3d rodrigues_exp(const Eigen::Vector3d& axis, double angle) {
  if (!axis.allFinite() || !std::isfinite(angle) || std::abs(axis.norm() - 1.0) > 1e-10) {
    throw InvalidInput("rodrigues_exp: axis must be a finite unit vector");
  }
  const Eigen::Matrix3d k = hat(axis);
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

double rotation_angle_between(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double c = 0.5 * ((a.transpose() * b).trace() - 1.0);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double orthonormality_error(const Eigen::Matrix3d& r) {
  return (r.transpose() * r - Eigen::Matrix3d::Identity()).norm();
}

}  // namespace hocbf
