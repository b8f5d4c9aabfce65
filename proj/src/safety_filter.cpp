#include "hocbf/safety_filter.hpp"

#include <cmath>
#include <sstream>

#include "hocbf/errors.hpp"

namespace hocbf {

FilterResult filter_control(const Eigen::VectorXd& u_nom, const Eigen::RowVectorXd& a, double c) {
  if (a.size() != u_nom.size()) {
    throw DimensionMismatch("constraint row and nominal input differ in dimension");
  }
  if (!u_nom.allFinite() || !a.allFinite() || !std::isfinite(c)) {
    throw InvalidInput("filter_control: non-finite problem data");
  }

  FilterResult r;
  const double nominal_value = a.dot(u_nom) + c;
  if (nominal_value >= 0.0) {
    r.u = u_nom;
    r.constraint_value = nominal_value;
    return r;
  }

  const double norm_sq = a.squaredNorm();
  if (norm_sq < kDegenerateRowNormSq) {
    std::ostringstream msg;
    msg << "safety constraint infeasible: a = 0 and c = " << c << " < 0";
    throw InfeasibleAtState(msg.str());
  }
  r.mu = -nominal_value / norm_sq;
  r.u = u_nom + r.mu * a.transpose();
  r.constraint_active = true;
  r.constraint_value = a.dot(r.u) + c;
  return r;
}

bool verify_kkt(const FilterResult& result, const Eigen::VectorXd& u_nom,
                const Eigen::RowVectorXd& a, double c, double tol) {
  if (result.u.size() != u_nom.size() || a.size() != u_nom.size()) return false;
  const double scale = 1.0 + u_nom.norm() + std::abs(result.mu) * a.norm();
  const bool stationary =
      (result.u - u_nom - result.mu * a.transpose()).norm() <= tol * scale;
  const double value = a.dot(result.u) + c;
  const bool primal = value >= -tol * (1.0 + std::abs(c));
  const bool dual = result.mu >= 0.0;
  const bool slack = std::abs(result.mu * value) <= tol * (1.0 + std::abs(result.mu));
  return stationary && primal && dual && slack;
}

}  // namespace hocbf
