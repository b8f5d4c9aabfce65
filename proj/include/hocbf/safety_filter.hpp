#pragma once

#include <Eigen/Dense>

namespace hocbf {

/// Outcome of the minimally-invasive filter
///   min |u - u_nom|^2  s.t.  a u + c >= 0.
struct FilterResult {
  Eigen::VectorXd u;
  double mu = 0.0;
  bool constraint_active = false;
  /// a u + c at the returned input.
  double constraint_value = 0.0;
};

/// |a|^2 below this is treated as a = 0.
inline constexpr double kDegenerateRowNormSq = 1e-24;

/// Closed-form KKT solution of the single-constraint projection.
///
/// If a u_nom + c >= 0 the nominal input is returned untouched (mu = 0).
/// Otherwise u = u_nom + mu a^T with mu = -(a u_nom + c) / |a|^2.
/// Throws InfeasibleAtState when a = 0 and c < 0, and DimensionMismatch when
/// a and u_nom disagree in size.
FilterResult filter_control(const Eigen::VectorXd& u_nom, const Eigen::RowVectorXd& a, double c);

/// Checks stationarity, primal and dual feasibility, and complementary
/// slackness of `result` against the problem data, each within `tol`.
bool verify_kkt(const FilterResult& result, const Eigen::VectorXd& u_nom,
                const Eigen::RowVectorXd& a, double c, double tol = 1e-9);

}  // namespace hocbf
