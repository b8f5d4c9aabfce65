#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "hocbf/class_k.hpp"

namespace hocbf {

/// State m = (m_0, ..., m_{r-1}) of the unforced cascade
///   m_{k-1}' = -alpha_k(m_{k-1}) + m_k,   m_{r-1}' = -alpha_r(m_{r-1}).
struct AuxiliaryState {
  Eigen::VectorXd m;
};

/// psi = (psi_0, ..., psi_{r-1}) viewed as the state of the forced cascade
/// whose last row carries psi_r(x(t)) as an exogenous forcing.
struct ForcedPsiState {
  Eigen::VectorXd psi;
  std::function<double(double)> forcing;
};

Eigen::VectorXd auxiliary_rhs(const AuxiliaryState& m, const std::vector<ExtendedClassK>& alphas);
Eigen::VectorXd forced_psi_rhs(const ForcedPsiState& s, const std::vector<ExtendedClassK>& alphas,
                               double t);

/// True iff m_k(t) <= psi_k(t) + tol at every grid point.
/// Throws DimensionMismatch if the grids or vector sizes disagree, and
/// InvalidInput if m(t0) is not below psi(t0) (hypothesis unmet).
bool check_domination(const std::vector<AuxiliaryState>& m_traj,
                      const std::vector<Eigen::VectorXd>& psi_traj, double tol);

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Sampled test of the quasimonotone nondecreasing property: for random
/// x <= y with x_i = y_i, require p_i(x) <= p_i(y) + 1e-12.
bool check_quasimonotone(const VectorField& rhs, int dim, int samples, std::uint64_t seed = 1,
                         double box = 5.0);

/// Fixed-step RK4 solutions on the grid t0 + k dt, k = 0..steps.
std::vector<AuxiliaryState> simulate_auxiliary(const Eigen::VectorXd& m0,
                                               const std::vector<ExtendedClassK>& alphas,
                                               double t0, double dt, long steps);
std::vector<Eigen::VectorXd> simulate_forced_psi(const ForcedPsiState& s0,
                                                 const std::vector<ExtendedClassK>& alphas,
                                                 double t0, double dt, long steps);

/// Piecewise-linear forcing through (times[k], values[k]); clamped outside.
std::function<double(double)> interpolated_forcing(std::vector<double> times,
                                                   std::vector<double> values);

}  // namespace hocbf
