#include "hocbf/comparison_oracle.hpp"

#include <algorithm>
#include <random>

#include "hocbf/errors.hpp"
#include "hocbf/ode.hpp"

namespace hocbf {

namespace {

void require_order(Eigen::Index size, const std::vector<ExtendedClassK>& alphas) {
  if (size != static_cast<Eigen::Index>(alphas.size()) || size == 0) {
    throw DimensionMismatch("cascade dimension must equal the number of class-K functions");
  }
}

}  // namespace

Eigen::VectorXd auxiliary_rhs(const AuxiliaryState& m, const std::vector<ExtendedClassK>& alphas) {
  require_order(m.m.size(), alphas);
  const Eigen::Index r = m.m.size();
  Eigen::VectorXd out(r);
  for (Eigen::Index k = 0; k + 1 < r; ++k) out[k] = -alphas[k](m.m[k]) + m.m[k + 1];
  out[r - 1] = -alphas[r - 1](m.m[r - 1]);
  return out;
}

Eigen::VectorXd forced_psi_rhs(const ForcedPsiState& s, const std::vector<ExtendedClassK>& alphas,
                               double t) {
  Eigen::VectorXd out = auxiliary_rhs(AuxiliaryState{s.psi}, alphas);
  if (s.forcing) out[out.size() - 1] += s.forcing(t);
  return out;
}

bool check_domination(const std::vector<AuxiliaryState>& m_traj,
                      const std::vector<Eigen::VectorXd>& psi_traj, double tol) {
  if (m_traj.size() != psi_traj.size()) {
    throw DimensionMismatch("domination check: trajectories are on different grids");
  }
  if (m_traj.empty()) return true;
  for (std::size_t k = 0; k < m_traj.size(); ++k) {
    if (m_traj[k].m.size() != psi_traj[k].size()) {
      throw DimensionMismatch("domination check: state sizes differ");
    }
  }
  if (((m_traj.front().m - psi_traj.front()).array() > 0.0).any()) {
    throw InvalidInput("domination check: m(t0) is not below psi(t0)");
  }
  for (std::size_t k = 0; k < m_traj.size(); ++k) {
    if (((m_traj[k].m - psi_traj[k]).array() > tol).any()) return false;
  }
  return true;
}

bool check_quasimonotone(const VectorField& rhs, int dim, int samples, std::uint64_t seed,
                         double box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-box, box);
  std::uniform_real_distribution<double> bump(0.0, box);
  std::uniform_int_distribution<int> pick(0, dim - 1);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x[j] = coord(rng);
    const int i = pick(rng);
    Eigen::VectorXd y = x;
    for (int j = 0; j < dim; ++j) {
      if (j != i) y[j] += bump(rng);
    }
    const Eigen::VectorXd px = rhs(x);
    const Eigen::VectorXd py = rhs(y);
    if (px[i] > py[i] + 1e-12) return false;
  }
  return true;
}

std::vector<AuxiliaryState> simulate_auxiliary(const Eigen::VectorXd& m0,
                                               const std::vector<ExtendedClassK>& alphas,
                                               double t0, double dt, long steps) {
  require_order(m0.size(), alphas);
  const OdeRhs rhs = [&](double, const Eigen::VectorXd& y) {
    return auxiliary_rhs(AuxiliaryState{y}, alphas);
  };
  std::vector<AuxiliaryState> out;
  for (auto& y : integrate_rk4(rhs, m0, t0, dt, steps)) out.push_back(AuxiliaryState{std::move(y)});
  return out;
}

std::vector<Eigen::VectorXd> simulate_forced_psi(const ForcedPsiState& s0,
                                                 const std::vector<ExtendedClassK>& alphas,
                                                 double t0, double dt, long steps) {
  require_order(s0.psi.size(), alphas);
  const OdeRhs rhs = [&](double t, const Eigen::VectorXd& y) {
    return forced_psi_rhs(ForcedPsiState{y, s0.forcing}, alphas, t);
  };
  return integrate_rk4(rhs, s0.psi, t0, dt, steps);
}

std::function<double(double)> interpolated_forcing(std::vector<double> times,
                                                   std::vector<double> values) {
  if (times.size() != values.size() || times.empty()) {
    throw DimensionMismatch("forcing samples need matching, non-empty time and value arrays");
  }
  return [times = std::move(times), values = std::move(values)](double t) {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - w) * values[lo] + w * values[hi];
  };
}

}  // namespace hocbf
