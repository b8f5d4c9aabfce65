#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hocbf/barrier_chain.hpp"
#include "hocbf/systems.hpp"

namespace hocbf {

/// What a controller reports for one evaluation: the applied input plus the
/// diagnostics that go into the trajectory log.
struct ControlSample {
  Vector u;
  Vector u_nom;
  double mu = 0.0;
  Vector psi;
  double b = 0.0;
};

using InputLaw = std::function<Vector(const Vector&, double)>;
using ClosedLoopController = std::function<ControlSample(const Vector&, double)>;

/// Wraps a bare input law: u_nom = u, mu = 0, no barrier diagnostics.
ClosedLoopController plain_controller(InputLaw law);

struct FilterSettings {
  bool enabled = true;
  /// Known bound on a disturbance entering through the input channel; when
  /// positive the robustified row (with L_p psi = L_g psi) is used.
  double omega_bar = 0.0;
};

/// Nominal law passed through the chain's safety filter. With the filter
/// disabled the nominal input is applied and psi, b are still logged.
ClosedLoopController make_filtered_controller(std::shared_ptr<const BarrierChain> chain,
                                              InputLaw nominal, FilterSettings settings = {});

struct SimulationOptions {
  /// Evaluate the controller once per step and hold it over the RK4 stages.
  bool zero_order_hold = false;
  double divergence_bound = 1e9;
  /// Added to the applied input inside the plant only (not logged).
  InputLaw input_disturbance;
  /// Applied to the state after every step when set (e.g. re-orthonormalizing
  /// the rotation block). Off by default.
  std::function<Vector(const Vector&)> project;
};

/// Uniform-grid log of a closed-loop run. Sample k is the state at t_k and
/// the controller evaluated there.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> inputs;
  std::vector<Vector> nominal_inputs;
  std::vector<Vector> psi_values;
  std::vector<double> barrier_b;
  std::vector<double> mu;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  void reserve(std::size_t n);
  void push(double t, const Vector& x, const ControlSample& sample);
  /// Throws InvalidInput if the arrays disagree in length or the time grid is
  /// not strictly increasing.
  void check_consistent() const;
};

/// Fixed-step classical RK4 of x' = f(x) + g(x) (u + w). Throws
/// SimulationDiverged when |x| exceeds the bound or a value is non-finite,
/// and InvalidInput on a bad step or horizon. Controller errors propagate.
Trajectory integrate_closed_loop(const SystemModel& model, const ClosedLoopController& controller,
                                 const Vector& x0, double horizon, double dt,
                                 const SimulationOptions& options = {});

/// Why a run stopped before the horizon.
struct Termination {
  enum class Kind { completed, diverged, infeasible };
  Kind kind = Kind::completed;
  double time = 0.0;
  std::string reason;

  bool completed() const noexcept { return kind == Kind::completed; }
  std::string label() const;
};

struct RunResult {
  Trajectory trajectory;
  Termination termination;
};

/// Same integration, but divergence and filter infeasibility end the run
/// instead of throwing; the samples logged so far are kept.
RunResult run_closed_loop(const SystemModel& model, const ClosedLoopController& controller,
                          const Vector& x0, double horizon, double dt,
                          const SimulationOptions& options = {});

/// Selects a scalar series from a trajectory.
struct TraceField {
  enum class Kind { barrier_b, psi, mu, negated_mu, input_deviation };
  Kind kind = Kind::barrier_b;
  int index = 0;

  /// "b", "psi<k>", "mu", "neg_mu", "u_dev". Throws InvalidInput otherwise.
  static TraceField parse(const std::string& name);
  std::string name() const;
};

std::vector<double> extract_field(const Trajectory& traj, const TraceField& field);

struct TimeInterval {
  double enter = 0.0;
  double exit = 0.0;
};

/// Maximal runs with value < level; endpoints by linear interpolation
/// between neighbouring samples.
std::vector<TimeInterval> detect_threshold_crossings(const std::vector<double>& times,
                                                     const std::vector<double>& values,
                                                     double level);
std::vector<TimeInterval> detect_threshold_crossings(const Trajectory& traj, const TraceField& field,
                                                     double level);

/// Intervals on which the filter modified the nominal input (mu > 0).
std::vector<TimeInterval> filter_activity_intervals(const Trajectory& traj);

struct InvarianceReport {
  /// All psi_k(t0) >= 0; otherwise no claim is made.
  bool precondition_met = false;
  bool invariant = false;
  Vector min_margins;
  double min_b = 0.0;
};

InvarianceReport forward_invariance_report(const Trajectory& traj, double tol);

}  // namespace hocbf
