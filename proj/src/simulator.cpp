#include "hocbf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hocbf/errors.hpp"
#include "hocbf/ode.hpp"
#include "hocbf/safety_filter.hpp"

namespace hocbf {

ClosedLoopController plain_controller(InputLaw law) {
  return [law = std::move(law)](const Vector& x, double t) {
    ControlSample s;
    s.u = law(x, t);
    s.u_nom = s.u;
    return s;
  };
}

ClosedLoopController make_filtered_controller(std::shared_ptr<const BarrierChain> chain,
                                              InputLaw nominal, FilterSettings settings) {
  if (!chain || !nominal) throw InvalidInput("filtered controller needs a chain and a nominal law");
  if (!(settings.omega_bar >= 0.0)) throw InvalidInput("disturbance bound must be non-negative");
  return [chain = std::move(chain), nominal = std::move(nominal), settings](const Vector& x,
                                                                            double t) {
    const PsiEvaluation eval = chain->evaluate(x);
    ControlSample s;
    s.u_nom = nominal(x, t);
    s.psi = eval.psi;
    s.b = eval.b;
    if (!settings.enabled) {
      s.u = s.u_nom;
      return s;
    }
    ConstraintRow row = chain->constraint_row(eval);
    if (settings.omega_bar > 0.0) row.c -= eval.lg_psi_last.norm() * settings.omega_bar;
    const FilterResult r = filter_control(s.u_nom, row.a, row.c);
    s.u = r.u;
    s.mu = r.mu;
    return s;
  };
}

// ---------------------------------------------------------------------------

void Trajectory::reserve(std::size_t n) {
  times.reserve(n);
  states.reserve(n);
  inputs.reserve(n);
  nominal_inputs.reserve(n);
  psi_values.reserve(n);
  barrier_b.reserve(n);
  mu.reserve(n);
}

void Trajectory::push(double t, const Vector& x, const ControlSample& sample) {
  times.push_back(t);
  states.push_back(x);
  inputs.push_back(sample.u);
  nominal_inputs.push_back(sample.u_nom);
  psi_values.push_back(sample.psi);
  barrier_b.push_back(sample.b);
  mu.push_back(sample.mu);
}

void Trajectory::check_consistent() const {
  const std::size_t n = times.size();
  if (states.size() != n || inputs.size() != n || nominal_inputs.size() != n ||
      psi_values.size() != n || barrier_b.size() != n || mu.size() != n) {
    throw InvalidInput("trajectory arrays differ in length");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(times[k] > times[k - 1])) throw InvalidInput("trajectory times must increase");
  }
}

namespace {

void check_run_arguments(const SystemModel& model, const Vector& x0, double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon > 0.0) || !std::isfinite(dt) || !std::isfinite(horizon) ||
      dt > horizon) {
    throw InvalidInput("integration needs 0 < dt <= horizon");
  }
  const long steps = step_count(horizon, dt);
  if (std::abs(static_cast<double>(steps) * dt - horizon) > 1e-9 * horizon) {
    throw InvalidInput("horizon must be an integer multiple of dt");
  }
  if (x0.size() != model.state_dim) throw DimensionMismatch("initial state has wrong dimension");
  if (!x0.allFinite()) throw InvalidInput("initial state is not finite");
}

// Runs until the horizon; throws SimulationDiverged, or whatever the
// controller throws. Samples logged before the failure remain in `traj`.
void integrate_into(Trajectory& traj, const SystemModel& model,
                    const ClosedLoopController& controller, const Vector& x0, double horizon,
                    double dt, const SimulationOptions& options) {
  check_run_arguments(model, x0, horizon, dt);
  const long steps = step_count(horizon, dt);

  auto plant = [&](const Vector& x, const Vector& u, double t) -> Vector {
    Vector applied = u;
    if (options.input_disturbance) applied += options.input_disturbance(x, t);
    return model.drift(x) + model.actuation(x) * applied;
  };

  traj.reserve(static_cast<std::size_t>(steps) + 1);
  Vector x = x0;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const ControlSample sample = controller(x, t);
    if (sample.u.size() != model.input_dim) throw DimensionMismatch("controller input dimension");
    traj.push(t, x, sample);
    if (k == steps) break;

    Vector k1 = plant(x, sample.u, t);
    auto stage = [&](const Vector& xs, double ts) {
      return options.zero_order_hold ? plant(xs, sample.u, ts)
                                     : plant(xs, controller(xs, ts).u, ts);
    };
    const Vector k2 = stage(x + 0.5 * dt * k1, t + 0.5 * dt);
    const Vector k3 = stage(x + 0.5 * dt * k2, t + 0.5 * dt);
    const Vector k4 = stage(x + dt * k3, t + dt);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (options.project && x.allFinite()) x = options.project(x);

    const double t_next = static_cast<double>(k + 1) * dt;
    if (!x.allFinite()) throw SimulationDiverged("non-finite state", t_next);
    if (x.norm() > options.divergence_bound) {
      std::ostringstream msg;
      msg << "state norm exceeded " << options.divergence_bound << " at t = " << t_next;
      throw SimulationDiverged(msg.str(), t_next);
    }
  }
}

}  // namespace

Trajectory integrate_closed_loop(const SystemModel& model, const ClosedLoopController& controller,
                                 const Vector& x0, double horizon, double dt,
                                 const SimulationOptions& options) {
  Trajectory traj;
  integrate_into(traj, model, controller, x0, horizon, dt, options);
  return traj;
}

std::string Termination::label() const {
  switch (kind) {
    case Kind::completed: return "completed";
    case Kind::diverged: return "diverged";
    case Kind::infeasible: return "infeasible";
  }
  return "?";
}

RunResult run_closed_loop(const SystemModel& model, const ClosedLoopController& controller,
                          const Vector& x0, double horizon, double dt,
                          const SimulationOptions& options) {
  check_run_arguments(model, x0, horizon, dt);
  RunResult result;
  Trajectory& traj = result.trajectory;
  // The failing step may be a sub-stage; its time is bracketed by the last
  // logged sample and the next grid point.
  auto next_time = [&] { return traj.empty() ? 0.0 : traj.times.back() + dt; };
  try {
    integrate_into(traj, model, controller, x0, horizon, dt, options);
    result.termination.time = traj.empty() ? 0.0 : traj.times.back();
  } catch (const SimulationDiverged& e) {
    result.termination = {Termination::Kind::diverged, e.time(), e.what()};
  } catch (const InfeasibleAtState& e) {
    result.termination = {Termination::Kind::infeasible, next_time(), e.what()};
  }
  return result;
}

// ---------------------------------------------------------------------------

TraceField TraceField::parse(const std::string& name) {
  TraceField f;
  if (name == "b") {
    f.kind = Kind::barrier_b;
  } else if (name == "mu") {
    f.kind = Kind::mu;
  } else if (name == "neg_mu") {
    f.kind = Kind::negated_mu;
  } else if (name == "u_dev") {
    f.kind = Kind::input_deviation;
  } else if (name.rfind("psi", 0) == 0 && name.size() > 3 &&
             std::all_of(name.begin() + 3, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    f.kind = Kind::psi;
    f.index = std::stoi(name.substr(3));
  } else {
    throw InvalidInput("unknown trajectory field '" + name + "'");
  }
  return f;
}

std::string TraceField::name() const {
  switch (kind) {
    case Kind::barrier_b: return "b";
    case Kind::psi: return "psi" + std::to_string(index);
    case Kind::mu: return "mu";
    case Kind::negated_mu: return "neg_mu";
    case Kind::input_deviation: return "u_dev";
  }
  return "?";
}

std::vector<double> extract_field(const Trajectory& traj, const TraceField& field) {
  std::vector<double> out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    switch (field.kind) {
      case TraceField::Kind::barrier_b:
        out[k] = traj.barrier_b[k];
        break;
      case TraceField::Kind::psi:
        if (field.index < 0 || field.index >= traj.psi_values[k].size()) {
          throw InvalidInput("trajectory has no field '" + field.name() + "'");
        }
        out[k] = traj.psi_values[k][field.index];
        break;
      case TraceField::Kind::mu:
        out[k] = traj.mu[k];
        break;
      case TraceField::Kind::negated_mu:
        out[k] = -traj.mu[k];
        break;
      case TraceField::Kind::input_deviation:
        out[k] = (traj.inputs[k] - traj.nominal_inputs[k]).norm();
        break;
    }
  }
  return out;
}

std::vector<TimeInterval> detect_threshold_crossings(const std::vector<double>& times,
                                                     const std::vector<double>& values,
                                                     double level) {
  if (times.size() != values.size()) throw DimensionMismatch("times and values differ in length");
  std::vector<TimeInterval> out;
  auto crossing = [&](std::size_t lo, std::size_t hi) {
    const double dv = values[hi] - values[lo];
    const double w = dv == 0.0 ? 0.0 : (level - values[lo]) / dv;
    return times[lo] + w * (times[hi] - times[lo]);
  };
  bool below = false;
  TimeInterval current;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const bool now = values[k] < level;
    if (now && !below) {
      current.enter = k == 0 ? times[0] : crossing(k - 1, k);
    } else if (!now && below) {
      current.exit = crossing(k - 1, k);
      out.push_back(current);
    }
    below = now;
  }
  if (below) {
    current.exit = times.back();
    out.push_back(current);
  }
  return out;
}

std::vector<TimeInterval> detect_threshold_crossings(const Trajectory& traj, const TraceField& field,
                                                     double level) {
  return detect_threshold_crossings(traj.times, extract_field(traj, field), level);
}

std::vector<TimeInterval> filter_activity_intervals(const Trajectory& traj) {
  return detect_threshold_crossings(traj, TraceField{TraceField::Kind::negated_mu, 0}, 0.0);
}

InvarianceReport forward_invariance_report(const Trajectory& traj, double tol) {
  InvarianceReport report;
  if (traj.empty()) return report;
  const Eigen::Index r = traj.psi_values.front().size();
  report.min_margins = Vector::Constant(r, std::numeric_limits<double>::infinity());
  report.min_b = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.psi_values[k].size() == r) {
      report.min_margins = report.min_margins.cwiseMin(traj.psi_values[k]);
    }
    report.min_b = std::min(report.min_b, traj.barrier_b[k]);
  }
  report.precondition_met = r > 0 && (traj.psi_values.front().array() >= 0.0).all();
  report.invariant = report.precondition_met && (report.min_margins.array() >= -tol).all();
  return report;
}

}  // namespace hocbf
