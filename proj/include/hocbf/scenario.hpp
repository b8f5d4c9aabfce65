#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hocbf/barrier_chain.hpp"
#include "hocbf/simulator.hpp"
#include "hocbf/systems.hpp"
#include "hocbf/verifier.hpp"

namespace hocbf {

enum class ModelKind { attitude, double_integrator };

/// Everything needed to reproduce one closed-loop run. Loaded from an INI
/// file; see configs/ and the README for the keys.
struct ScenarioConfig {
  std::string name = "scenario";
  ModelKind model = ModelKind::attitude;
  double horizon = 40.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  bool zero_order_hold = false;
  bool project_rotation = false;

  bool filter = true;
  std::string chi = "cubic";
  double xi = 0.6;
  std::vector<std::string> alphas{"linear:1", "linear:1"};
  double omega_bar = 0.0;

  AttitudeParams attitude = reference_attitude_params();
  std::string initial_orientation = "R0";
  Eigen::Vector3d omega0 = Eigen::Vector3d::Zero();
  bool additive_signal = true;

  double radius = 2.0;
  Eigen::Vector2d p0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d v0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d target = Eigen::Vector2d::Zero();
  double kp = 1.0;
  double kd = 2.0;

  /// Bound on the synthetic torque-channel disturbance; 0 disables it.
  double disturbance = 0.0;

  std::string out_dir;
  /// section.key = value pairs as read, for the manifest.
  std::vector<std::pair<std::string, std::string>> echo;

  /// Throws ConfigError on any invalid value.
  void validate() const;
};

/// Throws ConfigError on syntax errors, unknown sections or keys, and values
/// that fail validation; IoError when the file cannot be read.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(std::istream& in, const std::string& name);

std::string model_name(ModelKind kind);
Eigen::Matrix3d named_orientation(const std::string& name);

/// The assembled closed loop for a config.
struct Scenario {
  SystemModel model;
  ConstraintProvider provider;
  std::shared_ptr<const BarrierChain> chain;
  InputLaw nominal;
  ClosedLoopController controller;
  Vector x0;
  SimulationOptions options;
};

/// filter_override, when given, replaces the config's filter switch.
Scenario build_scenario(const ScenarioConfig& config, int filter_override = -1);

/// Bounded disturbance with |w(t)| = bound exactly, phases drawn from seed.
InputLaw torque_disturbance(double bound, std::uint64_t seed);

/// Checks that only need the logged trajectory, so they can be re-derived
/// from trajectory.csv.
struct ScenarioChecks {
  InvarianceReport invariance;
  bool safe = false;
  long nominal_mismatches = 0;
  std::vector<TimeInterval> discrepancy;
  std::vector<TimeInterval> below_xi;
  std::vector<TimeInterval> below_zero;
  double max_input_jump = 0.0;
};

ScenarioChecks evaluate_checks(const Trajectory& traj, double xi, double tol = 1e-6);

/// Sampling box matching the config's model.
SamplingBox scenario_box(const ScenarioConfig& config, long count, std::uint64_t seed,
                         Sampler sampler = Sampler::halton);

}  // namespace hocbf
