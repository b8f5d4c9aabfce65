#include "hocbf/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "hocbf/errors.hpp"
#include "hocbf/so3.hpp"

namespace hocbf {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario",
       {"name", "model", "horizon", "dt", "seed", "zero_order_hold", "project_rotation",
        "out_dir"}},
      {"barrier", {"enabled", "chi", "xi", "alpha1", "alpha2", "omega_bar"}},
      {"attitude",
       {"inertia", "cells", "initial", "omega0", "epsilon", "delta", "k1", "k2",
        "additive_signal"}},
      {"double_integrator", {"radius", "p0", "v0", "target", "kp", "kd"}},
      {"disturbance", {"bound"}},
  };
  return keys;
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

double to_real(const std::string& text, const std::string& at) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(at + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

std::vector<double> to_reals(const std::string& text, const std::string& at) {
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(spaced);
  std::vector<double> out;
  std::string word;
  while (in >> word) out.push_back(to_real(word, at));
  return out;
}

template <int N>
Eigen::Matrix<double, N, 1> to_fixed(const std::string& text, const std::string& at) {
  const std::vector<double> v = to_reals(text, at);
  if (v.size() != static_cast<std::size_t>(N)) {
    throw ConfigError(at + ": expected " + std::to_string(N) + " numbers");
  }
  return Eigen::Map<const Eigen::Matrix<double, N, 1>>(v.data());
}

bool to_bool(const std::string& text, const std::string& at) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(at + ": expected true or false, got '" + text + "'");
}

std::uint64_t to_seed(const std::string& text, const std::string& at) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(at + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

ChiTruncation make_chi(const std::string& name) {
  if (name == "cubic") return ChiTruncation::cubic();
  if (name == "identity") return ChiTruncation::identity();
  throw ConfigError("[barrier] chi: expected cubic or identity, got '" + name + "'");
}

std::vector<ExtendedClassK> make_alphas(const std::vector<std::string>& specs) {
  std::vector<ExtendedClassK> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      out.push_back(parse_class_k(specs[i]));
    } catch (const InvalidInput& e) {
      throw ConfigError(where("barrier", "alpha" + std::to_string(i + 1)) + ": " + e.what());
    }
  }
  return out;
}

void apply(ScenarioConfig& c, const std::string& section, const std::string& key,
           const std::string& value) {
  const std::string at = where(section, key);
  if (section == "scenario") {
    if (key == "name") {
      c.name = value;
    } else if (key == "model") {
      if (value == "attitude") {
        c.model = ModelKind::attitude;
      } else if (value == "double_integrator") {
        c.model = ModelKind::double_integrator;
      } else {
        throw ConfigError(at + ": expected attitude or double_integrator");
      }
    } else if (key == "horizon") {
      c.horizon = to_real(value, at);
    } else if (key == "dt") {
      c.dt = to_real(value, at);
    } else if (key == "seed") {
      c.seed = to_seed(value, at);
    } else if (key == "zero_order_hold") {
      c.zero_order_hold = to_bool(value, at);
    } else if (key == "project_rotation") {
      c.project_rotation = to_bool(value, at);
    } else if (key == "out_dir") {
      c.out_dir = value;
    }
  } else if (section == "barrier") {
    if (key == "enabled") {
      c.filter = to_bool(value, at);
    } else if (key == "chi") {
      c.chi = value;
    } else if (key == "xi") {
      c.xi = to_real(value, at);
    } else if (key == "alpha1") {
      c.alphas[0] = value;
    } else if (key == "alpha2") {
      c.alphas[1] = value;
    } else if (key == "omega_bar") {
      c.omega_bar = to_real(value, at);
    }
  } else if (section == "attitude") {
    if (key == "inertia") {
      const std::vector<double> v = to_reals(value, at);
      if (v.size() != 9) throw ConfigError(at + ": expected 9 numbers (row-major)");
      c.attitude.inertia = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v.data());
    } else if (key == "cells") {
      std::istringstream in(value);
      std::string word;
      c.attitude.cell_centers.clear();
      while (in >> word) {
        try {
          c.attitude.cell_centers.push_back(named_orientation(word));
        } catch (const InvalidInput& e) {
          throw ConfigError(at + ": " + e.what());
        }
      }
    } else if (key == "initial") {
      c.initial_orientation = value;
    } else if (key == "omega0") {
      c.omega0 = to_fixed<3>(value, at);
    } else if (key == "epsilon") {
      c.attitude.epsilon = to_real(value, at);
    } else if (key == "delta") {
      c.attitude.delta = to_real(value, at);
    } else if (key == "k1") {
      c.attitude.k1 = to_real(value, at);
    } else if (key == "k2") {
      c.attitude.k2 = to_real(value, at);
    } else if (key == "additive_signal") {
      c.additive_signal = to_bool(value, at);
    }
  } else if (section == "double_integrator") {
    if (key == "radius") {
      c.radius = to_real(value, at);
    } else if (key == "p0") {
      c.p0 = to_fixed<2>(value, at);
    } else if (key == "v0") {
      c.v0 = to_fixed<2>(value, at);
    } else if (key == "target") {
      c.target = to_fixed<2>(value, at);
    } else if (key == "kp") {
      c.kp = to_real(value, at);
    } else if (key == "kd") {
      c.kd = to_real(value, at);
    }
  } else if (section == "disturbance") {
    c.disturbance = to_real(value, at);
  }
}

}  // namespace

std::string model_name(ModelKind kind) {
  return kind == ModelKind::attitude ? "attitude" : "double_integrator";
}

Eigen::Matrix3d named_orientation(const std::string& name) {
  const ReferenceOrientations o = reference_orientations();
  if (name == "R0") return o.r0;
  if (name == "R1") return o.r1;
  if (name == "R2") return o.r2;
  if (name == "R3") return o.r3;
  if (name == "I") return o.target;
  throw InvalidInput("unknown orientation '" + name + "' (expected R0, R1, R2, R3 or I)");
}

void ScenarioConfig::validate() const {
  if (!(horizon > 0.0)) throw ConfigError("[scenario] horizon must be positive");
  if (!(dt > 0.0)) throw ConfigError("[scenario] dt must be positive");
  if (dt > horizon) throw ConfigError("[scenario] dt must not exceed the horizon");
  const double steps = std::round(horizon / dt);
  if (std::abs(steps * dt - horizon) > 1e-9 * horizon) {
    throw ConfigError("[scenario] horizon must be an integer multiple of dt");
  }
  if (!(xi > 0.0)) throw ConfigError("[barrier] xi must be positive");
  if (!(omega_bar >= 0.0)) throw ConfigError("[barrier] omega_bar must be non-negative");
  if (!(disturbance >= 0.0)) throw ConfigError("[disturbance] bound must be non-negative");
  make_chi(chi);
  make_alphas(alphas);
  if (model == ModelKind::attitude) {
    try {
      attitude.validate();
      named_orientation(initial_orientation);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("[attitude] ") + e.what());
    }
  } else {
    if (!(radius > 0.0)) throw ConfigError("[double_integrator] radius must be positive");
    if (!(kp > 0.0) || !(kd > 0.0)) throw ConfigError("[double_integrator] kp and kd must be positive");
  }
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& name) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ScenarioConfig c;
  c.name = name;
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end() || !body.data().empty()) {
      throw ConfigError("unknown section or top-level key '" + section + "'");
    }
    for (const auto& [key, leaf] : body) {
      if (!known->second.count(key)) throw ConfigError("unknown key " + where(section, key));
      const std::string value = leaf.get_value<std::string>();
      apply(c, section, key, value);
      c.echo.emplace_back(section + "." + key, value);
    }
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::string stem = path;
  const auto slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return parse_scenario(in, stem);
}

InputLaw torque_disturbance(double bound, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double p1 = phase(rng);
  const double p2 = phase(rng);
  return [bound, p1, p2](const Vector& x, double t) -> Vector {
    const double theta = 0.9 * t + p1;
    const double phi = 1.7 * t + p2;
    if (x.size() == 4) return bound * Vector((Eigen::Vector2d() << std::cos(phi), std::sin(phi)).finished());
    Vector w(3);
    w << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
    return bound * w;
  };
}

Scenario build_scenario(const ScenarioConfig& config, int filter_override) {
  config.validate();
  Scenario s;
  const ChiTruncation chi = make_chi(config.chi);
  const std::vector<ExtendedClassK> alphas = make_alphas(config.alphas);
  double delta = 0.0;
  if (config.model == ModelKind::attitude) {
    const AttitudeParams params = config.attitude;
    s.model = attitude_model(params);
    s.provider = attitude_constraint_provider(params);
    const bool additive = config.additive_signal;
    s.nominal = [params, additive](const Vector& x, double t) -> Vector {
      Eigen::Vector3d u = nominal_attitude_controller(rotation_part(x), angular_velocity_part(x), params);
      if (additive) u += additive_signal(t);
      return u;
    };
    s.x0 = attitude_state(named_orientation(config.initial_orientation), config.omega0);
    if (config.project_rotation) s.options.project = project_attitude_state;
    delta = params.delta;
  } else {
    const DoubleIntegrator di = double_integrator_model(config.radius);
    s.model = di.model;
    s.provider = di.constraint;
    const auto law = double_integrator_pd(config.kp, config.kd, config.target);
    s.nominal = [law](const Vector& x, double) { return law(x); };
    s.x0 = Vector(4);
    s.x0 << config.p0, config.v0;
  }
  s.chain = std::make_shared<const BarrierChain>(s.provider, chi, config.xi, alphas, delta);
  FilterSettings settings;
  settings.enabled = filter_override < 0 ? config.filter : filter_override != 0;
  settings.omega_bar = config.omega_bar;
  s.controller = make_filtered_controller(s.chain, s.nominal, settings);
  s.options.zero_order_hold = config.zero_order_hold;
  if (config.disturbance > 0.0) {
    s.options.input_disturbance = torque_disturbance(config.disturbance, config.seed);
  }
  return s;
}

ScenarioChecks evaluate_checks(const Trajectory& traj, double xi, double tol) {
  ScenarioChecks checks;
  checks.invariance = forward_invariance_report(traj, tol);
  checks.safe = checks.invariance.invariant && checks.invariance.min_b >= -tol;
  std::vector<double> neg_dev(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const bool differs = (traj.inputs[k].array() != traj.nominal_inputs[k].array()).any();
    if (traj.barrier_b[k] >= xi && differs) ++checks.nominal_mismatches;
    neg_dev[k] = -(traj.inputs[k] - traj.nominal_inputs[k]).norm();
    if (k > 0) {
      checks.max_input_jump =
          std::max(checks.max_input_jump, (traj.inputs[k] - traj.inputs[k - 1]).norm());
    }
  }
  checks.discrepancy = detect_threshold_crossings(traj.times, neg_dev, 0.0);
  checks.below_xi = detect_threshold_crossings(traj.times, traj.barrier_b, xi);
  checks.below_zero = detect_threshold_crossings(traj.times, traj.barrier_b, 0.0);
  return checks;
}

SamplingBox scenario_box(const ScenarioConfig& config, long count, std::uint64_t seed,
                         Sampler sampler) {
  if (config.model == ModelKind::attitude) return attitude_box(config.attitude, count, seed, sampler);
  return double_integrator_box(config.radius, count, seed, sampler);
}

}  // namespace hocbf
