#include "hocbf/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "hocbf/errors.hpp"
#include "hocbf/trajectory_io.hpp"
#include "json.hpp"

namespace hocbf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json intervals_json(const std::vector<TimeInterval>& intervals) {
  json out = json::array();
  for (const TimeInterval& iv : intervals) out.push_back({iv.enter, iv.exit});
  return out;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json checks_json(const ScenarioChecks& c) {
  return {
      {"precondition_met", c.invariance.precondition_met},
      {"invariant", c.invariance.invariant},
      {"safe", c.safe},
      {"min_b", c.invariance.min_b},
      {"min_margins", vector_json(c.invariance.min_margins)},
      {"nominal_mismatches_where_b_ge_xi", c.nominal_mismatches},
      {"max_input_jump", c.max_input_jump},
      {"discrepancy_intervals", intervals_json(c.discrepancy)},
      {"below_xi_intervals", intervals_json(c.below_xi)},
      {"below_zero_intervals", intervals_json(c.below_zero)},
  };
}

json termination_json(const Termination& t) {
  return {{"status", t.label()}, {"time", t.time}, {"reason", t.reason}};
}

json report_json(const CertificateReport& r) {
  json violations = json::array();
  const std::size_t shown = std::min<std::size_t>(r.violations.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    violations.push_back({{"state", vector_json(r.violations[i].state)},
                          {"quantity", r.violations[i].quantity},
                          {"value", r.violations[i].value}});
  }
  return {{"checked", r.checked},
          {"violation_count", r.violations.size()},
          {"violations", violations},
          {"min_slack", r.min_slack},
          {"passed", r.passed()}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string resolve_out_dir(const ScenarioConfig& config, const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (!config.out_dir.empty()) return config.out_dir;
  const char* root = std::getenv("HOCBF_OUT_ROOT");
  const fs::path base = root && *root ? fs::path(root) : fs::path("out");
  return (base / config.name).string();
}

RunManifest run_scenario(const ScenarioConfig& config, const std::string& out_dir) {
  config.validate();
  RunManifest m;
  m.config = config;
  m.out_dir = resolve_out_dir(config, out_dir);

  const auto start = std::chrono::steady_clock::now();
  const Scenario s = build_scenario(config);
  RunResult run = run_closed_loop(s.model, s.controller, s.x0, config.horizon, config.dt, s.options);
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.termination = run.termination;
  m.checks = evaluate_checks(run.trajectory, config.xi);

  std::error_code ec;
  fs::create_directories(m.out_dir, ec);
  if (ec) throw IoError("cannot create '" + m.out_dir + "': " + ec.message());
  const fs::path dir(m.out_dir);

  emit_csv(run.trajectory, (dir / "trajectory.csv").string());
  emit_psi_csv(run.trajectory, (dir / "psi.csv").string());
  std::vector<EventRecord> events;
  for (const auto& iv : m.checks.discrepancy) events.push_back({"filter_active", iv});
  for (const auto& iv : m.checks.below_xi) events.push_back({"b_below_xi", iv});
  for (const auto& iv : m.checks.below_zero) events.push_back({"b_below_zero", iv});
  emit_events_csv(events, (dir / "events.csv").string());
  m.artifacts = {"trajectory.csv", "psi.csv", "events.csv", "manifest.json"};
  write_text(dir / "manifest.json", manifest_json(m));
  return m;
}

RunManifest run_scenario(const std::string& config_path, const std::string& out_dir) {
  return run_scenario(load_scenario(config_path), out_dir);
}

std::string manifest_json(const RunManifest& m) {
  json config = json::object();
  for (const auto& [key, value] : m.config.echo) config[key] = value;
  json doc = {
      {"scenario", m.config.name},
      {"model", model_name(m.config.model)},
      {"config", config},
      {"horizon", m.config.horizon},
      {"dt", m.config.dt},
      {"xi", m.config.xi},
      {"filter", m.config.filter},
      {"out_dir", m.out_dir},
      {"artifacts", m.artifacts},
      {"termination", termination_json(m.termination)},
      {"checks", checks_json(m.checks)},
      {"timing", {{"wall_seconds", m.wall_seconds}}},
  };
  return doc.dump(2) + "\n";
}

VerifyReport verify_scenario(const ScenarioConfig& config, long samples, std::uint64_t seed) {
  const Scenario s = build_scenario(config);
  const std::vector<Vector> states = draw_samples(scenario_box(config, samples, seed));
  VerifyReport r;
  r.hocbf_condition = check_hocbf_condition(*s.chain, states);
  r.relative_degree = check_least_relative_degree(s.provider, s.model, states);
  std::vector<Vector> containment_states = states;
  if (config.model == ModelKind::double_integrator) {
    // E = {p = 0} has measure zero; add points on it explicitly.
    for (const Eigen::Vector2d& v : {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0),
                                     Eigen::Vector2d(0.5, -0.25)}) {
      Vector x = Vector::Zero(4);
      x.tail<2>() = v;
      containment_states.push_back(x);
    }
  }
  r.singular_containment = check_containment(singular_set_indicator(s.provider),
                                             s.provider.eval_b, config.xi, containment_states);
  return r;
}

std::string verify_json(const VerifyReport& r) {
  json doc = {{"hocbf_condition", report_json(r.hocbf_condition)},
              {"least_relative_degree", report_json(r.relative_degree)},
              {"singular_set_containment", report_json(r.singular_containment)},
              {"passed", r.passed()}};
  return doc.dump(2) + "\n";
}

CompareReport compare_scenario(const ScenarioConfig& config) {
  CompareReport r;
  for (int filter : {1, 0}) {
    const Scenario s = build_scenario(config, filter);
    RunResult run = run_closed_loop(s.model, s.controller, s.x0, config.horizon, config.dt, s.options);
    ScenarioChecks checks = evaluate_checks(run.trajectory, config.xi);
    if (filter) {
      r.filtered = std::move(run);
      r.filtered_checks = std::move(checks);
    } else {
      r.unfiltered = std::move(run);
      r.unfiltered_checks = std::move(checks);
    }
  }
  return r;
}

std::string compare_json(const CompareReport& r) {
  const Vector& f = r.filtered_checks.invariance.min_margins;
  const Vector& u = r.unfiltered_checks.invariance.min_margins;
  json diff = json::array();
  if (f.size() == u.size()) {
    for (Eigen::Index i = 0; i < f.size(); ++i) diff.push_back(f[i] - u[i]);
  }
  json doc = {
      {"filtered",
       {{"termination", termination_json(r.filtered.termination)},
        {"checks", checks_json(r.filtered_checks)}}},
      {"unfiltered",
       {{"termination", termination_json(r.unfiltered.termination)},
        {"checks", checks_json(r.unfiltered_checks)}}},
      {"min_margin_difference", diff},
      {"min_b_difference",
       r.filtered_checks.invariance.min_b - r.unfiltered_checks.invariance.min_b},
  };
  return doc.dump(2) + "\n";
}

}  // namespace hocbf
