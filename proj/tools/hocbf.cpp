#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hocbf/errors.hpp"
#include "hocbf/runner.hpp"

namespace {

using namespace hocbf;

// Runs `body`, mapping library errors to exit codes and a one-line message.
template <typename Body>
int guarded(const std::string& label, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << label << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidInput& e) {
    std::cerr << label << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << label << ": i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SimulationDiverged& e) {
    std::cerr << label << ": diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const InfeasibleAtState& e) {
    std::cerr << label << ": infeasible: " << e.what() << "\n";
    return kExitDiverged;
  }
}

void print_summary(const RunManifest& m) {
  const ScenarioChecks& c = m.checks;
  std::printf("%s: %s at t = %.4g s, %.2f s wall\n", m.config.name.c_str(),
              m.termination.label().c_str(), m.termination.time, m.wall_seconds);
  if (!m.termination.completed()) std::printf("  reason: %s\n", m.termination.reason.c_str());
  std::printf("  invariant = %s, min b = %.6g\n", c.invariance.invariant ? "true" : "false",
              c.invariance.min_b);
  std::printf("  discrepancy intervals:");
  for (const auto& iv : c.discrepancy) std::printf(" [%.3f, %.3f]", iv.enter, iv.exit);
  std::printf("\n  output: %s\n", m.out_dir.c_str());
}

int simulate(const std::string& config_path, const std::string& out) {
  return guarded(config_path, [&] {
    const RunManifest m = run_scenario(config_path, out);
    print_summary(m);
    return m.exit_code();
  });
}

void write_optional(const std::string& dir, const std::string& file, const std::string& text) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  std::ofstream out(std::filesystem::path(dir) / file);
  out << text;
  if (!out) throw IoError("cannot write " + file + " in '" + dir + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order control barrier function scenarios"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* sim = app.add_subcommand("simulate", "Run a scenario and write its outputs");
  sim->add_option("config", config_path, "Scenario INI file")->required();
  sim->add_option("--out", out_dir, "Output directory (default $HOCBF_OUT_ROOT/<name>)");

  long samples = 100000;
  std::uint64_t seed = 1;
  auto* ver = app.add_subcommand("verify", "Sampled certificate checks for a scenario");
  ver->add_option("config", config_path, "Scenario INI file")->required();
  ver->add_option("--samples", samples, "Number of states")->check(CLI::NonNegativeNumber);
  ver->add_option("--seed", seed, "Sampling seed");
  ver->add_option("--out", out_dir, "Also write verify.json here");

  auto* cmp = app.add_subcommand("compare", "Run with and without the filter and diff margins");
  cmp->add_option("config", config_path, "Scenario INI file")->required();
  cmp->add_option("--out", out_dir, "Also write compare.json here");

  std::vector<std::string> batch_configs;
  std::string out_root;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* batch = app.add_subcommand("batch", "Run several scenarios in parallel");
  batch->add_option("configs", batch_configs, "Scenario INI files")->required();
  batch->add_option("--out-root", out_root, "Parent of the per-run directories");
  batch->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (*sim) return simulate(config_path, out_dir);

  if (*ver) {
    return guarded(config_path, [&] {
      const ScenarioConfig config = load_scenario(config_path);
      const VerifyReport report = verify_scenario(config, samples, seed);
      const std::string text = verify_json(report);
      std::cout << text;
      write_optional(out_dir, "verify.json", text);
      return report.passed() ? kExitOk : kExitChecks;
    });
  }

  if (*cmp) {
    return guarded(config_path, [&] {
      const ScenarioConfig config = load_scenario(config_path);
      const CompareReport report = compare_scenario(config);
      const std::string text = compare_json(report);
      std::cout << text;
      write_optional(out_dir, "compare.json", text);
      return report.filtered.termination.completed() ? kExitOk : kExitDiverged;
    });
  }

  std::vector<int> codes(batch_configs.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  std::mutex print_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < batch_configs.size(); i = next++) {
      const std::string& path = batch_configs[i];
      codes[i] = guarded(path, [&] {
        ScenarioConfig config = load_scenario(path);
        std::string dir;
        if (!out_root.empty()) dir = (std::filesystem::path(out_root) / config.name).string();
        const RunManifest m = run_scenario(config, dir);
        const std::lock_guard<std::mutex> lock(print_mutex);
        print_summary(m);
        return m.exit_code();
      });
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, batch_configs.size()); ++j) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) t.join();
  int worst = kExitOk;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}
