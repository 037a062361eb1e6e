#include <algorithm>
#include <filesystem>
#include <future>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "sdlab/acceptance.hpp"
#include "sdlab/experiments.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAcceptance = 4;

bool any_nonconverged(const sdlab::RunRecord& rec) {
  for (const auto& r : rec.reports)
    if (r.solve.iterations > 0 && !r.solve.converged) return true;
  return false;
}

int run_one(const std::string& path, double tol_override,
            const std::string& out_override) {
  sdlab::ExperimentConfig cfg = sdlab::load_config(path);
  if (tol_override > 0.0) cfg.tol = tol_override;
  if (!out_override.empty()) cfg.output_dir = out_override;
  const sdlab::RunRecord rec = sdlab::run(cfg);
  std::cout << "ran " << cfg.name << " (" << sdlab::suite_name(cfg.suite)
            << "), " << rec.wall_clock_ms << " ms\n";
  for (const auto& a : rec.artifacts) std::cout << "  " << a << "\n";
  return any_nonconverged(rec) ? kExitSolver : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdlab: numerical laboratory for the singular-drift Dirichlet "
               "problem on the unit disk"};
  app.require_subcommand(1);

  double tol = 0.0;
  std::string out_dir;
  int threads = 1;
  app.add_option("--tol", tol, "override the config tolerance");
  app.add_option("--out", out_dir, "override the output directory");
  app.add_option("--threads", threads, "parallel runs for suite mode")
      ->check(CLI::PositiveNumber);

  std::string config_path, suite_dir;
  auto* cmd_run = app.add_subcommand("run", "run one experiment config");
  cmd_run->add_option("config", config_path, "JSON config file")->required();
  auto* cmd_suite =
      app.add_subcommand("suite", "run every *.json config in a directory");
  cmd_suite->add_option("dir", suite_dir, "config directory")->required();
  auto* cmd_verify =
      app.add_subcommand("verify", "run the acceptance criteria end to end");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) return run_one(config_path, tol, out_dir);

    if (cmd_suite->parsed()) {
      std::vector<std::string> configs;
      for (const auto& e : fs::directory_iterator(suite_dir))
        if (e.path().extension() == ".json")
          configs.push_back(e.path().string());
      std::sort(configs.begin(), configs.end());
      if (configs.empty()) {
        std::cerr << "no *.json configs in " << suite_dir << "\n";
        return kExitConfig;
      }
      int rc = kExitOk;
      for (std::size_t i = 0; i < configs.size();) {
        std::vector<std::future<int>> batch;
        for (int t = 0; t < threads && i < configs.size(); ++t, ++i)
          batch.push_back(std::async(std::launch::async, run_one, configs[i],
                                     tol, out_dir));
        for (auto& f : batch) rc = std::max(rc, f.get());
      }
      return rc;
    }

    if (cmd_verify->parsed()) {
      const auto results = sdlab::acceptance::run_all(std::cout);
      return sdlab::acceptance::all_passed(results) ? kExitOk
                                                    : kExitAcceptance;
    }
  } catch (const sdlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
