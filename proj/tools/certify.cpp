// certify — spectral a-posteriori certification for the incompressible
// Euler/NS equations on the torus.
//
//   certify run <scenario.json> [more.json ...] [--jobs N]
//   certify bnw --nu <v> [--horizon T] [--out dir] [...]
//   certify figures <run-dir> --modes "1,1,0;0,0,2;0,1,-3"
//   certify check-inequalities [--seed N] [--pairs N]
//
// Exit codes: 0 certified-global, 10 certified-up-to-Tc,
// 20 criterion-inconclusive, 1 error. CERTIFY_THREADS caps worker threads.

#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <vector>

#include <CLI11.hpp>

#include "nscert/field_io.hpp"
#include "nscert/parallel.hpp"
#include "nscert/scenario.hpp"
#include "nscert/version.hpp"

namespace {

int runOne(const nscert::Scenario& scenario) {
  const nscert::RunResult result = nscert::run_scenario(scenario);
  const auto& cert = result.certificate;
  std::cout << "verdict: " << cert.verdict << " (method: " << cert.method << ")\n";
  if (std::isinf(cert.Tc)) {
    std::cout << "Tc: inf\n";
  } else {
    std::cout << "Tc: " << nscert::format_double(cert.Tc)
              << (cert.blew_up ? " (blow-up)" : " (horizon cap)") << "\n";
  }
  if (cert.t1) std::cout << "t1: " << nscert::format_double(*cert.t1) << "\n";
  if (cert.envelope)
    std::cout << "envelope: A = " << nscert::format_double(cert.envelope->A)
              << " at t1 = " << nscert::format_double(cert.envelope->t1) << "\n";
  if (!scenario.out_dir.empty()) std::cout << "artifacts: " << scenario.out_dir << "\n";
  return cert.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral a-posteriori certification for Euler/NS on the torus"};
  app.set_version_flag("--version", nscert::kToolVersion);
  app.require_subcommand(1);

  // --- run ------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run scenario files (in parallel with --jobs)");
  std::vector<std::string> scenarioFiles;
  int jobs = 1;
  run->add_option("scenarios", scenarioFiles, "Scenario JSON files")->required();
  run->add_option("--jobs", jobs, "Worker threads for independent scenarios");

  // --- bnw ------------------------------------------------------------------
  auto* bnw = app.add_subcommand("bnw", "Run the built-in campaign datum");
  double nu = 0.0, horizon = 0.0, tMax = 0.0;
  std::string outDir;
  double nodesPerUnit = 200.0;
  bool exactOnDemand = false;
  bnw->add_option("--nu", nu, "Viscosity")->required();
  bnw->add_option("--horizon", horizon, "Galerkin horizon (default 2 for nu=0, else 1)");
  bnw->add_option("--t-max", tMax, "Control horizon cap (default: horizon)");
  bnw->add_option("--out", outDir, "Output directory for certificate and CSVs");
  bnw->add_option("--eps-nodes", nodesPerUnit, "Estimator sample nodes per unit time");
  bnw->add_flag("--eps-exact", exactOnDemand, "Evaluate estimators exactly on demand");

  // --- figures ----------------------------------------------------------------
  auto* figures = app.add_subcommand("figures", "Emit figure CSVs from a run directory");
  std::string runDir, modeSelection;
  figures->add_option("run-dir", runDir, "Completed run directory")->required();
  figures->add_option("--modes", modeSelection, "Semicolon-separated modes, e.g. \"1,1,0;0,0,2\"")
      ->required();

  // --- check-inequalities -----------------------------------------------------
  auto* check = app.add_subcommand("check-inequalities",
                                   "Spot-check the basic and Kato inequalities on random fields");
  unsigned long long seed = 1;
  int pairCount = 1000;
  check->add_option("--seed", seed, "RNG seed");
  check->add_option("--pairs", pairCount, "Number of random field pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::vector<nscert::Scenario> scenarios;
      for (const auto& f : scenarioFiles)
        scenarios.push_back(nscert::parse_scenario(nscert::read_text_file(f)));
      std::atomic<int> worst{0};
      std::mutex io;
      nscert::parallel_for(scenarios.size(), nscert::effective_thread_count(jobs),
                           [&](std::size_t i) {
                             int code = 1;
                             try {
                               code = runOne(scenarios[i]);
                             } catch (const std::exception& e) {
                               const std::lock_guard<std::mutex> lock(io);
                               std::cerr << "error (" << scenarioFiles[i] << "): " << e.what()
                                         << "\n";
                             }
                             int prev = worst.load();
                             while (prev < code && !worst.compare_exchange_weak(prev, code)) {
                             }
                           });
      return worst.load();
    }

    if (bnw->parsed()) {
      nscert::Scenario scenario = nscert::bnw_scenario(nu, horizon, outDir);
      scenario.t_max = tMax;
      scenario.estimators.nodes_per_unit_time = nodesPerUnit;
      scenario.estimators.exact_on_demand = exactOnDemand;
      return runOne(scenario);
    }

    if (figures->parsed()) {
      for (const auto& path : nscert::emit_figure_data(runDir, modeSelection))
        std::cout << path << "\n";
      return 0;
    }

    if (check->parsed()) {
      const auto result = nscert::check_inequality_suite(
          nscert::bnw_mode_set(), 3.0, nscert::InequalityConstants{0.323, 0.438}, seed, pairCount);
      std::cout << "pairs: " << result.pairs << "\n"
                << "basic: max slack " << nscert::format_double(result.max_basic_slack) << ", "
                << result.basic_failures << " failures\n"
                << "kato:  max slack " << nscert::format_double(result.max_kato_slack) << ", "
                << result.kato_failures << " failures\n";
      return result.all_hold() ? 0 : 20;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
