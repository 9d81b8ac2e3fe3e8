#pragma once

// Scenario configuration, end-to-end pipeline orchestration, certificate
// emission, and the data files behind the figure exports.
//
// Pipeline: project the datum onto G and integrate the Galerkin system, build
// the estimator bundle, solve the control ODE, apply the global-existence
// criteria, and write certificate + CSVs. When nu >= G_n |u0|_n the simple
// criterion already certifies a global solution and nothing is integrated.
//
// Exit codes: 0 certified-global, 10 certified-up-to-Tc, 20
// criterion-inconclusive (an inequality spot-check failed), 1 error.

#include <optional>
#include <string>

#include "nscert/control.hpp"

namespace nscert {

struct Scenario {
  int dim = 3;
  double n = 3.0;
  double nu = 0.0;
  InequalityConstants constants{0.323, 0.438};

  // Datum: a builtin name ("bnw"), a field file, or inline literal text in
  // the field-file format. Exactly one must be set.
  std::string datum_builtin;
  std::string datum_file;
  std::string datum_inline;

  // Mode set: a file (half-list convention) or the builtin "bnw" 150-mode set.
  std::string mode_set_builtin = "bnw";
  std::string mode_set_file;

  double horizon = 1.0;                 // Galerkin integration horizon T_I
  EstimatorOptions estimators;
  double t_max = 0.0;                   // control horizon cap; 0 = horizon
  ControlOptions control;
  IntegratorOptions galerkin;

  std::string out_dir;
  int figure_points = 400;  // uniform grid length for exported CSVs

  void validate() const;  // n > dim/2 + 1, nu >= 0, constants positive
};

Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& scenario);

/// The six-mode datum (2 pi)^{3/2} { (1,-1,0) on +-(1,1,0), (1,0,-1) on
/// +-(1,0,1), (0,1,-1) on +-(0,1,1) }; |u0|_m = sqrt(3 pi^3 2^{m+5}).
SpectralField bnw_datum();

/// The builtin 150-mode campaign set (also shipped as data/bnw_modes.txt).
const std::vector<Mode>& bnw_half_modes();
ModeSet bnw_mode_set();

/// Scenario preset for the campaign: d = 3, n = 3, K_3 = 0.323, G_3 = 0.438,
/// builtin datum and mode set, horizon defaulting to 2 for nu = 0 and 1
/// otherwise.
Scenario bnw_scenario(double nu, double horizon = 0.0, const std::string& out_dir = {});

struct EnvelopeParams {
  double t1 = 0.0;
  double A = 0.0;
};

struct Certificate {
  std::string tool_version;
  double nu = 0.0;
  double n = 0.0;
  InequalityConstants constants;
  double delta_n = 0.0;
  double Tc = 0.0;  // +inf when certified-global
  bool blew_up = false;
  std::string verdict;  // "certified-global" | "certified-up-to-Tc"
  std::string method;   // "simple-criterion" | "control-bootstrap" | "control"
  std::optional<double> t1;                  // first bootstrap time
  std::optional<EnvelopeParams> envelope;    // tightest certified envelope
  std::string samples_csv_path;
  std::string mode_set_checksum;
  int mode_count = 0;
  int residual_count = 0;
  double gap = 0.0;
  std::string datum_source;  // builtin name, file path, or "inline"
  double datum_norm_n = 0.0;
  int datum_support = 0;
  std::string delta_provenance, eps_provenance;

  // Everything that could move a certified digit.
  double horizon = 0.0, t_max = 0.0;
  IntegratorOptions galerkin_tolerances;
  ControlOptions control_tolerances;
  double eps_nodes_per_unit_time = 0.0;

  int exit_code() const { return verdict == "certified-global" ? 0 : 10; }
};

std::string certificate_to_json(const Certificate& certificate, bool with_timestamp = true);

struct RunResult {
  Certificate certificate;
  // In-memory artifacts for callers that keep computing (tests, figures).
  std::optional<GalerkinTrajectory> trajectory;
  std::optional<EstimatorBundle> bundle;
  std::optional<ControlSolution> control;
};

/// Runs the whole pipeline; when scenario.out_dir is nonempty writes
/// certificate.json, trajectory.csv, estimators.csv and control.csv there.
RunResult run_scenario(const Scenario& scenario);

/// Re-derives figure data from a completed run directory: |gamma_k(t)| for
/// each selected mode (selection "1,1,0;0,0,2"), plus D_n, eps_n and R_n
/// curves. Throws on a mode absent from the trajectory export.
std::vector<std::string> emit_figure_data(const std::string& run_dir,
                                          const std::string& mode_selection);

struct InequalitySuiteResult {
  int pairs = 0;
  int basic_failures = 0;
  int kato_failures = 0;
  double max_basic_slack = 0.0;
  double max_kato_slack = 0.0;
  bool all_hold() const { return basic_failures == 0 && kato_failures == 0; }
};

/// Seeded random divergence-free field pairs on the given mode set, checked
/// against both inequalities.
InequalitySuiteResult check_inequality_suite(const ModeSet& modes, double n,
                                             const InequalityConstants& constants,
                                             unsigned long long seed, int pairs);

}  // namespace nscert
