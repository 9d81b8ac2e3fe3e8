#include "nscert/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nscert/field_io.hpp"
#include "nscert/version.hpp"

namespace nscert {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Builtin campaign data

SpectralField bnw_datum() {
  const double amp = std::pow(2.0 * M_PI, 1.5);
  SpectralField u0(3);
  auto put = [&](std::initializer_list<int> k, std::initializer_list<double> c) {
    Eigen::VectorXcd v(3);
    int i = 0;
    for (double x : c) v[i++] = amp * x;
    u0.set(Mode(k), v);
  };
  put({1, 1, 0}, {1, -1, 0});
  put({1, 0, 1}, {1, 0, -1});
  put({0, 1, 1}, {0, 1, -1});
  return u0;
}

const std::vector<Mode>& bnw_half_modes() {
  static const std::vector<Mode> modes = [] {
    static constexpr int raw[75][3] = {
        {0, 0, 2},   {0, 1, -3},  {0, 1, 1},   {0, 1, 3},   {0, 2, 0},   {0, 2, 2},
        {0, 3, -1},  {0, 3, 1},   {0, 3, 3},   {1, -3, -2}, {1, -3, 0},  {1, -3, 2},
        {1, -2, -3}, {1, -2, -1}, {1, -2, 1},  {1, -2, 3},  {1, -1, -2}, {1, -1, 2},
        {1, 0, -3},  {1, 0, 1},   {1, 0, 3},   {1, 1, -2},  {1, 1, 0},   {1, 1, 2},
        {1, 2, -3},  {1, 2, -1},  {1, 2, 1},   {1, 2, 3},   {1, 3, -2},  {1, 3, 0},
        {1, 3, 2},   {2, -3, -3}, {2, -3, -1}, {2, -3, 1},  {2, -3, 3},  {2, -2, -2},
        {2, -2, 2},  {2, -1, -3}, {2, -1, -1}, {2, -1, 1},  {2, -1, 3},  {2, 0, 0},
        {2, 0, 2},   {2, 1, -3},  {2, 1, -1},  {2, 1, 1},   {2, 1, 3},   {2, 2, -2},
        {2, 2, 0},   {2, 3, -3},  {2, 3, -1},  {2, 3, 1},   {2, 3, 3},   {3, -3, -2},
        {3, -3, 2},  {3, -2, -3}, {3, -2, -1}, {3, -2, 1},  {3, -2, 3},  {3, -1, -2},
        {3, -1, 0},  {3, -1, 2},  {3, 0, -1},  {3, 0, 1},   {3, 0, 3},   {3, 1, -2},
        {3, 1, 0},   {3, 1, 2},   {3, 2, -3},  {3, 2, -1},  {3, 2, 1},   {3, 2, 3},
        {3, 3, -2},  {3, 3, 0},   {3, 3, 2}};
    std::vector<Mode> out;
    out.reserve(75);
    for (const auto& r : raw) out.push_back(Mode{r[0], r[1], r[2]});
    return out;
  }();
  return modes;
}

ModeSet bnw_mode_set() {
  static const ModeSet set = ModeSet::fromHalfList(3, bnw_half_modes());
  return set;
}

Scenario bnw_scenario(double nu, double horizon, const std::string& out_dir) {
  Scenario s;
  s.dim = 3;
  s.n = 3.0;
  s.nu = nu;
  s.constants = InequalityConstants{0.323, 0.438};
  s.datum_builtin = "bnw";
  s.mode_set_builtin = "bnw";
  s.horizon = horizon > 0.0 ? horizon : (nu == 0.0 ? 2.0 : 1.0);
  s.out_dir = out_dir;
  return s;
}

// ---------------------------------------------------------------------------
// Scenario validation and JSON

void Scenario::validate() const {
  if (dim < 2) throw std::invalid_argument("scenario: dim must be at least 2");
  if (!(n > 0.5 * dim + 1.0))
    throw std::invalid_argument("scenario: the Sobolev order must satisfy n > d/2 + 1");
  if (nu < 0.0) throw std::invalid_argument("scenario: nu must be nonnegative");
  constants.validate();
  if (!(horizon > 0.0)) throw std::invalid_argument("scenario: horizon must be positive");
  const int datumSpecs = (!datum_builtin.empty()) + (!datum_file.empty()) + (!datum_inline.empty());
  if (datumSpecs != 1)
    throw std::invalid_argument("scenario: exactly one datum source must be given");
  if (mode_set_builtin.empty() == mode_set_file.empty())
    throw std::invalid_argument("scenario: exactly one mode-set source must be given");
}

Scenario parse_scenario(const std::string& json_text) {
  const json j = json::parse(json_text);
  Scenario s;
  s.dim = j.value("dim", 3);
  s.n = j.value("n", 3.0);
  s.nu = j.at("nu").get<double>();
  if (j.contains("constants")) {
    s.constants.K_n = j["constants"].value("K_n", 0.0);
    s.constants.G_n = j["constants"].value("G_n", 0.0);
  }
  if (j.contains("datum")) {
    const auto& d = j["datum"];
    s.datum_builtin = d.value("builtin", "");
    s.datum_file = d.value("file", "");
    s.datum_inline = d.value("inline", "");
  } else {
    s.datum_builtin = "bnw";
  }
  if (j.contains("mode_set")) {
    const auto& m = j["mode_set"];
    s.mode_set_builtin = m.value("builtin", "");
    s.mode_set_file = m.value("file", "");
  }
  s.horizon = j.value("horizon", s.nu == 0.0 ? 2.0 : 1.0);
  if (j.contains("estimators")) {
    const auto& e = j["estimators"];
    s.estimators.eps_rough = e.value("eps", "exact") == std::string("rough");
    s.estimators.rough_q = e.value("rough_q", 0.0);
    s.estimators.K_q = e.value("K_q", 0.0);
    s.estimators.delta_rough = e.value("delta", "exact") == std::string("rough");
    s.estimators.rough_p = e.value("rough_p", 0.0);
    s.estimators.nodes_per_unit_time = e.value("nodes_per_unit_time", 200.0);
    s.estimators.exact_on_demand = e.value("exact_on_demand", false);
    s.estimators.threads = e.value("threads", 0);
  }
  if (j.contains("control")) {
    const auto& c = j["control"];
    s.t_max = c.value("t_max", 0.0);
    s.control.abs_tol = c.value("abs_tol", 1e-12);
    s.control.rel_tol = c.value("rel_tol", 1e-10);
    s.control.blowup_threshold = c.value("blowup_threshold", 1e9);
  }
  if (j.contains("galerkin")) {
    const auto& g = j["galerkin"];
    s.galerkin.abs_tol = g.value("abs_tol", 1e-12);
    s.galerkin.rel_tol = g.value("rel_tol", 1e-10);
  }
  s.out_dir = j.value("out_dir", "");
  s.figure_points = j.value("figure_points", 400);
  s.validate();
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["dim"] = s.dim;
  j["n"] = s.n;
  j["nu"] = s.nu;
  j["constants"] = {{"K_n", s.constants.K_n}, {"G_n", s.constants.G_n}};
  json datum;
  if (!s.datum_builtin.empty()) datum["builtin"] = s.datum_builtin;
  if (!s.datum_file.empty()) datum["file"] = s.datum_file;
  if (!s.datum_inline.empty()) datum["inline"] = s.datum_inline;
  j["datum"] = datum;
  json modeSet;
  if (!s.mode_set_builtin.empty()) modeSet["builtin"] = s.mode_set_builtin;
  if (!s.mode_set_file.empty()) modeSet["file"] = s.mode_set_file;
  j["mode_set"] = modeSet;
  j["horizon"] = s.horizon;
  j["estimators"] = {{"eps", s.estimators.eps_rough ? "rough" : "exact"},
                     {"rough_q", s.estimators.rough_q},
                     {"K_q", s.estimators.K_q},
                     {"delta", s.estimators.delta_rough ? "rough" : "exact"},
                     {"rough_p", s.estimators.rough_p},
                     {"nodes_per_unit_time", s.estimators.nodes_per_unit_time},
                     {"exact_on_demand", s.estimators.exact_on_demand},
                     {"threads", s.estimators.threads}};
  j["control"] = {{"t_max", s.t_max},
                  {"abs_tol", s.control.abs_tol},
                  {"rel_tol", s.control.rel_tol},
                  {"blowup_threshold", s.control.blowup_threshold}};
  j["galerkin"] = {{"abs_tol", s.galerkin.abs_tol}, {"rel_tol", s.galerkin.rel_tol}};
  j["out_dir"] = s.out_dir;
  j["figure_points"] = s.figure_points;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Certificate

namespace {

json doubleOrInf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string timestampUtc() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string certificate_to_json(const Certificate& c, bool with_timestamp) {
  json j;
  j["tool_version"] = c.tool_version;
  if (with_timestamp) j["generated_at"] = timestampUtc();
  j["nu"] = c.nu;
  j["n"] = c.n;
  j["K_n"] = c.constants.K_n;
  j["G_n"] = c.constants.G_n;
  j["delta_n"] = c.delta_n;
  j["Tc"] = doubleOrInf(c.Tc);
  j["blew_up"] = c.blew_up;
  j["verdict"] = c.verdict;
  j["method"] = c.method;
  j["t1"] = c.t1 ? json(*c.t1) : json(nullptr);
  if (c.envelope) {
    j["envelope"] = {{"t1", c.envelope->t1}, {"A", c.envelope->A}};
  } else {
    j["envelope"] = nullptr;
  }
  j["samples_csv_path"] = c.samples_csv_path;
  j["mode_set"] = {{"checksum", c.mode_set_checksum},
                   {"count", c.mode_count},
                   {"residual_count", c.residual_count},
                   {"gap", c.gap}};
  j["datum"] = {{"source", c.datum_source},
                {"norm_n", c.datum_norm_n},
                {"stored_modes", c.datum_support}};
  j["estimators"] = {{"delta", c.delta_provenance},
                     {"eps", c.eps_provenance},
                     {"nodes_per_unit_time", c.eps_nodes_per_unit_time}};
  j["horizon"] = c.horizon;
  j["t_max"] = c.t_max;
  j["tolerances"] = {{"galerkin_abs", c.galerkin_tolerances.abs_tol},
                     {"galerkin_rel", c.galerkin_tolerances.rel_tol},
                     {"control_abs", c.control_tolerances.abs_tol},
                     {"control_rel", c.control_tolerances.rel_tol},
                     {"blowup_threshold", c.control_tolerances.blowup_threshold}};
  j["exit_code"] = c.exit_code();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

ModeSet scenarioModeSet(const Scenario& s) {
  if (!s.mode_set_file.empty())
    return ModeSet::fromHalfList(s.dim, load_mode_set_file(s.mode_set_file, s.dim));
  if (s.mode_set_builtin == "bnw") {
    if (s.dim != 3) throw std::invalid_argument("scenario: the builtin mode set is 3-dimensional");
    return bnw_mode_set();
  }
  throw std::invalid_argument("scenario: unknown builtin mode set '" + s.mode_set_builtin + "'");
}

SpectralField scenarioDatum(const Scenario& s) {
  if (!s.datum_file.empty()) return load_field_file(s.datum_file, s.dim);
  if (!s.datum_inline.empty()) return parse_field_text(s.datum_inline, s.dim);
  if (s.datum_builtin == "bnw") {
    if (s.dim != 3) throw std::invalid_argument("scenario: the builtin datum is 3-dimensional");
    return bnw_datum();
  }
  throw std::invalid_argument("scenario: unknown builtin datum '" + s.datum_builtin + "'");
}

void writeTrajectoryCsv(const std::string& path, const GalerkinTrajectory& traj, int points) {
  const auto& half = traj.problem().modes.halfModes();
  const int d = traj.problem().dim();
  CsvTable table;
  table.header.push_back("t");
  for (const Mode& k : half) {
    std::string tag;
    for (int i = 0; i < d; ++i) tag += "_" + std::to_string(k[i]);
    for (int c = 0; c < d; ++c) {
      table.header.push_back("re" + tag + "_" + std::to_string(c));
      table.header.push_back("im" + tag + "_" + std::to_string(c));
    }
  }
  table.rows.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = traj.horizon() * i / (points - 1);
    const Eigen::VectorXcd state = traj.stateAt(t);
    std::vector<double> row;
    row.reserve(1 + 2 * state.size());
    row.push_back(t);
    for (Eigen::Index j = 0; j < state.size(); ++j) {
      row.push_back(state[j].real());
      row.push_back(state[j].imag());
    }
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table, {"Galerkin coefficients in canonical mode order"});
}

void writeEstimatorsCsv(const std::string& path, const EstimatorBundle& bundle, int points) {
  CsvTable table;
  table.header = {"t", "D_n", "D_np1", "eps_n"};
  for (int i = 0; i < points; ++i) {
    const double t = bundle.horizon * i / (points - 1);
    table.rows.push_back({t, bundle.D_n(t), bundle.D_np1(t), bundle.eps(t)});
  }
  std::ostringstream meta;
  meta << "delta_n = " << format_double(bundle.delta_n) << " (" << to_string(bundle.delta_provenance)
       << "); eps provenance = " << to_string(bundle.eps_provenance)
       << "; nodes_per_unit_time = " << format_double(bundle.nodes_per_unit_time);
  write_csv(path, table, {meta.str()});
}

void writeControlCsv(const std::string& path, const ControlSolution& sol, int points) {
  CsvTable table;
  table.header = {"t", "R_n"};
  const double end = sol.domainEnd();
  for (int i = 0; i < points; ++i) {
    const double t = end * i / (points - 1);
    table.rows.push_back({t, sol.evalR(t)});
  }
  write_csv(path, table,
            {std::string("Tc = ") + format_double(sol.Tc) +
             (sol.blew_up ? " (blow-up detected)" : " (no blow-up on the cap)")});
}

}  // namespace

RunResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  const ModeSet modes = scenarioModeSet(scenario);
  const SpectralField datum = scenarioDatum(scenario);

  RunResult result;
  Certificate& cert = result.certificate;
  cert.tool_version = kToolVersion;
  cert.nu = scenario.nu;
  cert.n = scenario.n;
  cert.constants = scenario.constants;
  cert.mode_set_checksum = modes.checksum();
  cert.mode_count = static_cast<int>(modes.size());
  cert.residual_count = static_cast<int>(modes.residualSize());
  cert.gap = modes.gap();
  cert.horizon = scenario.horizon;
  cert.galerkin_tolerances = scenario.galerkin;
  cert.control_tolerances = scenario.control;
  cert.eps_nodes_per_unit_time = scenario.estimators.nodes_per_unit_time;
  cert.delta_provenance = scenario.estimators.delta_rough ? "rough" : "exact";
  cert.eps_provenance = scenario.estimators.eps_rough ? "rough" : "exact";

  cert.delta_n = scenario.estimators.delta_rough
                     ? datum_error_rough(datum, modes, scenario.n, scenario.estimators.rough_p)
                     : datum_error_exact(datum, modes, scenario.n);

  const double normU0 = sobolev_norm(datum, scenario.n);
  cert.datum_source = !scenario.datum_file.empty()
                          ? scenario.datum_file
                          : (!scenario.datum_inline.empty() ? "inline"
                                                            : "builtin:" + scenario.datum_builtin);
  cert.datum_norm_n = normU0;
  cert.datum_support = static_cast<int>(datum.supportSize());

  if (global_existence_simple(scenario.nu, scenario.constants.G_n, normU0)) {
    cert.verdict = "certified-global";
    cert.method = "simple-criterion";
    cert.Tc = std::numeric_limits<double>::infinity();
    cert.blew_up = false;
    cert.t1 = 0.0;
    cert.envelope = EnvelopeParams{0.0, normU0};
    cert.t_max = 0.0;
    if (!scenario.out_dir.empty()) {
      fs::create_directories(scenario.out_dir);
      write_text_file((fs::path(scenario.out_dir) / "certificate.json").string(),
                      certificate_to_json(cert));
    }
    return result;
  }

  GalerkinProblem problem(modes, scenario.nu, datum);
  result.trajectory = integrate(problem, scenario.horizon, scenario.galerkin);
  result.bundle = make_bundle(*result.trajectory, scenario.n, scenario.estimators);

  ControlProblem controlProblem;
  controlProblem.nu = scenario.nu;
  controlProblem.constants = scenario.constants;
  controlProblem.bundle = *result.bundle;
  controlProblem.t_max =
      scenario.t_max > 0.0 ? std::min(scenario.t_max, scenario.horizon) : scenario.horizon;
  controlProblem.options = scenario.control;
  cert.t_max = controlProblem.t_max;

  result.control = solve_control(controlProblem);
  const ControlSolution& sol = *result.control;

  const BootstrapResult boot = global_existence_bootstrap(sol, *result.bundle, scenario.nu,
                                                          scenario.constants.G_n);
  if (boot.global) {
    cert.verdict = "certified-global";
    cert.method = "control-bootstrap";
    cert.Tc = std::numeric_limits<double>::infinity();
    cert.blew_up = false;
    cert.t1 = boot.t1;
    // Tightest certified envelope: the admissible sample minimizing A.
    EnvelopeParams best{boot.t1, result.bundle->D_n(boot.t1) + sol.evalR(boot.t1)};
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
      const double t = sol.times[i];
      if (t < boot.t1) continue;
      const double a = result.bundle->D_n(t) + sol.values[i];
      if (a <= boot.threshold && a < best.A) best = EnvelopeParams{t, a};
    }
    cert.envelope = best;
  } else {
    cert.verdict = "certified-up-to-Tc";
    cert.method = "control";
    cert.Tc = sol.Tc;
    cert.blew_up = sol.blew_up;
  }

  if (!scenario.out_dir.empty()) {
    fs::create_directories(scenario.out_dir);
    const fs::path dir(scenario.out_dir);
    writeTrajectoryCsv((dir / "trajectory.csv").string(), *result.trajectory,
                       scenario.figure_points);
    writeEstimatorsCsv((dir / "estimators.csv").string(), *result.bundle, scenario.figure_points);
    writeControlCsv((dir / "control.csv").string(), sol, scenario.figure_points);
    cert.samples_csv_path = "control.csv";
    write_text_file((dir / "certificate.json").string(), certificate_to_json(cert));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Figure data

std::vector<std::string> emit_figure_data(const std::string& run_dir,
                                          const std::string& mode_selection) {
  const fs::path dir(run_dir);
  std::vector<std::string> written;

  const CsvTable traj = read_csv((dir / "trajectory.csv").string());
  if (traj.header.empty() || traj.header.front() != "t")
    throw std::runtime_error("emit_figure_data: malformed trajectory.csv");

  // Column layout: t, then 2d columns per mode tagged re_k1_.._c / im_k1_.._c.
  struct ModeColumns {
    std::vector<int> cols;  // re/im interleaved
  };
  std::map<std::string, ModeColumns> byTag;
  for (std::size_t c = 1; c < traj.header.size(); ++c) {
    const std::string& h = traj.header[c];
    const auto lastSep = h.rfind('_');
    if (lastSep == std::string::npos || h.size() < 3) continue;
    const std::string tag = h.substr(3, lastSep - 3);  // strip re_/im_ prefix and _comp suffix
    byTag[tag].cols.push_back(static_cast<int>(c));
  }

  std::istringstream sel(mode_selection);
  std::string token;
  while (std::getline(sel, token, ';')) {
    if (token.empty()) continue;
    std::vector<int> comps;
    std::istringstream ts(token);
    std::string num;
    while (std::getline(ts, num, ',')) comps.push_back(std::stoi(num));
    Eigen::VectorXi kv(static_cast<Eigen::Index>(comps.size()));
    for (std::size_t i = 0; i < comps.size(); ++i) kv[static_cast<Eigen::Index>(i)] = comps[i];
    const Mode k = Mode(kv).canonical();  // |gamma_{-k}| = |gamma_k|
    std::string tag;
    for (int i = 0; i < k.dim(); ++i) tag += std::to_string(k[i]) + "_";
    tag.pop_back();
    const auto it = byTag.find(tag);
    if (it == byTag.end())
      throw std::invalid_argument("emit_figure_data: mode " + token + " is not in the trajectory");

    CsvTable out;
    out.header = {"t", "abs_gamma"};
    for (const auto& row : traj.rows) {
      double sq = 0.0;
      for (std::size_t p = 0; p + 1 < it->second.cols.size(); p += 2) {
        const double re = row[static_cast<std::size_t>(it->second.cols[p])];
        const double im = row[static_cast<std::size_t>(it->second.cols[p + 1])];
        sq += re * re + im * im;
      }
      out.rows.push_back({row[0], std::sqrt(sq)});
    }
    const std::string path = (dir / ("fig_gamma_" + tag + ".csv")).string();
    write_csv(path, out, {"|gamma_k(t)| for k = " + token});
    written.push_back(path);
  }

  const CsvTable est = read_csv((dir / "estimators.csv").string());
  auto extract = [&](const CsvTable& src, std::size_t col, const std::string& name,
                     const std::string& fname) {
    CsvTable out;
    out.header = {"t", name};
    for (const auto& row : src.rows) out.rows.push_back({row[0], row[col]});
    const std::string path = (dir / fname).string();
    write_csv(path, out);
    written.push_back(path);
  };
  extract(est, 1, "D_n", "fig_D_n.csv");
  extract(est, 3, "eps_n", "fig_eps_n.csv");

  const CsvTable ctl = read_csv((dir / "control.csv").string());
  extract(ctl, 1, "R_n", "fig_R_n.csv");
  return written;
}

// ---------------------------------------------------------------------------
// Inequality spot checks

namespace {

class GaussianSource {
public:
  explicit GaussianSource(unsigned long long seed) : eng_(seed) {}

  double uniform() {  // (0, 1), engine-exact and platform-independent
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    have_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }
  std::uint64_t bits() { return eng_(); }

private:
  std::mt19937_64 eng_;
  bool have_ = false;
  double cached_ = 0.0;
};

SpectralField randomDivergenceFreeField(const ModeSet& modes, GaussianSource& rng) {
  const auto& half = modes.halfModes();
  std::vector<std::size_t> order(half.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.bits() % i]);
  const std::size_t count = 1 + rng.bits() % half.size();

  SpectralField field(modes.dim());
  for (std::size_t i = 0; i < count; ++i) {
    const Mode& k = half[order[i]];
    Eigen::VectorXcd c(modes.dim());
    for (int j = 0; j < modes.dim(); ++j)
      c[j] = std::complex<double>(rng.normal(), rng.normal());
    const Eigen::VectorXcd projected = leray_project(k, c);
    if (projected.norm() < 1e-12 * c.norm()) continue;
    field.set(k, projected);
  }
  return field;
}

}  // namespace

InequalitySuiteResult check_inequality_suite(const ModeSet& modes, double n,
                                             const InequalityConstants& constants,
                                             unsigned long long seed, int pairs) {
  constants.validate();
  GaussianSource rng(seed);
  InequalitySuiteResult out;
  out.pairs = pairs;
  for (int i = 0; i < pairs; ++i) {
    const SpectralField v = randomDivergenceFreeField(modes, rng);
    const SpectralField w = randomDivergenceFreeField(modes, rng);
    const InequalityCheck basic = check_basic_inequality(v, w, n, constants.K_n);
    const InequalityCheck kato = check_kato_inequality(v, w, n, constants.G_n);
    if (!basic.holds) out.basic_failures++;
    if (!kato.holds) out.kato_failures++;
    out.max_basic_slack = std::max(out.max_basic_slack, basic.slack);
    out.max_kato_slack = std::max(out.max_kato_slack, kato.slack);
  }
  return out;
}

}  // namespace nscert
