#include "nscert/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nscert/quadrature.hpp"

namespace nscert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double e_nu(double nu, double t) {
  if (t < 0.0) throw std::invalid_argument("e_nu: negative time");
  if (nu == 0.0) return t;
  return -std::expm1(-nu * t) / nu;  // exact for nu t << 1, continuous in nu
}

double ControlSolution::evalR(double t) const {
  return dense.eval(t)[0];
}

ControlSolution solve_control(const ControlProblem& problem) {
  problem.constants.validate();
  if (problem.nu < 0.0) throw std::invalid_argument("solve_control: negative viscosity");
  if (!(problem.t_max > 0.0)) throw std::invalid_argument("solve_control: t_max must be positive");
  if (problem.t_max > problem.bundle.horizon * (1.0 + 1e-12))
    throw std::invalid_argument("solve_control: bundle horizon shorter than requested");

  const double nu = problem.nu;
  const double K = problem.constants.K_n;
  const double G = problem.constants.G_n;
  const auto& bundle = problem.bundle;

  auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    const double r = y[0];
    dydt.resize(1);
    dydt[0] = -nu * r + (G * bundle.D_n(t) + K * bundle.D_np1(t)) * r + G * r * r + bundle.eps(t);
  };

  IntegratorOptions opts;
  opts.abs_tol = problem.options.abs_tol;
  opts.rel_tol = problem.options.rel_tol;
  opts.min_step = 1e-14 * problem.t_max;

  const double threshold = problem.options.blowup_threshold;
  auto stop = [threshold](double, const Eigen::VectorXd& y) { return y[0] > threshold; };

  Eigen::VectorXd y0(1);
  y0[0] = bundle.delta_n;
  DenseSolution dense = integrate_dopri5(rhs, y0, 0.0, problem.t_max, opts, stop);

  ControlSolution sol;
  sol.times = dense.stepTimes();
  sol.values.reserve(sol.times.size());
  for (std::size_t i = 0; i < sol.times.size(); ++i)
    sol.values.push_back(i == 0 ? bundle.delta_n : dense.eval(sol.times[i])[0]);
  sol.last_value = dense.finalState()[0];
  sol.last_step = sol.times.size() >= 2
                      ? sol.times.back() - sol.times[sol.times.size() - 2]
                      : 0.0;

  const auto status = dense.status();
  sol.dense = std::move(dense);

  if (status == IntegrationStatus::reached_end) {
    sol.blew_up = false;
    sol.Tc = problem.t_max;
    return sol;
  }
  if (status == IntegrationStatus::step_underflow &&
      sol.last_value < 1e3 * std::max(1.0, bundle.delta_n)) {
    throw ControlIntegrationError(
        "solve_control: step-size collapse without divergence (integrator failure, not blow-up)");
  }

  // Blow-up: R grows like 1/(G (Tc - t)), so 1/R is asymptotically linear in
  // t; extrapolate its zero crossing from the last two accepted samples.
  sol.blew_up = true;
  double tc = sol.times.back();
  const std::size_t m = sol.times.size();
  if (m >= 2 && sol.values[m - 1] > 0.0 && sol.values[m - 2] > 0.0) {
    const double y1 = 1.0 / sol.values[m - 2], y2 = 1.0 / sol.values[m - 1];
    if (y2 < y1) {
      const double slope = (y2 - y1) / (sol.times[m - 1] - sol.times[m - 2]);
      tc = sol.times[m - 1] - y2 / slope;
    }
  }
  sol.Tc = std::min(std::max(tc, sol.times.back()), problem.t_max);
  return sol;
}

AnalyticControl analytic_zero_approximant(double nu, double G_n, double norm_u0_n) {
  if (nu < 0.0 || G_n <= 0.0 || norm_u0_n < 0.0)
    throw std::invalid_argument("analytic_zero_approximant: invalid inputs");

  AnalyticControl out;
  if (norm_u0_n == 0.0) {
    out.Tc = kInf;
    out.R = [](double) { return 0.0; };
    return out;
  }
  if (nu > 0.0 && norm_u0_n <= nu / G_n) {
    out.Tc = kInf;
  } else if (nu > 0.0) {
    out.Tc = -std::log1p(-nu / (G_n * norm_u0_n)) / nu;
  } else {
    out.Tc = 1.0 / (G_n * norm_u0_n);
  }
  out.R = [nu, G_n, norm_u0_n](double t) {
    return norm_u0_n * std::exp(-nu * t) / (1.0 - G_n * norm_u0_n * e_nu(nu, t));
  };
  return out;
}

ExpDecayControl analytic_exp_decay(double nu, double K_n, double G_n, double D_n, double D_np1,
                                   double E_n, double delta_n) {
  if (nu < 0.0 || K_n <= 0.0 || G_n <= 0.0 || !(D_n > 0.0) || !(D_np1 > 0.0) || E_n < 0.0 ||
      delta_n < 0.0)
    throw std::invalid_argument("analytic_exp_decay: invalid inputs");

  ExpDecayControl out;
  out.Delta = 0.5 * (G_n * D_n + K_n * D_np1);
  const double disc = out.Delta * out.Delta - G_n * E_n;
  if (!(disc > 0.0)) {
    out.rejection = "error bound violated: G_n E_n >= Delta^2 (degenerate W- = W+ included)";
    return out;
  }
  out.admissible = true;
  const double root = std::sqrt(disc);
  out.W_plus = out.Delta + root;
  out.W_minus = out.Delta - root;

  const double Wp = out.W_plus, Wm = out.W_minus;
  const double num = Wp + G_n * delta_n;
  const double den = Wm + G_n * delta_n;
  const double logRatio = (den == 0.0) ? kInf : std::log(num / den);

  if (nu > 0.0) {
    // Equality in the threshold counts as global.
    if (logRatio >= (Wp - Wm) / nu) {
      out.Tc = kInf;
    } else {
      out.Tc = -std::log1p(-nu / (Wp - Wm) * logRatio) / nu;
    }
  } else {
    out.Tc = (logRatio == kInf) ? kInf : logRatio / (Wp - Wm);
  }

  out.R = [nu, G_n, Wp, Wm, delta_n](double t) {
    const double eta = std::exp((Wp - Wm) * e_nu(nu, t));
    const double a = Wm + G_n * delta_n;
    const double b = Wp + G_n * delta_n;
    return (Wp * a * eta - Wm * b) / (b - a * eta) * std::exp(-nu * t) / G_n;
  };
  return out;
}

bool global_existence_simple(double nu, double G_n, double norm_u0_n) {
  if (G_n <= 0.0) throw std::invalid_argument("global_existence_simple: G_n must be positive");
  return nu >= G_n * norm_u0_n;
}

BootstrapResult global_existence_bootstrap(const ControlSolution& solution,
                                           const EstimatorBundle& bundle, double nu, double G_n) {
  if (G_n <= 0.0) throw std::invalid_argument("global_existence_bootstrap: G_n must be positive");
  BootstrapResult out;
  out.threshold = nu / G_n;
  if (solution.times.empty()) return out;

  auto value = [&](double t) { return bundle.D_n(t) + solution.evalR(t); };

  const double end = solution.domainEnd();
  std::size_t hit = solution.times.size();
  for (std::size_t i = 0; i < solution.times.size(); ++i) {
    const double t = std::min(solution.times[i], end);
    if (value(t) <= out.threshold) {
      hit = i;
      break;
    }
  }
  if (hit == solution.times.size()) return out;

  out.global = true;
  double t1 = solution.times[hit];
  if (hit > 0) {
    // Refine the crossing between the last failing and first passing samples.
    double lo = solution.times[hit - 1], hi = t1;
    for (int it = 0; it < 80 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (value(mid) <= out.threshold) hi = mid; else lo = mid;
    }
    t1 = hi;
  }
  out.t1 = t1;
  return out;
}

double DecayEnvelope::operator()(double t) const {
  if (t < t1) throw std::out_of_range("DecayEnvelope: defined on [t1, inf)");
  const double denom = 1.0 - G_n * A * e_nu(nu, t - t1);
  if (!(denom > 0.0))
    throw std::domain_error("DecayEnvelope: denominator vanished before the requested time");
  return A * std::exp(-nu * (t - t1)) / denom;
}

DecayEnvelope decay_envelope(double t1, double A, double nu, double G_n) {
  if (A < 0.0 || nu < 0.0 || G_n <= 0.0)
    throw std::invalid_argument("decay_envelope: invalid parameters");
  return DecayEnvelope{t1, A, nu, G_n};
}

bool chernyshenko_criterion(double Tb, const EstimatorBundle& bundle,
                            const InequalityConstants& constants) {
  constants.validate();
  if (!(Tb > 0.0) || Tb > bundle.horizon * (1.0 + 1e-12))
    throw std::invalid_argument("chernyshenko_criterion: Tb outside the bundle horizon");
  const double lhs =
      bundle.delta_n + adaptive_simpson([&](double t) { return bundle.eps(t); }, 0.0, Tb, 1e-10);
  const double exponent = adaptive_simpson(
      [&](double t) { return constants.G_n * bundle.D_n(t) + constants.K_n * bundle.D_np1(t); },
      0.0, Tb, 1e-10);
  const double rhs = std::exp(-exponent) / (constants.G_n * Tb);
  return lhs < rhs;
}

double chernyshenko_largest_Tb(const EstimatorBundle& bundle,
                               const InequalityConstants& constants, double tol) {
  double lo = 0.0, hi = bundle.horizon;
  if (chernyshenko_criterion(hi, bundle, constants)) return hi;
  // Establish a passing lower end; the criterion holds for small Tb whenever
  // it holds anywhere (left side -> delta_n, right side -> infinity).
  double probe = hi;
  bool found = false;
  for (int i = 0; i < 60; ++i) {
    probe *= 0.5;
    if (probe <= 0.0) break;
    if (chernyshenko_criterion(probe, bundle, constants)) {
      lo = probe;
      hi = 2.0 * probe;
      found = true;
      break;
    }
  }
  if (!found) return 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (chernyshenko_criterion(mid, bundle, constants)) lo = mid; else hi = mid;
  }
  return lo;
}

SandwichResult caplygin_sandwich_test(const std::function<double(double, double)>& f, double s0,
                                      const std::function<double(double)>& W,
                                      const std::function<double(double)>& R,
                                      const std::vector<double>& grid, double tol) {
  if (grid.size() < 2) throw std::invalid_argument("caplygin_sandwich_test: need a grid");

  auto rhs = [&f](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    dydt.resize(1);
    dydt[0] = f(y[0], t);
  };
  IntegratorOptions opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-12;
  Eigen::VectorXd y0(1);
  y0[0] = s0;
  const DenseSolution s = integrate_dopri5(rhs, y0, grid.front(), grid.back(), opts);

  SandwichResult out;
  for (double t : grid) {
    const double st = s.eval(t)[0];
    out.max_lower_violation = std::max(out.max_lower_violation, W(t) - st);
    out.max_upper_violation = std::max(out.max_upper_violation, st - R(t));
  }
  out.pass = out.max_lower_violation <= tol && out.max_upper_violation <= tol;
  return out;
}

}  // namespace nscert
