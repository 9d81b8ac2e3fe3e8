#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nscert/control.hpp"
#include "nscert/quadrature.hpp"
#include "nscert/scenario.hpp"

using namespace nscert;

namespace {

EstimatorBundle syntheticBundle(double horizon, double delta,
                                std::function<double(double)> eps,
                                std::function<double(double)> Dn,
                                std::function<double(double)> Dnp1) {
  EstimatorBundle b;
  b.order = SobolevOrder{3.0};
  b.horizon = horizon;
  b.delta_n = delta;
  b.eps = std::move(eps);
  b.D_n = std::move(Dn);
  b.D_np1 = std::move(Dnp1);
  b.interpolated = false;
  return b;
}

ControlProblem problemFor(double nu, const EstimatorBundle& bundle, double tMax,
                          const InequalityConstants& constants = {0.323, 0.438}) {
  ControlProblem p;
  p.nu = nu;
  p.constants = constants;
  p.bundle = bundle;
  p.t_max = tMax;
  return p;
}

EstimatorBundle bnwBundle(double nu, double horizon) {
  const GalerkinTrajectory traj =
      integrate(GalerkinProblem(bnw_mode_set(), nu, bnw_datum()), horizon);
  return make_bundle(traj, 3.0);
}

}  // namespace

TEST_CASE("quadrature reaches its stated accuracy on smooth integrands") {
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::sin(10.0 * x); }, 0.0, 2.0) ==
        doctest::Approx((1.0 - std::cos(20.0)) / 10.0).epsilon(1e-10));
  CHECK(adaptive_simpson([](double) { return 0.0; }, 0.0, 5.0) == 0.0);
  CHECK(adaptive_simpson([](double x) { return x; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("e_nu values and continuity") {
  CHECK(e_nu(0.0, 0.5) == 0.5);
  CHECK(e_nu(8.0, 1e9) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(e_nu(8.0, 0.9) == doctest::Approx((1.0 - std::exp(-7.2)) / 8.0).epsilon(1e-14));
  CHECK(e_nu(8.0, 0.9) == doctest::Approx(0.124907).epsilon(1e-5));
  // Continuity in nu near zero.
  CHECK(e_nu(1e-9, 0.5) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(e_nu(1e-13, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(e_nu(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("zero-approximant closed form") {
  SUBCASE("nu = 0 example") {
    const AnalyticControl a = analytic_zero_approximant(0.0, 0.438, 154.3);
    CHECK(a.Tc == doctest::Approx(0.014797).epsilon(1e-4));
    CHECK(a.Tc == doctest::Approx(1.0 / (0.438 * 154.3)).epsilon(1e-14));
    CHECK(a.R(0.0) == doctest::Approx(154.3).epsilon(1e-13));
  }
  SUBCASE("large viscosity is global") {
    const AnalyticControl a = analytic_zero_approximant(70.0, 0.438, 154.3);
    CHECK(std::isinf(a.Tc));
    // Exponential decay from the start.
    CHECK(a.R(1.0) < 154.3 * std::exp(-0.5));
  }
  SUBCASE("zero datum") {
    const AnalyticControl a = analytic_zero_approximant(0.0, 0.438, 0.0);
    CHECK(std::isinf(a.Tc));
    CHECK(a.R(5.0) == 0.0);
  }
}

TEST_CASE("zero-approximant agrees with the numeric control solve") {
  const double norm = 154.3, G = 0.438;
  const AnalyticControl a = analytic_zero_approximant(0.0, G, norm);
  const EstimatorBundle bundle = syntheticBundle(
      0.02, norm, [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  const ControlSolution sol = solve_control(problemFor(0.0, bundle, 0.02, {0.323, G}));
  REQUIRE(sol.blew_up);
  CHECK(sol.Tc == doctest::Approx(a.Tc).epsilon(1e-6));
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.9 * a.Tc * i / 100.0;
    CHECK(sol.evalR(t) == doctest::Approx(a.R(t)).epsilon(1e-8));
  }
}

TEST_CASE("exponential-decay closed form") {
  const double K = 0.323, G = 0.438, D = 2.0, D1 = 3.0, E = 0.1, delta = 0.05;

  SUBCASE("admissibility check") {
    const ExpDecayControl bad = analytic_exp_decay(1.0, K, G, D, D1, 5.0, delta);
    CHECK_FALSE(bad.admissible);
    CHECK(bad.rejection.size() > 0);
  }
  SUBCASE("frozen nu = 0 existence time") {
    const ExpDecayControl a = analytic_exp_decay(0.0, K, G, D, D1, E, delta);
    REQUIRE(a.admissible);
    CHECK(a.Delta == doctest::Approx(0.5 * (G * D + K * D1)).epsilon(1e-15));
    CHECK(a.Tc == doctest::Approx(2.054344935401607).epsilon(1e-12));
    CHECK(a.R(0.0) == doctest::Approx(delta).epsilon(1e-12));
  }
  SUBCASE("zero error and zero datum gap give the zero solution") {
    const ExpDecayControl a = analytic_exp_decay(0.5, K, G, D, D1, 0.0, 0.0);
    REQUIRE(a.admissible);
    CHECK(std::isinf(a.Tc));
    CHECK(a.R(0.7) == 0.0);
    CHECK(a.W_minus == 0.0);
  }
  SUBCASE("large viscosity crosses the global threshold") {
    const ExpDecayControl a = analytic_exp_decay(1.0, K, G, D, D1, E, delta);
    REQUIRE(a.admissible);
    CHECK(std::isinf(a.Tc));
  }
}

TEST_CASE("exponential-decay form agrees with the numeric solve") {
  const double K = 0.323, G = 0.438, D = 2.0, D1 = 3.0, E = 0.1, delta = 0.05;
  const double nu = 0.1;
  const ExpDecayControl a = analytic_exp_decay(nu, K, G, D, D1, E, delta);
  REQUIRE(a.admissible);
  REQUIRE(std::isfinite(a.Tc));

  const EstimatorBundle bundle = syntheticBundle(
      3.0, delta, [=](double t) { return E * std::exp(-2.0 * nu * t); },
      [=](double t) { return D * std::exp(-nu * t); },
      [=](double t) { return D1 * std::exp(-nu * t); });

  SUBCASE("R matches on a grid below Tc") {
    const ControlSolution sol = solve_control(problemFor(nu, bundle, 0.9 * a.Tc, {K, G}));
    CHECK_FALSE(sol.blew_up);
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.9 * a.Tc * i / 100.0;
      CHECK(sol.evalR(t) == doctest::Approx(a.R(t)).epsilon(1e-8));
    }
  }
  SUBCASE("blow-up time matches") {
    const ControlSolution sol = solve_control(problemFor(nu, bundle, 3.0, {K, G}));
    REQUIRE(sol.blew_up);
    CHECK(sol.Tc == doctest::Approx(a.Tc).epsilon(1e-6));
  }
}

TEST_CASE("control solve reports the horizon when nothing blows up") {
  const EstimatorBundle bundle = syntheticBundle(
      1.0, 0.0, [](double) { return 0.01; }, [](double) { return 0.1; },
      [](double) { return 0.1; });
  const ControlSolution sol = solve_control(problemFor(2.0, bundle, 1.0));
  CHECK_FALSE(sol.blew_up);
  CHECK(sol.Tc == 1.0);
  CHECK(sol.evalR(0.0) == doctest::Approx(0.0));
  CHECK(sol.values.front() == 0.0);
  // R stays nonnegative.
  for (double v : sol.values) CHECK(v >= 0.0);
}

TEST_CASE("control solve validates the bundle horizon") {
  const EstimatorBundle bundle = syntheticBundle(
      0.5, 0.0, [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  CHECK_THROWS_AS(solve_control(problemFor(0.0, bundle, 1.0)), std::invalid_argument);
}

TEST_CASE("supersolution dominance: inflated error dominates pointwise") {
  auto eps = [](double t) { return 0.3 + 0.2 * std::sin(5.0 * t); };
  const EstimatorBundle base = syntheticBundle(
      0.8, 0.02, eps, [](double t) { return 2.0 + std::cos(t); },
      [](double t) { return 3.0 + std::sin(t); });
  EstimatorBundle inflated = base;
  inflated.eps = [eps](double t) { return 1.1 * eps(t) + 0.01; };

  const ControlSolution lo = solve_control(problemFor(0.3, base, 0.8));
  const ControlSolution hi = solve_control(problemFor(0.3, inflated, 0.8));
  const double end = std::min(lo.domainEnd(), hi.domainEnd());
  for (int i = 0; i <= 60; ++i) {
    const double t = end * i / 60.0;
    CHECK(hi.evalR(t) >= lo.evalR(t) * (1.0 - 1e-10));
  }
}

TEST_CASE("global existence criteria") {
  SUBCASE("simple threshold") {
    const double norm = std::sqrt(3.0 * std::pow(M_PI, 3) * 256.0);
    const double threshold = 0.438 * norm;
    CHECK(threshold == doctest::Approx(67.5895).epsilon(1e-4));
    CHECK(global_existence_simple(68.0, 0.438, norm));
    CHECK(global_existence_simple(threshold, 0.438, norm));  // boundary included
    CHECK_FALSE(global_existence_simple(67.0, 0.438, norm));
    CHECK_FALSE(global_existence_simple(0.0, 0.438, norm));
  }
  SUBCASE("bootstrap scan with bisection refinement") {
    const double nu = 5.0, G = 0.438;
    const EstimatorBundle bundle = syntheticBundle(
        2.0, 0.0, [=](double t) { return 0.05 * std::exp(-2.0 * nu * t); },
        [=](double t) { return 30.0 * std::exp(-nu * t); },
        [=](double t) { return 40.0 * std::exp(-nu * t); });
    const ControlSolution sol = solve_control(problemFor(nu, bundle, 2.0));
    REQUIRE_FALSE(sol.blew_up);
    const BootstrapResult boot = global_existence_bootstrap(sol, bundle, nu, G);
    REQUIRE(boot.global);
    CHECK(boot.threshold == doctest::Approx(nu / G).epsilon(1e-14));
    // The refined t1 sits at the crossing: satisfied there, violated shortly before.
    auto value = [&](double t) { return bundle.D_n(t) + sol.evalR(t); };
    CHECK(value(boot.t1) <= boot.threshold * (1.0 + 1e-9));
    if (boot.t1 > 1e-6) CHECK(value(boot.t1 - 1e-4) > boot.threshold);
  }
  SUBCASE("no viscosity, no bootstrap") {
    const EstimatorBundle bundle = syntheticBundle(
        0.5, 0.1, [](double) { return 0.01; }, [](double) { return 1.0; },
        [](double) { return 1.0; });
    const ControlSolution sol = solve_control(problemFor(0.0, bundle, 0.5));
    CHECK_FALSE(global_existence_bootstrap(sol, bundle, 0.0, 0.438).global);
  }
}

TEST_CASE("decay envelope") {
  const DecayEnvelope env = decay_envelope(0.9, 0.0614, 8.0, 0.438);
  CHECK(env(0.9) == doctest::Approx(0.0614).epsilon(1e-14));
  // Dominated by the pure exponential once the denominator is below one...
  CHECK(env(1.5) <= 0.0614 * std::exp(-8.0 * 0.6) * 1.01);
  CHECK_THROWS_AS(env(0.5), std::out_of_range);

  const DecayEnvelope zero = decay_envelope(0.0, 0.0, 1.0, 0.438);
  CHECK(zero(3.0) == 0.0);

  // ...and at nu = 0 the denominator eventually vanishes.
  const DecayEnvelope euler = decay_envelope(0.0, 2.0, 0.0, 0.5);
  CHECK(euler(0.5) > 2.0);
  CHECK_THROWS_AS(euler(1.1), std::domain_error);
}

TEST_CASE("integral criterion") {
  SUBCASE("trivial all-zero bundle holds for any finite Tb") {
    const EstimatorBundle bundle = syntheticBundle(
        10.0, 0.0, [](double) { return 0.0; }, [](double) { return 0.0; },
        [](double) { return 0.0; });
    CHECK(chernyshenko_criterion(5.0, bundle, {0.323, 0.438}));
  }
  SUBCASE("a positive datum error fails for large Tb") {
    const EstimatorBundle bundle = syntheticBundle(
        1000.0, 0.1, [](double) { return 0.0; }, [](double) { return 0.0; },
        [](double) { return 0.0; });
    CHECK_FALSE(chernyshenko_criterion(1000.0, bundle, {0.323, 0.438}));
    CHECK(chernyshenko_criterion(1.0, bundle, {0.323, 0.438}));
  }
  SUBCASE("bisection brackets the switch") {
    const EstimatorBundle bundle = syntheticBundle(
        50.0, 0.0, [](double) { return 0.1; }, [](double) { return 1.0; },
        [](double) { return 1.0; });
    const InequalityConstants constants{0.323, 0.438};
    const double best = chernyshenko_largest_Tb(bundle, constants, 1e-6);
    REQUIRE(best > 0.0);
    CHECK(chernyshenko_criterion(best, bundle, constants));
    CHECK_FALSE(chernyshenko_criterion(best + 1e-5, bundle, constants));
  }
  SUBCASE("range validation") {
    const EstimatorBundle bundle = syntheticBundle(
        1.0, 0.0, [](double) { return 0.0; }, [](double) { return 0.0; },
        [](double) { return 0.0; });
    CHECK_THROWS_AS(chernyshenko_criterion(2.0, bundle, {0.323, 0.438}),
                    std::invalid_argument);
  }
}

TEST_CASE("comparison sandwich harness") {
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(2.0 * i / 50.0);

  SUBCASE("linear decay sandwich") {
    const auto result = caplygin_sandwich_test(
        [](double s, double) { return -s; }, 1.0,
        [](double t) { return 0.9 * std::exp(-t); },
        [](double t) { return 1.1 * std::exp(-t); }, grid);
    CHECK(result.pass);
  }
  SUBCASE("scaled control errors give strict sub/supersolutions") {
    auto eps = [](double t) { return 0.2 + 0.1 * std::cos(3.0 * t); };
    auto Dn = [](double t) { return 1.0 + 0.5 * std::sin(t); };
    auto Dnp1 = [](double t) { return 1.5 + 0.25 * std::cos(t); };
    const double nu = 0.4, K = 0.323, G = 0.438, delta = 0.05;
    auto rhsWith = [&](double scale) {
      return [=](double s, double t) {
        return -nu * s + (G * Dn(t) + K * Dnp1(t)) * s + G * s * s + scale * eps(t);
      };
    };
    // Integrate the scaled variants to get the bracketing curves.
    auto solve = [&](double scale) {
      const EstimatorBundle b = syntheticBundle(
          2.0, delta, [=](double t) { return scale * eps(t); }, Dn, Dnp1);
      return solve_control(problemFor(nu, b, 2.0, {K, G}));
    };
    const ControlSolution low = solve(0.9);
    const ControlSolution high = solve(1.1);
    const auto result = caplygin_sandwich_test(
        rhsWith(1.0), delta, [&](double t) { return low.evalR(t); },
        [&](double t) { return high.evalR(t); }, grid);
    CHECK(result.pass);
  }
  SUBCASE("negative control: a false supersolution is caught") {
    const auto result = caplygin_sandwich_test(
        [](double s, double) { return -s; }, 1.0,
        [](double t) { return 0.9 * std::exp(-t); },
        [](double t) { return std::exp(-t) - 0.05; }, grid);
    CHECK_FALSE(result.pass);
    CHECK(result.max_upper_violation > 1e-3);
  }
}

TEST_CASE("control solve agrees with a fixed-step RK4 reintegration") {
  // Independent route: classic RK4 with a tiny fixed step, sharing nothing
  // with the adaptive embedded pair used by solve_control.
  const EstimatorBundle bundle = bnwBundle(0.0, 0.05);
  const ControlSolution sol = solve_control(problemFor(0.0, bundle, 0.05));

  const double K = 0.323, G = 0.438;
  auto f = [&](double t, double r) {
    return (G * bundle.D_n(t) + K * bundle.D_np1(t)) * r + G * r * r + bundle.eps(t);
  };
  const double h = 1e-6;
  double r = bundle.delta_n, t = 0.0;
  double worst = 0.0;
  const int checkEvery = 5000;
  for (int i = 0; t < 0.05 - h; ++i) {
    const double k1 = f(t, r);
    const double k2 = f(t + 0.5 * h, r + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, r + 0.5 * h * k2);
    const double k4 = f(t + h, r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (i % checkEvery == 0 && r > 1e-6)
      worst = std::max(worst, std::abs(sol.evalR(t) - r) / r);
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("campaign blow-up times are ordered in viscosity and stable in tolerance") {
  const EstimatorBundle b0 = bnwBundle(0.0, 0.1);
  const EstimatorBundle b3 = bnwBundle(3.0, 0.15);
  const EstimatorBundle b7 = bnwBundle(7.0, 0.3);

  const ControlSolution s0 = solve_control(problemFor(0.0, b0, 0.1));
  const ControlSolution s3 = solve_control(problemFor(3.0, b3, 0.15));
  const ControlSolution s7 = solve_control(problemFor(7.0, b7, 0.3));
  REQUIRE(s0.blew_up);
  REQUIRE(s3.blew_up);
  REQUIRE(s7.blew_up);
  CHECK(s0.Tc <= s3.Tc);
  CHECK(s3.Tc <= s7.Tc);

  SUBCASE("halving the integrator tolerances moves Tc by less than 1e-4 relative") {
    ControlProblem tight = problemFor(0.0, b0, 0.1);
    tight.options.abs_tol *= 0.5;
    tight.options.rel_tol *= 0.5;
    const ControlSolution s0tight = solve_control(tight);
    REQUIRE(s0tight.blew_up);
    CHECK(std::abs(s0tight.Tc - s0.Tc) / s0.Tc < 1e-4);
  }

  SUBCASE("the default node density leaves no visible interpolation error in Tc") {
    // "No visible" relative to the 5% certification budget: the sampled
    // bundle and the exactly-evaluated one must agree to a small fraction of
    // a percent (measured: ~2.5e-4).
    const GalerkinTrajectory traj =
        integrate(GalerkinProblem(bnw_mode_set(), 0.0, bnw_datum()), 0.1);
    EstimatorOptions onDemand;
    onDemand.exact_on_demand = true;
    const EstimatorBundle exactBundle = make_bundle(traj, 3.0, onDemand);
    const ControlSolution sExact = solve_control(problemFor(0.0, exactBundle, 0.1));
    REQUIRE(sExact.blew_up);
    CHECK(std::abs(sExact.Tc - s0.Tc) / s0.Tc < 1e-3);
  }

  SUBCASE("the rough error bound certifies a shorter or equal time") {
    const GalerkinTrajectory traj =
        integrate(GalerkinProblem(bnw_mode_set(), 0.0, bnw_datum()), 0.1);
    EstimatorOptions roughOpts;
    roughOpts.eps_rough = true;
    roughOpts.K_q = 0.323;
    const EstimatorBundle roughBundle = make_bundle(traj, 3.0, roughOpts);
    const ControlSolution sRough = solve_control(problemFor(0.0, roughBundle, 0.1));
    REQUIRE(sRough.blew_up);
    CHECK(sRough.Tc <= s0.Tc * (1.0 + 1e-9));
  }
}
