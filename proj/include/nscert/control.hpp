#pragma once

// The scalar control Cauchy problem
//
//   dR_n/dt = -nu R_n + (G_n D_n(t) + K_n D_{n+1}(t)) R_n + G_n R_n^2 + eps_n(t),
//   R_n(0)  = delta_n,
//
// solved in equality form with blow-up detection. A solution existing on
// [0, Tc) certifies the exact Euler/NS solution on [0, Tc) and bounds its
// Sobolev distance from the approximant by R_n. Also here: the closed-form
// solutions for the zero approximant and for exponentially decaying
// estimators, the two global-existence criteria with the decay envelope, the
// integral comparison criterion, and the sub/supersolution sandwich harness.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nscert/dopri5.hpp"
#include "nscert/estimators.hpp"

namespace nscert {

/// e_nu(t) = (1 - e^{-nu t})/nu for nu > 0 and t at nu = 0; continuous in nu.
double e_nu(double nu, double t);

struct ControlOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double blowup_threshold = 1e9;
};

struct ControlProblem {
  double nu = 0.0;
  InequalityConstants constants;
  EstimatorBundle bundle;
  double t_max = 0.0;  // horizon cap; must not exceed the bundle horizon
  ControlOptions options;
};

class ControlIntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ControlSolution {
  std::vector<double> times;   // accepted steps
  std::vector<double> values;  // R_n at accepted steps
  double Tc = 0.0;             // t_max when no blow-up, else the detected blow-up time
  bool blew_up = false;
  double last_step = 0.0;   // blow-up diagnostics
  double last_value = 0.0;
  DenseSolution dense;      // R_n on [0, times.back()]
  double domainEnd() const { return times.empty() ? 0.0 : times.back(); }
  double evalR(double t) const;
};

/// Integrates the control equations on [0, t_max]. Blow-up is declared when
/// R_n exceeds the threshold or the accepted step drops below 1e-14 t_max;
/// the reported Tc then extrapolates the 1/R -> 0 crossing linearly from the
/// last accepted samples (the Riccati profile makes 1/R asymptotically linear).
ControlSolution solve_control(const ControlProblem& problem);

/// Closed form for the zero approximant (delta_n = |u0|_n, eps = 0, D = 0):
///   R_n(t) = |u0|_n e^{-nu t} / (1 - G_n |u0|_n e_nu(t)),
/// with Tc = +inf iff nu > 0 and |u0|_n <= nu/G_n, and Tc = 1/(G_n |u0|_n)
/// at nu = 0.
struct AnalyticControl {
  double Tc = 0.0;  // may be +inf
  std::function<double(double)> R;
};
AnalyticControl analytic_zero_approximant(double nu, double G_n, double norm_u0_n);

/// Closed form for estimators of the shape D_n e^{-nu t}, D_{n+1} e^{-nu t},
/// E_n e^{-2 nu t}. Writing Delta = (G_n D_n + K_n D_{n+1})/2 (so the ODE's
/// linear coefficient is 2 Delta e^{-nu t}), it requires the error bound
/// G_n E_n < Delta^2 and sets W+- = Delta +- sqrt(Delta^2 - G_n E_n),
/// eta(t) = exp((W+ - W-) e_nu(t)); rejected (admissible = false) when the
/// error bound fails, including the degenerate W- = W+ case.
struct ExpDecayControl {
  bool admissible = false;
  std::string rejection;  // diagnostic when not admissible
  double Tc = 0.0;        // may be +inf; equality in the threshold counts as global
  double W_plus = 0.0, W_minus = 0.0, Delta = 0.0;
  std::function<double(double)> R;
};
ExpDecayControl analytic_exp_decay(double nu, double K_n, double G_n, double D_n, double D_np1,
                                   double E_n, double delta_n);

/// nu >= G_n |u0|_n certifies a global, exponentially decaying solution.
bool global_existence_simple(double nu, double G_n, double norm_u0_n);

struct BootstrapResult {
  bool global = false;
  double t1 = 0.0;        // first time with (D_n + R_n)(t1) <= nu/G_n
  double threshold = 0.0; // nu/G_n
};

/// Scans the solution's accepted-step grid for the first t1 with
/// (D_n + R_n)(t1) <= nu/G_n, refining the crossing by bisection between
/// neighboring samples. Finding one certifies global existence.
BootstrapResult global_existence_bootstrap(const ControlSolution& solution,
                                           const EstimatorBundle& bundle, double nu, double G_n);

/// |u(t)|_n <= A e^{-nu (t - t1)} / (1 - G_n A e_nu(t - t1)) on [t1, inf),
/// valid wherever the denominator is positive; A = (D_n + R_n)(t1).
struct DecayEnvelope {
  double t1 = 0.0;
  double A = 0.0;
  double nu = 0.0;
  double G_n = 0.0;
  double operator()(double t) const;  // throws when the denominator vanishes
};
DecayEnvelope decay_envelope(double t1, double A, double nu, double G_n);

/// delta_n + int_0^Tb eps_n < exp(-int_0^Tb (G_n D_n + K_n D_{n+1})) / (G_n Tb);
/// quadratures by adaptive Simpson at 1e-10 relative.
bool chernyshenko_criterion(double Tb, const EstimatorBundle& bundle,
                            const InequalityConstants& constants);

/// Largest Tb in (0, bundle horizon] satisfying the criterion, located by
/// bisection to the given absolute tolerance; 0 when even tiny Tb fail.
double chernyshenko_largest_Tb(const EstimatorBundle& bundle,
                               const InequalityConstants& constants, double tol = 1e-4);

struct SandwichResult {
  bool pass = false;
  double max_lower_violation = 0.0;  // max(W - S) over the grid
  double max_upper_violation = 0.0;  // max(S - R) over the grid
};

/// Integrates S' = f(S, t), S(0) = s0 and checks W <= S <= R on the grid to
/// the given absolute tolerance. W and R are expected to be sub/supersolutions
/// by construction; this harness only verifies the resulting sandwich.
SandwichResult caplygin_sandwich_test(const std::function<double(double, double)>& f, double s0,
                                      const std::function<double(double)>& W,
                                      const std::function<double(double)>& R,
                                      const std::vector<double>& grid, double tol = 1e-8);

}  // namespace nscert
