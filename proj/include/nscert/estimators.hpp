#pragma once

// Estimator bundle for a Galerkin trajectory: the datum error delta_n, the
// differential error eps_n(t) — exact residual sum over dG or the rough tail
// bound — and the growth estimators D_n(t), D_{n+1}(t) read directly off the
// computed coefficients. These four functions feed the control ODE.

#include <functional>
#include <string>

#include "nscert/galerkin.hpp"

namespace nscert {

enum class Provenance { exact, rough };

inline const char* to_string(Provenance p) {
  return p == Provenance::exact ? "exact" : "rough";
}

struct EstimatorBundle {
  SobolevOrder order;
  double horizon = 0.0;
  double delta_n = 0.0;
  Provenance delta_provenance = Provenance::exact;
  Provenance eps_provenance = Provenance::exact;
  std::function<double(double)> eps;
  std::function<double(double)> D_n;
  std::function<double(double)> D_np1;
  bool interpolated = true;            // false when built exact-on-demand
  double nodes_per_unit_time = 200.0;  // sampling density behind the interpolants
};

struct EstimatorOptions {
  bool eps_rough = false;   // use the tail bound K_q/gap^{q-n} |u|_q |u|_{q+1}
  double rough_q = 0.0;     // defaults to n
  double K_q = 0.0;         // required when eps_rough
  bool delta_rough = false;
  double rough_p = 0.0;     // required when delta_rough, p >= n
  double nodes_per_unit_time = 200.0;
  bool exact_on_demand = false;  // skip interpolation, evaluate directly
  int threads = 0;               // 0: hardware, capped by CERTIFY_THREADS
};

/// D_m(t) = |u_G(t)|_m, the growth estimator of the computed solution.
double growth_estimator(const GalerkinTrajectory& trajectory, double m, double t);

/// delta_n = |(1 - E_G) u0|_n, the exact datum error of the projection.
double datum_error_exact(const SpectralField& datum, const ModeSet& G, double n);

/// The rough bound |u0|_p / gap^{p-n} (p >= n); always >= the exact error.
double datum_error_rough(const SpectralField& datum, const ModeSet& G, double n, double p);

/// eps_n(t) = |(1 - E_G) P(u_G, u_G)|_n computed as the residual sum over dG,
/// plus the forcing tail |(1 - E_G) f(t)|_n when the forcing leaves G.
double diff_error_exact(const GalerkinTrajectory& trajectory, double n, double t);

/// The rough bound (K_q / gap^{q-n}) |u_G|_q |u_G|_{q+1} (q >= n), plus the
/// forcing tail; always >= the exact value.
double diff_error_rough(const GalerkinTrajectory& trajectory, double n, double q, double K_q,
                        double t);

/// Samples the estimators on a uniform grid (nodes are independent and may be
/// evaluated in parallel) and wraps them in monotone-safe cubic interpolants;
/// with exact_on_demand the bundle evaluates the defining sums directly.
EstimatorBundle make_bundle(const GalerkinTrajectory& trajectory, double n,
                            const EstimatorOptions& options = {});

}  // namespace nscert
