#include "nscert/estimators.hpp"

#include <cmath>
#include <vector>

#include "nscert/detail/convolve.hpp"
#include "nscert/interpolation.hpp"
#include "nscert/parallel.hpp"
#include "nscert/summation.hpp"

namespace nscert {

using Cd = std::complex<double>;

double growth_estimator(const GalerkinTrajectory& trajectory, double m, double t) {
  if (t < 0.0 || t > trajectory.horizon())
    throw std::out_of_range("growth_estimator: time outside the trajectory horizon");
  return trajectory.sobolevNormAt(t, m);
}

double datum_error_exact(const SpectralField& datum, const ModeSet& G, double n) {
  return tail_norm(datum, G, n);
}

double datum_error_rough(const SpectralField& datum, const ModeSet& G, double n, double p) {
  if (p < n) throw std::invalid_argument("datum_error_rough: requires p >= n");
  return tail_bound(G, sobolev_norm(datum, p), n, p);
}

namespace {

double forcing_tail(const GalerkinTrajectory& trajectory, double n, double t) {
  const auto& problem = trajectory.problem();
  if (problem.forcing.isZero()) return 0.0;
  return tail_norm(problem.forcing.at(t), problem.modes, n);
}

}  // namespace

double diff_error_exact(const GalerkinTrajectory& trajectory, double n, double t) {
  if (t < 0.0 || t > trajectory.horizon())
    throw std::out_of_range("diff_error_exact: time outside the trajectory horizon");
  const auto& modes = trajectory.problem().modes;
  const ConvolutionPlan& plan = modes.residualPlan();
  const Eigen::VectorXcd state = trajectory.stateAt(t);

  const int d = modes.dim();
  std::vector<double> terms(plan.targetCount(), 0.0);
  detail::convolve(plan, state.data(), [&](std::size_t r, const Cd* pk) {
    double sq = 0.0;
    for (int c = 0; c < d; ++c) sq += std::norm(pk[c]);
    terms[r] = 2.0 * std::pow(plan.targetSquared[static_cast<Eigen::Index>(r)], n) * sq;
  });
  return std::sqrt(pairwise_sum(terms)) + forcing_tail(trajectory, n, t);
}

double diff_error_rough(const GalerkinTrajectory& trajectory, double n, double q, double K_q,
                        double t) {
  if (q < n) throw std::invalid_argument("diff_error_rough: requires q >= n");
  if (!(K_q > 0.0)) throw std::invalid_argument("diff_error_rough: K_q must be positive");
  if (t < 0.0 || t > trajectory.horizon())
    throw std::out_of_range("diff_error_rough: time outside the trajectory horizon");
  const double gap = trajectory.problem().modes.gap();
  const double bound = K_q / std::pow(gap, q - n) * trajectory.sobolevNormAt(t, q) *
                       trajectory.sobolevNormAt(t, q + 1.0);
  return bound + forcing_tail(trajectory, n, t);
}

EstimatorBundle make_bundle(const GalerkinTrajectory& trajectory, double n,
                            const EstimatorOptions& options) {
  const double q = options.rough_q > 0.0 ? options.rough_q : n;
  if (options.eps_rough && !(options.K_q > 0.0))
    throw std::invalid_argument("make_bundle: rough eps needs K_q");
  if (options.delta_rough && !(options.rough_p >= n))
    throw std::invalid_argument("make_bundle: rough delta needs p >= n");

  EstimatorBundle bundle;
  bundle.order = SobolevOrder{n};
  bundle.horizon = trajectory.horizon();
  bundle.delta_provenance = options.delta_rough ? Provenance::rough : Provenance::exact;
  bundle.eps_provenance = options.eps_rough ? Provenance::rough : Provenance::exact;
  bundle.nodes_per_unit_time = options.nodes_per_unit_time;
  bundle.interpolated = !options.exact_on_demand;

  const auto& problem = trajectory.problem();
  bundle.delta_n = options.delta_rough
                       ? datum_error_rough(problem.datum, problem.modes, n, options.rough_p)
                       : datum_error_exact(problem.datum, problem.modes, n);

  auto epsAt = [trajectory, n, q, options](double t) {
    return options.eps_rough ? diff_error_rough(trajectory, n, q, options.K_q, t)
                             : diff_error_exact(trajectory, n, t);
  };

  if (options.exact_on_demand) {
    bundle.eps = epsAt;
    bundle.D_n = [trajectory, n](double t) { return trajectory.sobolevNormAt(t, n); };
    bundle.D_np1 = [trajectory, n](double t) { return trajectory.sobolevNormAt(t, n + 1.0); };
    return bundle;
  }

  const double horizon = trajectory.horizon();
  const auto nodeCount = static_cast<std::size_t>(
      std::max(2.0, std::ceil(horizon * options.nodes_per_unit_time) + 1.0));
  std::vector<double> ts(nodeCount), epsS(nodeCount), dnS(nodeCount), dn1S(nodeCount);
  for (std::size_t i = 0; i < nodeCount; ++i)
    ts[i] = horizon * static_cast<double>(i) / static_cast<double>(nodeCount - 1);

  parallel_for(nodeCount, effective_thread_count(options.threads), [&](std::size_t i) {
    epsS[i] = epsAt(ts[i]);
    dnS[i] = trajectory.sobolevNormAt(ts[i], n);
    dn1S[i] = trajectory.sobolevNormAt(ts[i], n + 1.0);
  });

  bundle.eps = PchipInterpolant(ts, std::move(epsS));
  bundle.D_n = PchipInterpolant(ts, std::move(dnS));
  bundle.D_np1 = PchipInterpolant(std::move(ts), std::move(dn1S));
  return bundle;
}

}  // namespace nscert
