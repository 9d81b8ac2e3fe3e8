#include "nscert/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nscert/detail/convolve.hpp"
#include "nscert/quadrature.hpp"
#include "nscert/summation.hpp"

namespace nscert {

using Cd = std::complex<double>;

// ---------------------------------------------------------------------------
// Forcing

Forcing Forcing::zero(int dim) { return Forcing(dim); }

Forcing::Forcing(std::vector<double> times, std::vector<SpectralField> snapshots)
    : times_(std::move(times)), snapshots_(std::move(snapshots)) {
  if (times_.empty() || times_.size() != snapshots_.size())
    throw std::invalid_argument("Forcing: need matching, nonempty time and snapshot lists");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw std::invalid_argument("Forcing: times must be strictly increasing");
  dim_ = snapshots_.front().dim();
  std::set<Mode> support;
  for (const auto& f : snapshots_) {
    if (f.dim() != dim_) throw std::invalid_argument("Forcing: snapshot dimension mismatch");
    for (const auto& [k, c] : f.entries()) support.insert(k);
  }
  support_.assign(support.begin(), support.end());
}

std::pair<std::size_t, double> Forcing::bracket(double t) const {
  if (t <= times_.front()) return {0, 0.0};
  if (t >= times_.back()) return {times_.size() - 2, 1.0};
  std::size_t lo = 0, hi = times_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (times_[mid] <= t) lo = mid; else hi = mid;
  }
  return {lo, (t - times_[lo]) / (times_[lo + 1] - times_[lo])};
}

Eigen::VectorXcd Forcing::coeffAt(const Mode& k, double t) const {
  if (isZero()) return Eigen::VectorXcd::Zero(dim_);
  if (times_.size() == 1) return snapshots_.front().coeff(k);
  const auto [i, w] = bracket(t);
  return (1.0 - w) * snapshots_[i].coeff(k) + w * snapshots_[i + 1].coeff(k);
}

SpectralField Forcing::at(double t) const {
  SpectralField out(dim_);
  if (isZero()) return out;
  for (const Mode& k : support_) {
    // Snapshots are divergence-free, so the interpolant is as well.
    out.set(k, coeffAt(k, t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// GalerkinProblem

GalerkinProblem::GalerkinProblem(ModeSet modes_, double nu_, SpectralField datum_)
    : modes(std::move(modes_)), nu(nu_), datum(std::move(datum_)),
      forcing(Forcing::zero(datum.dim())) {
  validate();
}

GalerkinProblem::GalerkinProblem(ModeSet modes_, double nu_, SpectralField datum_, Forcing forcing_)
    : modes(std::move(modes_)), nu(nu_), datum(std::move(datum_)), forcing(std::move(forcing_)) {
  validate();
}

void GalerkinProblem::validate() const {
  if (nu < 0.0) throw std::invalid_argument("GalerkinProblem: viscosity must be nonnegative");
  if (datum.dim() != modes.dim())
    throw std::invalid_argument("GalerkinProblem: datum dimension mismatch");
  if (forcing.dim() != modes.dim())
    throw std::invalid_argument("GalerkinProblem: forcing dimension mismatch");
}

Eigen::Index GalerkinProblem::stateSize() const {
  return static_cast<Eigen::Index>(modes.halfModes().size()) * modes.dim();
}

Eigen::VectorXcd GalerkinProblem::projectedDatum() const {
  const auto& half = modes.halfModes();
  const int d = modes.dim();
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(stateSize());
  for (std::size_t i = 0; i < half.size(); ++i)
    state.segment(static_cast<Eigen::Index>(i) * d, d) = datum.coeff(half[i]);
  return state;
}

// ---------------------------------------------------------------------------
// Right-hand side

void galerkin_rhs(const GalerkinProblem& problem, double t, const Eigen::VectorXcd& state,
                  Eigen::VectorXcd& derivative) {
  const auto& modes = problem.modes;
  const int d = modes.dim();
  if (d > 8) throw std::invalid_argument("galerkin_rhs: dimensions above 8 are not supported");
  if (state.size() != problem.stateSize())
    throw std::invalid_argument("galerkin_rhs: state is not indexed by G's half-spectrum");
  derivative.resize(state.size());

  const ConvolutionPlan& plan = modes.rhsPlan();
  const double nu = problem.nu;
  const Cd minusI(0.0, -1.0);
  const Cd* in = state.data();
  Cd* out = derivative.data();

  detail::convolve(plan, in, [&](std::size_t r, const Cd* projected) {
    const double kSq = plan.targetSquared[static_cast<Eigen::Index>(r)];
    for (int c = 0; c < d; ++c)
      out[r * static_cast<std::size_t>(d) + c] =
          -nu * kSq * in[r * static_cast<std::size_t>(d) + c] + minusI * projected[c];
  });

  if (!problem.forcing.isZero()) {
    for (const Mode& k : problem.forcing.supportHalfModes()) {
      const int idx = modes.halfIndexOf(k);
      if (idx < 0) continue;  // E_G drops forcing outside G
      derivative.segment(static_cast<Eigen::Index>(idx) * d, d) += problem.forcing.coeffAt(k, t);
    }
  }
}

// ---------------------------------------------------------------------------
// Integration

GalerkinTrajectory integrate(const GalerkinProblem& problem, double horizon,
                             const IntegratorOptions& options) {
  if (!(horizon > 0.0)) throw std::invalid_argument("integrate: horizon must be positive");

  const Eigen::Index nC = problem.stateSize();
  const Eigen::VectorXcd gamma0 = problem.projectedDatum();
  Eigen::VectorXd y0(2 * nC);
  Eigen::Map<Eigen::VectorXcd>(reinterpret_cast<Cd*>(y0.data()), nC) = gamma0;

  Eigen::VectorXcd scratchState(nC), scratchDeriv(nC);
  auto rhs = [&problem, nC, &scratchState, &scratchDeriv](double t, const Eigen::VectorXd& y,
                                                          Eigen::VectorXd& dydt) {
    scratchState = Eigen::Map<const Eigen::VectorXcd>(reinterpret_cast<const Cd*>(y.data()), nC);
    galerkin_rhs(problem, t, scratchState, scratchDeriv);
    dydt.resize(2 * nC);
    Eigen::Map<Eigen::VectorXcd>(reinterpret_cast<Cd*>(dydt.data()), nC) = scratchDeriv;
  };

  DenseSolution dense = integrate_dopri5(rhs, y0, 0.0, horizon, options);
  if (dense.status() != IntegrationStatus::reached_end)
    throw IntegratorFailure("integrate: Galerkin step-size collapse (the flow is global; this is an integrator failure, not blow-up)");

  auto data = std::make_shared<GalerkinTrajectory::Data>(
      GalerkinTrajectory::Data{problem, horizon, 0.0, std::move(dense)});

  GalerkinTrajectory traj;
  traj.d_ = data;

  // Divergence-freeness along the flow, checked on a uniform grid.
  if (options.store_dense) {
    const auto& half = problem.modes.halfModes();
    const int d = problem.dim();
    double worst = 0.0;
    const int samples = 65;
    for (int i = 0; i < samples; ++i) {
      const double t = horizon * i / (samples - 1);
      const Eigen::VectorXcd state = traj.stateAt(t);
      for (std::size_t j = 0; j < half.size(); ++j) {
        Cd dot = 0.0;
        const auto seg = state.segment(static_cast<Eigen::Index>(j) * d, d);
        for (int c = 0; c < d; ++c) dot += seg[c] * static_cast<double>(half[j][c]);
        worst = std::max(worst, std::abs(dot) / std::max(1.0, seg.norm()));
      }
    }
    data->maxDivergence = worst;
    if (worst > 1e-10)
      throw IntegratorFailure("integrate: divergence-freeness lost along the flow");
  }
  return traj;
}

Eigen::VectorXcd GalerkinTrajectory::stateAt(double t) const {
  const Eigen::VectorXd y = d_->dense.eval(t);
  const Eigen::Index nC = y.size() / 2;
  return Eigen::Map<const Eigen::VectorXcd>(reinterpret_cast<const Cd*>(y.data()), nC);
}

SpectralField GalerkinTrajectory::snapshot(double t) const {
  const auto& half = d_->problem.modes.halfModes();
  const int d = d_->problem.dim();
  const Eigen::VectorXcd state = stateAt(t);
  SpectralField out(d);
  for (std::size_t i = 0; i < half.size(); ++i) {
    const Eigen::VectorXcd c = state.segment(static_cast<Eigen::Index>(i) * d, d);
    const double mag = c.norm();
    if (mag == 0.0) continue;
    // The flow guarantees |k.c| <= 1e-10 max(1, |c|); translate that into the
    // per-coefficient relative tolerance the field type checks.
    const double tol = 1e-10 * std::max(1.0, mag) / mag;
    out.set(half[i], c, std::max(tol, SpectralField::kDivergenceTolerance));
  }
  return out;
}

double GalerkinTrajectory::sobolevNormAt(double t, double m) const {
  const auto& half = d_->problem.modes.halfModes();
  const int d = d_->problem.dim();
  const Eigen::VectorXcd state = stateAt(t);
  std::vector<double> terms;
  terms.reserve(half.size());
  for (std::size_t i = 0; i < half.size(); ++i) {
    const double w = (m == 0.0) ? 1.0 : std::pow(half[i].squaredNorm(), m);
    terms.push_back(2.0 * w * state.segment(static_cast<Eigen::Index>(i) * d, d).squaredNorm());
  }
  return std::sqrt(pairwise_sum(terms));
}

double l2_norm(const GalerkinTrajectory& trajectory, double t) {
  if (t < 0.0 || t > trajectory.horizon())
    throw std::out_of_range("l2_norm: time outside the trajectory horizon");
  return trajectory.l2NormAt(t);
}

double l2_bound(const GalerkinProblem& problem, double t) {
  if (t < 0.0) throw std::out_of_range("l2_bound: negative time");
  double datumL2Sq = 0.0;
  for (const Mode& k : problem.modes.halfModes())
    datumL2Sq += 2.0 * problem.datum.coeff(k).squaredNorm();
  double acc = std::sqrt(datumL2Sq);
  if (!problem.forcing.isZero() && t > 0.0) {
    const auto& modes = problem.modes;
    acc += adaptive_simpson(
        [&](double s) {
          double sq = 0.0;
          for (const Mode& k : problem.forcing.supportHalfModes()) {
            if (!modes.contains(k)) continue;
            sq += 2.0 * problem.forcing.coeffAt(k, s).squaredNorm();
          }
          return std::exp(problem.nu * s) * std::sqrt(sq);
        },
        0.0, t, 1e-12);
  }
  return acc * std::exp(-problem.nu * t);
}

}  // namespace nscert
