#pragma once

// Galerkin truncation of the incompressible Euler/NS equations on the torus:
// the coefficient ODE system
//
//   dgamma_k/dt = -nu |k|^2 gamma_k
//                 - i (2 pi)^{-d/2} sum_{h in G} [gamma_h.(k-h)] Leray_k gamma_{k-h}
//                 + f_k ,            gamma_{k-h} := 0 when k-h is outside G,
//
// its dense-output integration, and the L^2 energy bounds the flow satisfies.
// States are indexed by G's canonical half-spectrum in a fixed order, so runs
// are deterministic and bit-stable.

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <vector>

#include "nscert/dopri5.hpp"
#include "nscert/mode_set.hpp"
#include "nscert/spectral_field.hpp"

namespace nscert {

/// Finitely supported time-dependent forcing, given as well-formed field
/// snapshots on a strictly increasing time grid and interpolated linearly;
/// the campaign scenarios all use the constant zero.
class Forcing {
public:
  static Forcing zero(int dim);
  Forcing(std::vector<double> times, std::vector<SpectralField> snapshots);

  bool isZero() const { return times_.empty(); }
  int dim() const { return dim_; }

  /// Coefficient of mode k at time t (clamped to the sample range).
  Eigen::VectorXcd coeffAt(const Mode& k, double t) const;
  SpectralField at(double t) const;

  /// Modes carried by any snapshot (canonical half list).
  const std::vector<Mode>& supportHalfModes() const { return support_; }

private:
  explicit Forcing(int dim) : dim_(dim) {}
  std::pair<std::size_t, double> bracket(double t) const;

  int dim_ = 0;
  std::vector<double> times_;
  std::vector<SpectralField> snapshots_;
  std::vector<Mode> support_;
};

struct GalerkinProblem {
  GalerkinProblem(ModeSet modes, double nu, SpectralField datum);
  GalerkinProblem(ModeSet modes, double nu, SpectralField datum, Forcing forcing);

  ModeSet modes;
  double nu;
  SpectralField datum;    // full datum; integration starts from its projection onto G
  Forcing forcing;

  int dim() const { return modes.dim(); }
  Eigen::Index stateSize() const;

  /// gamma(0): the datum's coefficients on G, packed in canonical half order.
  Eigen::VectorXcd projectedDatum() const;

private:
  void validate() const;
};

/// Right-hand side of the coefficient system for a state indexed exactly by
/// G's canonical half-spectrum; throws on a size mismatch. Divergence-freeness
/// and reality are preserved analytically (reality structurally, k.gamma_k to
/// integration accuracy).
void galerkin_rhs(const GalerkinProblem& problem, double t, const Eigen::VectorXcd& state,
                  Eigen::VectorXcd& derivative);

class GalerkinTrajectory {
public:
  const GalerkinProblem& problem() const { return d_->problem; }
  double horizon() const { return d_->horizon; }
  const IntegratorStats& stats() const { return d_->dense.stats(); }
  const DenseSolution& dense() const { return d_->dense; }

  /// Largest |k.gamma_k| / max(1, |gamma_k|) seen on the verification grid.
  double maxDivergenceObserved() const { return d_->maxDivergence; }

  Eigen::VectorXcd stateAt(double t) const;  // canonical packed coefficients
  SpectralField snapshot(double t) const;

  /// |u_G(t)|_m = sqrt(sum_{k in G} |k|^{2m} |gamma_k(t)|^2).
  double sobolevNormAt(double t, double m) const;
  double l2NormAt(double t) const { return sobolevNormAt(t, 0.0); }

private:
  friend GalerkinTrajectory integrate(const GalerkinProblem&, double, const IntegratorOptions&);
  struct Data {
    GalerkinProblem problem;
    double horizon = 0.0;
    double maxDivergence = 0.0;
    DenseSolution dense;
  };
  std::shared_ptr<const Data> d_;
};

/// Integrates the Galerkin system on [0, horizon]. The flow is global, so a
/// step-size collapse or exhausted step budget is reported as an integrator
/// failure (IntegratorFailure), never as blow-up.
GalerkinTrajectory integrate(const GalerkinProblem& problem, double horizon,
                             const IntegratorOptions& options = {});

double l2_norm(const GalerkinTrajectory& trajectory, double t);

/// (|E_G u0|_{L2} + int_0^t e^{nu s} |E_G f(s)|_{L2} ds) e^{-nu t}; equals the
/// L^2 norm exactly when f = 0 and nu = 0.
double l2_bound(const GalerkinProblem& problem, double t);

}  // namespace nscert
