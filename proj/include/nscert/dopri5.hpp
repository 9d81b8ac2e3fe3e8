#pragma once

// Embedded Dormand-Prince 5(4) pair with PI step-size control, first-same-as-
// last stage reuse, and the standard quartic dense-output interpolant
// (coefficients as in Hairer, Norsett & Wanner's DOPRI5).

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nscert {

struct IntegratorOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double initial_step = 0.0;  // 0: choose automatically
  double max_step = 0.0;      // 0: the whole span
  double min_step = 0.0;      // 0: machine-based underflow guard only
  long long max_steps = 5'000'000;
  bool store_dense = true;    // keep the interpolant for later evaluation
};

struct IntegratorStats {
  long long accepted = 0;
  long long rejected = 0;
  long long rhs_evaluations = 0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
};

enum class IntegrationStatus { reached_end, stopped_by_observer, step_underflow };

class IntegratorFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DenseSolution;

/// Integrates y' = rhs(t, y) forward from t0 to t1 (t1 > t0). `stop`, when
/// given, is evaluated after each accepted step; returning true ends the run
/// with status stopped_by_observer.
template <class RHS>
DenseSolution integrate_dopri5(RHS&& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                               const IntegratorOptions& opts = {},
                               const std::function<bool(double, const Eigen::VectorXd&)>& stop = {});

/// Dense-output solution on [startTime(), endTime()]: each accepted step keeps
/// five interpolation vectors, giving an order-4 interpolant evaluable at any
/// interior time.
class DenseSolution {
public:
  double startTime() const { return t0_; }
  double endTime() const { return tEnd_; }
  Eigen::Index dimension() const { return dim_; }
  IntegrationStatus status() const { return status_; }
  const IntegratorStats& stats() const { return stats_; }
  const Eigen::VectorXd& finalState() const { return yEnd_; }
  const std::vector<double>& stepTimes() const { return stepTimes_; }  // accepted nodes, incl. t0

  Eigen::VectorXd eval(double t) const {
    Eigen::VectorXd out(dim_);
    evalInto(t, out);
    return out;
  }

  void evalInto(double t, Eigen::VectorXd& out) const {
    if (steps_.empty()) throw std::out_of_range("DenseSolution: no dense output stored");
    const double span = tEnd_ - t0_;
    const double fuzz = 1e-12 * std::max(1.0, std::abs(span));
    if (t < t0_ - fuzz || t > tEnd_ + fuzz)
      throw std::out_of_range("DenseSolution: time outside the integrated interval");
    t = std::min(std::max(t, t0_), tEnd_);

    // Last step whose start time is <= t.
    std::size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (steps_[mid].t <= t) lo = mid; else hi = mid - 1;
    }
    const Step& s = steps_[lo];
    const double theta = (t - s.t) / s.h;
    const double theta1 = 1.0 - theta;
    out = s.r1 + theta * (s.r2 + theta1 * (s.r3 + theta * (s.r4 + theta1 * s.r5)));
  }

private:
  struct Step {
    double t = 0.0, h = 0.0;
    Eigen::VectorXd r1, r2, r3, r4, r5;
  };

  template <class RHS>
  friend DenseSolution integrate_dopri5(
      RHS&& rhs, const Eigen::VectorXd& y0, double t0, double t1, const IntegratorOptions& opts,
      const std::function<bool(double, const Eigen::VectorXd&)>& stop);

  double t0_ = 0.0, tEnd_ = 0.0;
  Eigen::Index dim_ = 0;
  IntegrationStatus status_ = IntegrationStatus::reached_end;
  IntegratorStats stats_;
  Eigen::VectorXd yEnd_;
  std::vector<double> stepTimes_;
  std::vector<Step> steps_;
};

namespace dopri5_detail {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double safety = 0.9;
constexpr double beta = 0.04;
constexpr double expo1 = 0.2 - beta * 0.75;
constexpr double facMin = 0.2, facMax = 10.0;

}  // namespace dopri5_detail

template <class RHS>
DenseSolution integrate_dopri5(RHS&& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                               const IntegratorOptions& opts,
                               const std::function<bool(double, const Eigen::VectorXd&)>& stop) {
  namespace dd = dopri5_detail;
  if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: requires t1 > t0");

  const Eigen::Index n = y0.size();
  const double span = t1 - t0;
  const double hMax = opts.max_step > 0.0 ? std::min(opts.max_step, span) : span;
  const double eps = std::numeric_limits<double>::epsilon();

  DenseSolution sol;
  sol.t0_ = t0;
  sol.dim_ = n;
  sol.stats_.abs_tol = opts.abs_tol;
  sol.stats_.rel_tol = opts.rel_tol;
  sol.stepTimes_.push_back(t0);

  Eigen::VectorXd y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yTmp(n), yNew(n),
                  errVec(n);

  double t = t0;
  rhs(t, y, k1);
  sol.stats_.rhs_evaluations++;

  auto errorNorm = [&](const Eigen::VectorXd& e, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
      const double q = e[i] / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(n));
  };

  // Initial step: rough second-derivative estimate (Hairer's hinit).
  double h = opts.initial_step;
  if (h <= 0.0) {
    double dnf = 0.0, dny = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      dnf += (k1[i] / sc) * (k1[i] / sc);
      dny += (y[i] / sc) * (y[i] / sc);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hMax);
    yTmp = y + h * k1;
    rhs(t + h, yTmp, k2);
    sol.stats_.rhs_evaluations++;
    double der2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      const double q = (k2[i] - k1[i]) / sc;
      der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                       : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, hMax});
  }

  double facOld = 1e-4;
  bool lastRejected = false;

  while (t < t1) {
    if (sol.stats_.accepted + sol.stats_.rejected >= opts.max_steps)
      throw IntegratorFailure("integrate_dopri5: step budget exhausted");

    const double hFloor = std::max(opts.min_step, 10.0 * eps * std::abs(t));
    if (h < hFloor && t + h < t1) {
      sol.status_ = IntegrationStatus::step_underflow;
      break;
    }
    bool lastStep = false;
    if (t + 1.0001 * h >= t1) {
      h = t1 - t;
      lastStep = true;
    }

    namespace d5 = dd;
    yTmp = y + h * (d5::a21 * k1);
    rhs(t + d5::c2 * h, yTmp, k2);
    yTmp = y + h * (d5::a31 * k1 + d5::a32 * k2);
    rhs(t + d5::c3 * h, yTmp, k3);
    yTmp = y + h * (d5::a41 * k1 + d5::a42 * k2 + d5::a43 * k3);
    rhs(t + d5::c4 * h, yTmp, k4);
    yTmp = y + h * (d5::a51 * k1 + d5::a52 * k2 + d5::a53 * k3 + d5::a54 * k4);
    rhs(t + d5::c5 * h, yTmp, k5);
    yTmp = y + h * (d5::a61 * k1 + d5::a62 * k2 + d5::a63 * k3 + d5::a64 * k4 + d5::a65 * k5);
    rhs(t + h, yTmp, k6);
    yNew = y + h * (d5::a71 * k1 + d5::a73 * k3 + d5::a74 * k4 + d5::a75 * k5 + d5::a76 * k6);
    rhs(t + h, yNew, k7);
    sol.stats_.rhs_evaluations += 6;

    errVec = h * (d5::e1 * k1 + d5::e3 * k3 + d5::e4 * k4 + d5::e5 * k5 + d5::e6 * k6 +
                  d5::e7 * k7);
    double err = errorNorm(errVec, y, yNew);
    if (!std::isfinite(err)) {
      sol.stats_.rejected++;
      lastRejected = true;
      h *= 0.1;
      continue;
    }

    const double fac11 = std::pow(err, dd::expo1);
    if (err <= 1.0) {
      // Accepted.
      if (opts.store_dense) {
        DenseSolution::Step s;
        s.t = t;
        s.h = h;
        s.r1 = y;
        s.r2 = yNew - y;
        s.r3 = h * k1 - s.r2;
        s.r4 = s.r2 - h * k7 - s.r3;
        s.r5 = h * (dd::d1 * k1 + dd::d3 * k3 + dd::d4 * k4 + dd::d5 * k5 + dd::d6 * k6 +
                    dd::d7 * k7);
        sol.steps_.push_back(std::move(s));
      }
      sol.stats_.accepted++;
      t = lastStep ? t1 : t + h;
      sol.stepTimes_.push_back(t);
      y.swap(yNew);
      k1.swap(k7);  // first-same-as-last

      double fac = fac11 / std::pow(facOld, dd::beta);
      fac = std::max(1.0 / dd::facMax, std::min(1.0 / dd::facMin, fac / dd::safety));
      facOld = std::max(err, 1e-4);
      double hNew = h / fac;
      if (lastRejected) hNew = std::min(hNew, h);
      h = std::min(hNew, hMax);
      lastRejected = false;

      if (stop && stop(t, y)) {
        sol.status_ = IntegrationStatus::stopped_by_observer;
        break;
      }
      if (lastStep) break;
    } else {
      sol.stats_.rejected++;
      lastRejected = true;
      h = h / std::min(1.0 / dd::facMin, fac11 / dd::safety);
    }
  }

  sol.tEnd_ = t;
  sol.yEnd_ = y;
  return sol;
}

}  // namespace nscert
