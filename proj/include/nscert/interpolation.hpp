#pragma once

// Monotone-safe piecewise-cubic interpolation (Fritsch-Carlson slopes). Values
// never overshoot the data between adjacent nodes, so interpolating a
// nonnegative estimator keeps it nonnegative; node values are reproduced
// exactly.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nscert {

class PchipInterpolant {
public:
  PchipInterpolant() = default;

  PchipInterpolant(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
      throw std::invalid_argument("PchipInterpolant: need at least two nodes");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("PchipInterpolant: abscissae must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    d_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] == 0.0 || delta[i] == 0.0 || (delta[i - 1] > 0) != (delta[i] > 0)) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    d_[0] = endpointSlope(h[0], n > 2 ? h[1] : h[0], delta[0], n > 2 ? delta[1] : delta[0]);
    d_[n - 1] = endpointSlope(h[n - 2], n > 2 ? h[n - 3] : h[n - 2], delta[n - 2],
                              n > 2 ? delta[n - 3] : delta[n - 2]);
  }

  bool valid() const { return x_.size() >= 2; }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

  /// Evaluation clamps to the node range.
  double operator()(double t) const {
    if (!valid()) throw std::logic_error("PchipInterpolant: empty interpolant");
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (x_[mid] <= t) lo = mid; else hi = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    const double s = (t - x_[lo]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[lo] + h * h10 * d_[lo] + h01 * y_[lo + 1] + h * h11 * d_[lo + 1];
  }

private:
  // Three-point one-sided slope with the usual shape-preserving clamps.
  static double endpointSlope(double h0, double h1, double delta0, double delta1) {
    double d = ((2.0 * h0 + h1) * delta0 - h0 * delta1) / (h0 + h1);
    if (d * delta0 <= 0.0) return 0.0;
    if ((delta0 > 0) != (delta1 > 0) && std::abs(d) > 3.0 * std::abs(delta0))
      return 3.0 * delta0;
    return d;
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace nscert
