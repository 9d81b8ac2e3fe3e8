#pragma once

// Test-only oracles, kept independent of the library's evaluation paths:
// the convolution oracle expands both spectra two-sided and applies the
// projection term by term, while the library accumulates per output mode on
// the half-spectrum and projects once.

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "nscert/mode.hpp"
#include "nscert/spectral_field.hpp"

namespace nscert::testing {

using CoeffMap = std::map<Mode, Eigen::VectorXcd>;

inline CoeffMap twoSided(const SpectralField& f) {
  CoeffMap out;
  for (const auto& [k, c] : f.entries()) {
    out.emplace(k, c);
    out.emplace(k.negated(), c.conjugate());
  }
  return out;
}

/// Term-by-term convolution P(v,w)_k = -i (2pi)^{-d/2} sum_h [v_h.(k-h)]
/// Leray_k w_{k-h}, projection applied per term.
inline CoeffMap bruteForceBilinear(const SpectralField& v, const SpectralField& w) {
  const int d = v.dim();
  const std::complex<double> factor =
      std::complex<double>(0.0, -1.0) / std::pow(2.0 * M_PI, 0.5 * d);
  const CoeffMap vf = twoSided(v), wf = twoSided(w);
  CoeffMap out;
  for (const auto& [h, vh] : vf) {
    for (const auto& [g, wg] : wf) {
      const Eigen::VectorXi kv = h.vec() + g.vec();
      if (kv.isZero()) continue;
      const Mode k(kv);
      std::complex<double> dot = 0.0;
      for (int i = 0; i < d; ++i) dot += vh[i] * static_cast<double>(g[i]);
      auto [it, inserted] = out.try_emplace(k, Eigen::VectorXcd::Zero(d));
      it->second += factor * dot * leray_project(k, wg);
    }
  }
  // Drop exact zeros so supports are comparable.
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.norm() == 0.0) it = out.erase(it); else ++it;
  }
  return out;
}

inline double bruteForceL2Inner(const CoeffMap& a, const CoeffMap& b) {
  double sum = 0.0;
  for (const auto& [k, ca] : a) {
    const auto it = b.find(k);
    if (it == b.end()) continue;
    std::complex<double> term = 0.0;
    for (Eigen::Index i = 0; i < ca.size(); ++i) term += std::conj(ca[i]) * it->second[i];
    sum += term.real();
  }
  return sum;
}

/// Deterministic small RNG so frozen expected values stay frozen.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t bits() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
  }
  double uniform() { return (static_cast<double>(bits() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  int rangeInt(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(bits() % static_cast<std::uint64_t>(hi - lo + 1));
  }

private:
  std::uint64_t state_;
};

/// Random divergence-free field with `count` modes drawn from a coordinate box.
inline SpectralField randomField(int dim, int count, TestRng& rng, int box = 3) {
  SpectralField f(dim);
  int made = 0, guard = 0;
  while (made < count && ++guard < 1000) {
    Eigen::VectorXi kv(dim);
    bool zero = true;
    for (int i = 0; i < dim; ++i) {
      kv[i] = rng.rangeInt(-box, box);
      zero = zero && kv[i] == 0;
    }
    if (zero) continue;
    Eigen::VectorXcd c(dim);
    for (int i = 0; i < dim; ++i) c[i] = std::complex<double>(rng.normal(), rng.normal());
    const Eigen::VectorXcd projected = leray_project(Mode(kv), c);
    if (projected.norm() < 1e-12 * c.norm()) continue;
    f.set(Mode(kv), projected);
    ++made;
  }
  return f;
}

}  // namespace nscert::testing
