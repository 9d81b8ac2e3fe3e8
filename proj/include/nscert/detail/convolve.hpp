#pragma once

#include <cmath>
#include <complex>

#include "nscert/mode_set.hpp"

namespace nscert::detail {

/// Evaluates a precomputed convolution plan against packed half-spectrum
/// coefficients: for each target k it accumulates
/// S_k = sum [gamma_h.(k-h)] gamma_{k-h} in plan order, applies the Leray
/// projection and the (2 pi)^{-d/2} basis normalization, and hands the result
/// (without the -i factor) to `sink(row, values)`.
template <class Sink>
void convolve(const ConvolutionPlan& plan, const std::complex<double>* state, Sink&& sink) {
  using Cd = std::complex<double>;
  const int d = plan.dim;
  const double invPow = 1.0 / std::pow(2.0 * M_PI, 0.5 * d);
  Cd acc[8];  // d <= 8
  for (std::size_t r = 0; r < plan.targetCount(); ++r) {
    for (int c = 0; c < d; ++c) acc[c] = 0.0;
    const std::size_t begin = plan.rowOffsets[r], end = plan.rowOffsets[r + 1];
    for (std::size_t tIdx = begin; tIdx < end; ++tIdx) {
      const ConvolutionTerm& term = plan.terms[tIdx];
      const double* w = &plan.weights[tIdx * static_cast<std::size_t>(d)];
      const Cd* hBase = state + static_cast<std::size_t>(term.h) * d;
      const Cd* gBase = state + static_cast<std::size_t>(term.g) * d;
      Cd dot = 0.0;
      if (term.h_conj) {
        for (int c = 0; c < d; ++c) dot += std::conj(hBase[c]) * w[c];
      } else {
        for (int c = 0; c < d; ++c) dot += hBase[c] * w[c];
      }
      if (term.g_conj) {
        for (int c = 0; c < d; ++c) acc[c] += dot * std::conj(gBase[c]);
      } else {
        for (int c = 0; c < d; ++c) acc[c] += dot * gBase[c];
      }
    }
    const double kSq = plan.targetSquared[static_cast<Eigen::Index>(r)];
    Cd kDot = 0.0;
    for (int c = 0; c < d; ++c) kDot += acc[c] * plan.targets(c, static_cast<Eigen::Index>(r));
    const Cd scale = kDot / kSq;
    for (int c = 0; c < d; ++c)
      acc[c] = (acc[c] - scale * plan.targets(c, static_cast<Eigen::Index>(r))) * invPow;
    sink(r, acc);
  }
}

}  // namespace nscert::detail
