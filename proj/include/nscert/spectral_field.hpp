#pragma once

// Fourier-side representation of real, zero-mean, divergence-free vector
// fields on the d-torus, together with the operations the certification
// pipeline is built on: weighted Sobolev norms, the mode-wise Leray
// projection, the Euler/NS bilinear map P(v,w) = -Leray(v . grad w), and the
// two nonlinearity bounds (basic and Kato inequalities).
//
// Conventions:
//   * the Fourier basis is e_k(x) = (2 pi)^{-d/2} exp(i k.x);
//   * coefficients are stored on a canonical half-spectrum, the -k
//     coefficient being the componentwise conjugate, so reality is structural;
//   * a.b on C^d is the bilinear (unconjugated) dot product; norms and inner
//     products conjugate the left argument.

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <stdexcept>

#include "nscert/mode.hpp"

namespace nscert {

class ModeSet;

/// Sobolev exponent; the shipped campaign uses n = 3.
struct SobolevOrder {
  double n = 0.0;
};

/// Constants of the basic inequality |P(v,w)|_n <= K_n |v|_n |w|_{n+1} and the
/// Kato inequality |<P(v,w)|w>_n| <= G_n |v|_n |w|_n^2. They are inputs, given
/// per (d, n); the shipped campaign uses K_3 = 0.323, G_3 = 0.438 for d = 3.
struct InequalityConstants {
  double K_n = 0.0;
  double G_n = 0.0;

  void validate() const {
    if (!(K_n > 0.0) || !(G_n > 0.0))
      throw std::invalid_argument("InequalityConstants: K_n and G_n must be positive");
  }
};

class SpectralField {
public:
  explicit SpectralField(int dim);

  int dim() const { return dim_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t supportSize() const { return coeffs_.size(); }  // stored half modes

  /// Stores the coefficient of the pair {k, -k}. The mode is canonicalized
  /// (conjugating the coefficient when the stored representative is -k).
  /// An exactly zero coefficient erases the entry. Coefficients with
  /// |k.c| > tol |c| are rejected, not silently projected, so datum-entry
  /// errors surface. `divergence_tol` is relative to |c|.
  void set(const Mode& k, const Eigen::VectorXcd& coeff,
           double divergence_tol = kDivergenceTolerance);

  /// Coefficient at any k (canonical or not); zero if the pair is absent.
  Eigen::VectorXcd coeff(const Mode& k) const;

  /// Canonical half-spectrum in lexicographic mode order.
  const std::map<Mode, Eigen::VectorXcd>& entries() const { return coeffs_; }

  static constexpr double kDivergenceTolerance = 1e-12;

private:
  int dim_;
  std::map<Mode, Eigen::VectorXcd> coeffs_;
};

/// |v|_m = sqrt(sum_k |k|^{2m} |v_k|^2) over the full two-sided spectrum;
/// an empty field has norm 0 for every m.
double sobolev_norm(const SpectralField& v, double order);

/// <v|w>_m = sum_k |k|^{2m} conj(v_k).w_k; real-valued for real fields.
double sobolev_inner(const SpectralField& v, const SpectralField& w, double order);

/// Orthogonal projection of c onto the plane k-perp: c - (k.c) k / |k|^2.
Eigen::VectorXcd leray_project(const Mode& k, const Eigen::VectorXcd& c);

/// P(v,w)_k = -i (2 pi)^{-d/2} sum_h [v_h.(k-h)] Leray_k w_{k-h}, evaluated by
/// direct convolution over the finite supports (no FFT); the support of the
/// result is contained in (supp v + supp w) minus the zero mode.
SpectralField bilinear_map(const SpectralField& v, const SpectralField& w);

struct InequalityCheck {
  bool holds = false;
  double ratio = 0.0;  // constant-free ratio, e.g. |P(v,w)|_n / (|v|_n |w|_{n+1})
  double slack = 0.0;  // ratio / constant: fraction of the bound actually used
};

InequalityCheck check_basic_inequality(const SpectralField& v, const SpectralField& w,
                                       double n, double K_n);
InequalityCheck check_kato_inequality(const SpectralField& v, const SpectralField& w,
                                      double n, double G_n);

/// |(1 - E_G) v|_m: Sobolev norm of the part of v outside G.
double tail_norm(const SpectralField& v, const ModeSet& G, double m);

/// |v|_p / gap(G)^{p-m}, an upper bound for tail_norm whenever p >= m.
double tail_bound(const ModeSet& G, double norm_p, double m, double p);

}  // namespace nscert
