#include "nscert/spectral_field.hpp"

#include <cmath>
#include <vector>

#include "nscert/mode_set.hpp"
#include "nscert/summation.hpp"

namespace nscert {

namespace {

using Cd = std::complex<double>;

// Bilinear dot a.b = sum_r a_r b_r (no conjugation), b real.
Cd dotReal(const Eigen::VectorXcd& a, const Eigen::VectorXd& b) {
  Cd s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Cd dotConjugating(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Cd s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

SpectralField::SpectralField(int dim) : dim_(dim) {
  if (dim < 2) throw std::invalid_argument("SpectralField: dimension must be at least 2");
}

void SpectralField::set(const Mode& k, const Eigen::VectorXcd& coeff, double divergence_tol) {
  if (k.dim() != dim_) throw std::invalid_argument("SpectralField: mode dimension mismatch");
  if (coeff.size() != dim_)
    throw std::invalid_argument("SpectralField: coefficient dimension mismatch");

  const Mode canon = k.canonical();
  const Eigen::VectorXcd c = (canon == k) ? coeff : coeff.conjugate();

  const double mag = c.norm();
  if (mag == 0.0) {
    coeffs_.erase(canon);
    return;
  }
  const double div = std::abs(dotReal(c, canon.vec().cast<double>()));
  if (div > divergence_tol * mag)
    throw std::invalid_argument("SpectralField: coefficient violates k.v_k = 0 (not projecting silently)");
  coeffs_[canon] = c;
}

Eigen::VectorXcd SpectralField::coeff(const Mode& k) const {
  if (k.dim() != dim_) throw std::invalid_argument("SpectralField: mode dimension mismatch");
  const Mode canon = k.canonical();
  const auto it = coeffs_.find(canon);
  if (it == coeffs_.end()) return Eigen::VectorXcd::Zero(dim_);
  return (canon == k) ? it->second : it->second.conjugate();
}

double sobolev_norm(const SpectralField& v, double order) {
  std::vector<double> terms;
  terms.reserve(v.supportSize());
  for (const auto& [k, c] : v.entries())
    terms.push_back(2.0 * std::pow(k.squaredNorm(), order) * c.squaredNorm());
  return std::sqrt(pairwise_sum(terms));
}

double sobolev_inner(const SpectralField& v, const SpectralField& w, double order) {
  if (v.dim() != w.dim())
    throw std::invalid_argument("sobolev_inner: field dimension mismatch");
  std::vector<double> terms;
  const auto& a = v.entries();
  const auto& b = w.entries();
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      // k and -k contribute conjugate terms, so the pair sums to twice the
      // real part.
      terms.push_back(2.0 * std::pow(ia->first.squaredNorm(), order) *
                      dotConjugating(ia->second, ib->second).real());
      ++ia;
      ++ib;
    }
  }
  return pairwise_sum(terms);
}

Eigen::VectorXcd leray_project(const Mode& k, const Eigen::VectorXcd& c) {
  if (k.dim() != c.size()) throw std::invalid_argument("leray_project: dimension mismatch");
  const Eigen::VectorXd kd = k.vec().cast<double>();
  const std::complex<double> kc = dotReal(c, kd);
  return c - (kc / k.squaredNorm()) * kd.cast<std::complex<double>>();
}

SpectralField bilinear_map(const SpectralField& v, const SpectralField& w) {
  if (v.dim() != w.dim())
    throw std::invalid_argument("bilinear_map: field dimension mismatch");
  const int d = v.dim();

  // Expand both supports to the full two-sided spectrum, in a fixed order.
  auto expand = [](const SpectralField& f) {
    std::vector<std::pair<Mode, Eigen::VectorXcd>> full;
    full.reserve(2 * f.supportSize());
    for (const auto& [k, c] : f.entries()) {
      full.emplace_back(k, c);
      full.emplace_back(k.negated(), c.conjugate());
    }
    std::sort(full.begin(), full.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return full;
  };
  const auto vFull = expand(v);
  const auto wFull = expand(w);

  // Accumulate the raw convolution sum_h [v_h.(k-h)] w_{k-h} per output k;
  // the Leray projection is linear, so it is applied once per k afterwards.
  std::map<Mode, Eigen::VectorXcd> raw;
  Eigen::VectorXi sum(d);
  for (const auto& [h, vh] : vFull) {
    for (const auto& [g, wg] : wFull) {
      sum = h.vec() + g.vec();
      if (sum.isZero()) continue;
      const std::complex<double> factor = dotReal(vh, g.vec().cast<double>());
      if (factor == 0.0) continue;
      auto [it, inserted] = raw.try_emplace(Mode(sum), Eigen::VectorXcd::Zero(d));
      it->second += factor * wg;
    }
  }

  const std::complex<double> prefactor =
      std::complex<double>(0.0, -1.0) / std::pow(2.0 * M_PI, 0.5 * d);
  SpectralField result(d);
  for (const auto& [k, acc] : raw) {
    if (!k.isCanonical()) continue;  // the -k entry is the conjugate by reality
    // Projecting twice: the second pass removes the first's rounding residue,
    // which matters when the accumulated sum is nearly parallel to k and the
    // projected remainder is small.
    Eigen::VectorXcd pk = prefactor * leray_project(k, leray_project(k, acc));
    if (pk.norm() == 0.0) continue;
    result.set(k, pk);
  }
  return result;
}

InequalityCheck check_basic_inequality(const SpectralField& v, const SpectralField& w,
                                       double n, double K_n) {
  if (!(K_n > 0.0)) throw std::invalid_argument("check_basic_inequality: K_n must be positive");
  InequalityCheck out;
  const double denom = sobolev_norm(v, n) * sobolev_norm(w, n + 1.0);
  if (denom == 0.0) {
    out.holds = true;
    return out;
  }
  const double pn = sobolev_norm(bilinear_map(v, w), n);
  out.ratio = pn / denom;
  out.slack = out.ratio / K_n;
  out.holds = pn <= K_n * denom;
  return out;
}

InequalityCheck check_kato_inequality(const SpectralField& v, const SpectralField& w,
                                      double n, double G_n) {
  if (!(G_n > 0.0)) throw std::invalid_argument("check_kato_inequality: G_n must be positive");
  InequalityCheck out;
  const double wn = sobolev_norm(w, n);
  const double denom = sobolev_norm(v, n) * wn * wn;
  if (denom == 0.0) {
    out.holds = true;
    return out;
  }
  const double num = std::abs(sobolev_inner(bilinear_map(v, w), w, n));
  out.ratio = num / denom;
  out.slack = out.ratio / G_n;
  out.holds = num <= G_n * denom;
  return out;
}

double tail_norm(const SpectralField& v, const ModeSet& G, double m) {
  if (v.dim() != G.dim()) throw std::invalid_argument("tail_norm: dimension mismatch");
  std::vector<double> terms;
  for (const auto& [k, c] : v.entries())
    if (!G.contains(k))
      terms.push_back(2.0 * std::pow(k.squaredNorm(), m) * c.squaredNorm());
  return std::sqrt(pairwise_sum(terms));
}

double tail_bound(const ModeSet& G, double norm_p, double m, double p) {
  if (p < m) throw std::invalid_argument("tail_bound: requires p >= m");
  return norm_p / std::pow(G.gap(), p - m);
}

}  // namespace nscert
