#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace nscert {

/// Nonzero Fourier mode k on the d-torus. Fields live in the zero-mean
/// sector, so the zero vector is not representable.
class Mode {
public:
  explicit Mode(Eigen::VectorXi k) : k_(std::move(k)) {
    if (k_.size() == 0 || k_.isZero())
      throw std::invalid_argument("Mode: the zero mode is not representable");
  }
  Mode(std::initializer_list<int> xs) : Mode(fromList(xs)) {}

  int dim() const { return static_cast<int>(k_.size()); }
  const Eigen::VectorXi& vec() const { return k_; }
  int operator[](int i) const { return k_[i]; }

  double squaredNorm() const { return k_.cast<double>().squaredNorm(); }
  double norm() const { return std::sqrt(squaredNorm()); }

  /// A pair {k, -k} is represented by the member whose first nonzero entry is
  /// positive; reality of fields then holds by construction.
  bool isCanonical() const {
    for (int i = 0; i < k_.size(); ++i)
      if (k_[i] != 0) return k_[i] > 0;
    return false;  // unreachable: k != 0
  }
  Mode negated() const { return Mode(Eigen::VectorXi(-k_)); }
  Mode canonical() const { return isCanonical() ? *this : negated(); }

  friend bool operator==(const Mode& a, const Mode& b) {
    return a.k_.size() == b.k_.size() && a.k_ == b.k_;
  }
  friend bool operator!=(const Mode& a, const Mode& b) { return !(a == b); }
  friend bool operator<(const Mode& a, const Mode& b) {
    return std::lexicographical_compare(a.k_.data(), a.k_.data() + a.k_.size(),
                                        b.k_.data(), b.k_.data() + b.k_.size());
  }

private:
  static Eigen::VectorXi fromList(std::initializer_list<int> xs) {
    Eigen::VectorXi v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (int x : xs) v[i++] = x;
    return v;
  }

  Eigen::VectorXi k_;
};

struct ModeHash {
  std::size_t operator()(const Mode& m) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < m.dim(); ++i) {
      auto x = static_cast<std::uint64_t>(static_cast<std::int64_t>(m[i]));
      for (int b = 0; b < 8; ++b) {
        h ^= (x >> (8 * b)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace nscert
