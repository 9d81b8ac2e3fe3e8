#pragma once

// Symmetric finite mode sets G for Galerkin truncation, their residual set
// dG = (G + G) \ (G u {0}) — where the quadratic nonlinearity of a
// G-supported field escapes the Galerkin subspace — the spectral gap
// min_{k not in G} |k|, and precomputed convolution index plans shared by the
// Galerkin right-hand side and the exact differential-error estimator.

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nscert/mode.hpp"

namespace nscert {

/// One term gamma_h.(k-h) * gamma_{k-h} of a convolution sum. Indices point
/// into the canonical half-mode array of G; the conjugation flags resolve
/// coefficients implied by reality.
struct ConvolutionTerm {
  std::int32_t h = 0;
  std::int32_t g = 0;
  std::uint8_t h_conj = 0;
  std::uint8_t g_conj = 0;
};

/// Flattened index plan: for each target mode k, the list of contributing
/// (h, k-h) pairs and the per-term weight vector w = k - h. Built once per
/// mode set; evaluation is then a flat array traversal in a fixed order, so
/// results are bit-stable.
struct ConvolutionPlan {
  int dim = 0;
  Eigen::MatrixXd targets;          // dim x nTargets, target modes as doubles
  Eigen::VectorXd targetSquared;    // |k|^2 per target
  std::vector<std::size_t> rowOffsets;  // nTargets + 1 offsets into terms
  std::vector<ConvolutionTerm> terms;
  std::vector<double> weights;      // dim doubles per term: (k - h)

  std::size_t targetCount() const { return rowOffsets.empty() ? 0 : rowOffsets.size() - 1; }
};

class ModeSet {
public:
  /// modes = half u -half. Rejects an empty list, non-canonical duplicates
  /// (both k and -k supplied), and dimension mismatches; the zero mode is
  /// unrepresentable by construction.
  static ModeSet fromHalfList(int dim, const std::vector<Mode>& half);

  int dim() const;
  const std::vector<Mode>& halfModes() const;          // canonical, sorted
  const std::vector<Mode>& residualHalfModes() const;  // canonical, sorted
  std::size_t size() const;          // |G|, counting both signs
  std::size_t residualSize() const;  // |dG|, counting both signs
  double gap() const;                // min_{k not in G} |k|

  bool contains(const Mode& k) const;   // membership of either sign
  int halfIndexOf(const Mode& k) const; // index of canonical(k) in halfModes(), -1 if absent

  /// Plan with targets = halfModes(): the Galerkin nonlinearity on G.
  const ConvolutionPlan& rhsPlan() const;
  /// Plan with targets = residualHalfModes(): the escaping nonlinearity on dG.
  const ConvolutionPlan& residualPlan() const;

  /// FNV-1a 64 over the sorted canonical half list; recorded in certificates
  /// since a certified time is meaningless without the exact G.
  std::string checksum() const;

private:
  struct Data;
  explicit ModeSet(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

}  // namespace nscert
