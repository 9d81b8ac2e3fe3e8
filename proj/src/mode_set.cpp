#include "nscert/mode_set.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace nscert {

struct ModeSet::Data {
  int dim = 0;
  std::vector<Mode> half;          // canonical, sorted
  std::vector<Mode> residualHalf;  // canonical, sorted
  double gap = 0.0;
  std::unordered_map<Mode, int, ModeHash> halfIndex;

  mutable std::once_flag rhsOnce, residualOnce;
  mutable std::unique_ptr<ConvolutionPlan> rhsPlan, residualPlan;
};

namespace {

// All lattice vectors of a given squared norm, in a fixed order.
void enumerateShell(int dim, int pos, long long remaining, Eigen::VectorXi& scratch,
                    std::vector<Eigen::VectorXi>& out) {
  if (pos == dim) {
    if (remaining == 0) out.push_back(scratch);
    return;
  }
  const int bound = static_cast<int>(std::sqrt(static_cast<double>(remaining))) + 1;
  for (int c = -bound; c <= bound; ++c) {
    const long long rest = remaining - static_cast<long long>(c) * c;
    if (rest < 0) continue;
    scratch[pos] = c;
    enumerateShell(dim, pos + 1, rest, scratch, out);
  }
  scratch[pos] = 0;
}

double computeGap(int dim, const std::unordered_set<Mode, ModeHash>& full, long long maxSq) {
  Eigen::VectorXi scratch = Eigen::VectorXi::Zero(dim);
  for (long long q = 1; q <= maxSq + 1; ++q) {
    std::vector<Eigen::VectorXi> shell;
    enumerateShell(dim, 0, q, scratch, shell);
    for (const auto& v : shell)
      if (!full.count(Mode(v))) return std::sqrt(static_cast<double>(q));
  }
  // Unreachable: the shell just above the largest member cannot be covered.
  throw std::logic_error("ModeSet: gap enumeration failed");
}

ConvolutionPlan buildPlan(int dim, const std::vector<Mode>& half,
                          const std::unordered_map<Mode, int, ModeHash>& halfIndex,
                          const std::vector<Mode>& targets) {
  ConvolutionPlan plan;
  plan.dim = dim;
  plan.targets.resize(dim, static_cast<Eigen::Index>(targets.size()));
  plan.targetSquared.resize(static_cast<Eigen::Index>(targets.size()));
  plan.rowOffsets.reserve(targets.size() + 1);
  plan.rowOffsets.push_back(0);

  Eigen::VectorXi g(dim);
  for (std::size_t r = 0; r < targets.size(); ++r) {
    const Mode& k = targets[r];
    plan.targets.col(static_cast<Eigen::Index>(r)) = k.vec().cast<double>();
    plan.targetSquared[static_cast<Eigen::Index>(r)] = k.squaredNorm();
    // h runs over the full set as +h_j then -h_j, j in half order.
    for (std::size_t j = 0; j < half.size(); ++j) {
      for (int sign : {+1, -1}) {
        g = k.vec() - sign * half[j].vec();
        if (g.isZero()) continue;  // k - h = 0 is outside Z^d_0, term absent
        Mode gm(g);
        const auto it = halfIndex.find(gm.canonical());
        if (it == halfIndex.end()) continue;  // k - h outside G, gamma := 0
        ConvolutionTerm term;
        term.h = static_cast<std::int32_t>(j);
        term.h_conj = (sign < 0) ? 1 : 0;
        term.g = static_cast<std::int32_t>(it->second);
        term.g_conj = gm.isCanonical() ? 0 : 1;
        plan.terms.push_back(term);
        for (int c = 0; c < dim; ++c) plan.weights.push_back(static_cast<double>(g[c]));
      }
    }
    plan.rowOffsets.push_back(plan.terms.size());
  }
  return plan;
}

}  // namespace

ModeSet ModeSet::fromHalfList(int dim, const std::vector<Mode>& half) {
  if (dim < 2) throw std::invalid_argument("ModeSet: dimension must be at least 2");
  if (half.empty()) throw std::invalid_argument("ModeSet: empty mode list");

  auto data = std::make_shared<Data>();
  data->dim = dim;

  std::set<Mode> canon;
  for (const Mode& m : half) {
    if (m.dim() != dim) throw std::invalid_argument("ModeSet: mode dimension mismatch");
    if (!canon.insert(m.canonical()).second)
      throw std::invalid_argument("ModeSet: duplicate mode after symmetrization");
  }
  data->half.assign(canon.begin(), canon.end());
  for (std::size_t i = 0; i < data->half.size(); ++i)
    data->halfIndex.emplace(data->half[i], static_cast<int>(i));

  // Full two-sided set, then the residual (G + G) \ (G u {0}).
  std::unordered_set<Mode, ModeHash> full;
  long long maxSq = 0;
  for (const Mode& m : data->half) {
    full.insert(m);
    full.insert(m.negated());
    maxSq = std::max(maxSq, static_cast<long long>(std::llround(m.squaredNorm())));
  }

  std::set<Mode> residual;
  Eigen::VectorXi sum(dim);
  for (const Mode& a : full) {
    for (const Mode& b : full) {
      sum = a.vec() + b.vec();
      if (sum.isZero()) continue;
      Mode s(sum);
      if (full.count(s)) continue;
      residual.insert(s.canonical());
    }
  }
  data->residualHalf.assign(residual.begin(), residual.end());

  data->gap = computeGap(dim, full, maxSq);
  return ModeSet(std::move(data));
}

int ModeSet::dim() const { return d_->dim; }
const std::vector<Mode>& ModeSet::halfModes() const { return d_->half; }
const std::vector<Mode>& ModeSet::residualHalfModes() const { return d_->residualHalf; }
std::size_t ModeSet::size() const { return 2 * d_->half.size(); }
std::size_t ModeSet::residualSize() const { return 2 * d_->residualHalf.size(); }
double ModeSet::gap() const { return d_->gap; }

bool ModeSet::contains(const Mode& k) const {
  return d_->halfIndex.count(k.canonical()) > 0;
}

int ModeSet::halfIndexOf(const Mode& k) const {
  const auto it = d_->halfIndex.find(k.canonical());
  return it == d_->halfIndex.end() ? -1 : it->second;
}

const ConvolutionPlan& ModeSet::rhsPlan() const {
  std::call_once(d_->rhsOnce, [this] {
    d_->rhsPlan = std::make_unique<ConvolutionPlan>(
        buildPlan(d_->dim, d_->half, d_->halfIndex, d_->half));
  });
  return *d_->rhsPlan;
}

const ConvolutionPlan& ModeSet::residualPlan() const {
  std::call_once(d_->residualOnce, [this] {
    d_->residualPlan = std::make_unique<ConvolutionPlan>(
        buildPlan(d_->dim, d_->half, d_->halfIndex, d_->residualHalf));
  });
  return *d_->residualPlan;
}

std::string ModeSet::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::int64_t value) {
    auto x = static_cast<std::uint64_t>(value);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(d_->dim);
  for (const Mode& m : d_->half)
    for (int c = 0; c < d_->dim; ++c) mix(m[c]);
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nscert
