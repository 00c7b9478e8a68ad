#include "synet/grid.hh"

#include <cmath>
#include <limits>

#include "synet/errors.hh"

namespace synet {

namespace {

// guard scaled to the magnitude of the quotient so huge key values stay safe
double key_guard(double q) { return Grid::kEdgeTol * std::max(1.0, std::abs(q)); }

}  // namespace

Grid::Grid(const BoxSet& set, double eta) : set_(set), eta_(eta) {
  if (set.empty()) throw DomainError("grid over an empty set");
  if (!(eta > 0.0)) throw DomainError("grid pitch must be positive");
  double sp = set.span();
  if (eta > sp + kEdgeTol * std::max(1.0, sp))
    throw DomainError("grid pitch " + std::to_string(eta) +
                      " exceeds the narrowest interval of " + set.describe());
  std::int64_t base = 0;
  for (const auto& b : set.boxes()) {
    double qlo = b.lo / eta, qhi = b.hi / eta;
    std::int64_t klo = static_cast<std::int64_t>(std::ceil(qlo - key_guard(qlo)));
    std::int64_t khi = static_cast<std::int64_t>(std::floor(qhi + key_guard(qhi)));
    if (!segs_.empty() && klo <= segs_.back().k_hi) klo = segs_.back().k_hi + 1;
    if (klo > khi)
      throw DomainError("no representable grid point in one interval of " +
                        set.describe());
    segs_.push_back({klo, khi, base});
    base += khi - klo + 1;
  }
  size_ = base;
}

double Grid::point(std::int64_t index) const {
  return static_cast<double>(key(index)) * eta_;
}

std::int64_t Grid::key(std::int64_t index) const {
  for (const auto& s : segs_) {
    std::int64_t off = index - s.index_base;
    if (off >= 0 && off <= s.k_hi - s.k_lo) return s.k_lo + off;
  }
  throw DomainError("grid index out of range");
}

std::optional<std::int64_t> Grid::index_of_key(std::int64_t k) const {
  for (const auto& s : segs_)
    if (k >= s.k_lo && k <= s.k_hi) return s.index_base + (k - s.k_lo);
  return std::nullopt;
}

std::vector<std::pair<std::int64_t, std::int64_t>> Grid::key_ranges() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(segs_.size());
  for (const auto& s : segs_) out.push_back({s.k_lo, s.k_hi});
  return out;
}

std::int64_t Grid::quantize(double x) const {
  // points in gaps between intervals are admitted and snap to the nearest
  // representable point; points beyond the hull are rejected
  double tol = kEdgeTol * std::max(1.0, std::abs(x));
  if (x < set_.lo() - tol || x > set_.hi() + tol)
    throw DomainError("cannot quantize a point outside the set");
  double q = x / eta_;
  std::int64_t best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& s : segs_) {
    // nearest key in this segment; half-way cases resolve downward
    std::int64_t k = static_cast<std::int64_t>(std::ceil(q - 0.5));
    if (k < s.k_lo) k = s.k_lo;
    if (k > s.k_hi) k = s.k_hi;
    double d = std::abs(static_cast<double>(k) * eta_ - x);
    if (d < best_d) {
      best_d = d;
      best = s.index_base + (k - s.k_lo);
    }
  }
  return best;
}

Grid::BallRange Grid::ball_range(double c, double r) const {
  if (!(r >= 0.0)) throw DomainError("ball radius must be nonnegative");
  BallRange out;
  double lo_v = c - r - kEdgeTol, hi_v = c + r + kEdgeTol;
  std::int64_t lo_idx = std::numeric_limits<std::int64_t>::max(), hi_idx = -1;
  for (const auto& s : segs_) {
    double qlo = lo_v / eta_, qhi = hi_v / eta_;
    std::int64_t klo = static_cast<std::int64_t>(std::ceil(qlo));
    std::int64_t khi = static_cast<std::int64_t>(std::floor(qhi));
    if (klo < s.k_lo) klo = s.k_lo;
    if (khi > s.k_hi) khi = s.k_hi;
    if (klo > khi) continue;
    lo_idx = std::min(lo_idx, s.index_base + (klo - s.k_lo));
    hi_idx = std::max(hi_idx, s.index_base + (khi - s.k_lo));
  }
  if (hi_idx >= 0) {
    out.lo = lo_idx;
    out.hi = hi_idx;
  }
  out.escapes = true;
  for (const auto& b : set_.boxes())
    if (c - r >= b.lo - kEdgeTol && c + r <= b.hi + kEdgeTol) {
      out.escapes = false;
      break;
    }
  return out;
}

double snap_pitch(double span, double v) {
  if (!(span > 0.0)) throw DomainError("cannot grid a degenerate set");
  if (!(v > 0.0)) throw DomainError("pitch target must be positive");
  if (v >= span) return span;
  double q = span / v;
  double n = std::ceil(q - Grid::kEdgeTol * std::max(1.0, q));
  if (n < 1.0) n = 1.0;
  return span / n;
}

}  // namespace synet
