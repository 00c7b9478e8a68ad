#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "synet/boxset.hh"

namespace synet {

/* Uniform grid over a BoxSet: the points are the integer multiples of eta
   that fall inside the set (anchored at 0, not at the interval ends).
   Points are addressed two ways: by dense index 0..size-1 across all
   intervals in order, and by integer key k with point = k * eta.  All
   boundary comparisons share one relative guard so that values within
   ~1e-9 of an interval edge or a ball edge land deterministically. */
class Grid {
 public:
  Grid() = default;
  Grid(const BoxSet& set, double eta);

  double eta() const { return eta_; }
  const BoxSet& set() const { return set_; }
  std::int64_t size() const { return size_; }

  double point(std::int64_t index) const;
  std::int64_t key(std::int64_t index) const;
  std::optional<std::int64_t> index_of_key(std::int64_t k) const;

  // inclusive key range of each contiguous run of points, in dense order
  std::vector<std::pair<std::int64_t, std::int64_t>> key_ranges() const;

  /* Nearest grid point to x among the points of the covering interval(s);
     ties resolve toward the smaller point.  x must lie in the set. */
  std::int64_t quantize(double x) const;

  /* Dense index range [lo, hi] of the grid points within distance r of c
     (closed ball), plus whether the ball sticks out of the set.  Empty
     intersection reports lo > hi. */
  struct BallRange {
    std::int64_t lo = 0, hi = -1;
    bool escapes = false;
    bool empty() const { return lo > hi; }
    std::int64_t count() const { return empty() ? 0 : hi - lo + 1; }
  };
  BallRange ball_range(double c, double r) const;

  // comparison guard shared with the tests' reference computations
  static constexpr double kEdgeTol = 1e-9;

 private:
  struct Segment {
    std::int64_t k_lo, k_hi;    // inclusive key range
    std::int64_t index_base;    // dense index of k_lo
  };

  BoxSet set_;
  double eta_ = 0.0;
  std::int64_t size_ = 0;
  std::vector<Segment> segs_;
};

/* Largest pitch of the form span/n, n a positive integer, that stays at or
   below v; returns span itself when v >= span.  The relative guard keeps an
   exact divisor from being pushed to the next n by rounding. */
double snap_pitch(double span, double v);

}  // namespace synet
