#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace synet {

/* Deterministic uniform doubles on top of mt19937_64.  The mapping from raw
   64-bit draws is fixed here so logs replay bit-identically everywhere. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // in [0, n)
  std::uint64_t integer(std::uint64_t n) { return n ? gen_() % n : 0; }

 private:
  std::mt19937_64 gen_;
};

// fixed-point decimal rendering used by reports (no locale surprises)
std::string format_fixed(double v, int digits);

}  // namespace synet
