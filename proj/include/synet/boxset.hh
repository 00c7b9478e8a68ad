#pragma once

#include <string>
#include <vector>

namespace synet {

/* Finite union of closed intervals on the real line, kept sorted and
   disjoint (overlapping or touching inputs are merged on construction). */
class BoxSet {
 public:
  struct Box {
    double lo, hi;
  };

  BoxSet() = default;
  explicit BoxSet(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

  bool contains(double x, double tol = 0.0) const;

  // length of the shortest interval (grid pitches must not exceed this)
  double span() const;

  double lo() const { return boxes_.front().lo; }
  double hi() const { return boxes_.back().hi; }

  // smallest single interval covering the set
  Box hull() const { return {lo(), hi()}; }

  // true when every interval of this set lies inside some interval of other
  bool subset_of(const BoxSet& other, double tol = 0.0) const;

  // true when [lo, hi] fits inside one interval of the set
  bool covers(double lo, double hi, double tol = 0.0) const;

  static BoxSet merge(const BoxSet& a, const BoxSet& b);

  std::string describe() const;

 private:
  std::vector<Box> boxes_;
};

}  // namespace synet
