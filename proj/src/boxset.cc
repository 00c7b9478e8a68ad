#include "synet/boxset.hh"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "synet/errors.hh"

namespace synet {

BoxSet::BoxSet(std::vector<Box> boxes) {
  for (const auto& b : boxes) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
      throw DomainError("interval needs finite lo <= hi");
  }
  std::sort(boxes.begin(), boxes.end(),
            [](const Box& a, const Box& b) { return a.lo < b.lo; });
  for (const auto& b : boxes) {
    if (!boxes_.empty() && b.lo <= boxes_.back().hi) {
      boxes_.back().hi = std::max(boxes_.back().hi, b.hi);
    } else {
      boxes_.push_back(b);
    }
  }
}

bool BoxSet::contains(double x, double tol) const {
  for (const auto& b : boxes_)
    if (x >= b.lo - tol && x <= b.hi + tol) return true;
  return false;
}

double BoxSet::span() const {
  if (boxes_.empty()) throw DomainError("span of an empty interval set");
  double s = boxes_.front().hi - boxes_.front().lo;
  for (const auto& b : boxes_) s = std::min(s, b.hi - b.lo);
  return s;
}

bool BoxSet::subset_of(const BoxSet& other, double tol) const {
  for (const auto& b : boxes_) {
    bool covered = false;
    for (const auto& o : other.boxes_)
      if (b.lo >= o.lo - tol && b.hi <= o.hi + tol) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

bool BoxSet::covers(double lo, double hi, double tol) const {
  for (const auto& b : boxes_)
    if (lo >= b.lo - tol && hi <= b.hi + tol) return true;
  return false;
}

BoxSet BoxSet::merge(const BoxSet& a, const BoxSet& b) {
  std::vector<Box> all = a.boxes_;
  all.insert(all.end(), b.boxes_.begin(), b.boxes_.end());
  return BoxSet(all);
}

std::string BoxSet::describe() const {
  std::string s = "{";
  for (size_t i = 0; i < boxes_.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%g,%g]", boxes_[i].lo, boxes_[i].hi);
    if (i) s += " u ";
    s += buf;
  }
  return s + "}";
}

}  // namespace synet
