#include "synet/synthesis.hh"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "synet/errors.hh"

namespace synet {

bool SafetyController::in_domain(std::int64_t state) const {
  return std::binary_search(dom.begin(), dom.end(), state);
}

const std::vector<int>& SafetyController::actions(std::int64_t state) const {
  auto it = policy.find(state);
  if (it == policy.end())
    throw DomainError("state " + std::to_string(state) +
                      " is outside the domain of the " + class_id +
                      " controller");
  return it->second;
}

SafetyController synthesize_safety(const SymbolicModel& model,
                                   const BoxSet& safe_set,
                                   const std::vector<Grid>& safe_internal,
                                   int max_sweeps) {
  const Grid& g = model.state_grid();
  const std::int64_t n = g.size();
  const int n_u = static_cast<int>(model.input_values().size());

  std::vector<char> alive(n, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    double p = g.point(i);
    if (safe_set.contains(p, Grid::kEdgeTol * std::max(1.0, std::abs(p))))
      alive[i] = 1;
  }

  // prefix counts make "is this whole successor range still alive" O(1)
  std::vector<std::int64_t> cum(n + 1, 0);
  auto rebuild = [&] {
    for (std::int64_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + alive[i];
  };
  auto range_alive = [&](std::int64_t lo, std::int64_t hi) {
    return cum[hi + 1] - cum[lo] == hi - lo + 1;
  };

  SafetyController ctrl;
  ctrl.class_id = model.class_id();
  ctrl.safe_internal = safe_internal;

  std::map<std::int64_t, std::vector<int>> policy;
  int pass = 0;
  for (;;) {
    ++pass;
    rebuild();
    policy.clear();
    std::vector<std::int64_t> doomed;
    for (std::int64_t s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      std::vector<int> good;
      for (int u = 0; u < n_u; ++u) {
        auto un = model.successors_over(s, u, safe_internal);
        bool ok = !un.out && !un.ranges.empty();
        for (const auto& [lo, hi] : un.ranges) {
          if (!ok) break;
          if (!range_alive(lo, hi)) ok = false;
        }
        if (ok) good.push_back(u);
      }
      if (good.empty())
        doomed.push_back(s);
      else
        policy[s] = std::move(good);
    }
    if (doomed.empty()) break;
    for (std::int64_t s : doomed) alive[s] = 0;
    if (max_sweeps > 0 && pass >= max_sweeps)
      throw NumericError("safety fixed point still changing after " +
                             std::to_string(pass) + " sweeps",
                         static_cast<double>(doomed.size()));
  }

  ctrl.iterations = pass;
  for (std::int64_t s = 0; s < n; ++s)
    if (alive[s]) ctrl.dom.push_back(s);
  ctrl.policy = std::move(policy);
  return ctrl;
}

std::size_t closure_violations(const SafetyController& ctrl,
                               const SymbolicModel& model) {
  const std::int64_t n = model.state_grid().size();
  std::vector<char> alive(n, 0);
  std::size_t bad = 0;
  for (std::int64_t s : ctrl.dom) {
    if (s < 0 || s >= n) {
      ++bad;
      continue;
    }
    alive[s] = 1;
  }
  std::vector<std::int64_t> cum(n + 1, 0);
  for (std::int64_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + alive[i];

  for (std::int64_t s : ctrl.dom) {
    if (s < 0 || s >= n) continue;
    auto it = ctrl.policy.find(s);
    if (it == ctrl.policy.end() || it->second.empty()) {
      ++bad;
      continue;
    }
    for (int u : it->second) {
      auto un = model.successors_over(s, u, ctrl.safe_internal);
      bool ok = !un.out && !un.ranges.empty();
      for (const auto& [lo, hi] : un.ranges) {
        if (!ok) break;
        if (cum[hi + 1] - cum[lo] != hi - lo + 1) ok = false;
      }
      if (!ok) ++bad;
    }
  }
  return bad;
}

Refined refine(const SafetyController& ctrl, const SymbolicModel& model,
               double x, int node) {
  const Grid& g = model.state_grid();
  std::int64_t q;
  try {
    q = g.quantize(x);
  } catch (const Error&) {
    std::ostringstream os;
    os << "state " << x << " is outside the modeled region of class "
       << ctrl.class_id;
    throw RefinementError(os.str(), node);
  }
  if (!ctrl.in_domain(q)) {
    std::ostringstream os;
    os << "state " << x << " quantizes outside the controller domain of class "
       << ctrl.class_id;
    throw RefinementError(os.str(), node);
  }
  const auto& acts = ctrl.actions(q);
  Refined r;
  r.state = q;
  r.xhat = g.point(q);
  r.input = acts.front();
  r.u = model.input_values().at(acts.front());
  return r;
}

const SafetyController& ComposedController::at(int node) const {
  if (node < 0 || node >= size())
    throw DomainError("node index out of range");
  return *ctrl_[node];
}

const SymbolicModel& ComposedController::model_at(int node) const {
  if (node < 0 || node >= size())
    throw DomainError("node index out of range");
  return *model_[node];
}

bool ComposedController::in_domain(
    const std::vector<std::int64_t>& states) const {
  if (static_cast<int>(states.size()) != size())
    throw DomainError("state vector length does not match the network");
  for (int i = 0; i < size(); ++i)
    if (!ctrl_[i]->in_domain(states[i])) return false;
  return true;
}

ComposedController compose(const TruncatedNetwork& net,
                           const std::map<std::string, SafetyController>& ctrls,
                           const std::map<std::string, SymbolicModel>& models) {
  ComposedController c;
  for (const auto& nd : net.nodes) {
    std::string where = "node " + std::to_string(nd.id) + " (class " +
                        nd.class_id + ", subnetwork " + nd.subnet + ")";
    auto ci = ctrls.find(nd.class_id);
    if (ci == ctrls.end())
      throw CompositionError(where + " has no controller");
    auto mi = models.find(nd.class_id);
    if (mi == models.end()) throw CompositionError(where + " has no model");
    if (ci->second.class_id != nd.class_id)
      throw CompositionError(where + " got the " + ci->second.class_id +
                             " controller");
    if (ci->second.dom.empty())
      throw CompositionError(where + ": controller domain is empty");
    c.ctrl_.push_back(&ci->second);
    c.model_.push_back(&mi->second);
  }
  return c;
}

}  // namespace synet
