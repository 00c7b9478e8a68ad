#include "synet/sim.hh"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "synet/errors.hh"
#include "synet/util.hh"

namespace synet {

namespace {

const SubsystemClass& class_of(const NetworkPattern& p, const std::string& id) {
  auto it = p.classes.find(id);
  if (it == p.classes.end()) throw ConfigError("simulation references unknown class " + id);
  return it->second;
}

}  // namespace

TrajectoryLog run_simulation(const TruncatedNetwork& net,
                             const ComposedController& comp,
                             const QuantDesign& design,
                             const SimConfig& cfg) {
  const std::size_t n = net.nodes.size();
  if (net.pattern == nullptr) throw ConfigError("truncated network has no pattern");
  if (cfg.steps < 0) throw ConfigError("step count must be nonnegative");
  if (static_cast<std::size_t>(comp.size()) != n) {
    std::ostringstream os;
    os << "composed controller covers " << comp.size() << " nodes but the truncation has " << n;
    throw ConfigError(os.str());
  }
  if (!cfg.init.empty() && cfg.init.size() != n) {
    std::ostringstream os;
    os << "initial state list has " << cfg.init.size() << " entries for " << n << " nodes";
    throw ConfigError(os.str());
  }

  struct Node {
    const SubsystemClass* cls = nullptr;
    const SymbolicModel* model = nullptr;
    const SafetyController* ctrl = nullptr;
    double radius = 0.0;  // accuracy budget of this node's distance to its companion
    double scale = 0.0;   // weight in the network distance
    int const_input = -1;
  };
  std::vector<Node> nd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeInstance& inst = net.nodes[i];
    nd[i].cls = &class_of(*net.pattern, inst.class_id);
    nd[i].model = &comp.model_at(static_cast<int>(i));
    nd[i].ctrl = &comp.at(static_cast<int>(i));
    auto it = design.varpi_sc.find({inst.subnet, inst.class_id});
    if (it == design.varpi_sc.end() || it->second <= 0.0) {
      throw ConfigError("design carries no accuracy radius for class " + inst.class_id +
                        " in subnetwork " + inst.subnet);
    }
    nd[i].radius = it->second;
    nd[i].scale = design.varpi / it->second;
    if (cfg.const_input) {
      const double want = *cfg.const_input;
      const auto& vals = nd[i].model->input_values();
      for (std::size_t j = 0; j < vals.size(); ++j) {
        if (std::fabs(vals[j] - want) <= Grid::kEdgeTol * std::max(1.0, std::fabs(want))) {
          nd[i].const_input = static_cast<int>(j);
          break;
        }
      }
      if (nd[i].const_input < 0) {
        throw ConfigError("constant input " + format_fixed(want, 6) +
                          " is not an input value of class " + inst.class_id);
      }
    }
  }

  std::vector<double> x(n);
  if (!cfg.init.empty()) {
    x = cfg.init;
  } else {
    /* Two draws per node in node order: which safe interval, then where in
       it.  Intervals are pulled in by half a grid pitch so the quantized
       start always sits strictly inside the safe set. */
    Rng rng(cfg.seed);
    for (std::size_t i = 0; i < n; ++i) {
      const double margin = nd[i].model->state_grid().eta() / 2.0;
      std::vector<std::pair<double, double>> segs;
      double total = 0.0;
      for (const auto& b : nd[i].cls->safe_set.boxes()) {
        const double lo = b.lo + margin, hi = b.hi - margin;
        if (hi > lo) {
          segs.emplace_back(lo, hi);
          total += hi - lo;
        }
      }
      if (segs.empty()) {
        throw DomainError("safe set of class " + nd[i].cls->id +
                          " is thinner than one grid pitch; no start state to draw");
      }
      double pick = rng.unit() * total;
      std::size_t si = 0;
      for (; si + 1 < segs.size(); ++si) {
        const double width = segs[si].second - segs[si].first;
        if (pick <= width) break;
        pick -= width;
      }
      x[i] = rng.uniform(segs[si].first, segs[si].second);
    }
  }

  std::vector<std::int64_t> companion(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      companion[i] = nd[i].model->state_grid().quantize(x[i]);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "initial state of node " << i << " is outside the modeled region: " << e.what();
      throw ConfigError(os.str());
    }
  }

  TrajectoryLog log;
  log.seed = cfg.seed;
  log.truncation = net.truncation;
  log.steps = cfg.steps;
  log.rows.reserve((static_cast<std::size_t>(cfg.steps) + 1) * n);
  RunSummary& sum = log.summary;

  auto fail = [&sum](int step, int node, std::string msg) {
    sum.pass = false;
    sum.failure = std::move(msg);
    sum.fail_step = step;
    sum.fail_node = node;
  };

  for (int k = 0;; ++k) {
    const std::size_t base = log.rows.size();
    double vbar = 0.0, mismatch = 0.0;
    int vbar_node = 0, mismatch_node = 0;
    for (std::size_t i = 0; i < n; ++i) {
      LogRow r;
      r.step = k;
      r.node = static_cast<int>(i);
      r.subnet = net.nodes[i].subnet;
      r.x = x[i];
      r.xhat = nd[i].model->state_grid().point(companion[i]);
      r.v = std::fabs(r.x - r.xhat);
      r.safe = nd[i].cls->safe_set.contains(r.x, Grid::kEdgeTol * std::max(1.0, std::fabs(r.x)));
      r.asf_ok = r.v <= nd[i].radius * (1.0 + Grid::kEdgeTol);
      const double scaled = nd[i].scale * r.v;
      if (scaled > vbar) {
        vbar = scaled;
        vbar_node = static_cast<int>(i);
      }
      // outputs are the states themselves, so the output gap is v
      if (r.v > mismatch) {
        mismatch = r.v;
        mismatch_node = static_cast<int>(i);
      }
      sum.max_v = std::max(sum.max_v, r.v);
      log.rows.push_back(std::move(r));
    }
    sum.max_vbar = std::max(sum.max_vbar, vbar);
    sum.max_mismatch = std::max(sum.max_mismatch, mismatch);

    bool bad = false;
    for (std::size_t i = 0; i < n && !bad; ++i) {
      const LogRow& r = log.rows[base + i];
      if (!r.safe) {
        std::ostringstream os;
        os << "node " << i << " left its safe set at step " << k
           << " (x = " << format_fixed(r.x, 6) << ")";
        fail(k, static_cast<int>(i), os.str());
        bad = true;
      } else if (!r.asf_ok) {
        std::ostringstream os;
        os << "node " << i << " drifted " << format_fixed(r.v, 6)
           << " from its abstract companion at step " << k << ", past its accuracy radius "
           << format_fixed(nd[i].radius, 6);
        fail(k, static_cast<int>(i), os.str());
        bad = true;
      }
    }
    if (!bad && vbar > design.varpi * (1.0 + Grid::kEdgeTol)) {
      std::ostringstream os;
      os << "scaled network distance " << format_fixed(vbar, 6) << " exceeded its target "
         << format_fixed(design.varpi, 6) << " at step " << k << " (node " << vbar_node << ")";
      fail(k, vbar_node, os.str());
      bad = true;
    }
    if (!bad && mismatch > design.epsilon_hat * (1.0 + Grid::kEdgeTol)) {
      std::ostringstream os;
      os << "output mismatch " << format_fixed(mismatch, 6) << " exceeded its bound "
         << format_fixed(design.epsilon_hat, 6) << " at step " << k << " (node "
         << mismatch_node << ")";
      fail(k, mismatch_node, os.str());
      bad = true;
    }
    if (bad) break;
    if (k == cfg.steps) {
      sum.pass = true;
      break;
    }

    std::vector<std::int64_t> anchor(n);
    std::vector<int> uidx(n);
    std::vector<double> uval(n);
    bool halted = false;
    for (std::size_t i = 0; i < n && !halted; ++i) {
      if (cfg.const_input) {
        try {
          anchor[i] = nd[i].model->state_grid().quantize(x[i]);
        } catch (const Error& e) {
          std::ostringstream os;
          os << "refinement failed at node " << i << ", step " << k << ": " << e.what();
          fail(k, static_cast<int>(i), os.str());
          halted = true;
          break;
        }
        uidx[i] = nd[i].const_input;
        uval[i] = nd[i].model->input_values()[static_cast<std::size_t>(nd[i].const_input)];
      } else {
        try {
          Refined r = refine(*nd[i].ctrl, *nd[i].model, x[i], static_cast<int>(i));
          anchor[i] = r.state;
          uidx[i] = r.input;
          uval[i] = r.u;
        } catch (const RefinementError& e) {
          std::ostringstream os;
          os << "refinement failed at node " << i << ", step " << k << ": " << e.what();
          fail(k, e.node() >= 0 ? e.node() : static_cast<int>(i), os.str());
          halted = true;
          break;
        }
      }
    }
    if (halted) break;

    for (std::size_t i = 0; i < n; ++i) {
      LogRow& r = log.rows[base + i];
      r.has_input = true;
      r.u = uval[i];
      const auto& src = net.nodes[i].sources;
      r.w.reserve(src.size());
      for (int s : src) r.w.push_back(x[static_cast<std::size_t>(s)]);
    }

    /* Synchronous advance.  Concrete states move by the exact dynamics fed
       the neighbours' exact states; each companion moves to the successor
       of the quantized state (under the chosen input and the neighbours'
       quantized states) closest to the node's new concrete state, ties to
       the smaller point. */
    std::vector<double> nx(n);
    std::vector<std::int64_t> ncomp(n);
    for (std::size_t i = 0; i < n; ++i) {
      const LogRow& r = log.rows[base + i];
      nx[i] = nd[i].model->image(x[i], uval[i], r.w);
      const auto& src = net.nodes[i].sources;
      std::vector<std::int64_t> widx(src.size());
      for (std::size_t j = 0; j < src.size(); ++j) {
        const std::size_t s = static_cast<std::size_t>(src[j]);
        const double wpt = nd[s].model->state_grid().point(anchor[s]);
        widx[j] = nd[i].model->slot_grid(static_cast<int>(j)).quantize(wpt);
      }
      const auto succ = nd[i].model->successors(anchor[i], uidx[i], widx);
      if (succ.out || succ.empty()) {
        std::ostringstream os;
        os << "abstract companion of node " << i << " lost every successor at step " << k;
        throw DomainError(os.str());
      }
      const Grid& g = nd[i].model->state_grid();
      std::int64_t best = succ.lo;
      double bd = std::fabs(nx[i] - g.point(succ.lo));
      for (std::int64_t t = succ.lo + 1; t <= succ.hi; ++t) {
        const double d = std::fabs(nx[i] - g.point(t));
        if (d < bd) {
          bd = d;
          best = t;
        }
      }
      ncomp[i] = best;
    }
    x = std::move(nx);
    companion = std::move(ncomp);
    sum.completed = k + 1;
  }

  return log;
}

}  // namespace synet
