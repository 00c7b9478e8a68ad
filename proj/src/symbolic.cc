#include "synet/symbolic.hh"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "synet/errors.hh"
#include "synet/util.hh"

namespace synet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double value_tol(double v) { return Grid::kEdgeTol * std::max(1.0, std::abs(v)); }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

SlotGrids derive_slot_grids(const NetworkPattern& pattern,
                            const std::vector<EdgeType>& types,
                            const QuantDesign& design,
                            const std::string& class_id) {
  auto cit = pattern.classes.find(class_id);
  if (cit == pattern.classes.end())
    throw ConfigError("unknown class '" + class_id + "'");
  SlotGrids out;
  for (int j = 0; j < cit->second.arity(); ++j) {
    std::set<std::string> sources;
    double phi_min = kInf;
    bool zero = false, positive = false;
    for (const auto& t : types) {
      if (t.reader_class != class_id || t.slot != j) continue;
      sources.insert(t.source_class);
      auto f = design.phi.find(t);
      double off = f == design.phi.end() ? 0.0 : f->second;
      if (off > 0.0) {
        positive = true;
        phi_min = std::min(phi_min, off);
      } else {
        zero = true;
      }
    }
    if (sources.empty())
      throw TopologyError("slot " + std::to_string(j) + " of class '" +
                          class_id + "' is never wired");
    if (zero && positive)
      throw UnsupportedError("slot " + std::to_string(j) + " of class '" +
                             class_id +
                             "' mixes zero and positive offsets; one grid "
                             "cannot serve both");
    BoxSet full, safe;
    double pitch = -1.0;
    for (const auto& s : sources) {
      const auto& src = pattern.classes.at(s);
      full = BoxSet::merge(full, src.state_set);
      safe = BoxSet::merge(safe, src.safe_set);
      if (!positive) {
        auto d = design.classes.find(s);
        if (d == design.classes.end())
          throw ConfigError("design has no pitch for class '" + s + "'");
        if (pitch < 0.0)
          pitch = d->second.eta_x;
        else if (pitch != d->second.eta_x)
          throw UnsupportedError(
              "slot " + std::to_string(j) + " of class '" + class_id +
              "' reads sources with different state pitches; aliasing their "
              "output grids needs one shared pitch");
      }
    }
    // with offsets in play the readings are re-quantized, so the grid only
    // needs to keep the offset budget: pitch at most twice the smallest one
    if (positive) pitch = snap_pitch(full.span(), 2.0 * phi_min);
    out.full.emplace_back(full, pitch);
    out.safe.emplace_back(safe, pitch);
  }
  return out;
}

double SymbolicModel::image(double x, double u,
                            const std::vector<double>& w) const {
  if (w.size() != slots_.size())
    throw DomainError("internal input count does not match the class arity");
  double v = dyn_.a * x + dyn_.b * u;
  for (size_t j = 0; j < w.size(); ++j) v += dyn_.d[j] * w[j];
  return v;
}

std::uint64_t SymbolicModel::triple_count() const {
  std::uint64_t n = sat_mul(static_cast<std::uint64_t>(state_.size()),
                            static_cast<std::uint64_t>(inputs_.size()));
  for (const auto& g : slots_)
    n = sat_mul(n, static_cast<std::uint64_t>(g.size()));
  return n;
}

SymbolicModel::Successors SymbolicModel::compute(
    std::int64_t state, int input,
    const std::vector<std::int64_t>& slot_points) const {
  std::vector<double> wv(slots_.size());
  for (size_t j = 0; j < slots_.size(); ++j)
    wv[j] = slots_[j].point(slot_points.at(j));
  double img = image(state_.point(state), inputs_.at(input), wv);
  auto ball = state_.ball_range(img, state_.eta());
  Successors s;
  s.lo = ball.lo;
  s.hi = ball.hi;
  s.out = !state_.set().contains(img, value_tol(img)) || ball.empty();
  return s;
}

SymbolicModel::Successors SymbolicModel::successors(
    std::int64_t state, int input,
    const std::vector<std::int64_t>& slot_points) const {
  if (state < 0 || state >= state_.size())
    throw DomainError("state index out of range");
  if (input < 0 || input >= static_cast<int>(inputs_.size()))
    throw DomainError("input index out of range");
  if (slot_points.size() != slots_.size())
    throw DomainError("internal input count does not match the class arity");
  for (size_t j = 0; j < slots_.size(); ++j)
    if (slot_points[j] < 0 || slot_points[j] >= slots_[j].size())
      throw DomainError("internal point index out of range");
  if (!materialized()) return compute(state, input, slot_points);
  std::uint64_t flat = static_cast<std::uint64_t>(state) * inputs_.size() + input;
  for (size_t j = 0; j < slots_.size(); ++j)
    flat = flat * slots_[j].size() + slot_points[j];
  Successors s;
  s.lo = table_lo_[flat];
  s.hi = table_hi_[flat];
  s.out = table_flags_[flat] & 1;
  return s;
}

SymbolicModel::SuccessorUnion SymbolicModel::successors_over(
    std::int64_t state, int input, const std::vector<Grid>& slot_subsets) const {
  if (slot_subsets.size() != slots_.size())
    throw DomainError("internal subset count does not match the class arity");

  // per slot: contiguous index windows of the full grid covering the subset
  struct Window {
    std::int64_t lo, hi;
  };
  std::vector<std::vector<Window>> wins(slots_.size());
  for (size_t j = 0; j < slots_.size(); ++j) {
    if (std::abs(slot_subsets[j].eta() - slots_[j].eta()) >
        value_tol(slots_[j].eta()))
      throw DomainError("internal subset uses a different pitch than the slot");
    for (auto [klo, khi] : slot_subsets[j].key_ranges()) {
      auto a = slots_[j].index_of_key(klo);
      auto b = slots_[j].index_of_key(khi);
      if (!a || !b || *b - *a != khi - klo)
        throw DomainError("internal subset leaves the slot universe");
      wins[j].push_back({*a, *b});
    }
  }

  SuccessorUnion u;
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  double base = dyn_.a * state_.point(state) + dyn_.b * inputs_.at(input);

  // enumerate every point combination within the chosen windows
  auto enumerate = [&](const std::vector<Window>& choice) {
    std::vector<std::int64_t> idx(slots_.size());
    for (size_t j = 0; j < slots_.size(); ++j) idx[j] = choice[j].lo;
    for (;;) {
      auto one = compute(state, input, idx);
      u.out = u.out || one.out;
      if (!one.empty()) raw.push_back({one.lo, one.hi});
      size_t j = 0;
      for (; j < slots_.size(); ++j) {
        if (idx[j] < choice[j].hi) {
          ++idx[j];
          break;
        }
        idx[j] = choice[j].lo;
      }
      if (j == slots_.size()) break;
    }
  };

  std::vector<Window> choice(slots_.size());
  std::function<void(size_t)> per_choice = [&](size_t j) {
    if (j < slots_.size()) {
      for (const auto& w : wins[j]) {
        choice[j] = w;
        per_choice(j + 1);
      }
      return;
    }
    // extreme images over this box of internal points, accumulated in the
    // same order image() uses so corner combos reproduce bit-identically
    double mmin = base, mmax = base;
    bool dense = true;
    for (size_t t = 0; t < slots_.size(); ++t) {
      double c1 = dyn_.d[t] * slots_[t].point(choice[t].lo);
      double c2 = dyn_.d[t] * slots_[t].point(choice[t].hi);
      mmin += std::min(c1, c2);
      mmax += std::max(c1, c2);
      if (choice[t].hi > choice[t].lo) {
        double step = std::abs(dyn_.d[t]) * slots_[t].eta();
        if (step > 2.0 * state_.eta() * (1.0 - 1e-9)) dense = false;
      }
    }
    double tol = std::max(value_tol(mmin), value_tol(mmax));
    if (dense && state_.set().covers(mmin, mmax, tol)) {
      // every image lies in one interval (never out) and consecutive images
      // are close enough that their successor balls overlap
      auto b1 = state_.ball_range(mmin, state_.eta());
      auto b2 = state_.ball_range(mmax, state_.eta());
      if (!b1.empty() && !b2.empty()) raw.push_back({b1.lo, b2.hi});
      return;
    }
    enumerate(choice);
  };

  if (slots_.empty()) {
    auto one = compute(state, input, {});
    u.out = one.out;
    if (!one.empty()) raw.push_back({one.lo, one.hi});
  } else {
    per_choice(0);
  }

  std::sort(raw.begin(), raw.end());
  for (auto [lo, hi] : raw) {
    if (!u.ranges.empty() && lo <= u.ranges.back().second + 1)
      u.ranges.back().second = std::max(u.ranges.back().second, hi);
    else
      u.ranges.push_back({lo, hi});
  }
  return u;
}

SymbolicModel build_symbolic_model(const SubsystemClass& cls,
                                   const QuantDesign& design,
                                   const std::vector<Grid>& slot_grids,
                                   std::uint64_t size_cap,
                                   std::uint64_t materialize_threshold) {
  auto cd = design.classes.find(cls.id);
  if (cd == design.classes.end())
    throw ConfigError("design carries no pitches for class '" + cls.id + "'");
  if (static_cast<int>(slot_grids.size()) != cls.arity())
    throw ConfigError("class '" + cls.id + "' expects " +
                      std::to_string(cls.arity()) + " internal grids, got " +
                      std::to_string(slot_grids.size()));

  SymbolicModel m;
  m.class_id_ = cls.id;
  m.dyn_ = cls.dyn;
  m.state_ = Grid(cls.state_set, cd->second.eta_x);
  if (cls.inputs.finite()) {
    m.inputs_ = cls.inputs.values;
    m.input_pitch_ = 0.0;
  } else {
    if (!(cd->second.eta_u > 0.0))
      throw ConfigError("class '" + cls.id +
                        "' has continuous inputs but no input pitch");
    Grid ug(cls.inputs.box, cd->second.eta_u);
    for (std::int64_t i = 0; i < ug.size(); ++i)
      m.inputs_.push_back(ug.point(i));
    m.input_pitch_ = cd->second.eta_u;
  }
  m.slots_ = slot_grids;

  std::uint64_t n = m.triple_count();
  if (n > size_cap)
    throw SizeError("abstraction for class '" + cls.id + "' would hold " +
                    std::to_string(n) + " transition triples, over the cap of " +
                    std::to_string(size_cap));

  if (n <= materialize_threshold) {
    m.table_lo_.resize(n);
    m.table_hi_.resize(n);
    m.table_flags_.resize(n);
    std::vector<std::int64_t> w(m.slots_.size(), 0);
    std::uint64_t flat = 0;
    for (std::int64_t s = 0; s < m.state_.size(); ++s)
      for (int u = 0; u < static_cast<int>(m.inputs_.size()); ++u) {
        std::fill(w.begin(), w.end(), 0);
        for (;;) {
          auto one = m.compute(s, u, w);
          m.table_lo_[flat] = static_cast<std::int32_t>(one.lo);
          m.table_hi_[flat] = static_cast<std::int32_t>(one.hi);
          m.table_flags_[flat] = one.out ? 1 : 0;
          ++flat;
          // odometer over the internal points, last slot fastest
          size_t j = m.slots_.size();
          for (; j > 0; --j) {
            if (w[j - 1] + 1 < m.slots_[j - 1].size()) {
              ++w[j - 1];
              break;
            }
            w[j - 1] = 0;
          }
          if (j == 0) break;
        }
      }
  }
  return m;
}

AsfReport check_local_asf(const SymbolicModel& model, double varpi,
                          double vartheta, int samples, std::uint64_t seed) {
  if (!(varpi > 0.0)) throw DomainError("accuracy radius must be positive");
  if (vartheta < 0.0) throw DomainError("mismatch budget must be nonnegative");
  if (samples <= 0) throw DomainError("sample count must be positive");

  AsfReport rep;
  rep.varpi = varpi;
  rep.vartheta = vartheta;
  Rng rng(seed);
  const Grid& X = model.state_grid();
  double slack = 1e-9 * std::max(1.0, varpi);
  int arity = model.arity();

  for (int attempt = 0; rep.trials < samples && attempt < 64 * samples;
       ++attempt) {
    std::int64_t si =
        static_cast<std::int64_t>(rng.integer(static_cast<std::uint64_t>(X.size())));
    double xhat = X.point(si);
    double x = rng.uniform(std::max(X.set().lo(), xhat - varpi),
                           std::min(X.set().hi(), xhat + varpi));
    if (!X.set().contains(x, 0.0)) continue;  // landed in a gap, redraw

    int ui = static_cast<int>(rng.integer(model.input_values().size()));
    std::vector<std::int64_t> what_idx(arity);
    std::vector<double> what(arity), w(arity);
    bool admissible = true;
    for (int j = 0; j < arity; ++j) {
      const Grid& Wj = model.slot_grid(j);
      what_idx[j] = static_cast<std::int64_t>(
          rng.integer(static_cast<std::uint64_t>(Wj.size())));
      what[j] = Wj.point(what_idx[j]);
      w[j] = rng.uniform(std::max(Wj.set().lo(), what[j] - vartheta),
                         std::min(Wj.set().hi(), what[j] + vartheta));
      if (!Wj.set().contains(w[j], 0.0)) admissible = false;
    }
    if (!admissible) continue;
    ++rep.trials;

    double xplus = model.image(x, model.input_values()[ui], w);
    auto succ = model.successors(si, ui, what_idx);
    double best = kInf;
    for (std::int64_t i = succ.lo; i <= succ.hi; ++i)
      best = std::min(best, std::abs(xplus - X.point(i)));

    if (!(best <= varpi + slack)) {
      ++rep.violations;
      if (rep.examples.size() < 5)
        rep.examples.push_back(
            {x, xhat, model.input_values()[ui], w, what, best});
    } else {
      rep.max_v = std::max(rep.max_v, best);
    }
  }
  if (rep.trials < samples)
    throw DomainError("could not draw enough admissible samples");
  return rep;
}

GlobalAsf eval_global_asf(const TruncatedNetwork& net, const QuantDesign& design,
                          const std::map<std::string, Certificate>& certs,
                          const std::vector<double>& x,
                          const std::vector<double>& xhat) {
  if (x.size() != net.nodes.size() || xhat.size() != net.nodes.size())
    throw DomainError("state vectors must match the truncation size");
  GlobalAsf g;
  for (size_t i = 0; i < net.nodes.size(); ++i) {
    auto it = design.varpi_sc.find({net.nodes[i].subnet, net.nodes[i].class_id});
    if (it == design.varpi_sc.end())
      throw ConfigError("design has no radius for " + net.nodes[i].subnet +
                        "/" + net.nodes[i].class_id);
    double v = std::abs(x[i] - xhat[i]);
    g.vbar = std::max(g.vbar, design.varpi / it->second * v);
    g.mismatch = std::max(g.mismatch, v);  // outputs are the states
  }
  // the scaled sup must dominate the mismatch through the weakest lower bound
  double floor = net.nodes.empty() ? 0.0 : kInf;
  for (const auto& node : net.nodes) {
    auto c = certs.find(node.class_id);
    if (c == certs.end())
      throw ConfigError("no certificate for class '" + node.class_id + "'");
    double scale =
        design.varpi / design.varpi_sc.at({node.subnet, node.class_id});
    floor = std::min(floor, scale * c->second.alpha_lo().eval(g.mismatch));
  }
  g.consistent = floor <= g.vbar * (1.0 + 1e-9) + 1e-12;
  return g;
}

}  // namespace synet
