#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hh"
#include "oracles.hh"
#include "synet/designer.hh"
#include "synet/errors.hh"
#include "synet/synthesis.hh"
#include "synet/util.hh"

using namespace synet;

namespace {

struct Setup {
  NetworkPattern p;
  std::map<std::string, Certificate> certs;
  std::vector<EdgeType> types;
  QuantDesign d;
};

Setup traffic_setup() {
  Setup s;
  s.p = fixtures::traffic_pattern();
  for (const auto& [id, c] : s.p.classes) s.certs[id] = derive_affine_certificate(c);
  s.types = pattern_edge_types(s.p);
  s.d = run_design(s.p, s.certs, s.types, s.p.design);
  return s;
}

QuantDesign plain_design(const std::string& id, double eta_x) {
  QuantDesign d;
  ClassDesign cd;
  cd.eta_x = eta_x;
  d.classes[id] = cd;
  return d;
}

struct Built {
  SymbolicModel model;
  std::vector<Grid> safe_slots;
  BoxSet safe;
};

Built build_traffic_class(const Setup& ts, const std::string& cls) {
  Built b;
  auto sg = derive_slot_grids(ts.p, ts.types, ts.d, cls);
  b.model = build_symbolic_model(ts.p.classes.at(cls), ts.d, sg.full, 150000000);
  b.safe_slots = sg.safe;
  b.safe = ts.p.classes.at(cls).safe_set;
  return b;
}

}  // namespace

TEST_CASE("a safe self-loop keeps every safe state") {
  SubsystemClass c;
  c.id = "hold";
  c.state_set = BoxSet({{0.0, 1.0}});
  c.safe_set = BoxSet({{0.0, 0.5}});
  c.inputs.values = {0.0, 1.0};
  c.dyn = {0.0, 5.0, {}};  // u=0 maps everything to 0, u=1 exits the state set
  auto m = build_symbolic_model(c, plain_design("hold", 0.5), {});

  auto ctrl = synthesize_safety(m, c.safe_set, {});
  CHECK(ctrl.class_id == "hold");
  CHECK(ctrl.dom == std::vector<std::int64_t>{0, 1});
  CHECK(ctrl.iterations == 1);
  REQUIRE(ctrl.policy.size() == 2);
  CHECK(ctrl.policy.at(0) == std::vector<int>{0});
  CHECK(ctrl.policy.at(1) == std::vector<int>{0});
  CHECK(ctrl.in_domain(0));
  CHECK(ctrl.in_domain(1));
  CHECK_FALSE(ctrl.in_domain(2));
  CHECK(closure_violations(ctrl, m) == 0);
}

TEST_CASE("an unwinnable machine yields an empty domain") {
  SubsystemClass c;
  c.id = "doomed";
  c.state_set = BoxSet({{0.0, 1.0}});
  c.safe_set = c.state_set;
  c.inputs.values = {0.0};
  c.dyn = {0.0, 0.0, {10.0}};  // the internal input alone can eject the state
  std::vector<Grid> slots{Grid(BoxSet({{0.0, 1.0}}), 0.5)};
  auto m = build_symbolic_model(c, plain_design("doomed", 0.5), slots);

  auto ctrl = synthesize_safety(m, c.safe_set, slots);
  CHECK(ctrl.dom.empty());
  CHECK(ctrl.policy.empty());
  CHECK(ctrl.iterations == 2);
  CHECK(closure_violations(ctrl, m) == 0);
  CHECK_THROWS_AS(ctrl.actions(0), DomainError);
}

TEST_CASE("an empty candidate set is a result, not an error") {
  SubsystemClass c;
  c.id = "sliver";
  c.state_set = BoxSet({{0.0, 1.0}});
  c.safe_set = BoxSet({{0.2, 0.3}});  // no multiple of 0.5 inside
  c.inputs.values = {0.0};
  c.dyn = {1.0, 0.0, {}};
  auto m = build_symbolic_model(c, plain_design("sliver", 0.5), {});

  auto ctrl = synthesize_safety(m, c.safe_set, {});
  CHECK(ctrl.dom.empty());
  CHECK(ctrl.iterations == 1);
}

TEST_CASE("states that need lost neighbours are peeled in waves") {
  // three one-point islands: 20 -> 10 -> (no representable image), 0 -> 0
  SubsystemClass c;
  c.id = "chain";
  c.state_set = BoxSet({{-0.2, 0.3}, {9.75, 10.25}, {19.75, 20.25}});
  c.safe_set = BoxSet({{-0.2, 20.25}});
  c.inputs.values = {0.0};
  c.dyn = {0.5, 0.0, {}};
  auto m = build_symbolic_model(c, plain_design("chain", 0.5), {});
  REQUIRE(m.state_grid().size() == 3);

  auto ctrl = synthesize_safety(m, c.safe_set, {});
  CHECK(ctrl.dom == std::vector<std::int64_t>{0});
  CHECK(ctrl.iterations == 3);
  CHECK(ctrl.policy.at(0) == std::vector<int>{0});
  CHECK(closure_violations(ctrl, m) == 0);

  // the sweep cap reports how much was still moving when it hit
  CHECK_THROWS_AS(synthesize_safety(m, c.safe_set, {}, 1), NumericError);
  try {
    synthesize_safety(m, c.safe_set, {}, 1);
  } catch (const NumericError& e) {
    CHECK(e.residual() == 1.0);
  }
  CHECK_THROWS_AS(synthesize_safety(m, c.safe_set, {}, 2), NumericError);
  CHECK_NOTHROW(synthesize_safety(m, c.safe_set, {}, 3));
}

TEST_CASE("maximal invariance agrees with a brute-force shrink") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    SubsystemClass c;
    c.id = "r";
    double lo = rng.uniform(-3.0, 0.0), len = rng.uniform(1.0, 4.0);
    if (trial % 5 == 0) {
      double gap = rng.uniform(0.3, 1.0), len2 = rng.uniform(0.5, 1.5);
      c.state_set = BoxSet({{lo, lo + len}, {lo + len + gap, lo + len + gap + len2}});
    } else {
      c.state_set = BoxSet({{lo, lo + len}});
    }
    double eta = c.state_set.span() / (2.0 + (double)rng.integer(8));
    if (trial % 3 == 0) {
      c.safe_set = c.state_set;
    } else {
      double s0 = lo + rng.uniform(0.0, 0.4) * len;
      c.safe_set = BoxSet({{s0, s0 + rng.uniform(0.3, 0.9) * len}});
    }
    c.inputs.values = {0.0, rng.uniform(0.2, 1.0)};
    int arity = (int)rng.integer(3);
    c.dyn.a = rng.uniform(-1.1, 1.1);
    c.dyn.b = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < arity; ++j) c.dyn.d.push_back(rng.uniform(-0.8, 0.8));

    std::vector<Grid> slots, safe_slots;
    for (int j = 0; j < arity; ++j) {
      double wlo = rng.uniform(-1.5, 0.0), wlen = rng.uniform(0.8, 2.0);
      double pitch = wlen / (1.0 + (double)rng.integer(5));
      slots.emplace_back(BoxSet({{wlo, wlo + wlen}}), pitch);
      if (trial % 3 == 1) {
        safe_slots.push_back(slots.back());
      } else {
        double a0 = wlo + rng.uniform(0.0, wlen - pitch);
        safe_slots.emplace_back(
            BoxSet({{a0, std::min(a0 + pitch + rng.uniform(0.0, wlen), wlo + wlen)}}),
            pitch);
      }
    }
    auto m = build_symbolic_model(c, plain_design("r", eta), slots);

    // reference shrink loop over explicit triples, images recomputed from
    // the raw dynamics and membership scanned point by point
    std::vector<int> safe_ids;
    for (std::int64_t i = 0; i < m.state_grid().size(); ++i) {
      double p = m.state_grid().point(i);
      if (c.safe_set.contains(p, Grid::kEdgeTol * std::max(1.0, std::abs(p))))
        safe_ids.push_back((int)i);
    }
    int n_w = 1;
    for (const auto& g : safe_slots) n_w *= (int)g.size();
    auto w_values = [&](int t) {
      std::vector<double> wv(arity);
      for (int j = arity - 1; j >= 0; --j) {
        wv[j] = safe_slots[j].point(t % safe_slots[j].size());
        t /= (int)safe_slots[j].size();
      }
      return wv;
    };
    auto img_of = [&](int s, int u, int t) {
      double img = c.dyn.a * m.state_grid().point(s) + c.dyn.b * c.inputs.values[u];
      auto wv = w_values(t);
      for (int j = 0; j < arity; ++j) img += c.dyn.d[j] * wv[j];
      return img;
    };
    auto succ_of = [&](int s, int u, int t) {
      double img = img_of(s, u, t);
      std::vector<int> out;
      for (std::int64_t i = 0; i < m.state_grid().size(); ++i)
        if (std::abs(m.state_grid().point(i) - img) <= eta + Grid::kEdgeTol)
          out.push_back((int)i);
      return out;
    };
    auto out_of = [&](int s, int u, int t) {
      double img = img_of(s, u, t);
      double tol = Grid::kEdgeTol * std::max(1.0, std::abs(img));
      return !c.state_set.contains(img, tol) || succ_of(s, u, t).empty();
    };
    auto want = oracle::largest_invariant(safe_ids, 2, n_w, succ_of, out_of);

    auto ctrl = synthesize_safety(m, c.safe_set, safe_slots);
    std::set<int> got_dom(ctrl.dom.begin(), ctrl.dom.end());
    CHECK(got_dom == want.dom);
    REQUIRE(ctrl.policy.size() == want.policy.size());
    for (const auto& [s, good] : want.policy) {
      REQUIRE(ctrl.policy.count(s));
      CHECK(ctrl.policy.at(s) == good);
    }
    CHECK(ctrl.iterations <= (int)safe_ids.size() + 1);
    CHECK(closure_violations(ctrl, m) == 0);
  }
}

TEST_CASE("benchmark corridor controllers pin the hand-checked boundaries") {
  auto ts = traffic_setup();

  auto lo = build_traffic_class(ts, "cell_lo");
  auto cl = synthesize_safety(lo.model, lo.safe, lo.safe_slots);
  REQUIRE(cl.dom.size() == 101);
  CHECK(cl.dom.front() == 50);
  CHECK(cl.dom.back() == 150);
  for (size_t i = 1; i < cl.dom.size(); ++i) CHECK(cl.dom[i] == cl.dom[i - 1] + 1);
  CHECK(cl.iterations == 1);
  const auto& gl = lo.model.state_grid();
  CHECK(cl.actions(gl.quantize(5.0)) == std::vector<int>{1});
  CHECK(cl.actions(gl.quantize(15.0)) == std::vector<int>{0});
  CHECK(cl.actions(gl.quantize(7.0)) == std::vector<int>{0, 1});
  // highest density the accelerating input can hold / lowest the idle one can
  CHECK(cl.actions(gl.quantize(9.7)) == std::vector<int>{0, 1});
  CHECK(cl.actions(gl.quantize(9.8)) == std::vector<int>{0});
  CHECK(cl.actions(gl.quantize(6.2)) == std::vector<int>{0, 1});
  CHECK(cl.actions(gl.quantize(6.1)) == std::vector<int>{1});
  CHECK(closure_violations(cl, lo.model) == 0);

  auto hi = build_traffic_class(ts, "cell_hi");
  auto ch = synthesize_safety(hi.model, hi.safe, hi.safe_slots);
  REQUIRE(ch.dom.size() == 151);
  CHECK(ch.dom.front() == 100);
  CHECK(ch.dom.back() == 250);
  CHECK(ch.iterations == 1);
  const auto& gh = hi.model.state_grid();
  CHECK(ch.actions(gh.quantize(10.0)) == std::vector<int>{1});
  CHECK(ch.actions(gh.quantize(25.0)) == std::vector<int>{0});
  CHECK(ch.actions(gh.quantize(22.0)) == std::vector<int>{0, 1});
  CHECK(ch.actions(gh.quantize(22.1)) == std::vector<int>{0});
  CHECK(ch.actions(gh.quantize(13.7)) == std::vector<int>{0, 1});
  CHECK(ch.actions(gh.quantize(13.6)) == std::vector<int>{1});
  CHECK(closure_violations(ch, hi.model) == 0);
}

TEST_CASE("refinement quantizes and picks the lowest admissible input") {
  auto ts = traffic_setup();
  auto lo = build_traffic_class(ts, "cell_lo");
  auto ctrl = synthesize_safety(lo.model, lo.safe, lo.safe_slots);

  auto r = refine(ctrl, lo.model, 7.23);
  CHECK(r.state == 72);
  CHECK(r.xhat == doctest::Approx(7.2).epsilon(1e-12));
  CHECK(r.input == 0);
  CHECK(r.u == 0.0);

  // a state already on the grid refines to itself
  double exact = lo.model.state_grid().point(101);
  auto re = refine(ctrl, lo.model, exact);
  CHECK(re.xhat == exact);

  // only the accelerating input is admissible at the low edge
  auto rl = refine(ctrl, lo.model, 5.04);
  CHECK(rl.xhat == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rl.input == 1);
  CHECK(rl.u == 1.0);

  CHECK_THROWS_AS(refine(ctrl, lo.model, 4.2), RefinementError);
  try {
    refine(ctrl, lo.model, 4.2, 7);
  } catch (const RefinementError& e) {
    CHECK(e.node() == 7);
  }
  CHECK_THROWS_AS(refine(ctrl, lo.model, 50.0), RefinementError);
}

TEST_CASE("composition reuses one controller per class across the truncation") {
  auto ts = traffic_setup();
  auto lo = build_traffic_class(ts, "cell_lo");
  auto hi = build_traffic_class(ts, "cell_hi");

  std::map<std::string, SafetyController> ctrls;
  ctrls["cell_lo"] = synthesize_safety(lo.model, lo.safe, lo.safe_slots);
  ctrls["cell_hi"] = synthesize_safety(hi.model, hi.safe, hi.safe_slots);
  std::map<std::string, SymbolicModel> models;
  models["cell_lo"] = std::move(lo.model);
  models["cell_hi"] = std::move(hi.model);

  auto net = instantiate(ts.p, 10);
  auto comp = compose(net, ctrls, models);
  REQUIRE(comp.size() == 40);
  for (int i = 0; i < comp.size(); ++i) {
    CHECK(comp.at(i).class_id == net.nodes[i].class_id);
    CHECK(&comp.at(i) == &ctrls.at(net.nodes[i].class_id));
    CHECK(&comp.model_at(i) == &models.at(net.nodes[i].class_id));
  }

  std::vector<std::int64_t> states(40, 100);  // every node at density 10.0
  CHECK(comp.in_domain(states));
  states[0] = 49;  // 4.9 is outside the first corridor's safe band
  CHECK_FALSE(comp.in_domain(states));
  CHECK_THROWS_AS(comp.in_domain(std::vector<std::int64_t>(39, 100)), DomainError);

  // a class without a surviving domain cannot be deployed anywhere
  auto broken = ctrls;
  broken["cell_lo"].dom.clear();
  broken["cell_lo"].policy.clear();
  try {
    compose(net, broken, models);
    FAIL("composition accepted an empty domain");
  } catch (const CompositionError& e) {
    CHECK(std::string(e.what()).find("node 0") != std::string::npos);
    CHECK(std::string(e.what()).find("cell_lo") != std::string::npos);
  }

  std::map<std::string, SymbolicModel> missing;
  missing["cell_lo"] = std::move(models.at("cell_lo"));
  CHECK_THROWS_AS(compose(net, ctrls, missing), CompositionError);
}
