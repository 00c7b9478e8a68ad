#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hh"
#include "synet/designer.hh"
#include "synet/errors.hh"
#include "synet/symbolic.hh"
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

// independent membership scan sharing the grid's edge guard
std::set<std::int64_t> scan_ball(const Grid& g, double c, double r) {
  std::set<std::int64_t> out;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (std::abs(g.point(i) - c) <= r + Grid::kEdgeTol) out.insert(i);
  return out;
}

struct OracleSucc {
  bool out = false;
  std::set<std::int64_t> idx;
};

OracleSucc scan_successors(const SymbolicModel& m, std::int64_t s, int u,
                           const std::vector<std::int64_t>& w) {
  std::vector<double> wv(w.size());
  for (size_t j = 0; j < w.size(); ++j) wv[j] = m.slot_grid((int)j).point(w[j]);
  double img = m.image(m.state_grid().point(s), m.input_values()[u], wv);
  OracleSucc o;
  o.idx = scan_ball(m.state_grid(), img, m.state_grid().eta());
  double tol = Grid::kEdgeTol * std::max(1.0, std::abs(img));
  o.out = !m.state_grid().set().contains(img, tol) || o.idx.empty();
  return o;
}

QuantDesign plain_design(const std::string& id, double eta_x, double eta_u) {
  QuantDesign d;
  ClassDesign cd;
  cd.eta_x = eta_x;
  cd.eta_u = eta_u;
  d.classes[id] = cd;
  return d;
}

}  // namespace

TEST_CASE("slot universes merge everything a slot can see") {
  auto ts = traffic_setup();

  auto lo = derive_slot_grids(ts.p, ts.types, ts.d, "cell_lo");
  REQUIRE(lo.full.size() == 2);
  REQUIRE(lo.safe.size() == 2);
  for (int j = 0; j < 2; ++j) {
    CHECK(lo.full[j].size() == 376);
    CHECK(lo.full[j].set().lo() == 0.0);
    CHECK(lo.full[j].set().hi() == 37.5);
    CHECK(lo.full[j].eta() == 0.1);
    CHECK(lo.safe[j].size() == 101);
    CHECK(lo.safe[j].set().lo() == 5.0);
    CHECK(lo.safe[j].set().hi() == 15.0);
  }

  auto hi = derive_slot_grids(ts.p, ts.types, ts.d, "cell_hi");
  REQUIRE(hi.full.size() == 2);
  CHECK(hi.full[0].size() == 376);
  CHECK(hi.full[1].size() == 376);
  // slot 0 sees both classes somewhere in the network, slot 1 only its own
  CHECK(hi.safe[0].set().boxes().size() == 1);
  CHECK(hi.safe[0].set().lo() == 5.0);
  CHECK(hi.safe[0].set().hi() == 25.0);
  CHECK(hi.safe[0].size() == 201);
  CHECK(hi.safe[1].set().lo() == 10.0);
  CHECK(hi.safe[1].set().hi() == 25.0);
  CHECK(hi.safe[1].size() == 151);
}

TEST_CASE("benchmark model shape and the size guard") {
  auto ts = traffic_setup();
  const auto& cls = ts.p.classes.at("cell_lo");
  auto sg = derive_slot_grids(ts.p, ts.types, ts.d, "cell_lo");

  auto m = build_symbolic_model(cls, ts.d, sg.full, 150000000);
  CHECK(m.class_id() == "cell_lo");
  CHECK(m.state_grid().size() == 376);
  CHECK(m.input_values() == std::vector<double>{0.0, 1.0});
  CHECK(m.input_pitch() == 0.0);
  CHECK(m.arity() == 2);
  CHECK(m.triple_count() == 376ull * 2 * 376 * 376);
  CHECK_FALSE(m.materialized());

  // too big for the default cap; the error reports the size
  CHECK_THROWS_AS(build_symbolic_model(cls, ts.d, sg.full), SizeError);
}

TEST_CASE("successor rule: two, three, or out") {
  // the input value passes straight through to the image
  SubsystemClass c;
  c.id = "probe";
  c.state_set = BoxSet({{5.0, 15.0}});
  c.safe_set = BoxSet({{6.0, 14.0}});
  c.inputs.values = {7.2, 7.23, 16.0};
  c.dyn = {0.0, 1.0, {}};
  auto d = plain_design("probe", 0.1, 0.0);

  auto m = build_symbolic_model(c, d, {});
  CHECK(m.state_grid().size() == 101);
  CHECK(m.materialized());
  CHECK(m.triple_count() == 303);

  auto exact = m.successors(0, 0, {});  // image 7.2, a grid point
  CHECK_FALSE(exact.out);
  REQUIRE(exact.hi - exact.lo == 2);
  CHECK(std::abs(m.state_grid().point(exact.lo) - 7.1) < 1e-12);
  CHECK(std::abs(m.state_grid().point(exact.hi) - 7.3) < 1e-12);

  auto off = m.successors(0, 1, {});  // image 7.23, between grid points
  CHECK_FALSE(off.out);
  REQUIRE(off.hi - off.lo == 1);
  CHECK(std::abs(m.state_grid().point(off.lo) - 7.2) < 1e-12);
  CHECK(std::abs(m.state_grid().point(off.hi) - 7.3) < 1e-12);

  auto gone = m.successors(0, 2, {});  // image 16.0, outside the state set
  CHECK(gone.out);
}

TEST_CASE("transition completeness against a full scan") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    SubsystemClass c;
    c.id = "r";
    double lo = rng.uniform(-4.0, 0.0), len = rng.uniform(1.0, 5.0);
    if (trial % 3 == 0) {
      double gap = rng.uniform(0.2, 1.0), len2 = rng.uniform(0.5, 2.0);
      c.state_set = BoxSet({{lo, lo + len}, {lo + len + gap, lo + len + gap + len2}});
    } else {
      c.state_set = BoxSet({{lo, lo + len}});
    }
    c.safe_set = c.state_set;
    c.inputs.values = {0.0, rng.uniform(0.1, 1.0)};
    int arity = 1 + (int)rng.integer(2);
    c.dyn.a = rng.uniform(-0.9, 0.9);
    c.dyn.b = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < arity; ++j)
      c.dyn.d.push_back(rng.uniform(-0.8, 0.8));

    double eta = c.state_set.span() / (2.0 + (double)rng.integer(9));
    auto d = plain_design("r", eta, 0.0);
    std::vector<Grid> slots;
    for (int j = 0; j < arity; ++j) {
      double wlo = rng.uniform(-2.0, 0.0), wlen = rng.uniform(0.5, 2.0);
      BoxSet wbox({{wlo, wlo + wlen}});
      slots.emplace_back(wbox, wlen / (1.0 + (double)rng.integer(6)));
    }
    auto m = build_symbolic_model(c, d, slots, 100000000, 0);
    CHECK_FALSE(m.materialized());

    for (int k = 0; k < 100; ++k) {
      std::int64_t s = (std::int64_t)rng.integer((std::uint64_t)m.state_grid().size());
      int u = (int)rng.integer(2);
      std::vector<std::int64_t> w(arity);
      for (int j = 0; j < arity; ++j)
        w[j] = (std::int64_t)rng.integer((std::uint64_t)m.slot_grid(j).size());

      auto got = m.successors(s, u, w);
      auto want = scan_successors(m, s, u, w);
      CHECK(got.out == want.out);
      std::set<std::int64_t> got_idx;
      for (std::int64_t i = got.lo; i <= got.hi; ++i) got_idx.insert(i);
      CHECK(got_idx == want.idx);
    }
  }
}

TEST_CASE("materialized and on-demand transitions agree") {
  SubsystemClass c;
  c.id = "m";
  c.state_set = BoxSet({{0.0, 2.0}});
  c.safe_set = c.state_set;
  c.inputs.values = {0.0, 0.5};
  c.dyn = {0.55, 1.0, {0.6}};
  auto d = plain_design("m", 0.25, 0.0);
  std::vector<Grid> slots{Grid(BoxSet({{0.0, 2.0}}), 0.25)};

  auto fast = build_symbolic_model(c, d, slots);
  auto lazy = build_symbolic_model(c, d, slots, 100000000, 0);
  REQUIRE(fast.materialized());
  REQUIRE(!lazy.materialized());
  for (std::int64_t s = 0; s < fast.state_grid().size(); ++s)
    for (int u = 0; u < 2; ++u)
      for (std::int64_t w = 0; w < slots[0].size(); ++w) {
        auto a = fast.successors(s, u, {w});
        auto b = lazy.successors(s, u, {w});
        CHECK(a.out == b.out);
        CHECK(a.lo == b.lo);
        CHECK(a.hi == b.hi);
      }
}

TEST_CASE("window union equals brute-force enumeration") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    SubsystemClass c;
    c.id = "w";
    bool split = trial % 4 == 0;
    c.state_set = split ? BoxSet({{0.0, 1.0}, {1.6, 3.0}}) : BoxSet({{0.0, 3.0}});
    c.safe_set = c.state_set;
    c.inputs.values = {0.0, 0.3};
    int arity = 1 + (int)rng.integer(2);
    c.dyn.a = rng.uniform(-0.9, 0.9);
    c.dyn.b = 1.0;
    for (int j = 0; j < arity; ++j)
      c.dyn.d.push_back(rng.uniform(-1.0, 1.0));
    // pitches sometimes violate the density precondition of the fast path
    double eta = (trial % 2) ? 0.05 : 0.3;
    auto d = plain_design("w", eta, 0.0);

    std::vector<Grid> slots;
    std::vector<Grid> subsets;
    for (int j = 0; j < arity; ++j) {
      slots.emplace_back(BoxSet({{-1.0, 2.0}}), 0.25);
      double a0 = rng.uniform(-1.0, 0.5), b0 = a0 + rng.uniform(0.3, 1.4);
      subsets.emplace_back(BoxSet({{a0, std::min(b0, 2.0)}}), 0.25);
    }
    auto m = build_symbolic_model(c, d, slots, 100000000, 0);

    for (std::int64_t s = 0; s < m.state_grid().size(); ++s)
      for (int u = 0; u < 2; ++u) {
        auto got = m.successors_over(s, u, subsets);

        bool want_out = false;
        std::set<std::int64_t> want;
        std::vector<std::int64_t> pick(arity, 0);
        std::function<void(int)> rec = [&](int j) {
          if (j == arity) {
            std::vector<std::int64_t> mapped(arity);
            for (int t = 0; t < arity; ++t) {
              auto idx = m.slot_grid(t).index_of_key(subsets[t].key(pick[t]));
              REQUIRE(idx);
              mapped[t] = *idx;
            }
            auto one = m.successors(s, u, mapped);
            want_out = want_out || one.out;
            for (std::int64_t i = one.lo; i <= one.hi; ++i) want.insert(i);
            return;
          }
          for (pick[j] = 0; pick[j] < subsets[j].size(); ++pick[j]) rec(j + 1);
        };
        rec(0);

        CHECK(got.out == want_out);
        std::set<std::int64_t> flat;
        for (auto [rl, rh] : got.ranges)
          for (std::int64_t i = rl; i <= rh; ++i) flat.insert(i);
        CHECK(flat == want);
      }
  }
}

TEST_CASE("one-step refinement holds on the benchmark classes") {
  auto ts = traffic_setup();
  for (const auto& id : {std::string("cell_lo"), std::string("cell_hi")}) {
    auto sg = derive_slot_grids(ts.p, ts.types, ts.d, id);
    auto m = build_symbolic_model(ts.p.classes.at(id), ts.d, sg.full, 150000000);
    auto rep = check_local_asf(m, 0.8, 0.8, 10000, 1);
    CHECK(rep.trials == 10000);
    CHECK(rep.violations == 0);
    CHECK(rep.pass());
    CHECK(rep.max_v <= 0.8);
  }
}

TEST_CASE("a forged accuracy radius is caught") {
  auto ts = traffic_setup();
  auto sg = derive_slot_grids(ts.p, ts.types, ts.d, "cell_lo");
  auto m = build_symbolic_model(ts.p.classes.at("cell_lo"), ts.d, sg.full,
                                150000000);
  auto rep = check_local_asf(m, 0.05, 0.8, 10000, 1);
  CHECK(rep.violations > 0);
  CHECK_FALSE(rep.pass());
  REQUIRE(!rep.examples.empty());
  CHECK(rep.examples[0].best > 0.05);
}

TEST_CASE("a decoupled class passes with the plain one-step bound") {
  NetworkPattern p;
  SubsystemClass c;
  c.id = "iso";
  c.state_set = BoxSet({{0.0, 1.0}});
  c.safe_set = BoxSet({{0.2, 0.8}});
  c.inputs.values = {0.0, 0.5};
  c.dyn = {0.5, 1.0, {}};
  p.classes["iso"] = c;
  MatchRule any;
  any.kind = MatchRule::Kind::kAny;
  any.class_id = "iso";
  p.subnetworks.push_back({"s", {any}});
  p.design.varpi = 1.0;
  validate(p);
  std::map<std::string, Certificate> certs{{"iso", derive_affine_certificate(c)}};
  auto types = pattern_edge_types(p);
  auto d = run_design(p, certs, types, p.design);
  REQUIRE(d.classes.at("iso").eta_x == 0.5);

  auto m = build_symbolic_model(c, d, {});
  auto rep = check_local_asf(m, 1.0, 0.0, 5000, 7);
  CHECK(rep.violations == 0);
  // one-step arithmetic: contraction of the radius plus one pitch
  CHECK(rep.max_v <= 0.5 * 1.0 + 0.5 + 1e-9);
}

TEST_CASE("global distance evaluator tracks the worst node") {
  auto ts = traffic_setup();
  auto net = instantiate(ts.p, 10);
  std::vector<double> x(net.nodes.size(), 10.0), xh(net.nodes.size(), 10.0);

  auto same = eval_global_asf(net, ts.d, ts.certs, x, xh);
  CHECK(same.vbar == 0.0);
  CHECK(same.mismatch == 0.0);
  CHECK(same.consistent);

  x[3] = 10.3;
  auto off = eval_global_asf(net, ts.d, ts.certs, x, xh);
  CHECK(std::abs(off.vbar - 0.3) < 1e-12);
  CHECK(std::abs(off.mismatch - 0.3) < 1e-12);
  CHECK(off.consistent);

  CHECK_THROWS_AS(
      eval_global_asf(net, ts.d, ts.certs, std::vector<double>(3, 0.0), xh),
      DomainError);
}
