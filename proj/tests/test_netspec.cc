#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hh"
#include "synet/errors.hh"
#include "synet/graph.hh"
#include "synet/netspec.hh"

using namespace synet;

TEST_CASE("benchmark pattern validates") {
  auto p = fixtures::traffic_pattern();
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("validation rejects malformed patterns") {
  auto p = fixtures::traffic_pattern();
  SUBCASE("unknown class in a rule") {
    p.subnetworks[0].rules[0].class_id = "nope";
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
  SUBCASE("zero offset") {
    p.subnetworks[0].rules[1].offsets = {0, 2};
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
  SUBCASE("offset count differs from class arity") {
    p.subnetworks[0].rules[1].offsets = {1};
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
  SUBCASE("safe set outside state set") {
    p.classes["cell_lo"].safe_set = BoxSet({{5.0, 40.0}});
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
  SUBCASE("unsupported boundary rule") {
    p.boundary_rule = "reflect";
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
  SUBCASE("link to unknown subnetwork") {
    p.links.push_back({"g1", "g9", 1, 0});
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
  SUBCASE("duplicate link target slot") {
    p.links.push_back({"g2", "g3", 1, 0});
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
  SUBCASE("links forming a subnetwork cycle") {
    p.links.push_back({"g4", "g1", 1, 0});
    CHECK_THROWS_AS(validate(p), TopologyError);
  }
  SUBCASE("empty input set") {
    p.classes["cell_lo"].inputs.values.clear();
    CHECK_THROWS_AS(validate(p), ConfigError);
  }
}

TEST_CASE("small truncation wires the documented neighbourhoods") {
  auto p = fixtures::traffic_pattern();
  auto net = instantiate(p, 4);
  REQUIRE(net.nodes.size() == 16);
  // g1 occupies globals 0..3 (locals 1..4)
  auto& g1 = net.ranges.at("g1");
  CHECK(g1.first == 0);
  CHECK(g1.second == 3);
  // local 1 is odd: reads locals 2 and 3
  CHECK(net.nodes[0].sources == std::vector<int>{1, 2});
  // local 2 matches the explicit index rule: reads local 1 on both slots
  CHECK(net.nodes[1].sources == std::vector<int>{0, 0});
  // local 3 is odd: reads 4 and wrapped 5 -> 1
  CHECK(net.nodes[2].sources == std::vector<int>{3, 0});
  // local 4 is even: reads 2 and 3
  CHECK(net.nodes[3].sources == std::vector<int>{1, 2});

  // g3 occupies globals 8..11; links land on its locals 1 and 2, slot 0
  auto& g3 = net.ranges.at("g3");
  CHECK(g3.first == 8);
  int g1_tail = 3, g2_tail = 7;
  CHECK(net.nodes[8].sources == std::vector<int>{g1_tail, 10});
  CHECK(net.nodes[9].sources == std::vector<int>{g2_tail, 8});
  // g4 local 2 reads g3's tail on slot 0
  int g3_tail = 11;
  CHECK(net.nodes[13].sources == std::vector<int>{g3_tail, 12});
  // classes follow the rules
  CHECK(net.nodes[0].class_id == "cell_lo");
  CHECK(net.nodes[8].class_id == "cell_hi");
}

TEST_CASE("instantiation rejects impossible wirings") {
  auto p = fixtures::traffic_pattern();
  // at truncation 1 the odd rule wraps onto the node itself
  CHECK_THROWS_AS(instantiate(p, 1), TopologyError);
  CHECK_THROWS_AS(instantiate(p, 0), ConfigError);
}

TEST_CASE("decomposition recovers the declared subnetworks") {
  auto p = fixtures::traffic_pattern();
  auto net = instantiate(p, 10);
  REQUIRE(net.nodes.size() == 40);
  auto dec = decompose(net);
  REQUIRE(dec.members.size() == 4);
  // each component is exactly one subnetwork's node range
  std::set<std::pair<int, int>> got;
  for (const auto& m : dec.members)
    got.insert({m.front(), m.back()});
  std::set<std::pair<int, int>> want = {{0, 9}, {10, 19}, {20, 29}, {30, 39}};
  CHECK(got == want);
  // exactly one bottom component: g4's
  REQUIRE(dec.bottom.size() == 1);
  CHECK(dec.members[dec.bottom[0]].front() == 30);
  // condensation edges: g1->g3, g2->g3, g3->g4
  std::set<std::pair<int, int>> cedges;
  for (int c = 0; c < static_cast<int>(dec.comp_out.size()); ++c)
    for (int d : dec.comp_out[c])
      cedges.insert({dec.members[c].front() / 10, dec.members[d].front() / 10});
  CHECK(cedges == std::set<std::pair<int, int>>{{0, 2}, {1, 2}, {2, 3}});
}

TEST_CASE("declared-versus-computed mismatch is a topology error") {
  NetworkPattern p;
  SubsystemClass c;
  c.id = "x";
  c.state_set = BoxSet({{0.0, 1.0}});
  c.safe_set = BoxSet({{0.0, 1.0}});
  c.inputs.values = {0.0};
  c.dyn = {0.5, 1.0, {0.1}};
  p.classes["x"] = c;
  MatchRule any;
  any.kind = MatchRule::Kind::kAny;
  any.class_id = "x";
  any.offsets = {2};  // stride two splits an even-size ring into two orbits
  p.subnetworks.push_back({"s", {any}});
  validate(p);
  auto net = instantiate(p, 6);
  CHECK_THROWS_AS(decompose(net), TopologyError);
}

TEST_CASE("component structure is invariant under relabeling") {
  // ring of 5 with an extra chord, decomposed raw, then relabeled
  std::vector<std::vector<int>> adj(5);
  for (int i = 0; i < 5; ++i) adj[i].push_back((i + 1) % 5);
  adj[2].push_back(0);
  auto base = decompose_raw(5, adj);
  std::vector<int> perm = {3, 0, 4, 1, 2};
  std::vector<std::vector<int>> padj(5);
  for (int i = 0; i < 5; ++i)
    for (int j : adj[i]) padj[perm[i]].push_back(perm[j]);
  auto relabeled = decompose_raw(5, padj);
  CHECK(base.members.size() == relabeled.members.size());
  for (size_t c = 0; c < base.members.size(); ++c) {
    // the image of every base component must appear verbatim
    std::vector<int> image;
    for (int v : base.members[c]) image.push_back(perm[v]);
    std::sort(image.begin(), image.end());
    bool found = false;
    for (const auto& m : relabeled.members)
      if (m == image) found = true;
    CHECK(found);
  }
}

TEST_CASE("pattern edge types are truncation free") {
  auto p = fixtures::traffic_pattern();
  auto types = pattern_edge_types(p);
  CHECK(types.size() == 11);
  int cross = 0;
  for (const auto& t : types) cross += t.cross;
  CHECK(cross == 3);
  // every type realized at truncation 10 and at 50 is in the closure
  for (int n : {10, 50}) {
    auto net = instantiate(p, n);
    for (const auto& t : realized_edge_types(net))
      CHECK(std::find(types.begin(), types.end(), t) != types.end());
  }
}

TEST_CASE("cross edge types name the linked subnetworks") {
  auto p = fixtures::traffic_pattern();
  auto types = pattern_edge_types(p);
  std::set<std::pair<std::string, std::string>> crossings;
  for (const auto& t : types)
    if (t.cross) crossings.insert({t.source_subnet, t.reader_subnet});
  CHECK(crossings == std::set<std::pair<std::string, std::string>>{
                         {"g1", "g3"}, {"g2", "g3"}, {"g3", "g4"}});
}
