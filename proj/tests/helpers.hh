#pragma once

// Shared fixture: the four-corridor benchmark network, built directly from
// structs so tests of the core do not depend on the JSON loader.

#include <vector>

#include "synet/netspec.hh"

namespace fixtures {

inline synet::SubsystemClass make_cell(const std::string& id, double safe_lo,
                                       double safe_hi) {
  synet::SubsystemClass c;
  c.id = id;
  c.state_set = synet::BoxSet({{0.0, 37.5}});
  c.safe_set = synet::BoxSet({{safe_lo, safe_hi}});
  c.inputs.values = {0.0, 1.0};
  c.dyn.a = 0.5666666666666667;
  c.dyn.b = 5.0;
  c.dyn.d = {0.15, 0.15};
  return c;
}

inline synet::NetworkPattern traffic_pattern() {
  using namespace synet;
  NetworkPattern p;
  p.name = "traffic-corridor";
  p.classes["cell_lo"] = make_cell("cell_lo", 5.0, 15.0);
  p.classes["cell_hi"] = make_cell("cell_hi", 10.0, 25.0);

  MatchRule node2;
  node2.kind = MatchRule::Kind::kIndices;
  node2.indices = {2};
  node2.class_id = "cell_lo";
  node2.offsets = {-1, -1};
  MatchRule odd_lo;
  odd_lo.kind = MatchRule::Kind::kParity;
  odd_lo.odd = true;
  odd_lo.class_id = "cell_lo";
  odd_lo.offsets = {1, 2};
  MatchRule even_lo;
  even_lo.kind = MatchRule::Kind::kParity;
  even_lo.odd = false;
  even_lo.class_id = "cell_lo";
  even_lo.offsets = {-2, -1};

  MatchRule odd_hi = odd_lo;
  odd_hi.class_id = "cell_hi";
  MatchRule even_hi = even_lo;
  even_hi.class_id = "cell_hi";

  p.subnetworks.push_back({"g1", {node2, odd_lo, even_lo}});
  p.subnetworks.push_back({"g2", {node2, odd_lo, even_lo}});
  p.subnetworks.push_back({"g3", {odd_hi, even_hi}});
  p.subnetworks.push_back({"g4", {odd_hi, even_hi}});

  p.links.push_back({"g1", "g3", 1, 0});
  p.links.push_back({"g2", "g3", 2, 0});
  p.links.push_back({"g3", "g4", 2, 0});

  p.design.varpi = 0.8;
  p.design.eta_x["cell_lo"] = 0.1;
  p.design.eta_x["cell_hi"] = 0.1;
  p.truncation = 10;
  p.sim.steps = 100;
  p.sim.seeds.clear();
  for (std::uint64_t s = 1; s <= 20; ++s) p.sim.seeds.push_back(s);
  p.max_abstraction_size = 150000000ull;
  return p;
}

}  // namespace fixtures
