#pragma once

#include <compare>
#include <string>
#include <vector>

#include "synet/netspec.hh"

namespace synet {

struct SccDecomposition {
  std::vector<int> comp_of;                 // node id -> component id
  std::vector<std::vector<int>> members;    // component -> sorted node ids
  std::vector<std::vector<int>> comp_out;   // condensation edges, deduplicated
  std::vector<int> bottom;                  // components with no outgoing edge
  std::vector<int> topo_order;              // sources first
};

/* Strongly connected components of the influence graph (edge j -> i when
   node i reads node j).  Verifies that the components coincide with the
   declared subnetworks and throws TopologyError otherwise. */
SccDecomposition decompose(const TruncatedNetwork& net);

/* Same computation without the declared-structure check, for callers that
   work on hand-built graphs. */
SccDecomposition decompose_raw(int n, const std::vector<std::vector<int>>& out_adj);

/* One kind of directed coupling the pattern can realize: some node of
   reader_subnet matched to reader_class reads, through `slot`, a node of
   source_subnet matched to source_class. */
struct EdgeType {
  std::string reader_subnet, reader_class;
  int slot = 0;
  std::string source_subnet, source_class;
  bool cross = false;
  auto operator<=>(const EdgeType&) const = default;
};

/* All edge types the pattern can realize for any truncation, found by
   probing two consecutive truncations large enough to expose every rule
   and both parities. */
std::vector<EdgeType> pattern_edge_types(const NetworkPattern& pattern);

/* Edge types realized by one concrete truncation (used to cross-check the
   pattern-level closure at instantiation time). */
std::vector<EdgeType> realized_edge_types(const TruncatedNetwork& net);

}  // namespace synet
