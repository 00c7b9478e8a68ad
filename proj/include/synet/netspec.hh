#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synet/boxset.hh"

namespace synet {

/* One subsystem step: x+ = a*x + b*u + sum_s d[s]*w[s].
   Outputs are the states themselves; slot s of a node reads the state of
   its s-th neighbour. */
struct AffineDynamics {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> d;
};

/* Either a finite input list (sorted, deduplicated) or a continuous box. */
struct InputSpec {
  std::vector<double> values;
  BoxSet box;
  bool finite() const { return !values.empty(); }
};

struct SubsystemClass {
  std::string id;
  BoxSet state_set;
  BoxSet safe_set;
  InputSpec inputs;
  AffineDynamics dyn;
  int arity() const { return static_cast<int>(dyn.d.size()); }
};

/* Node-selection rule inside one subnetwork; first match wins. */
struct MatchRule {
  enum class Kind { kAny, kParity, kIndices };
  Kind kind = Kind::kAny;
  bool odd = false;               // kParity
  std::vector<int> indices;       // kIndices, 1-based local indices
  std::string class_id;
  std::vector<int> offsets;       // nonzero relative neighbour positions
};

struct SubnetworkPattern {
  std::string id;
  std::vector<MatchRule> rules;
};

/* The tail node of `from` feeds slot `slot` of node `node` in `to`,
   overriding whatever the node's offset rule would have read there. */
struct CrossLink {
  std::string from, to;
  int node = 0;  // 1-based in `to`
  int slot = 0;
};

struct DesignOptions {
  double varpi = 1.0;
  // budget fraction spent on input quantization when inputs are a box
  double theta_u = 0.5;
  // "zero" keeps inter-subnetwork offsets at 0; "fraction" spends
  // phi_fraction of the admissible slack on them
  std::string phi_policy = "zero";
  double phi_fraction = 0.5;
  std::map<std::string, double> eta_x;  // per-class requested state pitch
  std::map<std::string, double> eta_u;  // per-class requested input pitch
};

struct SimOptions {
  int steps = 100;
  std::vector<std::uint64_t> seeds = {1};
};

/* Scale-free description of an arbitrarily large network: finitely many
   subsystem classes, finitely many subnetwork patterns, and the links that
   couple them.  Everything downstream (certificates, quantization design,
   per-class models and controllers) is computed from this alone; the
   truncation size only selects how much of it to instantiate. */
struct NetworkPattern {
  std::string name;
  std::string boundary_rule = "cross-feed";
  std::map<std::string, SubsystemClass> classes;
  std::vector<SubnetworkPattern> subnetworks;
  std::vector<CrossLink> links;
  DesignOptions design;
  int truncation = 10;
  SimOptions sim;
  std::uint64_t max_abstraction_size = 100000000ull;
  int max_synthesis_iterations = 0;  // 0 = until converged
};

/* Pattern-level sanity checks; throws ConfigError/TopologyError. */
void validate(const NetworkPattern& pattern);

struct NodeInstance {
  int id = 0;  // 0-based global
  std::string subnet;
  int local = 0;  // 1-based within the subnetwork
  std::string class_id;
  std::vector<int> sources;  // global node per slot
};

struct TruncatedNetwork {
  const NetworkPattern* pattern = nullptr;
  int truncation = 0;
  std::vector<NodeInstance> nodes;
  std::map<std::string, std::pair<int, int>> ranges;  // subnet -> [first,last]
};

/* Expands every subnetwork to `truncation` nodes.  Offsets that leave the
   subnetwork wrap around inside it; links then override their target slots
   with the source subnetwork's tail node. */
TruncatedNetwork instantiate(const NetworkPattern& pattern, int truncation);

}  // namespace synet
