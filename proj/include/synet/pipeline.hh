#pragma once

#include <map>
#include <string>
#include <vector>

#include "synet/designer.hh"
#include "synet/gains.hh"
#include "synet/graph.hh"
#include "synet/netspec.hh"
#include "synet/sim.hh"
#include "synet/symbolic.hh"
#include "synet/synthesis.hh"

namespace synet {

/* Everything the truncation-independent stages produce.  Models and
   controllers are built once per class; instances only reference them. */
struct DesignBundle {
  std::map<std::string, Certificate> certs;
  std::vector<EdgeType> types;  // coupling closure of the pattern
  QuantDesign design;
};

// validate -> certificates -> coupling closure -> quantization design
DesignBundle design_pipeline(const NetworkPattern& pattern);

std::map<std::string, SymbolicModel> build_models(const NetworkPattern& pattern,
                                                  const DesignBundle& bundle);

std::map<std::string, SafetyController> synthesize_controllers(
    const NetworkPattern& pattern, const DesignBundle& bundle,
    const std::map<std::string, SymbolicModel>& models);

/* Instantiates the truncation, confirms it realizes no coupling outside the
   pattern closure the design was computed for, wires the class controllers
   to the nodes, and runs one seeded closed loop per seed. */
std::vector<TrajectoryLog> run_closed_loop(
    const NetworkPattern& pattern, const DesignBundle& bundle,
    const std::map<std::string, SymbolicModel>& models,
    const std::map<std::string, SafetyController>& ctrls, int truncation,
    const SimOptions& sim);

}  // namespace synet
