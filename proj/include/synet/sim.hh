#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synet/designer.hh"
#include "synet/netspec.hh"
#include "synet/symbolic.hh"
#include "synet/synthesis.hh"

namespace synet {

/* One node at one step.  Input and interconnection values are present on
   every step the run advanced from; the last logged step carries only the
   state the run stopped in. */
struct LogRow {
  int step = 0;
  int node = 0;
  std::string subnet;
  double x = 0.0;
  double xhat = 0.0;
  double v = 0.0;       // |x - xhat|
  bool safe = false;    // x inside the class safe set
  bool asf_ok = false;  // v within the node's accuracy radius
  bool has_input = false;
  double u = 0.0;
  std::vector<double> w;  // exact neighbour states, slot order
};

struct RunSummary {
  bool pass = false;
  int completed = 0;  // steps advanced before the run ended
  double max_v = 0.0;
  double max_vbar = 0.0;      // scaled network distance
  double max_mismatch = 0.0;  // worst output gap |x - xhat|
  std::string failure;        // empty on pass
  int fail_step = -1;
  int fail_node = -1;
};

struct TrajectoryLog {
  std::uint64_t seed = 0;
  int truncation = 0;
  int steps = 0;  // requested
  std::vector<LogRow> rows;  // (step, node) ascending
  RunSummary summary;
};

struct SimConfig {
  int steps = 100;
  std::uint64_t seed = 1;
  // explicit start states; empty draws each node uniformly from its safe
  // set pulled in by half a grid pitch, so the first refinement is interior
  std::vector<double> init;
  // bypass the controllers with one shared input value (negative controls)
  std::optional<double> const_input;
};

/* Synchronous closed loop over one truncation.  Each step: log and monitor
   every node (safe set, accuracy radius, scaled network distance, output
   mismatch), quantize each state and pick its controller input, advance the
   concrete states with exact neighbour values, and advance each abstract
   companion to the successor of the quantized state that lands closest to
   the new concrete state.  The first monitor violation or refinement
   failure marks the run failed and stops it with its locus. */
TrajectoryLog run_simulation(const TruncatedNetwork& net,
                             const ComposedController& comp,
                             const QuantDesign& design,
                             const SimConfig& cfg);

}  // namespace synet
