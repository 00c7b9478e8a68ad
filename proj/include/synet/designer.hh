#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "synet/gains.hh"
#include "synet/graph.hh"
#include "synet/netspec.hh"

namespace synet {

/* Quantization parameters shared by every instance of one class. */
struct ClassDesign {
  double varpi = 0.0;     // tightest accuracy radius among hosting subnetworks
  double vartheta = 0.0;  // widest internal mismatch budget among them
  double eta_u = 0.0;
  double eta_x = 0.0;
  double eta_x_bound = 0.0;  // admissible pitch before snapping and requests
  double eta_x_slack = 0.0;  // bound minus chosen pitch
};

/* Output of the peel-and-assign pass over the subnetwork order.  All maps
   are keyed by names so serialization is deterministic; nothing here
   depends on a truncation size. */
struct QuantDesign {
  double varpi = 0.0;        // network-level accuracy target
  double varpi_min = 0.0;    // smallest local radius (must stay positive)
  double epsilon_hat = 0.0;  // guaranteed output-mismatch radius
  std::map<std::pair<std::string, std::string>, double> varpi_sc;    // (subnet, class)
  std::map<std::pair<std::string, std::string>, double> vartheta_sc;
  std::map<EdgeType, double> phi;  // abstract input/output offset per edge type
  std::map<std::string, ClassDesign> classes;
  std::map<std::string, SubnetScaling> scalings;  // per subnetwork
  std::map<std::string, double> radius;           // per subnetwork: assigned r
  std::vector<std::vector<std::string>> waves;    // processing order, bottom first
};

/* Assigns accuracy radii over the subnetwork order (sinks first), offsets
   per edge type under the configured policy, and per-class quantization
   pitches against the contraction margins.  Pattern-level only. */
QuantDesign run_design(const NetworkPattern& pattern,
                       const std::map<std::string, Certificate>& certs,
                       const std::vector<EdgeType>& types,
                       const DesignOptions& opts);

struct VerifyCheck {
  std::string name;
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
  bool pass = false;
};
struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass = false;
};

/* Independent re-evaluation of every inequality the design relies on:
   positive radii, per-edge budget compatibility, and per-class one-step
   margins against the chosen pitches. */
VerifyReport verify_design(const NetworkPattern& pattern,
                           const std::map<std::string, Certificate>& certs,
                           const std::vector<EdgeType>& types,
                           const QuantDesign& design);

}  // namespace synet
