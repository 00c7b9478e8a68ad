#include "synet/traffic_config.hh"

namespace synet {

const char* traffic_config_text() {
  // keep byte-identical with configs/traffic.json (unit tested)
  return R"({
  "name": "traffic-corridor",
  "boundary_rule": "cross-feed",
  "classes": {
    "cell_lo": {
      "state_set": [[0, 37.5]],
      "safe_set": [[5, 15]],
      "inputs": {"values": [0, 1]},
      "dynamics": {"a": "0.5666666666666667", "b": 5, "d": [0.15, 0.15]}
    },
    "cell_hi": {
      "state_set": [[0, 37.5]],
      "safe_set": [[10, 25]],
      "inputs": {"values": [0, 1]},
      "dynamics": {"a": "0.5666666666666667", "b": 5, "d": [0.15, 0.15]}
    }
  },
  "subnetworks": [
    {"id": "g1", "rules": [
      {"match": {"indices": [2]}, "class": "cell_lo", "offsets": [-1, -1]},
      {"match": {"parity": "odd"}, "class": "cell_lo", "offsets": [1, 2]},
      {"match": {"parity": "even"}, "class": "cell_lo", "offsets": [-2, -1]}
    ]},
    {"id": "g2", "rules": [
      {"match": {"indices": [2]}, "class": "cell_lo", "offsets": [-1, -1]},
      {"match": {"parity": "odd"}, "class": "cell_lo", "offsets": [1, 2]},
      {"match": {"parity": "even"}, "class": "cell_lo", "offsets": [-2, -1]}
    ]},
    {"id": "g3", "rules": [
      {"match": {"parity": "odd"}, "class": "cell_hi", "offsets": [1, 2]},
      {"match": {"parity": "even"}, "class": "cell_hi", "offsets": [-2, -1]}
    ]},
    {"id": "g4", "rules": [
      {"match": {"parity": "odd"}, "class": "cell_hi", "offsets": [1, 2]},
      {"match": {"parity": "even"}, "class": "cell_hi", "offsets": [-2, -1]}
    ]}
  ],
  "links": [
    {"from": "g1", "to": "g3", "node": 1, "slot": 0},
    {"from": "g2", "to": "g3", "node": 2, "slot": 0},
    {"from": "g3", "to": "g4", "node": 2, "slot": 0}
  ],
  "design": {
    "varpi": 0.8,
    "theta_u": 0.5,
    "phi_policy": "zero",
    "eta_x": {"cell_lo": 0.1, "cell_hi": 0.1}
  },
  "truncation": 10,
  "sim": {"steps": 100, "seeds": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20]},
  "max_abstraction_size": 150000000,
  "max_synthesis_iterations": 0
}
)";
}

}  // namespace synet
