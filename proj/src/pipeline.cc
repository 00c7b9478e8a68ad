#include "synet/pipeline.hh"

#include <algorithm>
#include <sstream>

#include "synet/errors.hh"

namespace synet {

DesignBundle design_pipeline(const NetworkPattern& pattern) {
  validate(pattern);
  DesignBundle b;
  for (const auto& [id, cls] : pattern.classes) {
    b.certs.emplace(id, derive_affine_certificate(cls));
  }
  b.types = pattern_edge_types(pattern);
  b.design = run_design(pattern, b.certs, b.types, pattern.design);
  return b;
}

std::map<std::string, SymbolicModel> build_models(const NetworkPattern& pattern,
                                                  const DesignBundle& bundle) {
  std::map<std::string, SymbolicModel> models;
  for (const auto& [id, cls] : pattern.classes) {
    const SlotGrids sg = derive_slot_grids(pattern, bundle.types, bundle.design, id);
    models.emplace(id, build_symbolic_model(cls, bundle.design, sg.full,
                                            pattern.max_abstraction_size));
  }
  return models;
}

std::map<std::string, SafetyController> synthesize_controllers(
    const NetworkPattern& pattern, const DesignBundle& bundle,
    const std::map<std::string, SymbolicModel>& models) {
  std::map<std::string, SafetyController> ctrls;
  for (const auto& [id, cls] : pattern.classes) {
    auto m = models.find(id);
    if (m == models.end()) throw ConfigError("no model for class " + id);
    const SlotGrids sg = derive_slot_grids(pattern, bundle.types, bundle.design, id);
    ctrls.emplace(id, synthesize_safety(m->second, cls.safe_set, sg.safe,
                                        pattern.max_synthesis_iterations));
  }
  return ctrls;
}

std::vector<TrajectoryLog> run_closed_loop(
    const NetworkPattern& pattern, const DesignBundle& bundle,
    const std::map<std::string, SymbolicModel>& models,
    const std::map<std::string, SafetyController>& ctrls, int truncation,
    const SimOptions& sim) {
  const TruncatedNetwork net = instantiate(pattern, truncation);

  // the design covered every coupling kind this truncation realizes
  const std::vector<EdgeType> realized = realized_edge_types(net);
  for (const EdgeType& t : realized) {
    if (!std::binary_search(bundle.types.begin(), bundle.types.end(), t)) {
      std::ostringstream os;
      os << "truncation " << truncation << " realizes a coupling the pattern closure lacks: "
         << t.reader_subnet << "/" << t.reader_class << " slot " << t.slot << " <- "
         << t.source_subnet << "/" << t.source_class;
      throw TopologyError(os.str());
    }
  }

  const ComposedController comp = compose(net, ctrls, models);
  std::vector<TrajectoryLog> logs;
  logs.reserve(sim.seeds.size());
  for (std::uint64_t seed : sim.seeds) {
    SimConfig cfg;
    cfg.steps = sim.steps;
    cfg.seed = seed;
    logs.push_back(run_simulation(net, comp, bundle.design, cfg));
  }
  return logs;
}

}  // namespace synet
