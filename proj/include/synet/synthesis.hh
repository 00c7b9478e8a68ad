#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "synet/grid.hh"
#include "synet/netspec.hh"
#include "synet/symbolic.hh"

namespace synet {

/* Safety controller for one subsystem class: the largest set of abstract
   states some input can keep inside the safe set forever, as long as every
   internal input stays on the neighbours' safe output grids, together with
   all the inputs that work at each state.  Indices refer to the model's
   state grid and input list.  One controller serves every instance of the
   class; an empty domain is a result, not an error. */
struct SafetyController {
  std::string class_id;
  std::vector<std::int64_t> dom;                    // ascending state indices
  std::map<std::int64_t, std::vector<int>> policy;  // state -> admissible inputs
  std::vector<Grid> safe_internal;                  // universe synthesis assumed
  int iterations = 0;                               // sweeps until stable

  bool in_domain(std::int64_t state) const;
  // throws DomainError off-domain
  const std::vector<int>& actions(std::int64_t state) const;
};

/* Shrinks the safe grid points until every survivor has an input whose
   successors stay among the survivors for every internal combination and
   never leave the state set.  Membership is tested against the previous
   sweep's set, so the result is the exact maximal fixed point.  A positive
   sweep cap turns a fixpoint that is still moving into a NumericError
   carrying the last sweep's removal count. */
SafetyController synthesize_safety(const SymbolicModel& model,
                                   const BoxSet& safe_set,
                                   const std::vector<Grid>& safe_internal,
                                   int max_sweeps = 0);

/* Post-hoc audit: counts policy entries whose successor union under the
   recorded internal universe leaves the domain or can exit the state set,
   plus domain states with no recorded input.  Zero for anything
   synthesize_safety returns. */
std::size_t closure_violations(const SafetyController& ctrl,
                               const SymbolicModel& model);

struct Refined {
  std::int64_t state = 0;  // abstract state index
  double xhat = 0.0;       // its grid value
  int input = 0;           // lowest admissible input index
  double u = 0.0;          // its value
};

/* Maps a concrete state to its nearest grid point and picks the lowest
   admissible input there.  Throws RefinementError tagged with `node` when
   the state is outside the grid or its image is off-domain. */
Refined refine(const SafetyController& ctrl, const SymbolicModel& model,
               double x, int node = -1);

/* Per-node view of the class-level controllers over one truncation.  Holds
   references only; the maps handed to compose must outlive it. */
class ComposedController {
 public:
  ComposedController() = default;

  int size() const { return static_cast<int>(ctrl_.size()); }
  const SafetyController& at(int node) const;
  const SymbolicModel& model_at(int node) const;

  // all nodes simultaneously inside their local domains
  bool in_domain(const std::vector<std::int64_t>& states) const;

 private:
  friend ComposedController compose(
      const TruncatedNetwork&, const std::map<std::string, SafetyController>&,
      const std::map<std::string, SymbolicModel>&);

  std::vector<const SafetyController*> ctrl_;
  std::vector<const SymbolicModel*> model_;
};

/* Wires every node to its class's controller and model.  Throws
   CompositionError naming the first node whose class lacks either one or
   whose controller domain is empty. */
ComposedController compose(const TruncatedNetwork& net,
                           const std::map<std::string, SafetyController>& ctrls,
                           const std::map<std::string, SymbolicModel>& models);

}  // namespace synet
