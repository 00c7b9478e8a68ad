#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "synet/designer.hh"
#include "synet/graph.hh"
#include "synet/grid.hh"
#include "synet/netspec.hh"

namespace synet {

/* Internal-input grids of one class, per slot, shared by every hosting
   subnetwork: `full` merges the state sets of every source the slot can
   see, `safe` merges their safe sets (the universe controller synthesis
   quantifies over).  When the slot's offsets are all zero the grids alias
   the sources' own output grids, so abstract outputs land on them exactly. */
struct SlotGrids {
  std::vector<Grid> full;
  std::vector<Grid> safe;
};
SlotGrids derive_slot_grids(const NetworkPattern& pattern,
                            const std::vector<EdgeType>& types,
                            const QuantDesign& design,
                            const std::string& class_id);

/* Finite-state abstraction of one subsystem class.  States and internal
   inputs are grid points; external inputs are either the class's finite
   input list verbatim or a grid over its input box.  A transition from
   (state, input, internal point) reaches every state-grid point within one
   state pitch of the affine image; an image outside the state set (or with
   no grid point in reach) is marked `out`, which synthesis treats as
   losing.  Small models keep the whole table in memory; large ones compute
   successor ranges on demand, which is exact either way. */
class SymbolicModel {
 public:
  SymbolicModel() = default;

  const std::string& class_id() const { return class_id_; }
  const Grid& state_grid() const { return state_; }
  const std::vector<double>& input_values() const { return inputs_; }
  double input_pitch() const { return input_pitch_; }  // 0 for finite lists
  int arity() const { return static_cast<int>(slots_.size()); }
  const Grid& slot_grid(int slot) const { return slots_.at(slot); }

  double image(double x, double u, const std::vector<double>& w) const;

  struct Successors {
    bool out = false;
    std::int64_t lo = 0, hi = -1;  // state-grid index range, empty when lo > hi
    bool empty() const { return lo > hi; }
  };
  Successors successors(std::int64_t state, int input,
                        const std::vector<std::int64_t>& slot_points) const;

  /* Successor union and any-out flag over every combination of internal
     points drawn from the given per-slot subset grids (same pitch, keys a
     subset of the slot grid's).  Exploits the affine image's monotonicity
     per slot when that provably loses nothing, else enumerates. */
  struct SuccessorUnion {
    bool out = false;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;  // disjoint, ascending
  };
  SuccessorUnion successors_over(std::int64_t state, int input,
                                 const std::vector<Grid>& slot_subsets) const;

  std::uint64_t triple_count() const;
  bool materialized() const { return !table_flags_.empty(); }

 private:
  friend SymbolicModel build_symbolic_model(const SubsystemClass&,
                                            const QuantDesign&,
                                            const std::vector<Grid>&,
                                            std::uint64_t, std::uint64_t);

  Successors compute(std::int64_t state, int input,
                     const std::vector<std::int64_t>& slot_points) const;

  std::string class_id_;
  AffineDynamics dyn_;
  Grid state_;
  std::vector<double> inputs_;
  double input_pitch_ = 0.0;
  std::vector<Grid> slots_;
  // materialized table, indexed by ((state * |U| + input) * |W| + internal)
  std::vector<std::int32_t> table_lo_, table_hi_;
  std::vector<std::uint8_t> table_flags_;  // bit 0: out
};

/* Grids the class per the design and enumerates nothing up front unless the
   model is small.  Throws SizeError when |states| * |inputs| * |internal|
   exceeds size_cap. */
SymbolicModel build_symbolic_model(const SubsystemClass& cls,
                                   const QuantDesign& design,
                                   const std::vector<Grid>& slot_grids,
                                   std::uint64_t size_cap = 100000000,
                                   std::uint64_t materialize_threshold = 4000000);

/* Randomized one-step refinement check: does every sampled concrete move
   admit an abstract successor within the accuracy radius?  Each trial draws
   a grid state, a concrete state within varpi of it, an input, and per slot
   a grid internal point with a concrete internal value within vartheta. */
struct AsfCounterexample {
  double x = 0.0, xhat = 0.0, u = 0.0;
  std::vector<double> w, what;
  double best = 0.0;  // distance of the closest abstract successor
};
struct AsfReport {
  int trials = 0;
  int violations = 0;
  double max_v = 0.0;  // largest best-successor distance seen
  double varpi = 0.0, vartheta = 0.0;
  std::vector<AsfCounterexample> examples;  // first few violations
  bool pass() const { return trials > 0 && violations == 0; }
};
AsfReport check_local_asf(const SymbolicModel& model, double varpi,
                          double vartheta, int samples, std::uint64_t seed);

/* Network-level distance of a concrete/abstract state pair over one
   truncation: the node distances scaled by varpi/varpi_i, their sup, and
   the worst output mismatch, which the scaled sup must dominate. */
struct GlobalAsf {
  double vbar = 0.0;
  double mismatch = 0.0;
  bool consistent = false;
};
GlobalAsf eval_global_asf(const TruncatedNetwork& net, const QuantDesign& design,
                          const std::map<std::string, Certificate>& certs,
                          const std::vector<double>& x,
                          const std::vector<double>& xhat);

}  // namespace synet
