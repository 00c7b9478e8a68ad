#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

#include "synet/designer.hh"
#include "synet/gains.hh"
#include "synet/kfun.hh"
#include "synet/netspec.hh"
#include "synet/sim.hh"
#include "synet/symbolic.hh"
#include "synet/synthesis.hh"

namespace synet::io {

using json = nlohmann::ordered_json;

/* Comparison functions as tagged trees: {"kind":"linear","c":..},
   {"kind":"power","c":..,"p":..}, {"kind":"sum","a":..,"b":..},
   {"kind":"compose","outer":..,"inner":..}.  Coefficients parse from JSON
   numbers or decimal strings. */
json kfn_to_json(const KFn& f);
KFn kfn_from_json(const json& j);

/* Network description files.  Top-level keys: name, boundary_rule, classes,
   subnetworks, links, design, truncation, sim, max_abstraction_size,
   max_synthesis_iterations.  Numbers may be written as decimal strings;
   unknown keys are rejected with their path. */
NetworkPattern pattern_from_json(const json& j);
NetworkPattern parse_pattern(const std::string& text);
NetworkPattern load_pattern(const std::string& path);

/* Reports.  All serialization below is deterministic: maps are emitted in
   key order and floating-point values in shortest round-trip form, so equal
   inputs give byte-equal documents. */
json certificate_report(const std::map<std::string, Certificate>& certs,
                        const QuantDesign& design);
json design_report(const QuantDesign& design);
json verify_report_json(const VerifyReport& rep);

/* Model dump: the generator description (class, pitches, grids) plus the
   whole transition table when the model holds one.  Loading rebuilds the
   model from the description and, when a table is embedded, replays it
   entry by entry against the rebuilt transitions, so a stale or corrupted
   dump cannot be imported silently. */
json model_to_json(const SymbolicModel& model, const SubsystemClass& cls,
                   const ClassDesign& pitches);
SymbolicModel model_from_json(const json& j, std::uint64_t size_cap,
                              std::uint64_t materialize_threshold = 4000000);

json controller_to_json(const SafetyController& ctrl);
SafetyController controller_from_json(const json& j);

/* Trajectory table: step,node,subnetwork,x,xhat,u,w0..,V,safe,asf_ok with
   one w column per slot up to the widest node; rows logged after a halt (and
   the final row of a clean run) leave u and w blank. */
std::string trajectory_csv(const TrajectoryLog& log);
json run_summary_json(const TrajectoryLog& log);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace synet::io
