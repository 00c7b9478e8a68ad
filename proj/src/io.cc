#include "synet/io.hh"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>
#include <vector>

#include "synet/errors.hh"

namespace synet::io {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_decimal(const std::string& s, const std::string& ctx) {
  const char* c = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(c, &end);
  if (end == c || *end != '\0') {
    throw ConfigError(ctx + ": \"" + s + "\" is not a decimal number");
  }
  return v;
}

double num(const json& j, const std::string& ctx) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_decimal(j.get<std::string>(), ctx);
  throw ConfigError(ctx + ": expected a number (or a decimal string)");
}

std::int64_t integer(const json& j, const std::string& ctx) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw ConfigError(ctx + ": expected an integer");
}

const json& need(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(ctx + ": missing key \"" + key + "\"");
  return *it;
}

void object_with(const json& j, std::initializer_list<const char*> keys,
                 const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError(ctx + ": unknown key \"" + it.key() + "\"");
  }
}

json boxset_to(const BoxSet& b) {
  json a = json::array();
  for (const auto& box : b.boxes()) a.push_back(json::array({box.lo, box.hi}));
  return a;
}

BoxSet boxset_from(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ConfigError(ctx + ": expected a list of [lo, hi] intervals");
  std::vector<BoxSet::Box> boxes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    const std::string ec = ctx + "[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2) throw ConfigError(ec + ": expected [lo, hi]");
    const double lo = num(e[0], ec + ".lo"), hi = num(e[1], ec + ".hi");
    if (!(lo <= hi)) throw ConfigError(ec + ": lo exceeds hi");
    boxes.push_back({lo, hi});
  }
  return BoxSet(std::move(boxes));
}

json grid_to(const Grid& g) {
  json j;
  j["eta"] = g.eta();
  j["set"] = boxset_to(g.set());
  return j;
}

Grid grid_from(const json& j, const std::string& ctx) {
  object_with(j, {"eta", "set"}, ctx);
  return Grid(boxset_from(need(j, "set", ctx), ctx + ".set"),
              num(need(j, "eta", ctx), ctx + ".eta"));
}

json class_to_json(const SubsystemClass& cls) {
  json j;
  j["state_set"] = boxset_to(cls.state_set);
  j["safe_set"] = boxset_to(cls.safe_set);
  json in;
  if (cls.inputs.finite()) {
    in["values"] = cls.inputs.values;
  } else {
    in["box"] = boxset_to(cls.inputs.box);
  }
  j["inputs"] = in;
  json dyn;
  dyn["a"] = cls.dyn.a;
  dyn["b"] = cls.dyn.b;
  dyn["d"] = cls.dyn.d;
  j["dynamics"] = dyn;
  return j;
}

SubsystemClass class_from_json(const std::string& id, const json& j,
                               const std::string& ctx) {
  object_with(j, {"state_set", "safe_set", "inputs", "dynamics"}, ctx);
  SubsystemClass cls;
  cls.id = id;
  cls.state_set = boxset_from(need(j, "state_set", ctx), ctx + ".state_set");
  cls.safe_set = boxset_from(need(j, "safe_set", ctx), ctx + ".safe_set");

  const json& in = need(j, "inputs", ctx);
  object_with(in, {"values", "box"}, ctx + ".inputs");
  const bool has_values = in.contains("values"), has_box = in.contains("box");
  if (has_values == has_box) {
    throw ConfigError(ctx + ".inputs: give exactly one of \"values\" or \"box\"");
  }
  if (has_values) {
    const json& vals = in["values"];
    if (!vals.is_array() || vals.empty()) {
      throw ConfigError(ctx + ".inputs.values: expected a nonempty list");
    }
    for (std::size_t i = 0; i < vals.size(); ++i) {
      cls.inputs.values.push_back(
          num(vals[i], ctx + ".inputs.values[" + std::to_string(i) + "]"));
    }
  } else {
    cls.inputs.box = boxset_from(in["box"], ctx + ".inputs.box");
  }

  const json& dyn = need(j, "dynamics", ctx);
  object_with(dyn, {"a", "b", "d"}, ctx + ".dynamics");
  cls.dyn.a = num(need(dyn, "a", ctx + ".dynamics"), ctx + ".dynamics.a");
  cls.dyn.b = num(need(dyn, "b", ctx + ".dynamics"), ctx + ".dynamics.b");
  const json& d = need(dyn, "d", ctx + ".dynamics");
  if (!d.is_array()) throw ConfigError(ctx + ".dynamics.d: expected a list");
  for (std::size_t i = 0; i < d.size(); ++i) {
    cls.dyn.d.push_back(num(d[i], ctx + ".dynamics.d[" + std::to_string(i) + "]"));
  }
  return cls;
}

MatchRule rule_from_json(const json& j, const std::string& ctx) {
  object_with(j, {"match", "class", "offsets"}, ctx);
  MatchRule r;
  const json& m = need(j, "match", ctx);
  if (m.is_string() && m.get<std::string>() == "any") {
    r.kind = MatchRule::Kind::kAny;
  } else if (m.is_object()) {
    object_with(m, {"parity", "indices"}, ctx + ".match");
    if (m.contains("parity") == m.contains("indices")) {
      throw ConfigError(ctx + ".match: give exactly one of \"parity\" or \"indices\"");
    }
    if (m.contains("parity")) {
      const std::string p = m["parity"].is_string() ? m["parity"].get<std::string>() : "";
      if (p != "odd" && p != "even") {
        throw ConfigError(ctx + ".match.parity: expected \"odd\" or \"even\"");
      }
      r.kind = MatchRule::Kind::kParity;
      r.odd = p == "odd";
    } else {
      r.kind = MatchRule::Kind::kIndices;
      const json& idx = m["indices"];
      if (!idx.is_array() || idx.empty()) {
        throw ConfigError(ctx + ".match.indices: expected a nonempty list");
      }
      for (std::size_t i = 0; i < idx.size(); ++i) {
        r.indices.push_back(static_cast<int>(
            integer(idx[i], ctx + ".match.indices[" + std::to_string(i) + "]")));
      }
    }
  } else {
    throw ConfigError(ctx + ".match: expected \"any\", {\"parity\":..} or {\"indices\":..}");
  }
  const json& cid = need(j, "class", ctx);
  if (!cid.is_string()) throw ConfigError(ctx + ".class: expected a class id");
  r.class_id = cid.get<std::string>();
  const json& off = need(j, "offsets", ctx);
  if (!off.is_array()) throw ConfigError(ctx + ".offsets: expected a list");
  for (std::size_t i = 0; i < off.size(); ++i) {
    r.offsets.push_back(static_cast<int>(
        integer(off[i], ctx + ".offsets[" + std::to_string(i) + "]")));
  }
  return r;
}

std::map<std::string, double> pitch_map(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected {class: pitch}");
  std::map<std::string, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    m[it.key()] = num(it.value(), ctx + "." + it.key());
  }
  return m;
}

}  // namespace

json kfn_to_json(const KFn& f) {
  const KFn::Node& n = f.root();
  json j;
  switch (n.kind) {
    case KFn::Kind::kLinear:
      j["kind"] = "linear";
      j["c"] = n.c;
      break;
    case KFn::Kind::kPower:
      j["kind"] = "power";
      j["c"] = n.c;
      j["p"] = n.p;
      break;
    case KFn::Kind::kSum:
      j["kind"] = "sum";
      j["a"] = kfn_to_json(KFn::from_node(n.a));
      j["b"] = kfn_to_json(KFn::from_node(n.b));
      break;
    case KFn::Kind::kCompose:
      j["kind"] = "compose";
      j["outer"] = kfn_to_json(KFn::from_node(n.a));
      j["inner"] = kfn_to_json(KFn::from_node(n.b));
      break;
  }
  return j;
}

KFn kfn_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("comparison function: expected an object");
  const json& k = need(j, "kind", "comparison function");
  const std::string kind = k.is_string() ? k.get<std::string>() : "";
  if (kind == "linear") {
    object_with(j, {"kind", "c"}, "linear function");
    return KFn::linear(num(need(j, "c", "linear function"), "linear.c"));
  }
  if (kind == "power") {
    object_with(j, {"kind", "c", "p"}, "power function");
    return KFn::power(num(need(j, "c", "power function"), "power.c"),
                      num(need(j, "p", "power function"), "power.p"));
  }
  if (kind == "sum") {
    object_with(j, {"kind", "a", "b"}, "sum function");
    return KFn::sum(kfn_from_json(need(j, "a", "sum function")),
                    kfn_from_json(need(j, "b", "sum function")));
  }
  if (kind == "compose") {
    object_with(j, {"kind", "outer", "inner"}, "composed function");
    return KFn::compose(kfn_from_json(need(j, "outer", "composed function")),
                        kfn_from_json(need(j, "inner", "composed function")));
  }
  throw ConfigError("comparison function: unknown kind \"" + kind + "\"");
}

NetworkPattern pattern_from_json(const json& j) {
  object_with(j,
              {"name", "boundary_rule", "classes", "subnetworks", "links", "design",
               "truncation", "sim", "max_abstraction_size", "max_synthesis_iterations"},
              "config");
  NetworkPattern p;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ConfigError("config.name: expected a string");
    p.name = j["name"].get<std::string>();
  }
  if (j.contains("boundary_rule")) {
    if (!j["boundary_rule"].is_string()) {
      throw ConfigError("config.boundary_rule: expected a string");
    }
    p.boundary_rule = j["boundary_rule"].get<std::string>();
  }

  const json& classes = need(j, "classes", "config");
  if (!classes.is_object() || classes.empty()) {
    throw ConfigError("config.classes: expected {id: class}");
  }
  for (auto it = classes.begin(); it != classes.end(); ++it) {
    p.classes.emplace(it.key(),
                      class_from_json(it.key(), it.value(), "classes." + it.key()));
  }

  const json& subs = need(j, "subnetworks", "config");
  if (!subs.is_array() || subs.empty()) {
    throw ConfigError("config.subnetworks: expected a nonempty list");
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string ctx = "subnetworks[" + std::to_string(i) + "]";
    object_with(subs[i], {"id", "rules"}, ctx);
    SubnetworkPattern sp;
    const json& id = need(subs[i], "id", ctx);
    if (!id.is_string()) throw ConfigError(ctx + ".id: expected a string");
    sp.id = id.get<std::string>();
    const json& rules = need(subs[i], "rules", ctx);
    if (!rules.is_array() || rules.empty()) {
      throw ConfigError(ctx + ".rules: expected a nonempty list");
    }
    for (std::size_t r = 0; r < rules.size(); ++r) {
      sp.rules.push_back(
          rule_from_json(rules[r], ctx + ".rules[" + std::to_string(r) + "]"));
    }
    p.subnetworks.push_back(std::move(sp));
  }

  if (j.contains("links")) {
    const json& links = j["links"];
    if (!links.is_array()) throw ConfigError("config.links: expected a list");
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string ctx = "links[" + std::to_string(i) + "]";
      object_with(links[i], {"from", "to", "node", "slot"}, ctx);
      CrossLink l;
      const json& from = need(links[i], "from", ctx);
      const json& to = need(links[i], "to", ctx);
      if (!from.is_string() || !to.is_string()) {
        throw ConfigError(ctx + ": from/to must be subnetwork ids");
      }
      l.from = from.get<std::string>();
      l.to = to.get<std::string>();
      l.node = static_cast<int>(integer(need(links[i], "node", ctx), ctx + ".node"));
      l.slot = static_cast<int>(integer(need(links[i], "slot", ctx), ctx + ".slot"));
      p.links.push_back(std::move(l));
    }
  }

  if (j.contains("design")) {
    const json& d = j["design"];
    object_with(d, {"varpi", "theta_u", "phi_policy", "phi_fraction", "eta_x", "eta_u"},
                "design");
    if (d.contains("varpi")) p.design.varpi = num(d["varpi"], "design.varpi");
    if (d.contains("theta_u")) p.design.theta_u = num(d["theta_u"], "design.theta_u");
    if (d.contains("phi_policy")) {
      if (!d["phi_policy"].is_string()) {
        throw ConfigError("design.phi_policy: expected a string");
      }
      p.design.phi_policy = d["phi_policy"].get<std::string>();
    }
    if (d.contains("phi_fraction")) {
      p.design.phi_fraction = num(d["phi_fraction"], "design.phi_fraction");
    }
    if (d.contains("eta_x")) p.design.eta_x = pitch_map(d["eta_x"], "design.eta_x");
    if (d.contains("eta_u")) p.design.eta_u = pitch_map(d["eta_u"], "design.eta_u");
  }

  if (j.contains("truncation")) {
    p.truncation = static_cast<int>(integer(j["truncation"], "config.truncation"));
  }
  if (j.contains("sim")) {
    const json& s = j["sim"];
    object_with(s, {"steps", "seeds"}, "sim");
    if (s.contains("steps")) {
      p.sim.steps = static_cast<int>(integer(s["steps"], "sim.steps"));
    }
    if (s.contains("seeds")) {
      const json& seeds = s["seeds"];
      if (!seeds.is_array() || seeds.empty()) {
        throw ConfigError("sim.seeds: expected a nonempty list");
      }
      p.sim.seeds.clear();
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const std::string ctx = "sim.seeds[" + std::to_string(i) + "]";
        const std::int64_t v = integer(seeds[i], ctx);
        if (v < 0) throw ConfigError(ctx + ": seeds are nonnegative");
        p.sim.seeds.push_back(static_cast<std::uint64_t>(v));
      }
    }
  }
  if (j.contains("max_abstraction_size")) {
    const std::int64_t v = integer(j["max_abstraction_size"], "config.max_abstraction_size");
    if (v <= 0) throw ConfigError("config.max_abstraction_size: expected a positive integer");
    p.max_abstraction_size = static_cast<std::uint64_t>(v);
  }
  if (j.contains("max_synthesis_iterations")) {
    p.max_synthesis_iterations = static_cast<int>(
        integer(j["max_synthesis_iterations"], "config.max_synthesis_iterations"));
  }
  return p;
}

NetworkPattern parse_pattern(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return pattern_from_json(j);
}

NetworkPattern load_pattern(const std::string& path) {
  return parse_pattern(read_text(path));
}

json certificate_report(const std::map<std::string, Certificate>& certs,
                        const QuantDesign& design) {
  json j;
  json cl = json::object();
  for (const auto& [id, c] : certs) {
    json e;
    e["kappa"] = kfn_to_json(c.kappa);
    e["rho_w"] = kfn_to_json(c.rho_w);
    e["rho_u"] = kfn_to_json(c.rho_u);
    e["alpha_lo"] = kfn_to_json(c.alpha_lo());
    cl[id] = std::move(e);
  }
  j["classes"] = std::move(cl);
  json sc = json::object();
  for (const auto& [subnet, s] : design.scalings) {
    json e;
    e["lambda"] = s.lambda;
    e["sigma_method"] = s.method;
    e["worst_cycle"] = s.lambda;
    json sig = json::object();
    for (const auto& [cls, v] : s.sigma) sig[cls] = v;
    e["sigma"] = std::move(sig);
    sc[subnet] = std::move(e);
  }
  j["components"] = std::move(sc);
  return j;
}

json design_report(const QuantDesign& design) {
  json j;
  j["varpi"] = design.varpi;
  j["varpi_min"] = design.varpi_min;
  j["epsilon_hat"] = design.epsilon_hat;
  j["waves"] = design.waves;
  json radius = json::object();
  for (const auto& [subnet, r] : design.radius) radius[subnet] = r;
  j["radius"] = std::move(radius);
  json scalings = json::object();
  for (const auto& [subnet, s] : design.scalings) {
    json e;
    e["method"] = s.method;
    e["lambda"] = s.lambda;
    json sig = json::object();
    for (const auto& [cls, v] : s.sigma) sig[cls] = v;
    e["sigma"] = std::move(sig);
    scalings[subnet] = std::move(e);
  }
  j["scalings"] = std::move(scalings);
  json acc = json::array();
  for (const auto& [key, v] : design.varpi_sc) {
    json row;
    row["subnetwork"] = key.first;
    row["class"] = key.second;
    row["varpi"] = v;
    row["vartheta"] = design.vartheta_sc.at(key);
    acc.push_back(std::move(row));
  }
  j["accuracy"] = std::move(acc);
  json phi = json::array();
  for (const auto& [t, v] : design.phi) {
    json row;
    row["reader_subnetwork"] = t.reader_subnet;
    row["reader_class"] = t.reader_class;
    row["slot"] = t.slot;
    row["source_subnetwork"] = t.source_subnet;
    row["source_class"] = t.source_class;
    row["cross"] = t.cross;
    row["value"] = v;
    phi.push_back(std::move(row));
  }
  j["phi"] = std::move(phi);
  json classes = json::object();
  for (const auto& [id, c] : design.classes) {
    json e;
    e["varpi"] = c.varpi;
    e["vartheta"] = c.vartheta;
    e["eta_u"] = c.eta_u;
    e["eta_x"] = c.eta_x;
    e["eta_x_bound"] = c.eta_x_bound;
    e["eta_x_slack"] = c.eta_x_slack;
    classes[id] = std::move(e);
  }
  j["classes"] = std::move(classes);
  json stages;
  stages["radius"] = "assigned along `waves`, sinks first; later waves back off by their scaling";
  stages["accuracy"] = "per-class split of the hosting subnetwork's radius via its sigma";
  stages["phi"] = "offset policy applied per coupling kind";
  stages["eta_u"] = "external-input budget from the accuracy split";
  stages["eta_x_bound"] = "one-step contraction margin of the class";
  stages["eta_x"] = "bound snapped against the per-class request";
  stages["epsilon_hat"] = "worst local radius mapped through the output bound";
  j["stages"] = std::move(stages);
  return j;
}

json verify_report_json(const VerifyReport& rep) {
  json j;
  j["pass"] = rep.pass;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["slack"] = c.slack;
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

namespace {

/* Walks the flat triple order: ((state * |U| + input) * |W| + internal)
   with slot 0 the most significant digit of `internal`. */
template <typename Fn>
void for_each_triple(const SymbolicModel& m, Fn&& fn) {
  const std::int64_t ns = m.state_grid().size();
  const std::int64_t nu = static_cast<std::int64_t>(m.input_values().size());
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(m.arity()));
  std::int64_t nw = 1;
  for (int s = 0; s < m.arity(); ++s) {
    sizes[static_cast<std::size_t>(s)] = m.slot_grid(s).size();
    nw *= sizes[static_cast<std::size_t>(s)];
  }
  std::vector<std::int64_t> w(sizes.size(), 0);
  for (std::int64_t st = 0; st < ns; ++st) {
    for (std::int64_t u = 0; u < nu; ++u) {
      std::fill(w.begin(), w.end(), 0);
      for (std::int64_t i = 0; i < nw; ++i) {
        fn(st, static_cast<int>(u), w);
        for (int s = m.arity() - 1; s >= 0; --s) {
          auto& ws = w[static_cast<std::size_t>(s)];
          if (++ws < sizes[static_cast<std::size_t>(s)]) break;
          ws = 0;
        }
      }
    }
  }
}

}  // namespace

json model_to_json(const SymbolicModel& model, const SubsystemClass& cls,
                   const ClassDesign& pitches) {
  json j;
  j["kind"] = "symbolic-model";
  j["class_id"] = model.class_id();
  j["class"] = class_to_json(cls);
  json p;
  p["eta_x"] = pitches.eta_x;
  p["eta_u"] = pitches.eta_u;
  j["pitches"] = std::move(p);
  j["state_grid"] = grid_to(model.state_grid());
  j["input_values"] = model.input_values();
  json slots = json::array();
  for (int s = 0; s < model.arity(); ++s) slots.push_back(grid_to(model.slot_grid(s)));
  j["slot_grids"] = std::move(slots);
  j["triples"] = model.triple_count();
  j["materialized"] = model.materialized();
  if (model.materialized()) {
    json lo = json::array(), hi = json::array(), out = json::array();
    std::vector<std::int64_t> pts;
    for_each_triple(model, [&](std::int64_t st, int u, const std::vector<std::int64_t>& w) {
      const auto s = model.successors(st, u, w);
      lo.push_back(s.lo);
      hi.push_back(s.hi);
      out.push_back(s.out ? 1 : 0);
    });
    json t;
    t["lo"] = std::move(lo);
    t["hi"] = std::move(hi);
    t["out"] = std::move(out);
    j["table"] = std::move(t);
  }
  return j;
}

SymbolicModel model_from_json(const json& j, std::uint64_t size_cap,
                              std::uint64_t materialize_threshold) {
  object_with(j,
              {"kind", "class_id", "class", "pitches", "state_grid", "input_values",
               "slot_grids", "triples", "materialized", "table"},
              "model dump");
  const json& kind = need(j, "kind", "model dump");
  if (!kind.is_string() || kind.get<std::string>() != "symbolic-model") {
    throw ConfigError("model dump: kind must be \"symbolic-model\"");
  }
  const json& cid = need(j, "class_id", "model dump");
  if (!cid.is_string()) throw ConfigError("model dump: class_id must be a string");
  const SubsystemClass cls =
      class_from_json(cid.get<std::string>(), need(j, "class", "model dump"), "model.class");

  const json& p = need(j, "pitches", "model dump");
  object_with(p, {"eta_x", "eta_u"}, "model.pitches");
  QuantDesign mini;
  ClassDesign cd;
  cd.eta_x = num(need(p, "eta_x", "model.pitches"), "model.pitches.eta_x");
  cd.eta_u = num(need(p, "eta_u", "model.pitches"), "model.pitches.eta_u");
  mini.classes[cls.id] = cd;

  const json& slots = need(j, "slot_grids", "model dump");
  if (!slots.is_array()) throw ConfigError("model.slot_grids: expected a list");
  std::vector<Grid> slot_grids;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    slot_grids.push_back(
        grid_from(slots[s], "model.slot_grids[" + std::to_string(s) + "]"));
  }
  if (static_cast<int>(slot_grids.size()) != cls.arity()) {
    throw ConfigError("model dump: slot grid count does not match the class arity");
  }

  const json& mat = need(j, "materialized", "model dump");
  if (!mat.is_boolean()) throw ConfigError("model dump: materialized must be a boolean");
  const bool was_materialized = mat.get<bool>();
  const std::uint64_t triples_hint = static_cast<std::uint64_t>(
      integer(need(j, "triples", "model dump"), "model.triples"));
  SymbolicModel model = build_symbolic_model(
      cls, mini, slot_grids, size_cap,
      was_materialized ? std::max(materialize_threshold, triples_hint) : 0);

  // the dumped geometry must be the rebuilt geometry
  const Grid want_state = grid_from(need(j, "state_grid", "model dump"), "model.state_grid");
  if (want_state.size() != model.state_grid().size() ||
      want_state.eta() != model.state_grid().eta()) {
    throw ConfigError("model dump: state grid does not match the rebuilt model");
  }
  const json& iv = need(j, "input_values", "model dump");
  if (!iv.is_array() || iv.size() != model.input_values().size()) {
    throw ConfigError("model dump: input list does not match the rebuilt model");
  }
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (num(iv[i], "model.input_values") != model.input_values()[i]) {
      throw ConfigError("model dump: input list does not match the rebuilt model");
    }
  }

  if (j.contains("table")) {
    const json& t = j["table"];
    object_with(t, {"lo", "hi", "out"}, "model.table");
    const json& lo = need(t, "lo", "model.table");
    const json& hi = need(t, "hi", "model.table");
    const json& out = need(t, "out", "model.table");
    const std::uint64_t triples = model.triple_count();
    if (lo.size() != triples || hi.size() != triples || out.size() != triples) {
      throw ConfigError("model dump: table length does not match the triple count");
    }
    std::uint64_t at = 0;
    bool ok = true;
    for_each_triple(model, [&](std::int64_t st, int u, const std::vector<std::int64_t>& w) {
      if (!ok) return;
      const auto s = model.successors(st, u, w);
      if (lo[at].get<std::int64_t>() != s.lo || hi[at].get<std::int64_t>() != s.hi ||
          (out[at].get<int>() != 0) != s.out) {
        ok = false;
      }
      ++at;
    });
    if (!ok) throw ConfigError("model dump: embedded table disagrees with the rebuilt transitions");
  }
  return model;
}

json controller_to_json(const SafetyController& ctrl) {
  json j;
  j["kind"] = "safety-controller";
  j["class_id"] = ctrl.class_id;
  j["iterations"] = ctrl.iterations;
  j["dom"] = ctrl.dom;
  json policy = json::array();
  for (const auto& [state, inputs] : ctrl.policy) {
    policy.push_back(json::array({state, inputs}));
  }
  j["policy"] = std::move(policy);
  json grids = json::array();
  for (const auto& g : ctrl.safe_internal) grids.push_back(grid_to(g));
  j["safe_internal"] = std::move(grids);
  return j;
}

SafetyController controller_from_json(const json& j) {
  object_with(j, {"kind", "class_id", "iterations", "dom", "policy", "safe_internal"},
              "controller dump");
  const json& kind = need(j, "kind", "controller dump");
  if (!kind.is_string() || kind.get<std::string>() != "safety-controller") {
    throw ConfigError("controller dump: kind must be \"safety-controller\"");
  }
  SafetyController c;
  const json& cid = need(j, "class_id", "controller dump");
  if (!cid.is_string()) throw ConfigError("controller dump: class_id must be a string");
  c.class_id = cid.get<std::string>();
  c.iterations =
      static_cast<int>(integer(need(j, "iterations", "controller dump"), "controller.iterations"));
  const json& dom = need(j, "dom", "controller dump");
  if (!dom.is_array()) throw ConfigError("controller.dom: expected a list");
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const std::int64_t s = integer(dom[i], "controller.dom[" + std::to_string(i) + "]");
    if (s <= prev) throw ConfigError("controller.dom: indices must be strictly ascending");
    prev = s;
    c.dom.push_back(s);
  }
  const json& policy = need(j, "policy", "controller dump");
  if (!policy.is_array()) throw ConfigError("controller.policy: expected a list");
  for (std::size_t i = 0; i < policy.size(); ++i) {
    const json& e = policy[i];
    const std::string ctx = "controller.policy[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[1].is_array()) {
      throw ConfigError(ctx + ": expected [state, [inputs...]]");
    }
    const std::int64_t state = integer(e[0], ctx + ".state");
    std::vector<int> inputs;
    for (std::size_t k = 0; k < e[1].size(); ++k) {
      inputs.push_back(static_cast<int>(integer(e[1][k], ctx + ".inputs")));
    }
    if (inputs.empty()) throw ConfigError(ctx + ": a domain state needs at least one input");
    c.policy.emplace(state, std::move(inputs));
  }
  if (c.policy.size() != c.dom.size()) {
    throw ConfigError("controller dump: policy entries do not cover the domain exactly");
  }
  for (std::int64_t s : c.dom) {
    if (c.policy.find(s) == c.policy.end()) {
      throw ConfigError("controller dump: domain state without a policy entry");
    }
  }
  const json& grids = need(j, "safe_internal", "controller dump");
  if (!grids.is_array()) throw ConfigError("controller.safe_internal: expected a list");
  for (std::size_t s = 0; s < grids.size(); ++s) {
    c.safe_internal.push_back(
        grid_from(grids[s], "controller.safe_internal[" + std::to_string(s) + "]"));
  }
  return c;
}

std::string trajectory_csv(const TrajectoryLog& log) {
  std::size_t slots = 0;
  for (const auto& r : log.rows) slots = std::max(slots, r.w.size());
  std::ostringstream os;
  os << "step,node,subnetwork,x,xhat,u";
  for (std::size_t s = 0; s < slots; ++s) os << ",w" << s;
  os << ",V,safe,asf_ok\n";
  for (const auto& r : log.rows) {
    os << r.step << ',' << r.node << ',' << r.subnet << ',' << fmt_double(r.x) << ','
       << fmt_double(r.xhat) << ',';
    if (r.has_input) os << fmt_double(r.u);
    for (std::size_t s = 0; s < slots; ++s) {
      os << ',';
      if (r.has_input && s < r.w.size()) os << fmt_double(r.w[s]);
    }
    os << ',' << fmt_double(r.v) << ',' << (r.safe ? 1 : 0) << ',' << (r.asf_ok ? 1 : 0)
       << '\n';
  }
  return os.str();
}

json run_summary_json(const TrajectoryLog& log) {
  json j;
  j["seed"] = log.seed;
  j["truncation"] = log.truncation;
  j["steps"] = log.steps;
  j["pass"] = log.summary.pass;
  j["completed"] = log.summary.completed;
  j["max_v"] = log.summary.max_v;
  j["max_vbar"] = log.summary.max_vbar;
  j["max_mismatch"] = log.summary.max_mismatch;
  j["failure"] = log.summary.failure;
  j["fail_step"] = log.summary.fail_step;
  j["fail_node"] = log.summary.fail_node;
  return j;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write to " + path + " failed");
}

}  // namespace synet::io
