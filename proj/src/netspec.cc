#include "synet/netspec.hh"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>

#include "synet/errors.hh"
#include "synet/grid.hh"

namespace synet {

namespace {

bool rule_matches(const MatchRule& r, int local) {
  switch (r.kind) {
    case MatchRule::Kind::kAny:
      return true;
    case MatchRule::Kind::kParity:
      return (local % 2 == 1) == r.odd;
    case MatchRule::Kind::kIndices:
      return std::find(r.indices.begin(), r.indices.end(), local) !=
             r.indices.end();
  }
  return false;
}

const MatchRule* match_for(const SubnetworkPattern& s, int local) {
  for (const auto& r : s.rules)
    if (rule_matches(r, local)) return &r;
  return nullptr;
}

void check_dynamics(const std::string& cls, const AffineDynamics& d) {
  if (!std::isfinite(d.a) || !std::isfinite(d.b))
    throw ConfigError("class " + cls + ": coefficients must be finite");
  for (double v : d.d)
    if (!std::isfinite(v))
      throw ConfigError("class " + cls + ": coupling weights must be finite");
}

}  // namespace

void validate(const NetworkPattern& p) {
  if (p.boundary_rule != "cross-feed")
    throw ConfigError("unsupported boundary rule '" + p.boundary_rule +
                      "' (this release implements cross-feed)");
  if (p.classes.empty()) throw ConfigError("no subsystem classes declared");
  for (const auto& [id, c] : p.classes) {
    if (c.state_set.empty() || c.safe_set.empty())
      throw ConfigError("class " + id + ": state and safe sets must be nonempty");
    if (!c.safe_set.subset_of(c.state_set, Grid::kEdgeTol))
      throw ConfigError("class " + id + ": safe set must lie inside the state set");
    if (c.inputs.finite()) {
      for (size_t i = 1; i < c.inputs.values.size(); ++i)
        if (!(c.inputs.values[i - 1] < c.inputs.values[i]))
          throw ConfigError("class " + id +
                            ": input values must be strictly ascending");
    } else if (c.inputs.box.empty()) {
      throw ConfigError("class " + id + ": inputs need values or a box");
    }
    check_dynamics(id, c.dyn);
  }
  if (p.subnetworks.empty()) throw ConfigError("no subnetworks declared");
  std::set<std::string> subnet_ids;
  for (const auto& s : p.subnetworks) {
    if (!subnet_ids.insert(s.id).second)
      throw ConfigError("duplicate subnetwork id " + s.id);
    if (s.rules.empty())
      throw ConfigError("subnetwork " + s.id + " has no rules");
    for (const auto& r : s.rules) {
      auto it = p.classes.find(r.class_id);
      if (it == p.classes.end())
        throw ConfigError("subnetwork " + s.id + " uses unknown class " +
                          r.class_id);
      if (static_cast<int>(r.offsets.size()) != it->second.arity())
        throw ConfigError("subnetwork " + s.id + ": rule for class " +
                          r.class_id + " must give one offset per slot");
      for (int o : r.offsets)
        if (o == 0)
          throw ConfigError("subnetwork " + s.id + ": offsets must be nonzero");
      for (int ix : r.indices)
        if (ix < 1)
          throw ConfigError("subnetwork " + s.id + ": rule indices are 1-based");
    }
  }
  std::set<std::tuple<std::string, int, int>> link_targets;
  std::map<std::string, std::vector<std::string>> link_adj;
  for (const auto& l : p.links) {
    if (!subnet_ids.count(l.from) || !subnet_ids.count(l.to))
      throw ConfigError("link references unknown subnetwork");
    if (l.from == l.to)
      throw TopologyError("link from a subnetwork to itself");
    if (l.node < 1 || l.slot < 0)
      throw ConfigError("link node is 1-based and slot 0-based");
    const SubnetworkPattern* target = nullptr;
    for (const auto& s : p.subnetworks)
      if (s.id == l.to) target = &s;
    const MatchRule* r = match_for(*target, l.node);
    if (!r)
      throw ConfigError("link target node " + std::to_string(l.node) +
                        " matches no rule of " + l.to);
    if (l.slot >= static_cast<int>(r->offsets.size()))
      throw ConfigError("link slot out of range for class " + r->class_id);
    if (!link_targets.insert({l.to, l.node, l.slot}).second)
      throw ConfigError("two links feed the same slot of " + l.to);
    link_adj[l.from].push_back(l.to);
  }
  // links must not close a loop between subnetworks
  std::map<std::string, int> color;  // 0 unseen, 1 active, 2 done
  std::function<void(const std::string&)> dfs = [&](const std::string& u) {
    color[u] = 1;
    for (const auto& v : link_adj[u]) {
      if (color[v] == 1)
        throw TopologyError("links form a cycle between subnetworks at " + v);
      if (color[v] == 0) dfs(v);
    }
    color[u] = 2;
  };
  for (const auto& s : p.subnetworks)
    if (color[s.id] == 0) dfs(s.id);
}

TruncatedNetwork instantiate(const NetworkPattern& p, int truncation) {
  if (truncation < 1)
    throw ConfigError("truncation must be at least 1");
  TruncatedNetwork net;
  net.pattern = &p;
  net.truncation = truncation;
  std::map<std::string, int> base;
  int next = 0;
  for (const auto& s : p.subnetworks) {
    base[s.id] = next;
    net.ranges[s.id] = {next, next + truncation - 1};
    for (int local = 1; local <= truncation; ++local) {
      const MatchRule* r = match_for(s, local);
      if (!r)
        throw ConfigError("no rule of subnetwork " + s.id + " matches node " +
                          std::to_string(local));
      NodeInstance node;
      node.id = next + local - 1;
      node.subnet = s.id;
      node.local = local;
      node.class_id = r->class_id;
      for (int off : r->offsets) {
        int t = local + off;
        int wrapped = ((t - 1) % truncation + truncation) % truncation + 1;
        if (wrapped == local)
          throw TopologyError("subnetwork " + s.id + ": offset " +
                              std::to_string(off) + " wraps onto node " +
                              std::to_string(local) + " itself at truncation " +
                              std::to_string(truncation));
        node.sources.push_back(next + wrapped - 1);
      }
      net.nodes.push_back(node);
    }
    next += truncation;
  }
  for (const auto& l : p.links) {
    if (l.node > truncation)
      throw TopologyError("link into " + l.to + " targets node " +
                          std::to_string(l.node) + " beyond truncation " +
                          std::to_string(truncation));
    int target = base[l.to] + l.node - 1;
    auto& slots = net.nodes[target].sources;
    if (l.slot >= static_cast<int>(slots.size()))
      throw ConfigError("link slot out of range at node " + std::to_string(target));
    slots[l.slot] = base[l.from] + truncation - 1;
  }
  return net;
}

}  // namespace synet
