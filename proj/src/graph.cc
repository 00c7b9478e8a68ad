#include "synet/graph.hh"

#include <algorithm>
#include <set>

#include "synet/errors.hh"

namespace synet {

SccDecomposition decompose_raw(int n, const std::vector<std::vector<int>>& out_adj) {
  // Tarjan with an explicit stack
  SccDecomposition dec;
  dec.comp_of.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;

  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < out_adj[f.v].size()) {
        int w = out_adj[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            dec.comp_of[w] = static_cast<int>(dec.members.size());
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          dec.members.push_back(std::move(comp));
        }
      }
    }
  }

  int m = static_cast<int>(dec.members.size());
  std::vector<std::set<int>> outs(m);
  for (int v = 0; v < n; ++v)
    for (int w : out_adj[v])
      if (dec.comp_of[v] != dec.comp_of[w]) outs[dec.comp_of[v]].insert(dec.comp_of[w]);
  dec.comp_out.resize(m);
  std::vector<int> indeg(m, 0);
  for (int c = 0; c < m; ++c) {
    dec.comp_out[c].assign(outs[c].begin(), outs[c].end());
    for (int d : dec.comp_out[c]) ++indeg[d];
    if (dec.comp_out[c].empty()) dec.bottom.push_back(c);
  }
  // Kahn order over the condensation
  std::vector<int> ready;
  for (int c = 0; c < m; ++c)
    if (indeg[c] == 0) ready.push_back(c);
  while (!ready.empty()) {
    int c = ready.back();
    ready.pop_back();
    dec.topo_order.push_back(c);
    for (int d : dec.comp_out[c])
      if (--indeg[d] == 0) ready.push_back(d);
  }
  return dec;
}

SccDecomposition decompose(const TruncatedNetwork& net) {
  int n = static_cast<int>(net.nodes.size());
  std::vector<std::vector<int>> out_adj(n);
  for (const auto& node : net.nodes)
    for (int src : node.sources) out_adj[src].push_back(node.id);
  auto dec = decompose_raw(n, out_adj);
  for (const auto& [id, range] : net.ranges) {
    int comp = dec.comp_of[range.first];
    const auto& mem = dec.members[comp];
    bool exact = static_cast<int>(mem.size()) == range.second - range.first + 1 &&
                 mem.front() == range.first && mem.back() == range.second;
    if (!exact)
      throw TopologyError(
          "subnetwork " + id +
          " is not one strongly connected block at this truncation");
  }
  return dec;
}

std::vector<EdgeType> realized_edge_types(const TruncatedNetwork& net) {
  std::set<EdgeType> types;
  for (const auto& node : net.nodes) {
    for (size_t s = 0; s < node.sources.size(); ++s) {
      const auto& src = net.nodes[node.sources[s]];
      EdgeType t;
      t.reader_subnet = node.subnet;
      t.reader_class = node.class_id;
      t.slot = static_cast<int>(s);
      t.source_subnet = src.subnet;
      t.source_class = src.class_id;
      t.cross = src.subnet != node.subnet;
      types.insert(t);
    }
  }
  return {types.begin(), types.end()};
}

std::vector<EdgeType> pattern_edge_types(const NetworkPattern& p) {
  int max_off = 1, max_idx = 0, max_link_node = 0;
  for (const auto& s : p.subnetworks)
    for (const auto& r : s.rules) {
      for (int o : r.offsets) max_off = std::max(max_off, std::abs(o));
      for (int ix : r.indices) max_idx = std::max(max_idx, ix);
    }
  for (const auto& l : p.links) max_link_node = std::max(max_link_node, l.node);
  int probe = std::max({6, 2 * max_off + max_idx + 4, max_link_node + 2});
  if (probe % 2) ++probe;
  // two consecutive sizes expose both tail parities
  std::set<EdgeType> types;
  for (int n : {probe, probe + 1})
    for (const auto& t : realized_edge_types(instantiate(p, n))) types.insert(t);
  return {types.begin(), types.end()};
}

}  // namespace synet
