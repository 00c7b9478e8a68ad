#include "synet/gains.hh"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "synet/errors.hh"

namespace synet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double required_slope(const KFn& f, const char* what) {
  auto s = f.linear_slope();
  if (!s)
    throw UnsupportedError(std::string("gain analysis needs a linear ") + what +
                           ", got " + f.describe());
  return *s;
}

/* Max cycle mean of a log-weighted digraph plus one attaining cycle.
   Runs on each strongly connected piece and keeps the best. */
struct CycleMeanResult {
  bool has_cycle = false;
  double mean = kNegInf;
  std::vector<int> cycle;
};

CycleMeanResult max_cycle_mean(
    int n, const std::vector<std::vector<std::pair<int, double>>>& out_log) {
  std::vector<std::vector<int>> plain(n);
  for (int u = 0; u < n; ++u)
    for (const auto& [v, w] : out_log[u]) {
      (void)w;
      plain[u].push_back(v);
    }
  auto dec = decompose_raw(n, plain);
  CycleMeanResult best;
  for (const auto& comp : dec.members) {
    int m = static_cast<int>(comp.size());
    std::vector<int> pos(n, -1);
    for (int i = 0; i < m; ++i) pos[comp[i]] = i;
    // local edges
    std::vector<std::vector<std::pair<int, double>>> edges(m);
    bool any = false;
    for (int i = 0; i < m; ++i)
      for (const auto& [v, w] : out_log[comp[i]])
        if (pos[v] >= 0) {
          edges[i].push_back({pos[v], w});
          any = true;
        }
    if (!any) continue;
    // D[k][v]: best k-edge walk weight from local 0; parents for recovery
    std::vector<std::vector<double>> D(m + 1, std::vector<double>(m, kNegInf));
    std::vector<std::vector<int>> par(m + 1, std::vector<int>(m, -1));
    D[0][0] = 0.0;
    for (int k = 1; k <= m; ++k)
      for (int u = 0; u < m; ++u) {
        if (D[k - 1][u] == kNegInf) continue;
        for (const auto& [v, w] : edges[u])
          if (D[k - 1][u] + w > D[k][v]) {
            D[k][v] = D[k - 1][u] + w;
            par[k][v] = u;
          }
      }
    double mu = kNegInf;
    int arg = -1;
    for (int v = 0; v < m; ++v) {
      if (D[m][v] == kNegInf) continue;
      double worst = std::numeric_limits<double>::infinity();
      for (int k = 0; k < m; ++k) {
        if (D[k][v] == kNegInf) continue;
        worst = std::min(worst, (D[m][v] - D[k][v]) / static_cast<double>(m - k));
      }
      if (worst > mu) {
        mu = worst;
        arg = v;
      }
    }
    if (arg < 0) continue;
    // walk the parent chain; the first repeated node closes a critical cycle
    std::vector<int> walk;
    std::vector<int> seen(m, -1);
    int v = arg;
    std::vector<int> cyc;
    for (int k = m; k >= 0 && v >= 0; --k) {
      if (seen[v] >= 0) {
        for (size_t i = seen[v]; i < walk.size(); ++i) cyc.push_back(comp[walk[i]]);
        break;
      }
      seen[v] = static_cast<int>(walk.size());
      walk.push_back(v);
      v = k > 0 ? par[k][v] : -1;
    }
    if (mu > best.mean) {
      best.has_cycle = true;
      best.mean = mu;
      best.cycle = cyc;
    }
  }
  return best;
}

/* sigma from longest-path potentials of the mean-normalized graph, checked
   entrywise against lambda. */
std::vector<double> scaling_vector(
    int n, const std::vector<std::vector<std::pair<int, double>>>& in_edges,
    double lambda) {
  double log_l = std::log(lambda);
  std::vector<double> s(n, 0.0);
  for (int round = 0; round <= n; ++round) {
    for (int i = 0; i < n; ++i)
      for (const auto& [j, slope] : in_edges[i]) {
        if (slope <= 0.0) continue;
        s[i] = std::max(s[i], s[j] + std::log(slope) - log_l);
      }
  }
  double smax = *std::max_element(s.begin(), s.end());
  std::vector<double> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = std::exp(s[i] - smax);
  for (int i = 0; i < n; ++i)
    for (const auto& [j, slope] : in_edges[i])
      if (slope * sigma[j] > lambda * sigma[i] * (1.0 + 1e-9))
        throw NumericError("scaling vector failed the entrywise gain check",
                           slope * sigma[j] - lambda * sigma[i]);
  return sigma;
}

struct LoopAnalysis {
  std::string method;
  double lambda = 0.0;
  std::vector<double> sigma;
};

/* Shared core for node-level and class-level graphs.  `names` is only for
   error text; ids label the cycle in thrown errors. */
LoopAnalysis analyze(int n,
                     const std::vector<std::vector<std::pair<int, double>>>& in_edges,
                     const std::vector<int>& ids, bool force_cycle_mean) {
  double gmax = 0.0;
  for (const auto& row : in_edges)
    for (const auto& [j, slope] : row) {
      (void)j;
      if (slope < 0.0) throw DomainError("gain slopes are nonnegative");
      gmax = std::max(gmax, slope);
    }
  LoopAnalysis out;
  if (!force_cycle_mean && gmax < 1.0) {
    out.method = "uniform-gain-shortcut";
    out.lambda = gmax;
    out.sigma.assign(n, 1.0);
    return out;
  }
  // cycle-mean estimate over the positive-slope subgraph
  std::vector<std::vector<std::pair<int, double>>> out_log(n);
  for (int i = 0; i < n; ++i)
    for (const auto& [j, slope] : in_edges[i])
      if (slope > 0.0) out_log[j].push_back({i, std::log(slope)});
  auto cm = max_cycle_mean(n, out_log);
  out.method = "cycle-mean";
  if (!cm.has_cycle) {
    // loop-free gain structure: any rate below one works; pick one and
    // let the scaling construction absorb the edges
    if (gmax == 0.0) {
      out.lambda = 0.0;
      out.sigma.assign(n, 1.0);
      return out;
    }
    out.lambda = 0.5;
    out.sigma = scaling_vector(n, in_edges, out.lambda);
    return out;
  }
  double lambda = std::exp(cm.mean);
  if (!(lambda < 1.0)) {
    std::vector<int> cycle_ids;
    for (int v : cm.cycle) cycle_ids.push_back(ids[v]);
    throw SmallGainError(
        "internal gains reach " + std::to_string(lambda) +
            " around a loop; the composition cannot be certified",
        cycle_ids);
  }
  out.lambda = lambda;
  out.sigma = scaling_vector(n, in_edges, lambda);
  return out;
}

}  // namespace

KFn Certificate::alpha_lo() const {
  auto s = ell.linear_slope();
  if (!s || *s <= 0.0)
    throw UnsupportedError("output-to-state comparison must be linear here, got " +
                           ell.describe());
  if (*s == 1.0) return psi_lo;
  return KFn::compose(psi_lo, KFn::linear(1.0 / *s));
}

Certificate derive_affine_certificate(const SubsystemClass& cls) {
  Certificate cert;
  double a = std::abs(cls.dyn.a);
  if (!(a < 1.0))
    throw CertificateError("class " + cls.id +
                           ": one-step contraction needs |a| < 1, got " +
                           std::to_string(cls.dyn.a));
  double dsum = 0.0;
  for (double d : cls.dyn.d) dsum += std::abs(d);
  cert.kappa = KFn::linear(a);
  cert.rho_w = KFn::linear(dsum);
  cert.rho_u = KFn::linear(std::abs(cls.dyn.b));
  return cert;
}

AssumptionBounds uniform_bounds(const std::map<std::string, Certificate>& certs) {
  if (certs.empty()) throw DomainError("no certificates given");
  AssumptionBounds b;
  b.alpha_lo_slope_min = std::numeric_limits<double>::infinity();
  for (const auto& [id, c] : certs) {
    (void)id;
    b.alpha_lo_slope_min =
        std::min(b.alpha_lo_slope_min, required_slope(c.alpha_lo(), "bound"));
    b.kappa_slope_max =
        std::max(b.kappa_slope_max, required_slope(c.kappa, "contraction"));
    b.rho_w_slope_max =
        std::max(b.rho_w_slope_max, required_slope(c.rho_w, "sensitivity"));
  }
  if (!(b.alpha_lo_slope_min > 0.0))
    throw CertificateError("distance lower bounds must have positive slope");
  return b;
}

double edge_gain_slope(const Certificate& reader, const Certificate& source) {
  double kap = required_slope(reader.kappa, "contraction");
  if (!(kap < 1.0))
    throw CertificateError("contraction slope must stay below one");
  double rw = required_slope(reader.rho_w, "sensitivity");
  double al = required_slope(source.alpha_lo(), "bound");
  if (!(al > 0.0))
    throw CertificateError("distance lower bound must have positive slope");
  return rw / ((1.0 - kap) * al);
}

std::vector<ComponentGains> build_gain_matrix(
    const TruncatedNetwork& net, const SccDecomposition& dec,
    const std::map<std::string, Certificate>& certs) {
  std::vector<ComponentGains> out(dec.members.size());
  for (size_t c = 0; c < dec.members.size(); ++c) {
    out[c].nodes = dec.members[c];
    out[c].in_edges.resize(dec.members[c].size());
  }
  std::vector<int> pos(net.nodes.size());
  for (size_t c = 0; c < dec.members.size(); ++c)
    for (size_t i = 0; i < dec.members[c].size(); ++i)
      pos[dec.members[c][i]] = static_cast<int>(i);
  for (const auto& node : net.nodes) {
    int c = dec.comp_of[node.id];
    std::set<int> seen;
    for (int src : node.sources) {
      if (dec.comp_of[src] != c) continue;          // cross edges are not loops
      if (!seen.insert(src).second) continue;       // one slot per neighbour counts
      double slope = edge_gain_slope(certs.at(node.class_id),
                                     certs.at(net.nodes[src].class_id));
      out[c].in_edges[pos[node.id]].push_back({pos[src], slope});
    }
  }
  return out;
}

SmallGainCert check_small_gain(const ComponentGains& cg, bool force_cycle_mean) {
  auto la = analyze(static_cast<int>(cg.nodes.size()), cg.in_edges, cg.nodes,
                    force_cycle_mean);
  return {la.method, la.lambda, la.sigma};
}

ClassGainGraph class_gain_graph(const NetworkPattern& pattern,
                                const std::vector<EdgeType>& types,
                                const std::string& subnet,
                                const std::map<std::string, Certificate>& certs) {
  ClassGainGraph g;
  std::set<std::string> cls;
  // every class the subnetwork can host gets a scaling entry, coupled or not
  for (const auto& sn : pattern.subnetworks)
    if (sn.id == subnet)
      for (const auto& rule : sn.rules) cls.insert(rule.class_id);
  for (const auto& t : types)
    if (!t.cross && t.reader_subnet == subnet) {
      cls.insert(t.reader_class);
      cls.insert(t.source_class);
    }
  g.classes.assign(cls.begin(), cls.end());
  g.in_edges.resize(g.classes.size());
  auto pos = [&](const std::string& c) {
    return static_cast<int>(std::lower_bound(g.classes.begin(), g.classes.end(), c) -
                            g.classes.begin());
  };
  std::set<std::pair<int, int>> seen;
  for (const auto& t : types) {
    if (t.cross || t.reader_subnet != subnet) continue;
    int r = pos(t.reader_class), s = pos(t.source_class);
    if (!seen.insert({r, s}).second) continue;  // slots share one gain value
    double slope =
        edge_gain_slope(certs.at(t.reader_class), certs.at(t.source_class));
    g.in_edges[r].push_back({s, slope});
  }
  return g;
}

SubnetScaling subnet_scaling(const ClassGainGraph& g, bool force_cycle_mean) {
  std::vector<int> ids(g.classes.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  auto la = analyze(static_cast<int>(g.classes.size()), g.in_edges, ids,
                    force_cycle_mean);
  SubnetScaling sc;
  sc.method = la.method;
  sc.lambda = la.lambda;
  for (size_t i = 0; i < g.classes.size(); ++i) sc.sigma[g.classes[i]] = la.sigma[i];
  return sc;
}

}  // namespace synet
