#include "synet/designer.hh"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "synet/errors.hh"
#include "synet/grid.hh"

namespace synet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pair_name(const std::string& sub, const std::string& cls) {
  return sub + "/" + cls;
}

std::string type_name(const EdgeType& t) {
  return pair_name(t.reader_subnet, t.reader_class) + "<-" +
         pair_name(t.source_subnet, t.source_class) + "#" +
         std::to_string(t.slot);
}

void check_options(const NetworkPattern& pattern, const DesignOptions& opts) {
  if (!(opts.varpi > 0.0))
    throw ConfigError("accuracy target must be positive");
  if (!(opts.theta_u > 0.0 && opts.theta_u < 1.0))
    throw ConfigError("external-input margin share must lie in (0, 1)");
  if (opts.phi_policy != "zero" && opts.phi_policy != "fraction")
    throw ConfigError("unknown offset policy '" + opts.phi_policy + "'");
  if (!(opts.phi_fraction >= 0.0 && opts.phi_fraction < 1.0))
    throw ConfigError("offset fraction must lie in [0, 1)");
  for (const auto& [cls, v] : opts.eta_x) {
    if (!pattern.classes.count(cls))
      throw ConfigError("state pitch request names unknown class '" + cls + "'");
    if (!(v > 0.0))
      throw ConfigError("requested state pitch for '" + cls + "' must be positive");
  }
  for (const auto& [cls, v] : opts.eta_u) {
    if (!pattern.classes.count(cls))
      throw ConfigError("input pitch request names unknown class '" + cls + "'");
    if (!(v > 0.0))
      throw ConfigError("requested input pitch for '" + cls + "' must be positive");
  }
}

}  // namespace

QuantDesign run_design(const NetworkPattern& pattern,
                       const std::map<std::string, Certificate>& certs,
                       const std::vector<EdgeType>& types,
                       const DesignOptions& opts) {
  check_options(pattern, opts);
  for (const auto& [id, cls] : pattern.classes) {
    (void)cls;
    if (!certs.count(id))
      throw ConfigError("no certificate for class '" + id + "'");
  }

  QuantDesign d;
  d.varpi = opts.varpi;
  for (const auto& sn : pattern.subnetworks)
    d.scalings[sn.id] = subnet_scaling(class_gain_graph(pattern, types, sn.id, certs));

  bool spend = opts.phi_policy == "fraction";
  double frac = spend ? opts.phi_fraction : 0.0;

  // peel subnetworks sinks first; a subnetwork is ready once every
  // subnetwork it feeds has its budgets and offsets assigned
  std::set<std::string> remaining;
  for (const auto& sn : pattern.subnetworks) remaining.insert(sn.id);
  while (!remaining.empty()) {
    std::vector<std::string> wave;
    for (const auto& sn : pattern.subnetworks) {
      if (!remaining.count(sn.id)) continue;
      bool ready = true;
      for (const auto& t : types)
        if (t.cross && t.source_subnet == sn.id && remaining.count(t.reader_subnet))
          ready = false;
      if (ready) wave.push_back(sn.id);
    }
    if (wave.empty())
      throw TopologyError("cross couplings between subnetworks form a loop");

    for (const auto& s : wave) {
      const auto& sigma = d.scalings.at(s).sigma;
      double smax = 0.0;
      for (const auto& [cls, sg] : sigma) {
        (void)cls;
        smax = std::max(smax, sg);
      }
      if (!(smax > 0.0))
        throw ConfigError("subnetwork '" + s + "' hosts no classes");

      double r = kInf;
      bool fed_anyone = false;
      for (const auto& t : types) {
        if (!t.cross || t.source_subnet != s) continue;
        fed_anyone = true;
        double budget = d.vartheta_sc.at({t.reader_subnet, t.reader_class}) -
                        d.phi.at(t);
        if (!(budget > 0.0))
          throw InfeasibleError("no mismatch budget left on " + type_name(t));
        r = std::min(r, certs.at(t.source_class).alpha_lo().eval(budget) /
                            sigma.at(t.source_class));
      }
      if (!fed_anyone) r = opts.varpi / smax;
      if (!(r > 0.0))
        throw InfeasibleError("accuracy radius for '" + s + "' collapsed to zero");
      d.radius[s] = r;
      for (const auto& [cls, sg] : sigma) d.varpi_sc[{s, cls}] = sg * r;

      for (const auto& t : types) {
        if (t.cross || t.reader_subnet != s) continue;
        double f = 0.0;
        if (spend) {
          const auto& rc = certs.at(t.reader_class);
          double margin = one_minus(rc.kappa, d.varpi_sc.at({s, t.reader_class}));
          auto rw = rc.rho_w.linear_slope();
          if (!rw || *rw > 0.0) {
            double room = rc.rho_w.inverse(margin) -
                          certs.at(t.source_class)
                              .alpha_lo()
                              .inverse(d.varpi_sc.at({s, t.source_class}));
            if (!(room > 0.0))
              throw InfeasibleError("no offset room on " + type_name(t));
            f = frac * room;
          }
        }
        d.phi[t] = f;
      }

      for (const auto& [cls, sg] : sigma) {
        (void)sg;
        double th = 0.0;
        for (const auto& t : types) {
          if (t.cross || t.reader_subnet != s || t.reader_class != cls) continue;
          th = std::max(th, certs.at(t.source_class)
                                    .alpha_lo()
                                    .inverse(d.varpi_sc.at({s, t.source_class})) +
                                d.phi.at(t));
        }
        d.vartheta_sc[{s, cls}] = th;
      }

      // offsets on couplings from still-unassigned subnetworks into this one
      for (const auto& t : types) {
        if (!t.cross || t.reader_subnet != s) continue;
        d.phi[t] = frac * d.vartheta_sc.at({s, t.reader_class});
      }

      remaining.erase(s);
    }
    d.waves.push_back(wave);
  }

  for (const auto& [id, cls] : pattern.classes) {
    std::vector<std::string> hosts;
    for (const auto& [key, v] : d.varpi_sc) {
      (void)v;
      if (key.second == id) hosts.push_back(key.first);
    }
    if (hosts.empty()) continue;
    const auto& cert = certs.at(id);

    ClassDesign cd;
    cd.varpi = kInf;
    for (const auto& s : hosts) {
      cd.varpi = std::min(cd.varpi, d.varpi_sc.at({s, id}));
      cd.vartheta = std::max(cd.vartheta, d.vartheta_sc.at({s, id}));
    }

    auto pair_margin = [&](const std::string& s) {
      double m = one_minus(cert.kappa, d.varpi_sc.at({s, id})) -
                 cert.rho_w.eval(d.vartheta_sc.at({s, id}));
      if (!(m > 0.0))
        throw InfeasibleError("internal budget eats the contraction margin at " +
                              pair_name(s, id));
      return m;
    };
    double rmin = kInf;
    for (const auto& s : hosts) rmin = std::min(rmin, pair_margin(s));

    if (cls.inputs.finite()) {
      cd.eta_u = 0.0;
    } else {
      double span_u = cls.inputs.box.span();
      auto bs = cert.rho_u.linear_slope();
      double bound_u =
          (bs && *bs == 0.0) ? span_u : cert.rho_u.inverse(opts.theta_u * rmin);
      double v = std::min(bound_u, span_u);
      auto it = opts.eta_u.find(id);
      if (it != opts.eta_u.end()) v = std::min(v, it->second);
      if (!(v > 0.0))
        throw InfeasibleError("no admissible input pitch for class '" + id + "'");
      cd.eta_u = snap_pitch(span_u, v);
    }

    double used = cert.rho_u.eval(cd.eta_u);
    double bound_x = kInf;
    for (const auto& s : hosts) {
      double m = pair_margin(s) - used;
      if (!(m > 0.0))
        throw InfeasibleError("input pitch eats the contraction margin at " +
                              pair_name(s, id));
      bound_x = std::min(bound_x, cert.gamma_hat.inverse(m));
    }
    double span_x = cls.state_set.span();
    double v = std::min(bound_x, span_x);
    auto it = opts.eta_x.find(id);
    if (it != opts.eta_x.end()) v = std::min(v, it->second);
    if (!(v > 0.0))
      throw InfeasibleError("no admissible state pitch for class '" + id + "'");
    cd.eta_x = snap_pitch(span_x, v);
    cd.eta_x_bound = bound_x;
    cd.eta_x_slack = bound_x - cd.eta_x;
    d.classes[id] = cd;
  }

  d.varpi_min = kInf;
  d.epsilon_hat = 0.0;
  for (const auto& [key, v] : d.varpi_sc) {
    d.varpi_min = std::min(d.varpi_min, v);
    d.epsilon_hat =
        std::max(d.epsilon_hat, certs.at(key.second).alpha_lo().inverse(v));
  }
  if (!(d.varpi_min > 0.0))
    throw InfeasibleError("some accuracy radius is not positive");
  return d;
}

VerifyReport verify_design(const NetworkPattern& pattern,
                           const std::map<std::string, Certificate>& certs,
                           const std::vector<EdgeType>& types,
                           const QuantDesign& design) {
  VerifyReport rep;
  auto push = [&](const std::string& name, double lhs, double rhs, double slack,
                  bool pass) {
    rep.checks.push_back({name, lhs, rhs, slack, pass});
  };
  // lhs <= rhs up to roundoff
  auto le = [](double lhs, double rhs) {
    return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
  };

  for (const auto& [key, v] : design.varpi_sc)
    push("radius-positive " + pair_name(key.first, key.second), v, 0.0, v,
         v > 0.0);

  for (const auto& [s, sc] : design.scalings)
    push("contraction-rate " + s, sc.lambda, 1.0, 1.0 - sc.lambda,
         sc.lambda < 1.0);

  for (const auto& t : types) {
    if (t.cross) continue;
    auto sc = design.scalings.find(t.reader_subnet);
    if (sc == design.scalings.end() || !sc->second.sigma.count(t.reader_class) ||
        !sc->second.sigma.count(t.source_class)) {
      push("scaling-entry " + type_name(t), 0.0, 0.0, 0.0, false);
      continue;
    }
    double lhs = edge_gain_slope(certs.at(t.reader_class),
                                 certs.at(t.source_class)) *
                 sc->second.sigma.at(t.source_class);
    double rhs = sc->second.lambda * sc->second.sigma.at(t.reader_class);
    push("scaling-entry " + type_name(t), lhs, rhs, rhs - lhs, le(lhs, rhs));
  }

  for (const auto& t : types) {
    auto wsrc = design.varpi_sc.find({t.source_subnet, t.source_class});
    auto thr = design.vartheta_sc.find({t.reader_subnet, t.reader_class});
    auto f = design.phi.find(t);
    if (wsrc == design.varpi_sc.end() || thr == design.vartheta_sc.end() ||
        f == design.phi.end()) {
      push("edge-budget " + type_name(t), 0.0, 0.0, 0.0, false);
      continue;
    }
    double lhs =
        certs.at(t.source_class).alpha_lo().inverse(wsrc->second) + f->second;
    double rhs = thr->second;
    push("edge-budget " + type_name(t), lhs, rhs, rhs - lhs, le(lhs, rhs));
  }

  for (const auto& [key, w] : design.varpi_sc) {
    auto thr = design.vartheta_sc.find(key);
    auto cd = design.classes.find(key.second);
    if (thr == design.vartheta_sc.end() || cd == design.classes.end()) {
      push("one-step-margin " + pair_name(key.first, key.second), 0.0, 0.0, 0.0,
           false);
      continue;
    }
    const auto& cert = certs.at(key.second);
    double lhs = cert.kappa.eval(w) + cert.rho_w.eval(thr->second) +
                 cert.rho_u.eval(cd->second.eta_u) +
                 cert.gamma_hat.eval(cd->second.eta_x);
    push("one-step-margin " + pair_name(key.first, key.second), lhs, w, w - lhs,
         le(lhs, w));
  }

  for (const auto& [id, cd] : design.classes) {
    const auto& cert = certs.at(id);
    double used = cert.rho_u.eval(cd.eta_u);
    double bound = kInf;
    bool feasible = true;
    for (const auto& [key, w] : design.varpi_sc) {
      if (key.second != id) continue;
      double m = w - cert.kappa.eval(w) -
                 cert.rho_w.eval(design.vartheta_sc.at(key)) - used;
      if (!(m > 0.0)) {
        push("pitch-feasible " + pair_name(key.first, id), m, 0.0, m, false);
        feasible = false;
        continue;
      }
      bound = std::min(bound, cert.gamma_hat.inverse(m));
    }
    if (!feasible) continue;
    push("pitch-bound " + id, cd.eta_x, bound, bound - cd.eta_x,
         le(cd.eta_x, bound));
    double span = pattern.classes.at(id).state_set.span();
    push("pitch-span " + id, cd.eta_x, span, span - cd.eta_x,
         le(cd.eta_x, span));
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace synet
