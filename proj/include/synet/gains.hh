#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "synet/graph.hh"
#include "synet/kfun.hh"
#include "synet/netspec.hh"

namespace synet {

/* Incremental stability certificate of one subsystem class, phrased as
   comparison functions: sandwich bounds on the distance measure, one-step
   contraction, and sensitivities to internal inputs, external inputs, and
   state quantization. */
struct Certificate {
  KFn psi_lo = KFn::identity();
  KFn psi_hi = KFn::identity();
  KFn kappa = KFn::linear(0.0);
  KFn rho_w = KFn::linear(0.0);
  KFn rho_u = KFn::linear(0.0);
  KFn gamma_hat = KFn::identity();
  KFn ell = KFn::identity();  // output-to-state comparison

  /* Lower bound on the distance measure as a function of output mismatch:
     psi_lo composed with the inverse of ell.  ell must be linear here. */
  KFn alpha_lo() const;
};

/* Certificate for the affine class with V(x,x') = |x-x'|.  Requires the
   state coefficient to contract (|a| < 1). */
Certificate derive_affine_certificate(const SubsystemClass& cls);

/* Uniform envelopes across classes; these are what make the analysis
   independent of the instantiated size. */
struct AssumptionBounds {
  double alpha_lo_slope_min = 0.0;
  double kappa_slope_max = 0.0;
  double rho_w_slope_max = 0.0;
};
AssumptionBounds uniform_bounds(const std::map<std::string, Certificate>& certs);

/* Slope of the internal gain a reader places on any one neighbour:
   rho_w / ((1 - kappa) * alpha_lo), all linear. */
double edge_gain_slope(const Certificate& reader, const Certificate& source);

/* Internal gains restricted to one strongly connected component. */
struct ComponentGains {
  std::vector<int> nodes;  // global node ids, ascending
  // per local position: (source local position, gain slope)
  std::vector<std::vector<std::pair<int, double>>> in_edges;
};

std::vector<ComponentGains> build_gain_matrix(
    const TruncatedNetwork& net, const SccDecomposition& dec,
    const std::map<std::string, Certificate>& certs);

/* Verified scaling for one component: gains weighted by sigma contract at
   rate lambda < 1.  method records how it was found. */
struct SmallGainCert {
  std::string method;  // "uniform-gain-shortcut" or "cycle-mean"
  double lambda = 0.0;
  std::vector<double> sigma;  // aligned with ComponentGains::nodes
};
SmallGainCert check_small_gain(const ComponentGains& cg,
                               bool force_cycle_mean = false);

/* Class-level gain multigraph of one subnetwork.  Cycle means here bound the
   cycle means of every truncation, because any instantiated cycle projects
   to a closed walk over classes. */
struct ClassGainGraph {
  std::vector<std::string> classes;  // ascending
  std::vector<std::vector<std::pair<int, double>>> in_edges;
};
ClassGainGraph class_gain_graph(const NetworkPattern& pattern,
                                const std::vector<EdgeType>& types,
                                const std::string& subnet,
                                const std::map<std::string, Certificate>& certs);

struct SubnetScaling {
  std::string method;
  double lambda = 0.0;
  std::map<std::string, double> sigma;  // per class, max entry 1
};
SubnetScaling subnet_scaling(const ClassGainGraph& g,
                             bool force_cycle_mean = false);

}  // namespace synet
