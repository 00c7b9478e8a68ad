#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "synet/errors.hh"
#include "synet/io.hh"
#include "synet/pipeline.hh"
#include "synet/traffic_config.hh"
#include "synet/util.hh"

namespace {

using namespace synet;

struct Opts {
  std::string config;
  std::string out;
  std::optional<double> varpi;
  std::optional<int> truncation;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_size;
};

void apply_overrides(NetworkPattern& p, const Opts& o) {
  if (o.varpi) {
    if (!(*o.varpi > 0.0)) throw ConfigError("--varpi must be positive");
    p.design.varpi = *o.varpi;
  }
  if (o.truncation) {
    if (*o.truncation < 1) throw ConfigError("--truncation must be at least 1");
    p.truncation = *o.truncation;
  }
  if (o.steps) {
    if (*o.steps < 0) throw ConfigError("--steps must be nonnegative");
    p.sim.steps = *o.steps;
  }
  if (o.seed) p.sim.seeds = {*o.seed};
  if (o.max_size) {
    if (*o.max_size == 0) throw ConfigError("--max-size must be positive");
    p.max_abstraction_size = *o.max_size;
  }
}

NetworkPattern load(const Opts& o) {
  NetworkPattern p = io::load_pattern(o.config);
  apply_overrides(p, o);
  return p;
}

std::string out_path(const Opts& o, const std::string& name) {
  return (std::filesystem::path(o.out) / name).string();
}

void ensure_out(const Opts& o) {
  if (!o.out.empty()) std::filesystem::create_directories(o.out);
}

void write_json(const Opts& o, const std::string& name, const io::json& j) {
  io::write_text(out_path(o, name), j.dump(2) + "\n");
}

int cmd_validate(const Opts& o) {
  NetworkPattern p = load(o);
  validate(p);
  const TruncatedNetwork net = instantiate(p, p.truncation);
  const auto types = pattern_edge_types(p);
  std::cout << "network: " << p.name << "\n";
  std::cout << "classes: " << p.classes.size() << " (";
  bool first = true;
  for (const auto& [id, cls] : p.classes) {
    std::cout << (first ? "" : ", ") << id << " arity " << cls.arity();
    first = false;
  }
  std::cout << ")\n";
  std::cout << "subnetworks: " << p.subnetworks.size() << ", links: " << p.links.size()
            << "\n";
  std::cout << "truncation " << p.truncation << " -> " << net.nodes.size() << " nodes, "
            << types.size() << " coupling kinds\n";
  std::cout << "ok\n";
  return 0;
}

int cmd_design(const Opts& o) {
  NetworkPattern p = load(o);
  const DesignBundle b = design_pipeline(p);
  const VerifyReport rep = verify_design(p, b.certs, b.types, b.design);
  for (const auto& [id, cd] : b.design.classes) {
    std::cout << "class " << id << ": varpi " << format_fixed(cd.varpi, 4) << ", vartheta "
              << format_fixed(cd.vartheta, 4) << ", eta_u " << format_fixed(cd.eta_u, 4)
              << ", eta_x " << format_fixed(cd.eta_x, 4) << " (bound "
              << format_fixed(cd.eta_x_bound, 6) << ", slack "
              << format_fixed(cd.eta_x_slack, 6) << ")\n";
  }
  for (const auto& [s, sc] : b.design.scalings) {
    std::cout << "subnetwork " << s << ": radius "
              << format_fixed(b.design.radius.at(s), 4) << ", lambda "
              << format_fixed(sc.lambda, 6) << " (" << sc.method << ")\n";
  }
  std::cout << "epsilon_hat: " << format_fixed(b.design.epsilon_hat, 4) << "\n";
  std::cout << "verify: " << (rep.pass ? "pass" : "FAIL") << " (" << rep.checks.size()
            << " checks)\n";
  if (!o.out.empty()) {
    ensure_out(o);
    write_json(o, "design.json", io::design_report(b.design));
    write_json(o, "certificates.json", io::certificate_report(b.certs, b.design));
    write_json(o, "verify.json", io::verify_report_json(rep));
  }
  return rep.pass ? 0 : 1;
}

int cmd_abstract(const Opts& o) {
  NetworkPattern p = load(o);
  const DesignBundle b = design_pipeline(p);
  const auto models = build_models(p, b);
  ensure_out(o);
  for (const auto& [id, m] : models) {
    std::int64_t internal = 1;
    for (int s = 0; s < m.arity(); ++s) internal *= m.slot_grid(s).size();
    std::cout << "model " << id << ": " << m.state_grid().size() << " states, "
              << m.input_values().size() << " inputs, " << internal
              << " internal points, " << m.triple_count() << " triples"
              << (m.materialized() ? " (table in memory)" : " (on demand)") << "\n";
    if (!o.out.empty()) {
      write_json(o, "model_" + id + ".json",
                 io::model_to_json(m, p.classes.at(id), b.design.classes.at(id)));
    }
  }
  return 0;
}

int cmd_synthesize(const Opts& o) {
  NetworkPattern p = load(o);
  const DesignBundle b = design_pipeline(p);
  const auto models = build_models(p, b);
  const auto ctrls = synthesize_controllers(p, b, models);
  ensure_out(o);
  bool any_empty = false;
  for (const auto& [id, c] : ctrls) {
    std::cout << "controller " << id << ": domain " << c.dom.size() << " of "
              << models.at(id).state_grid().size() << " states, " << c.iterations
              << " sweeps\n";
    if (c.dom.empty()) any_empty = true;
    if (!o.out.empty()) write_json(o, "controller_" + id + ".json", io::controller_to_json(c));
  }
  if (any_empty) {
    std::cout << "FAIL: at least one controller domain is empty\n";
    return 1;
  }
  return 0;
}

int cmd_simulate(const Opts& o) {
  NetworkPattern p = load(o);
  const DesignBundle b = design_pipeline(p);
  const auto models = build_models(p, b);
  const auto ctrls = synthesize_controllers(p, b, models);
  const auto logs = run_closed_loop(p, b, models, ctrls, p.truncation, p.sim);
  ensure_out(o);
  bool all_pass = true;
  for (const auto& log : logs) {
    const RunSummary& s = log.summary;
    std::cout << "seed " << log.seed << ": " << (s.pass ? "pass" : "FAIL") << ", "
              << s.completed << "/" << log.steps << " steps, max V "
              << format_fixed(s.max_v, 4) << ", max mismatch "
              << format_fixed(s.max_mismatch, 4);
    if (!s.pass) std::cout << " (" << s.failure << ")";
    std::cout << "\n";
    all_pass = all_pass && s.pass;
    if (!o.out.empty()) {
      const std::string tag = std::to_string(log.seed);
      io::write_text(out_path(o, "trajectory_" + tag + ".csv"), io::trajectory_csv(log));
      write_json(o, "summary_" + tag + ".json", io::run_summary_json(log));
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_verify(const Opts& o) {
  NetworkPattern p = load(o);
  const DesignBundle b = design_pipeline(p);
  bool ok = true;
  auto line = [&ok](bool pass, const std::string& what) {
    std::cout << (pass ? "ok   " : "FAIL ") << what << "\n";
    ok = ok && pass;
  };

  const VerifyReport rep = verify_design(p, b.certs, b.types, b.design);
  double min_slack = 0.0;
  bool have_slack = false;
  for (const auto& c : rep.checks) {
    if (!have_slack || c.slack < min_slack) min_slack = c.slack;
    have_slack = true;
  }
  line(rep.pass, "design inequalities (" + std::to_string(rep.checks.size()) +
                     " checks, min slack " + format_fixed(min_slack, 6) + ")");

  if (!o.out.empty()) {
    const std::string path = out_path(o, "design.json");
    if (std::filesystem::exists(path)) {
      const std::string want = io::design_report(b.design).dump(2) + "\n";
      line(io::read_text(path) == want, "design artifact matches a fresh design");
    }
  }

  const auto models = build_models(p, b);
  for (const auto& [id, m] : models) {
    if (!o.out.empty()) {
      const std::string path = out_path(o, "model_" + id + ".json");
      if (std::filesystem::exists(path)) {
        bool good = true;
        std::string why;
        try {
          io::model_from_json(io::json::parse(io::read_text(path)),
                              p.max_abstraction_size);
        } catch (const Error& e) {
          good = false;
          why = e.what();
        }
        line(good, "model artifact " + id + (good ? "" : ": " + why));
      }
    }
  }

  std::map<std::string, SafetyController> loaded;
  bool from_dumps = !o.out.empty();
  if (from_dumps) {
    for (const auto& [id, cls] : p.classes) {
      const std::string path = out_path(o, "controller_" + id + ".json");
      if (!std::filesystem::exists(path)) {
        from_dumps = false;
        break;
      }
      loaded.emplace(id, io::controller_from_json(io::json::parse(io::read_text(path))));
    }
  }
  const auto ctrls = from_dumps ? std::move(loaded) : synthesize_controllers(p, b, models);
  for (const auto& [id, c] : ctrls) {
    const std::size_t bad = closure_violations(c, models.at(id));
    line(bad == 0 && c.class_id == id,
         std::string(from_dumps ? "dumped" : "fresh") + " controller " + id +
             " stays closed on its domain (" + std::to_string(c.dom.size()) + " states)");
  }

  const std::uint64_t seed = o.seed.value_or(1);
  for (const auto& [id, cd] : b.design.classes) {
    const AsfReport a = check_local_asf(models.at(id), cd.varpi, cd.vartheta, 2000, seed);
    line(a.pass(), "one-step accuracy samples for " + id + " (max distance " +
                       format_fixed(a.max_v, 4) + " of " + format_fixed(cd.varpi, 4) + ")");
  }
  return ok ? 0 : 1;
}

int cmd_reproduce(const Opts& o) {
  // bundled values are authoritative; only --out is honored here
  NetworkPattern p = io::parse_pattern(traffic_config_text());
  bool ok = true;
  auto check = [&ok](bool pass, const std::string& what) {
    std::cout << (pass ? "ok   " : "FAIL ") << what << "\n";
    ok = ok && pass;
  };
  auto near = [](double v, double want, double tol) { return std::fabs(v - want) <= tol; };

  const DesignBundle b = design_pipeline(p);
  for (const auto& [id, cd] : b.design.classes) {
    check(near(cd.varpi, 0.8, 1e-12) && near(cd.vartheta, 0.8, 1e-12),
          "class " + id + ": accuracy split 0.8 / 0.8");
    check(cd.eta_u == 0.0, "class " + id + ": input pitch 0");
    check(near(cd.eta_x_bound, 8.0 / 75.0, 1e-9),
          "class " + id + ": state pitch bound " + format_fixed(cd.eta_x_bound, 5));
    check(near(cd.eta_x, 0.1, 1e-12), "class " + id + ": state pitch 0.1 accepted");
  }
  for (const auto& [s, sc] : b.design.scalings) {
    check(near(sc.lambda, 9.0 / 13.0, 1e-6),
          "subnetwork " + s + ": contraction rate " + format_fixed(sc.lambda, 5));
  }
  bool phis_zero = true;
  for (const auto& [t, v] : b.design.phi) phis_zero = phis_zero && v == 0.0;
  check(phis_zero, "all coupling offsets zero");
  check(near(b.design.epsilon_hat, 0.8, 1e-12), "mismatch radius 0.8");

  const VerifyReport rep = verify_design(p, b.certs, b.types, b.design);
  double margin_slack = 1e300;
  for (const auto& c : rep.checks) {
    if (c.name.rfind("one-step-margin", 0) == 0) margin_slack = std::min(margin_slack, c.slack);
  }
  check(rep.pass, "design inequalities verified");
  check(near(margin_slack, 1.0 / 150.0, 1e-9),
        "tightest one-step margin " + format_fixed(margin_slack, 5));

  const auto models = build_models(p, b);
  const auto ctrls = synthesize_controllers(p, b, models);
  check(ctrls.at("cell_lo").dom.size() == 101, "cell_lo controller domain 101 states");
  check(ctrls.at("cell_hi").dom.size() == 151, "cell_hi controller domain 151 states");
  for (const auto& [id, c] : ctrls) {
    check(closure_violations(c, models.at(id)) == 0, "controller " + id + " closed");
  }

  const auto logs = run_closed_loop(p, b, models, ctrls, p.truncation, p.sim);
  bool sims = true;
  double worst_v = 0.0;
  for (const auto& log : logs) {
    sims = sims && log.summary.pass;
    worst_v = std::max(worst_v, log.summary.max_v);
  }
  check(sims, std::to_string(logs.size()) + " seeded closed-loop runs stay safe (max V " +
                  format_fixed(worst_v, 4) + ")");

  if (!o.out.empty()) {
    ensure_out(o);
    write_json(o, "design.json", io::design_report(b.design));
    write_json(o, "certificates.json", io::certificate_report(b.certs, b.design));
    write_json(o, "verify.json", io::verify_report_json(rep));
    for (const auto& [id, c] : ctrls) {
      write_json(o, "controller_" + id + ".json", io::controller_to_json(c));
    }
    for (const auto& log : logs) {
      io::write_text(out_path(o, "trajectory_" + std::to_string(log.seed) + ".csv"),
                     io::trajectory_csv(log));
      write_json(o, "summary_" + std::to_string(log.seed) + ".json",
                 io::run_summary_json(log));
    }
  }
  std::cout << (ok ? "reproduction complete\n" : "reproduction FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compositional symbolic models and safety controllers for subsystem networks"};
  app.require_subcommand(1);

  Opts o;
  auto add_common = [&o](CLI::App* c, bool config_required) {
    auto* cfg = c->add_option("--config", o.config, "network description file (JSON)");
    if (config_required) cfg->required();
    c->add_option("--out", o.out, "directory for artifacts");
    c->add_option("--varpi", o.varpi, "override the accuracy target");
    c->add_option("--truncation", o.truncation, "override the instantiated size");
    c->add_option("--steps", o.steps, "override the simulated steps");
    c->add_option("--seed", o.seed, "use a single seed");
    c->add_option("--max-size", o.max_size, "override the abstraction size cap");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a network description");
  CLI::App* design_cmd = app.add_subcommand("design", "derive quantization parameters");
  CLI::App* abstract_cmd = app.add_subcommand("abstract", "build per-class finite models");
  CLI::App* synth_cmd = app.add_subcommand("synthesize", "compute per-class safety controllers");
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run seeded closed loops on a truncation");
  CLI::App* verify_cmd = app.add_subcommand("verify", "re-check designs, controllers, and artifacts");
  CLI::App* repro_cmd = app.add_subcommand("reproduce-traffic", "run the bundled benchmark end to end");
  for (CLI::App* c : {validate_cmd, design_cmd, abstract_cmd, synth_cmd, sim_cmd, verify_cmd}) {
    add_common(c, true);
  }
  add_common(repro_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(o);
    if (app.got_subcommand(design_cmd)) return cmd_design(o);
    if (app.got_subcommand(abstract_cmd)) return cmd_abstract(o);
    if (app.got_subcommand(synth_cmd)) return cmd_synthesize(o);
    if (app.got_subcommand(sim_cmd)) return cmd_simulate(o);
    if (app.got_subcommand(verify_cmd)) return cmd_verify(o);
    if (app.got_subcommand(repro_cmd)) return cmd_reproduce(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const TopologyError& e) {
    std::cerr << "topology error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
