#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "aubry/action_potential.hpp"
#include "aubry/closed_measure.hpp"
#include "aubry/config.hpp"
#include "aubry/critical_value.hpp"
#include "aubry/flow.hpp"
#include "aubry/io.hpp"
#include "aubry/pipeline.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace aubry;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  // overrides; NaN / INT_MIN = keep config value
  int n = -1;
  double h_time = -1.0;
  double speed_cap = -1.0;
  std::string f_kind;
  double f_min = std::numeric_limits<double>::quiet_NaN();
  int cantor_stage = -1;
  std::string method = "auto";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--out", c.out_dir, "output directory (default: out)");
  cmd->add_option("--n", c.n, "override grid.n");
  cmd->add_option("--h-time", c.h_time, "override grid.h_time");
  cmd->add_option("--speed-cap", c.speed_cap, "override grid.speed_cap");
  cmd->add_option("--f-kind", c.f_kind, "override lagrangian.f_kind");
  cmd->add_option("--f-min", c.f_min, "override lagrangian.f_min");
  cmd->add_option("--cantor-stage", c.cantor_stage, "override lagrangian.cantor_stage");
  cmd->add_option("--method", c.method, "mean-cycle method: auto|karp|howard");
}

Config load_config(const Common& c) {
  Config cfg = c.config_path.empty() ? Config{} : Config::from_file(c.config_path);
  if (c.n > 0) cfg.grid.n = c.n;
  if (c.h_time > 0.0) cfg.grid.h_time = c.h_time;
  if (c.speed_cap > 0.0) cfg.grid.speed_cap = c.speed_cap;
  cfg.grid.validate();
  if (!c.f_kind.empty() || !std::isnan(c.f_min) || c.cantor_stage >= 0) {
    if (!cfg.example) throw ConfigError("overrides target the model family but the config uses an explicit oneform");
    if (!c.f_kind.empty()) cfg.example->f_kind = fkind_from_string(c.f_kind);
    if (!std::isnan(c.f_min)) cfg.example->f_min = c.f_min;
    if (c.cantor_stage >= 0) cfg.example->cantor_stage = c.cantor_stage;
  }
  if (cfg.example) {
    cfg.example->grid = cfg.grid;
    cfg.example->validate();
  }
  return cfg;
}

MeanCycleMethod parse_method(const std::string& m) {
  if (m == "auto") return MeanCycleMethod::automatic;
  if (m == "karp") return MeanCycleMethod::karp;
  if (m == "howard") return MeanCycleMethod::howard;
  throw ConfigError("unknown --method: " + m);
}

std::ofstream open_out(const Common& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  std::ofstream f(fs::path(c.out_dir) / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + name + " under " + c.out_dir);
  return f;
}

void write_text(const Common& c, const std::string& name, const std::string& text) {
  auto f = open_out(c, name);
  f << text;
}

nlohmann::json base_report(const Config& cfg) {
  nlohmann::json j;
  j["toolkit_version"] = kToolkitVersion;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = nlohmann::json::parse(cfg.echo_json());
  return j;
}

std::vector<CohomologyClass> classes_grid(const std::string& spec, double span) {
  auto xpos = spec.find('x');
  if (xpos == std::string::npos)
    throw ConfigError("--classes-grid expects AxB, e.g. 5x5");
  int a = std::stoi(spec.substr(0, xpos));
  int b = std::stoi(spec.substr(xpos + 1));
  if (a < 1 || b < 1) throw ConfigError("--classes-grid dimensions must be >= 1");
  std::vector<CohomologyClass> out;
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      double c1 = (a == 1) ? 0.0 : -span + 2.0 * span * i / (a - 1);
      double c2 = (b == 1) ? 0.0 : -span + 2.0 * span * j / (b - 1);
      out.push_back({c1, c2});
    }
  }
  return out;
}

int run_integrate(const Common& c) {
  Config cfg = load_config(c);
  MagneticLagrangian L = cfg.lagrangian();
  const IntegrateParams& p = cfg.integrate;
  PhaseState s0{TorusPoint::reduced(p.x, p.y), {p.v1, p.v2}};
  Trajectory tr = integrate(L, s0, p.T, p.h);
  {
    auto f = open_out(c, "trajectory.csv");
    write_trajectory_csv(f, tr);
  }
  nlohmann::json rep = base_report(cfg);
  rep["samples"] = tr.samples.size();
  rep["energy_drift"] = energy_drift(tr);
  write_text(c, "report.json", rep.dump(2) + "\n");
  return 0;
}

int run_alpha(const Common& c, const std::string& grid_spec, double span,
              bool dump_graph) {
  Config cfg = load_config(c);
  PhaseGraph g(cfg.lagrangian(), cfg.grid);
  if (dump_graph) {
    auto f = open_out(c, "graph.jsonl");
    g.dump_jsonl(f);
  }
  std::vector<CohomologyClass> classes =
      grid_spec.empty() ? std::vector<CohomologyClass>{{0.0, 0.0}}
                        : classes_grid(grid_spec, span);
  AlphaTable table = alpha_function(g, classes, parse_method(c.method));
  {
    auto f = open_out(c, "alpha.csv");
    write_alpha_csv(f, table);
  }
  {
    auto f = open_out(c, "certificate.json");
    write_certificate_json(f, min_mean_cycle(g, classes.front(), parse_method(c.method)));
  }
  double bis = critical_value_bisection(g, classes.front(), cfg.tol.bisect_tol);
  nlohmann::json rep = base_report(cfg);
  rep["alpha0"] = table.values.front();
  rep["alpha_bisection"] = bis;
  rep["alpha_consistency"] = std::abs(bis - table.values.front());
  rep["rows"] = table.values.size();
  write_text(c, "report.json", rep.dump(2) + "\n");
  return 0;
}

int run_potential(const Common& c) {
  Config cfg = load_config(c);
  PhaseGraph g(cfg.lagrangian(), cfg.grid);
  ClassAnalysis ca = analyze_classes(g, {}, cfg.tol);
  PotentialTable pt = potential_table(g, {}, ca.alpha0 + ca.eps_lift);
  {
    auto f = open_out(c, "potential.csv");
    write_potential_csv(f, pt, cfg.tol.phi_export_threshold);
  }
  {
    auto f = open_out(c, "classes.json");
    write_partition_json(f, ca.partition);
  }
  nlohmann::json rep = base_report(cfg);
  rep["alpha0"] = ca.alpha0;
  rep["k_used"] = pt.k_used;
  rep["class_count"] = ca.partition.classes.size();
  write_text(c, "report.json", rep.dump(2) + "\n");
  return 0;
}

int run_classes(const Common& c) {
  Config cfg = load_config(c);
  PhaseGraph g(cfg.lagrangian(), cfg.grid);
  double ref = std::numeric_limits<double>::quiet_NaN();
  if (cfg.example) ref = 0.5 * cfg.example->f_min * cfg.example->f_min;
  ClassAnalysis ca = analyze_classes(g, {}, cfg.tol, ref);
  {
    auto f = open_out(c, "classes.json");
    write_partition_json(f, ca.partition);
  }
  nlohmann::json rep = base_report(cfg);
  rep["alpha0"] = ca.alpha0;
  rep["class_count"] = ca.partition.classes.size();
  rep["aubry_node_count"] = ca.partition.aubry_nodes.size();
  rep["eps_aubry"] = ca.eps_aubry;
  rep["eps_class"] = ca.eps_class;
  write_text(c, "report.json", rep.dump(2) + "\n");
  return 0;
}

int run_measure(const Common& c) {
  Config cfg = load_config(c);
  PhaseGraph g(cfg.lagrangian(), cfg.grid);
  auto [value, mu] = min_closed_measure(g, {}, parse_method(c.method));
  {
    auto f = open_out(c, "measure.json");
    write_measure_json(f, mu, value, {});
  }
  nlohmann::json rep = base_report(cfg);
  rep["value"] = value;
  rep["alpha0"] = -value;
  rep["support_edges"] = mu.edges.size();
  rep["conservation_residual"] = mu.conservation_residual();
  rep["normalization_residual"] = mu.normalization_residual();
  rep["energy_residual"] = energy_level_check(mu, -value);
  rep["graph_residual"] = graph_property_check(mu);
  write_text(c, "report.json", rep.dump(2) + "\n");
  return 0;
}

int run_example_verify(const Common& c) {
  Config cfg = load_config(c);
  if (!cfg.example)
    throw ConfigError("example-verify requires a model-family lagrangian block");
  RunReport rep = verify_example(*cfg.example, cfg.tol);
  write_text(c, "report.json", rep.to_json());

  PhaseGraph g(build_example(*cfg.example), cfg.grid);
  AlphaTable table;
  table.classes = {{0.0, 0.0}};
  table.values = {rep.alpha0};
  {
    auto f = open_out(c, "alpha.csv");
    write_alpha_csv(f, table);
  }
  auto [value, mu] = min_closed_measure(g, {});
  {
    auto f = open_out(c, "measure.json");
    write_measure_json(f, mu, value, {});
  }
  double ref = 0.5 * cfg.example->f_min * cfg.example->f_min;
  ClassAnalysis ca = analyze_classes(g, {}, cfg.tol, ref);
  {
    auto f = open_out(c, "classes.json");
    write_partition_json(f, ca.partition);
  }
  if (!rep.ok) {
    std::cerr << "example-verify: some stages failed; see report.json\n";
    return 2;
  }
  return 0;
}

int run_sweep(const Common& c) {
  Config cfg = load_config(c);
  SweepResult res = perturb_sweep(cfg.lagrangian(), cfg.grid, cfg.sweep, cfg.tol);
  {
    auto f = open_out(c, "sweep.csv");
    write_sweep_csv(f, res.rows);
  }
  res.report.config_echo = cfg.echo_json();
  write_text(c, "report.json", res.report.to_json());
  return res.report.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aubry-Mather toolkit for exact magnetic Lagrangians on the flat 2-torus"};
  app.require_subcommand(1);

  Common c;
  std::string grid_spec;
  double classes_span = 0.5;
  bool dump_graph = false;

  CLI::App* cmd_integrate = app.add_subcommand("integrate", "integrate the Euler-Lagrange flow");
  add_common(cmd_integrate, c);
  CLI::App* cmd_alpha = app.add_subcommand("alpha", "critical values over cohomology classes");
  add_common(cmd_alpha, c);
  cmd_alpha->add_option("--classes-grid", grid_spec, "AxB grid of classes around 0");
  cmd_alpha->add_option("--classes-span", classes_span, "half-width of the class grid");
  cmd_alpha->add_flag("--dump-graph", dump_graph, "also write graph.jsonl (debug)");
  CLI::App* cmd_potential = app.add_subcommand("potential", "action potential table at the critical level");
  add_common(cmd_potential, c);
  CLI::App* cmd_classes = app.add_subcommand("classes", "Aubry nodes and static classes");
  add_common(cmd_classes, c);
  CLI::App* cmd_measure = app.add_subcommand("measure", "minimizing closed measure");
  add_common(cmd_measure, c);
  CLI::App* cmd_verify = app.add_subcommand("example-verify", "end-to-end model verification");
  add_common(cmd_verify, c);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "perturbation sweep");
  add_common(cmd_sweep, c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_integrate->parsed()) return run_integrate(c);
    if (cmd_alpha->parsed()) return run_alpha(c, grid_spec, classes_span, dump_graph);
    if (cmd_potential->parsed()) return run_potential(c);
    if (cmd_classes->parsed()) return run_classes(c);
    if (cmd_measure->parsed()) return run_measure(c);
    if (cmd_verify->parsed()) return run_example_verify(c);
    if (cmd_sweep->parsed()) return run_sweep(c);
  } catch (const NumericalError& ex) {
    std::cerr << "numerical failure: " << ex.what() << "\n";
    return 2;
  } catch (const ConfigError& ex) {
    std::cerr << ex.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "validation error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
