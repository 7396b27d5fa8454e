#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cqa/harness.hpp"
#include "cqa/metrics.hpp"

namespace {

using namespace cqa;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix;
}

DriverKind parse_driver(const std::string& name) {
  if (name == "nn") return DriverKind::NN;
  if (name == "fc") return DriverKind::FC;
  throw CLI::ValidationError("--driver", "expected nn or fc");
}

Schedule::Kind parse_schedule(const std::string& name) {
  if (name == "linear") return Schedule::Kind::Linear;
  if (name == "exp") return Schedule::Kind::Exponential;
  throw CLI::ValidationError("--schedule", "expected linear or exp");
}

// "lo:hi:points_per_decade" or an explicit comma list
std::vector<double> parse_tau_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double lo, hi;
    int ppd;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &ppd) != 3)
      throw CLI::ValidationError("--tau-grid", "expected lo:hi:per_decade");
    return log_tau_grid(lo, hi, ppd);
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) grid.push_back(std::stod(tok));
  return grid;
}

int run(int argc, char** argv) {
  CLI::App app{"Constrained quantum annealing simulator for graph coloring"};
  app.require_subcommand(1);

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "Generate a graph edge-list file");
  int gen_n = 6, gen_c = 3;
  std::uint64_t gen_seed = 1;
  bool gen_unique = false;
  std::string gen_out = "-";
  gen->add_option("-n", gen_n, "node count");
  gen->add_option("-c", gen_c, "connectivity (regular degree)");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_flag("--uniquely-colorable", gen_unique,
                "emit the fixed 6-node graph with exactly 24 proper 4-colorings");
  gen->add_option("-o", gen_out, "output file ('-' for stdout)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force coloring oracle");
  std::string oracle_graph;
  int oracle_q = 4;
  oracle->add_option("graph", oracle_graph, "edge-list file")->required();
  oracle->add_option("-q", oracle_q, "color count");

  // anneal
  auto* anneal = app.add_subcommand("anneal", "Single annealing run");
  std::string an_graph, an_driver = "fc", an_schedule = "linear";
  int an_q = 4, an_samples = 100;
  double an_tau = 20, an_dt = 0.001;
  anneal->add_option("graph", an_graph, "edge-list file")->required();
  anneal->add_option("-q", an_q, "color count");
  anneal->add_option("--driver", an_driver, "nn|fc");
  anneal->add_option("--schedule", an_schedule, "linear|exp");
  anneal->add_option("--tau", an_tau, "annealing time scale (hbar/J)");
  anneal->add_option("--dt", an_dt, "RK4 step size");
  anneal->add_option("--samples", an_samples, "trajectory samples");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Ensemble annealing-time sweep");
  ExperimentConfig cfg;
  std::vector<std::string> sw_drivers, sw_schedules;
  std::string sw_grid, sw_out = "sweep.csv";
  sweep->add_option("-n", cfg.n_nodes, "node count");
  sweep->add_option("-c", cfg.connectivity, "connectivity");
  sweep->add_option("-q", cfg.q, "color count");
  sweep->add_option("--driver", sw_drivers, "nn|fc (repeatable; default both)");
  sweep->add_option("--schedule", sw_schedules,
                    "linear|exp (repeatable; default linear)");
  sweep->add_option("--tau-grid", sw_grid,
                    "lo:hi:per_decade or comma list (default per schedule)");
  sweep->add_option("--realizations", cfg.realizations, "graph realizations");
  sweep->add_option("--seed", cfg.master_seed, "master seed");
  sweep->add_option("--dt", cfg.dt, "RK4 step size");
  sweep->add_option("--samples", cfg.sample_count, "samples per run");
  sweep->add_option("-o", sw_out, "per-cell CSV path (aggregate: *.agg.csv)");

  // gap
  auto* gap = app.add_subcommand("gap", "Instantaneous gap curve");
  std::string gap_graph, gap_driver = "fc", gap_out = "-";
  int gap_q = 4, gap_points = 51;
  gap->add_option("graph", gap_graph, "edge-list file")->required();
  gap->add_option("-q", gap_q, "color count");
  gap->add_option("--driver", gap_driver, "nn|fc");
  gap->add_option("--points", gap_points, "uniform s-grid size on [0,1]");
  gap->add_option("-o", gap_out, "output CSV");

  // populations
  auto* pops = app.add_subcommand("populations",
                                  "Low-energy population snapshots");
  std::string pop_graph, pop_driver = "nn", pop_schedule = "linear",
              pop_out = "-";
  int pop_q = 4, pop_samples = 100, pop_levels = 12;
  double pop_tau = 20, pop_dt = 0.001;
  std::vector<double> pop_snapshots{0.8, 0.9, 1.0};
  pops->add_option("graph", pop_graph, "edge-list file")->required();
  pops->add_option("-q", pop_q, "color count");
  pops->add_option("--driver", pop_driver, "nn|fc");
  pops->add_option("--schedule", pop_schedule, "linear|exp");
  pops->add_option("--tau", pop_tau, "annealing time scale");
  pops->add_option("--dt", pop_dt, "RK4 step size");
  pops->add_option("--samples", pop_samples, "trajectory samples");
  pops->add_option("--snapshots", pop_snapshots, "s values for snapshots");
  pops->add_option("--levels", pop_levels, "levels per snapshot");
  pops->add_option("-o", pop_out, "output CSV");

  // trajectory
  auto* traj = app.add_subcommand("trajectory", "Annealing trajectory CSV");
  std::string tr_graph, tr_driver = "nn", tr_schedule = "linear", tr_out = "-";
  int tr_q = 4, tr_samples = 100, tr_levels = 12;
  double tr_tau = 20, tr_dt = 0.001;
  bool tr_no_fg = false;
  std::vector<double> tr_snapshots;
  traj->add_option("graph", tr_graph, "edge-list file")->required();
  traj->add_option("-q", tr_q, "color count");
  traj->add_option("--driver", tr_driver, "nn|fc");
  traj->add_option("--schedule", tr_schedule, "linear|exp");
  traj->add_option("--tau", tr_tau, "annealing time scale");
  traj->add_option("--dt", tr_dt, "RK4 step size");
  traj->add_option("--samples", tr_samples, "trajectory samples");
  traj->add_option("--snapshots", tr_snapshots,
                   "s values for population snapshots (*.pops.csv)");
  traj->add_flag("--no-fg", tr_no_fg, "skip ground-population column");
  traj->add_option("-o", tr_out, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;  // usage errors exit 2
  }

  if (gen->parsed()) {
    Graph g = gen_unique ? uniquely_colorable_graph()
                         : random_regular(gen_n, gen_c, gen_seed);
    spill(gen_out, write_edge_list(g));
    return 0;
  }
  if (oracle->parsed()) {
    auto res = coloring_oracle(parse_edge_list(slurp(oracle_graph)), oracle_q);
    std::cout << "proper_coloring_count " << res.proper_coloring_count << "\n"
              << "min_classical_energy " << res.min_classical_energy << "\n"
              << "ground_degeneracy " << res.ground_degeneracy << "\n";
    return 0;
  }
  if (anneal->parsed()) {
    Graph g = parse_edge_list(slurp(an_graph));
    ProblemDiagonal diag = build_problem_diagonal(g, an_q);
    Schedule sch{parse_schedule(an_schedule), an_tau};
    EvolveOptions opts;
    opts.dt = an_dt;
    opts.sample_count = an_samples;
    Trajectory t =
        evolve(diag, DriverSpec::make(parse_driver(an_driver), an_q), sch, opts);
    std::cout << "E_res " << residual_energy(t.final_state, diag) << "\n"
              << "P_suc " << success_probability(t.final_state, diag) << "\n";
    return 0;
  }
  if (sweep->parsed()) {
    if (!sw_drivers.empty()) {
      cfg.drivers.clear();
      for (const auto& name : sw_drivers) cfg.drivers.push_back(parse_driver(name));
    }
    if (!sw_schedules.empty()) {
      cfg.schedules.clear();
      for (const auto& name : sw_schedules)
        cfg.schedules.push_back(parse_schedule(name));
    }
    if (!sw_grid.empty()) cfg.tau_grid = parse_tau_grid(sw_grid);
    SweepResult result = run_sweep(cfg);
    spill(sw_out, sweep_csv(result));
    spill(sibling_path(sw_out, ".agg.csv"), aggregate_csv(result));
    if (result.failed_cells > 0) {
      std::cerr << result.failed_cells << " cell(s) failed\n";
      return 1;
    }
    return 0;
  }
  if (gap->parsed()) {
    Graph g = parse_edge_list(slurp(gap_graph));
    ProblemDiagonal diag = build_problem_diagonal(g, gap_q);
    std::vector<double> s_grid;
    for (int i = 0; i < gap_points; ++i)
      s_grid.push_back(double(i) / (gap_points - 1));
    auto curve =
        gap_curve(diag, DriverSpec::make(parse_driver(gap_driver), gap_q), s_grid);
    spill(gap_out, gap_csv(curve));
    return 0;
  }
  if (pops->parsed()) {
    Graph g = parse_edge_list(slurp(pop_graph));
    TrajectoryOptions opts;
    opts.dt = pop_dt;
    opts.sample_count = pop_samples;
    opts.compute_ground_population = false;
    opts.snapshot_s = pop_snapshots;
    opts.snapshot_levels = pop_levels;
    auto run = run_trajectory(g, pop_q, parse_driver(pop_driver),
                              {parse_schedule(pop_schedule), pop_tau}, opts);
    spill(pop_out, populations_csv(run.snapshots));
    return 0;
  }
  if (traj->parsed()) {
    Graph g = parse_edge_list(slurp(tr_graph));
    TrajectoryOptions opts;
    opts.dt = tr_dt;
    opts.sample_count = tr_samples;
    opts.compute_ground_population = !tr_no_fg;
    opts.snapshot_s = tr_snapshots;
    opts.snapshot_levels = tr_levels;
    auto run = run_trajectory(g, tr_q, parse_driver(tr_driver),
                              {parse_schedule(tr_schedule), tr_tau}, opts);
    spill(tr_out, trajectory_csv(run.trajectory));
    if (!run.snapshots.empty())
      spill(sibling_path(tr_out, ".pops.csv"), populations_csv(run.snapshots));
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error&) {
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
