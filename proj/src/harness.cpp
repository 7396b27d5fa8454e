#include "cqa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "cqa/metrics.hpp"

namespace cqa {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

std::vector<double> log_tau_grid(double lo, double hi, int points_per_decade) {
  if (!(lo > 0) || !(hi > lo) || points_per_decade < 1)
    throw std::invalid_argument("log_tau_grid: need 0 < lo < hi, ppd >= 1");
  const double llo = std::log10(lo), lhi = std::log10(hi);
  const int n = std::max(1, static_cast<int>(std::ceil((lhi - llo) * points_per_decade)));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i)
    grid.push_back(std::pow(10.0, llo + (lhi - llo) * i / n));
  grid.back() = hi;
  return grid;
}

std::vector<double> default_tau_grid(Schedule::Kind kind) {
  return kind == Schedule::Kind::Linear ? log_tau_grid(0.5, 200.0, 16)
                                        : log_tau_grid(0.05, 20.0, 16);
}

int worker_count() {
  if (const char* env = std::getenv("CQA_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t canonical_graph_key(const Graph& g) {
  const int n = g.n_nodes;
  if (n > 8) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(n);
    for (const auto& [i, j] : g.edges) {
      h = (h ^ static_cast<std::uint64_t>(i)) * 0x100000001b3ULL;
      h = (h ^ static_cast<std::uint64_t>(j)) * 0x100000001b3ULL;
    }
    return h;
  }
  auto bit = [n](int i, int j) {  // i < j
    return static_cast<std::uint64_t>(1)
           << (i * n - i * (i + 1) / 2 + (j - i - 1));
  };
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t mask = 0;
    for (const auto& [i, j] : g.edges) {
      int a = perm[static_cast<std::size_t>(i)], b = perm[static_cast<std::size_t>(j)];
      if (a > b) std::swap(a, b);
      mask |= bit(a, b);
    }
    best = std::min(best, mask);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct TaskResult {
  bool ok = false;
  std::string error;
  double e_res = 0;
  double p_suc = 0;
};

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
  if (cfg.realizations < 1)
    throw std::invalid_argument("run_sweep: need realizations >= 1");
  if (!cfg.tau_grid.empty()) {
    for (std::size_t i = 0; i < cfg.tau_grid.size(); ++i)
      if (cfg.tau_grid[i] <= 0 ||
          (i > 0 && cfg.tau_grid[i] <= cfg.tau_grid[i - 1]))
        throw std::invalid_argument(
            "run_sweep: tau grid must be positive and strictly increasing");
  }

  struct Realization {
    std::uint64_t seed;
    Graph graph;
    std::size_t unique_id;
  };
  std::vector<Realization> reals;
  reals.reserve(static_cast<std::size_t>(cfg.realizations));
  std::map<std::uint64_t, std::size_t> key_to_unique;
  std::vector<std::size_t> unique_rep;  // realization index per unique class
  for (int i = 0; i < cfg.realizations; ++i) {
    Realization r;
    r.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
    r.graph = random_regular(cfg.n_nodes, cfg.connectivity, r.seed);
    const auto key = canonical_graph_key(r.graph);
    auto [it, inserted] = key_to_unique.try_emplace(key, unique_rep.size());
    if (inserted) unique_rep.push_back(reals.size());
    r.unique_id = it->second;
    reals.push_back(std::move(r));
  }

  // diagonals per isomorphism class; observables are relabeling-invariant
  std::vector<ProblemDiagonal> diags;
  std::vector<bool> colorable;
  diags.reserve(unique_rep.size());
  for (std::size_t u = 0; u < unique_rep.size(); ++u) {
    const Graph& g = reals[unique_rep[u]].graph;
    diags.push_back(build_problem_diagonal(g, cfg.q));
    colorable.push_back(diags.back().ground_energy ==
                        static_cast<std::int64_t>(g.num_edges()) * (cfg.q - 4));
  }

  struct Task {
    std::size_t unique_id;
    DriverKind driver;
    Schedule::Kind schedule;
    double tau;
  };
  std::vector<Task> tasks;
  std::vector<std::vector<double>> grids;
  for (auto sk : cfg.schedules)
    grids.push_back(cfg.tau_grid.empty() ? default_tau_grid(sk) : cfg.tau_grid);
  for (std::size_t u = 0; u < unique_rep.size(); ++u)
    for (auto dk : cfg.drivers)
      for (std::size_t si = 0; si < cfg.schedules.size(); ++si)
        for (double tau : grids[si])
          tasks.push_back({u, dk, cfg.schedules[si], tau});

  std::vector<TaskResult> results(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t ti) {
    const Task& task = tasks[ti];
    TaskResult& res = results[ti];
    try {
      const DriverSpec d = DriverSpec::make(task.driver, cfg.q);
      const Schedule sch{task.schedule, task.tau};
      EvolveOptions opts;
      opts.dt = std::min(cfg.dt, sch.total_time());
      opts.sample_count = cfg.sample_count;
      Trajectory traj = evolve(diags[task.unique_id], d, sch, opts);
      res.e_res = residual_energy(traj.final_state, diags[task.unique_id]);
      res.p_suc = success_probability(traj.final_state, diags[task.unique_id]);
      res.ok = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });

  std::map<std::tuple<std::size_t, int, int, double>, std::size_t> task_index;
  for (std::size_t ti = 0; ti < tasks.size(); ++ti)
    task_index[{tasks[ti].unique_id, static_cast<int>(tasks[ti].driver),
                static_cast<int>(tasks[ti].schedule), tasks[ti].tau}] = ti;

  SweepResult out;
  std::map<std::tuple<int, int, double>, SweepAggregate> agg;
  for (int i = 0; i < cfg.realizations; ++i) {
    const Realization& r = reals[static_cast<std::size_t>(i)];
    for (auto dk : cfg.drivers)
      for (std::size_t si = 0; si < cfg.schedules.size(); ++si)
        for (double tau : grids[si]) {
          const auto sk = cfg.schedules[si];
          const TaskResult& tr = results[task_index.at(
              {r.unique_id, static_cast<int>(dk), static_cast<int>(sk), tau})];
          SweepCell cell;
          cell.graph_id = i;
          cell.seed = r.seed;
          cell.driver = dk;
          cell.schedule = sk;
          cell.tau = tau;
          cell.colorable = colorable[r.unique_id];
          cell.ok = tr.ok;
          cell.error = tr.error;
          cell.e_res = tr.e_res;
          cell.p_suc = tr.p_suc;
          auto& a = agg[{static_cast<int>(dk), static_cast<int>(sk), tau}];
          a.driver = dk;
          a.schedule = sk;
          a.tau = tau;
          ++a.cells;
          if (tr.ok) {
            a.mean_e_res += tr.e_res;
            a.mean_p_suc += tr.p_suc;
          } else {
            ++a.failures;
            ++out.failed_cells;
          }
          out.cells.push_back(std::move(cell));
        }
  }
  for (auto& [key, a] : agg) {
    const int ok_cells = a.cells - a.failures;
    if (ok_cells > 0) {
      a.mean_e_res /= ok_cells;
      a.mean_p_suc /= ok_cells;
    }
    out.aggregates.push_back(a);
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "graph_id,seed,driver,schedule,tau,E_res,P_suc,colorable\n";
  for (const auto& c : result.cells) {
    os << c.graph_id << ',' << c.seed << ',' << to_string(c.driver) << ','
       << to_string(c.schedule) << ',' << fmt(c.tau) << ',';
    if (c.ok)
      os << fmt(c.e_res) << ',' << fmt(c.p_suc);
    else
      os << ',';
    os << ',' << (c.colorable ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string aggregate_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "driver,schedule,tau,mean_E_res,mean_P_suc,cells,failures\n";
  for (const auto& a : result.aggregates)
    os << to_string(a.driver) << ',' << to_string(a.schedule) << ','
       << fmt(a.tau) << ',' << fmt(a.mean_e_res) << ',' << fmt(a.mean_p_suc)
       << ',' << a.cells << ',' << a.failures << '\n';
  return os.str();
}

TrajectoryRun run_trajectory(const Graph& g, int q, DriverKind driver,
                             const Schedule& sch,
                             const TrajectoryOptions& opts) {
  const ProblemDiagonal diag = build_problem_diagonal(g, q);
  const DriverSpec d = DriverSpec::make(driver, q);
  const double T = sch.total_time();

  // snapshots are taken at the nearest recorded sample time
  std::map<int, std::vector<double>> snapshot_at;
  for (double s : opts.snapshot_s) {
    if (s < 0 || s > 1)
      throw std::invalid_argument("snapshot s outside [0,1]");
    double t;
    if (sch.kind == Schedule::Kind::Linear)
      t = s * sch.tau;
    else
      t = s >= 1.0 ? T : std::min(T, -sch.tau * std::log1p(-s));
    const int idx = static_cast<int>(std::lround(t / T * opts.sample_count));
    snapshot_at[idx].push_back(s);
  }

  TrajectoryRun run;
  int sample_index = -1;
  const int k =
      static_cast<int>(std::min<std::size_t>(
          static_cast<std::size_t>(opts.snapshot_levels), diag.dim()));
  auto on_sample = [&](TrajectorySample& smp, std::span<const Complex> psi) {
    ++sample_index;
    if (opts.compute_ground_population)
      smp.ground_population = ground_population(psi, smp.s, diag, d);
    auto it = snapshot_at.find(sample_index);
    if (it != snapshot_at.end()) {
      PopulationSnapshot snap;
      snap.s = smp.s;
      snap.levels = population_distribution(psi, smp.s, diag, d, k);
      run.snapshots.push_back(std::move(snap));
    }
  };

  EvolveOptions eopts;
  eopts.dt = std::min(opts.dt, T);
  eopts.sample_count = opts.sample_count;
  run.trajectory = evolve(diag, d, sch, eopts, on_sample);
  return run;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,s,E_ir,f_g,norm\n";
  for (const auto& smp : traj.samples) {
    os << fmt(smp.t) << ',' << fmt(smp.s) << ','
       << fmt(smp.instantaneous_residual) << ',';
    if (smp.ground_population) os << fmt(*smp.ground_population);
    os << ',' << fmt(smp.norm) << '\n';
  }
  return os.str();
}

std::string populations_csv(const std::vector<PopulationSnapshot>& snapshots) {
  std::ostringstream os;
  os << "s,level,energy,population,cluster_id\n";
  for (const auto& snap : snapshots)
    for (std::size_t lvl = 0; lvl < snap.levels.size(); ++lvl)
      os << fmt(snap.s) << ',' << lvl << ',' << fmt(snap.levels[lvl].energy)
         << ',' << fmt(snap.levels[lvl].population) << ','
         << snap.levels[lvl].cluster_id << '\n';
  return os.str();
}

std::string gap_csv(const std::vector<SpectrumSample>& samples) {
  std::ostringstream os;
  os << "s,E0,E1,gap\n";
  for (const auto& smp : samples)
    os << fmt(smp.s) << ',' << fmt(smp.eigenvalues[0]) << ','
       << fmt(smp.eigenvalues[1]) << ',' << fmt(smp.gap) << '\n';
  return os.str();
}

}  // namespace cqa
