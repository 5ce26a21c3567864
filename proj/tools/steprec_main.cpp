// Command-line front end: simulate / scan / compare / bench.
//
// Exit codes: 0 success, 1 usage/config/solver error, 2 simulated fall.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steprec/config.hpp"
#include "steprec/scanner.hpp"
#include "steprec/simulator.hpp"

namespace {

using nlohmann::json;
using namespace steprec;

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_base) {
  const RunConfig cfg = load_config(config_path);
  const Trajectory traj = run_simulation(cfg.scenario);

  auto traj_csv = open_out(out_base + "_trajectory.csv");
  traj_csv << "t,x_world,xd,foot_world,T_s0,T_s1,p,cost,solve_time_s\n";
  for (const TrajectorySample& s : traj.samples)
    traj_csv << fmt9(s.t) << ',' << fmt9(s.x_world) << ',' << fmt9(s.xd) << ','
             << fmt9(s.foot_world) << ',' << fmt9(s.cmd.T_s0) << ','
             << fmt9(s.cmd.T_s1) << ',' << fmt9(s.cmd.p) << ','
             << fmt9(s.cost) << ',' << fmt9(s.solve_time) << '\n';

  auto steps_csv = open_out(out_base + "_steps.csv");
  steps_csv << "t,foot_world,p\n";
  for (const StepEvent& e : traj.step_events)
    steps_csv << fmt9(e.t) << ',' << fmt9(e.foot_world) << ','
              << fmt9(e.placement) << '\n';

  const auto settle = settling_time(traj, cfg.scenario);
  json summary = {
      {"fell", traj.fell},
      {"fall_time", traj.fall_time ? json(*traj.fall_time) : json()},
      {"step_count", traj.step_events.size()},
      {"settling_time", settle ? json(*settle) : json()},
      {"t_end", cfg.scenario.t_end},
  };
  open_out(out_base + "_summary.json") << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << '\n';
  return traj.fell ? 2 : 0;
}

int cmd_scan(const std::string& config_path, const std::string& out_path,
             const std::string& approach, int jobs) {
  const RunConfig cfg = load_config(config_path);
  const bool do_h = approach == "both" || approach == "holistic";
  const bool do_s = approach == "both" || approach == "sequential";
  if (!do_h && !do_s)
    throw std::runtime_error("approach must be both|holistic|sequential");

  const ScanConfig sc{cfg.scenario.lip, cfg.scenario.target,
                      cfg.scenario.bounds, cfg.scenario.weights};
  const auto cells = scan_grid(cfg.grid, sc, do_h, do_s, jobs);
  auto out = open_out(out_path);
  write_scan_csv(out, cells);
  std::cerr << "scan: " << cells.size() << " cells written to " << out_path
            << '\n';
  return 0;
}

int cmd_compare(const std::string& scan_path, const std::string& out_base,
                const std::string& config_path) {
  LipParams lip = make_params(1.0, 9.81);
  if (!config_path.empty()) lip = load_config(config_path).scenario.lip;

  std::ifstream in(scan_path);
  if (!in) throw std::runtime_error("cannot open scan csv: " + scan_path);
  const ScanTable table = read_scan_csv(in);
  if (!table.has_holistic || !table.has_sequential)
    throw std::runtime_error("scan csv must contain both approaches");

  // Recover the grid from the unique coordinates (row-major, x fastest).
  std::vector<double> xs, vs;
  for (const ScanCell& c : table.cells) {
    xs.push_back(c.state.x);
    vs.push_back(c.state.xd);
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(xs);
  uniq(vs);
  if (xs.size() * vs.size() != table.cells.size() || xs.size() < 2 ||
      vs.size() < 2)
    throw std::runtime_error("scan csv is not a rectangular grid of >= 2x2");
  GridSpec gs;
  gs.x_lo = xs.front();
  gs.x_hi = xs.back();
  gs.x_step = (xs.back() - xs.front()) / double(xs.size() - 1);
  gs.v_lo = vs.front();
  gs.v_hi = vs.back();
  gs.v_step = (vs.back() - vs.front()) / double(vs.size() - 1);

  const CostComparison cmp = compare_costs(table.cells);
  auto diff_csv = open_out(out_base + "_diff.csv");
  diff_csv << "x,xd,cost_h,cost_s,diff\n";
  for (size_t i = 0; i < table.cells.size(); ++i) {
    const ScanCell& c = table.cells[i];
    diff_csv << fmt9(c.state.x) << ',' << fmt9(c.state.xd) << ','
             << fmt9(c.holistic.cost) << ',' << fmt9(c.sequential.cost) << ','
             << fmt9(cmp.diffs[i]) << '\n';
  }

  const CriticalRidge ridge = detect_critical(table.cells, gs, lip);
  auto ridge_csv = open_out(out_base + "_ridge.csv");
  ridge_csv << "x,xd,critical_offset\n";
  for (size_t i = 0; i < ridge.cells.size(); ++i) {
    const ScanCell& c = table.cells[ridge.cells[i]];
    ridge_csv << fmt9(c.state.x) << ',' << fmt9(c.state.xd) << ','
              << fmt9(ridge.analytic_offsets[i]) << '\n';
  }

  json stats = {
      {"cells", table.cells.size()},
      {"diff_threshold", cmp.threshold},
      {"cells_above_threshold", cmp.count_above},
      {"fraction_above_threshold", cmp.fraction_above},
      {"ridge_cells", ridge.cells.size()},
  };
  json worst = json::array();
  for (int idx : cmp.worst_cells) {
    const ScanCell& c = table.cells[idx];
    worst.push_back({{"x", c.state.x}, {"xd", c.state.xd},
                     {"diff", cmp.diffs[idx]}});
  }
  stats["worst_cells"] = worst;
  std::cout << stats.dump(2) << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& states_path,
              int reps) {
  const RunConfig cfg = load_config(config_path);
  std::ifstream in(states_path);
  if (!in) throw std::runtime_error("cannot open states file: " + states_path);

  std::vector<ComState> states;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "x,xd") continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw std::runtime_error("states file: expected 'x,xd' per line, got: " +
                               line);
    states.push_back(ComState{std::stod(a), std::stod(b)});
  }
  if (states.empty()) throw std::runtime_error("states file is empty");

  const ScanConfig sc{cfg.scenario.lip, cfg.scenario.target,
                      cfg.scenario.bounds, cfg.scenario.weights};
  const BenchResult res = benchmark(states, sc, reps);
  auto stats_json = [](const TimingStats& st) {
    return json{{"mean_s", st.mean},
                {"median_s", st.median},
                {"p95_s", st.p95},
                {"samples", st.n}};
  };
  json out = {{"holistic", stats_json(res.holistic)},
              {"sequential", stats_json(res.sequential)},
              {"ratio", res.ratio}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LIP push-recovery step optimizer toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, scan_path, states_path;
  std::string approach = "both";
  int jobs = 1, reps = 1;

  auto* sim = app.add_subcommand("simulate", "run a closed-loop walking scenario");
  sim->add_option("--config", config_path, "scenario config file")->required();
  sim->add_option("--out", out_path, "output base path")->required();

  auto* scan = app.add_subcommand("scan", "solve both optimizers over a CoM state grid");
  scan->add_option("--config", config_path, "config file")->required();
  scan->add_option("--out", out_path, "output CSV path")->required();
  scan->add_option("--approach", approach, "both|holistic|sequential");
  scan->add_option("--jobs", jobs, "worker threads");

  auto* cmp = app.add_subcommand("compare", "cost diff + critical ridge from a scan CSV");
  cmp->add_option("scan_csv", scan_path, "scan CSV from the scan subcommand")->required();
  cmp->add_option("--out", out_path, "output base path")->required();
  cmp->add_option("--config", config_path, "config file (for LIP constants)");

  auto* bench = app.add_subcommand("bench", "per-solve timing of both approaches");
  bench->add_option("--config", config_path, "config file")->required();
  bench->add_option("--states", states_path, "CSV of x,xd states")->required();
  bench->add_option("--reps", reps, "repetitions per state");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_path);
    if (scan->parsed()) return cmd_scan(config_path, out_path, approach, jobs);
    if (cmp->parsed()) return cmd_compare(scan_path, out_path, config_path);
    if (bench->parsed()) return cmd_bench(config_path, states_path, reps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
