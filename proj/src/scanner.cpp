#include "steprec/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace steprec {

int GridSpec::nx() const {
  return int(std::floor((x_hi - x_lo) / x_step + 1e-9)) + 1;
}

int GridSpec::nv() const {
  return int(std::floor((v_hi - v_lo) / v_step + 1e-9)) + 1;
}

void GridSpec::validate() const {
  if (!(x_lo <= x_hi) || !(x_step > 0.0))
    throw std::invalid_argument("grid: need x_lo <= x_hi and x_step > 0");
  if (!(v_lo <= v_hi) || !(v_step > 0.0))
    throw std::invalid_argument("grid: need v_lo <= v_hi and v_step > 0");
  if (double(nx()) * double(nv()) > 1e7)
    throw std::invalid_argument("grid: more than 1e7 cells");
}

std::vector<ScanCell> scan_grid(const GridSpec& gs, const ScanConfig& cfg,
                                bool do_holistic, bool do_sequential,
                                int jobs) {
  gs.validate();
  const int nx = gs.nx(), nv = gs.nv();
  std::vector<ScanCell> cells(size_t(nx) * nv);

  auto solve_cell = [&](int idx) {
    const int iv = idx / nx, ix = idx % nx;
    ScanCell& c = cells[idx];
    c.state = ComState{gs.x_lo + ix * gs.x_step, gs.v_lo + iv * gs.v_step};
    try {
      if (do_holistic) {
        c.holistic = holistic_optimize(c.state, cfg.target, cfg.bounds,
                                       cfg.weights, cfg.lip);
        c.has_holistic = true;
      }
      if (do_sequential) {
        c.sequential = sequential_optimize(c.state, cfg.target, cfg.bounds,
                                           cfg.weights, cfg.lip);
        c.has_sequential = true;
      }
    } catch (const std::exception& e) {
      c.ok = false;
      c.error = e.what();
    }
  };

  const int total = nx * nv;
  if (jobs <= 1) {
    for (int i = 0; i < total; ++i) solve_cell(i);
  } else {
    std::vector<std::thread> workers;
    const int n_workers = std::min(jobs, total);
    for (int w = 0; w < n_workers; ++w)
      workers.emplace_back([&, w] {
        for (int i = w; i < total; i += n_workers) solve_cell(i);
      });
    for (auto& t : workers) t.join();
  }
  return cells;
}

CostComparison compare_costs(const std::vector<ScanCell>& cells,
                             double threshold) {
  if (cells.empty()) throw std::invalid_argument("compare_costs: empty scan");
  CostComparison cmp;
  cmp.threshold = threshold;
  cmp.diffs.reserve(cells.size());
  for (const ScanCell& c : cells) {
    const double d = (c.ok && c.has_holistic && c.has_sequential)
                         ? c.sequential.cost - c.holistic.cost
                         : 0.0;
    if (d > threshold) ++cmp.count_above;
    cmp.diffs.push_back(d);
  }
  cmp.fraction_above = double(cmp.count_above) / double(cells.size());

  std::vector<int> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cmp.diffs[a] > cmp.diffs[b];
  });
  order.resize(std::min<size_t>(order.size(), 10));
  cmp.worst_cells = std::move(order);
  return cmp;
}

namespace {

const WalkingParams& cell_params(const ScanCell& c) {
  return c.has_holistic ? c.holistic.params : c.sequential.params;
}

bool jumps(const ScanCell& a, const ScanCell& b, const RidgeThresholds& th) {
  if (!a.ok || !b.ok) return false;
  const WalkingParams& pa = cell_params(a);
  const WalkingParams& pb = cell_params(b);
  return std::abs(pa.T_s0 - pb.T_s0) > th.dT_s0 ||
         std::abs(pa.T_s1 - pb.T_s1) > th.dT_s1 ||
         std::abs(pa.p - pb.p) > th.dp;
}

}  // namespace

CriticalRidge detect_critical(const std::vector<ScanCell>& cells,
                              const GridSpec& gs, const LipParams& lip,
                              const RidgeThresholds& thresholds) {
  const int nx = gs.nx(), nv = gs.nv();
  if (nx < 2 || nv < 2)
    throw std::invalid_argument("detect_critical: grid must be at least 2x2");
  if (cells.size() != size_t(nx) * nv)
    throw std::invalid_argument("detect_critical: cell count does not match grid");

  CriticalRidge ridge;
  for (int iv = 0; iv < nv; ++iv) {
    for (int ix = 0; ix < nx; ++ix) {
      const int idx = iv * nx + ix;
      const ScanCell& c = cells[idx];
      if (!c.ok || (!c.has_holistic && !c.has_sequential)) continue;
      const bool flagged =
          (ix > 0 && jumps(c, cells[idx - 1], thresholds)) ||
          (ix + 1 < nx && jumps(c, cells[idx + 1], thresholds)) ||
          (iv > 0 && jumps(c, cells[idx - nx], thresholds)) ||
          (iv + 1 < nv && jumps(c, cells[idx + nx], thresholds));
      if (flagged) {
        ridge.cells.push_back(idx);
        ridge.analytic_offsets.push_back(critical_offset(c.state, lip));
      }
    }
  }
  return ridge;
}

namespace {

TimingStats stats_of(std::vector<double> samples) {
  TimingStats st;
  st.n = int(samples.size());
  if (samples.empty()) return st;
  st.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / st.n;
  std::sort(samples.begin(), samples.end());
  st.median = samples[samples.size() / 2];
  st.p95 = samples[std::min(samples.size() - 1,
                            size_t(std::ceil(0.95 * samples.size())) - 1)];
  return st;
}

}  // namespace

BenchResult benchmark(const std::vector<ComState>& states,
                      const ScanConfig& cfg, int repetitions) {
  if (repetitions < 1)
    throw std::invalid_argument("benchmark: repetitions must be >= 1");
  std::vector<double> t_h, t_s;
  t_h.reserve(states.size() * repetitions);
  t_s.reserve(states.size() * repetitions);
  for (int r = 0; r < repetitions; ++r)
    for (const ComState& s : states)
      t_h.push_back(
          holistic_optimize(s, cfg.target, cfg.bounds, cfg.weights, cfg.lip)
              .solve_time);
  for (int r = 0; r < repetitions; ++r)
    for (const ComState& s : states)
      t_s.push_back(
          sequential_optimize(s, cfg.target, cfg.bounds, cfg.weights, cfg.lip)
              .solve_time);

  BenchResult res;
  res.holistic = stats_of(std::move(t_h));
  res.sequential = stats_of(std::move(t_s));
  res.ratio = res.sequential.mean > 0.0 ? res.holistic.mean / res.sequential.mean
                                        : 0.0;
  return res;
}

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_scan_csv(std::ostream& out, const std::vector<ScanCell>& cells) {
  out << "x,xd,T_s0_h,T_s1_h,p_h,cost_h,T_s0_s,T_s1_s,p_s,cost_s\n";
  for (const ScanCell& c : cells) {
    out << fmt9(c.state.x) << ',' << fmt9(c.state.xd) << ',';
    if (c.ok && c.has_holistic)
      out << fmt9(c.holistic.params.T_s0) << ',' << fmt9(c.holistic.params.T_s1)
          << ',' << fmt9(c.holistic.params.p) << ',' << fmt9(c.holistic.cost);
    else
      out << ",,,";
    out << ',';
    if (c.ok && c.has_sequential)
      out << fmt9(c.sequential.params.T_s0) << ','
          << fmt9(c.sequential.params.T_s1) << ',' << fmt9(c.sequential.params.p)
          << ',' << fmt9(c.sequential.cost);
    else
      out << ",,,";
    out << '\n';
  }
}

ScanTable read_scan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("scan csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,xd,T_s0_h,T_s1_h,p_h,cost_h,T_s0_s,T_s1_s,p_s,cost_s")
    throw std::runtime_error("scan csv: unexpected header: " + line);

  ScanTable table;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    while (fields.size() < 10) fields.push_back("");
    if (fields.size() != 10)
      throw std::runtime_error("scan csv: line " + std::to_string(lineno) +
                               " has " + std::to_string(fields.size()) +
                               " columns, expected 10");
    auto num = [&](const std::string& s) { return std::stod(s); };
    ScanCell c;
    c.state = ComState{num(fields[0]), num(fields[1])};
    if (!fields[2].empty()) {
      c.holistic.params = {num(fields[2]), num(fields[3]), num(fields[4])};
      c.holistic.cost = num(fields[5]);
      c.has_holistic = true;
      table.has_holistic = true;
    }
    if (!fields[6].empty()) {
      c.sequential.params = {num(fields[6]), num(fields[7]), num(fields[8])};
      c.sequential.cost = num(fields[9]);
      c.has_sequential = true;
      table.has_sequential = true;
    }
    table.cells.push_back(std::move(c));
  }
  return table;
}

}  // namespace steprec
