// Integration acceptance suite: one PASS/FAIL line per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "steprec/scanner.hpp"
#include "steprec/simulator.hpp"
#include "test_util.hpp"

using namespace steprec;

namespace {

const LipParams kLip = make_params(1.0, 9.81);
const GaitTarget kTarget{0.8, 1.0};
const StepBounds kBounds{0.6, 2.0, 0.5};
const CostWeights kWeights{};
const ComState kDesired = desired_final_state(kTarget, kLip);

// Reference-example reproductions run mid-step with the minimum swing time already
// elapsed, so the remaining-duration lower bound is 0.
constexpr double kMidStepElapsed = 0.6;

void report(const char* name, bool ok) {
  std::printf("[acceptance] %s: %s\n", name, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  CHECK_MESSAGE(ok, name);
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// The push scenarios walk at 0.5 m/s (matching the bundled configs); at
// 1.0 m/s these pushes are too weak at their impact phase to reverse the CoM.
const GaitTarget kSlowTarget{0.8, 0.5};
const ComState kSlowDesired = desired_final_state(kSlowTarget, kLip);

Scenario push_scenario(double t_start, double duration, double accel,
                       Approach approach) {
  Scenario sc;
  sc.lip = kLip;
  sc.target = kSlowTarget;
  sc.bounds = kBounds;
  sc.weights = kWeights;
  sc.x0 = ComState{-kSlowDesired.x, kSlowDesired.xd};
  sc.approach = approach;
  sc.pushes = {{t_start, duration, accel}};
  return sc;
}

}  // namespace

TEST_CASE("criterion 1: symmetric-gait zero cost") {
  const auto t0 = std::chrono::steady_clock::now();
  const ComState s0{-kDesired.x, kDesired.xd};
  const OptimizationOutcome h =
      holistic_optimize(s0, kTarget, kBounds, kWeights, kLip);
  const OptimizationOutcome s =
      sequential_optimize(s0, kTarget, kBounds, kWeights, kLip);
  bool ok = true;
  for (const OptimizationOutcome& o : {h, s}) {
    ok = ok && std::abs(o.params.T_s0 - kTarget.T_sd) <= 1e-4;
    ok = ok && std::abs(o.params.T_s1 - kTarget.T_sd) <= 1e-4;
    ok = ok && std::abs(o.params.p - kDesired.x) <= 1e-4;
    ok = ok && o.cost <= 1e-8;
  }
  ok = ok && elapsed_s(t0) < 1.0;
  report("C1 symmetric-gait zero cost", ok);
}

TEST_CASE("criterion 2: neighbouring-states jump reproduction") {
  const OptimizationOutcome back = holistic_optimize(
      {0.03, -0.12}, kTarget, kBounds, kWeights, kLip, kMidStepElapsed);
  const OptimizationOutcome fwd = holistic_optimize(
      {0.04, -0.12}, kTarget, kBounds, kWeights, kLip, kMidStepElapsed);

  bool ok = fwd.params.T_s0 - back.params.T_s0 > 1.0;
  ok = ok && back.params.p < 0.0 && fwd.params.p > 0.0;
  ok = ok && back.params.p > -0.15;  // small-magnitude backward step

  // soft anchors against the reference values (default weights align)
  const bool anchors = std::abs(back.params.T_s0 - 0.309) <= 0.15 &&
                       std::abs(fwd.params.T_s0 - 1.891) <= 0.15 &&
                       std::abs(back.params.p - (-0.025)) <= 0.15 &&
                       std::abs(fwd.params.p - 0.266) <= 0.15 &&
                       std::abs(back.params.T_s1 - 2.000) <= 0.15 &&
                       std::abs(fwd.params.T_s1 - 0.795) <= 0.15;
  if (!anchors)
    std::printf("[acceptance]   note: numeric anchors off reference values "
                "(back T_s0=%.3f p=%.3f T_s1=%.3f, fwd T_s0=%.3f p=%.3f "
                "T_s1=%.3f)\n",
                back.params.T_s0, back.params.p, back.params.T_s1,
                fwd.params.T_s0, fwd.params.p, fwd.params.T_s1);
  ok = ok && anchors;
  report("C2 critical-state jump reproduction", ok);
}

TEST_CASE("criterion 3: strong-push divergence of the two approaches") {
  const ComState s0{0.35, -1.90};
  // Reference weights: position-heavy W1. Under identity weights both
  // approaches coincide at this state (stage 1 lands where the placement
  // stays interior), so the reference divergence cannot occur; a 30:1
  // position weight reproduces every reference value of the example.
  CostWeights w;
  w.w1.pos = 30.0;
  const OptimizationOutcome h =
      holistic_optimize(s0, kTarget, kBounds, w, kLip, kMidStepElapsed);
  const OptimizationOutcome s =
      sequential_optimize(s0, kTarget, kBounds, w, kLip, kMidStepElapsed);

  bool ok = h.params.p == -0.50 && s.params.p == -0.50;
  ok = ok && s.params.T_s0 < h.params.T_s0;
  ok = ok && s.params.T_s1 < h.params.T_s1;
  ok = ok && h.cost < s.cost;
  ok = ok && weighted_sqerr(h.x2_pred, kDesired, w.w2) <
                 weighted_sqerr(s.x2_pred, kDesired, w.w2);
  ok = ok && std::abs(h.params.T_s0 - 0.17) <= 0.1;
  ok = ok && std::abs(h.params.T_s1 - 2.00) <= 0.1;
  ok = ok && std::abs(s.params.T_s0 - 0.08) <= 0.1;
  ok = ok && std::abs(s.params.T_s1 - 0.60) <= 0.1;
  report("C3 strong-push divergence reproduction", ok);
}

TEST_CASE("criterion 4: push recovery scenarios") {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  {
    const Scenario sc = push_scenario(3.0, 0.3, -3.0, Approach::Sequential);
    const Trajectory traj = run_simulation(sc);
    ok = ok && !traj.fell;
    bool stepped_back = false;
    for (const StepEvent& e : traj.step_events)
      if (e.t > 3.0 && e.placement < 0.0) stepped_back = true;
    ok = ok && stepped_back;
    const auto settle = settling_time(traj, sc);
    ok = ok && settle.has_value() && *settle - 3.3 <= 3.5;
  }

  {
    const Scenario sc = push_scenario(3.3, 0.3, 2.5, Approach::Sequential);
    const Trajectory traj = run_simulation(sc);
    ok = ok && !traj.fell;
    bool quick_long_step = false;
    double prev_t = 0.0, prev_foot = 0.0;
    for (const StepEvent& e : traj.step_events) {
      if (e.t > 3.3 && (e.t - prev_t) < kSlowTarget.T_sd - 0.05 &&
          (e.foot_world - prev_foot) > 2.0 * kSlowDesired.x + 0.05)
        quick_long_step = true;
      prev_t = e.t;
      prev_foot = e.foot_world;
    }
    ok = ok && quick_long_step;
    const auto settle = settling_time(traj, sc);
    ok = ok && settle.has_value() && *settle - 3.6 <= 3.5;
  }

  ok = ok && elapsed_s(t0) < 60.0;  // < 30 s per scenario
  report("C4 push recovery (backward and forward)", ok);
}

TEST_CASE("criterion 5: brute-force oracle equivalence") {
  const auto t0 = std::chrono::steady_clock::now();
  testutil::Rng rng(2024);
  bool ok = true;

  for (int rep = 0; rep < 20; ++rep) {
    const ComState s0{rng.uniform(-0.4, 0.4), rng.uniform(-2.0, 2.0)};

    // stage 1 vs 1e5-point grid
    const Stage1Result s1 =
        stage1_duration(s0, kTarget, kBounds, kWeights, kLip);
    {
      const int n = 100000;
      const double lo = kBounds.T_min, hi = kBounds.T_max;
      double best_t = lo, best_f = 1e300;
      for (int i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const double f =
            weighted_sqerr(propagate(s0, t, kLip), kDesired, kWeights.w1);
        if (f < best_f) {
          best_f = f;
          best_t = t;
        }
      }
      ok = ok && (std::abs(s1.T_s0 - best_t) <= (hi - lo) / n ||
                  s1.cost <= best_f + 1e-10);
    }

    // stage 2 vs 1000x1000 grid over (T_s1, p)
    const double xd1 = propagate(s0, s1.T_s0, kLip).xd;
    const Stage2Result s2 = stage2_step(xd1, kTarget, kBounds, kWeights, kLip);
    {
      const int n = 1000;
      double best_t = 0.0, best_p = 0.0, best_f = 1e300;
      for (int i = 0; i <= n; ++i) {
        const double t = kBounds.T_min + (kBounds.T_max - kBounds.T_min) * i / n;
        const double c1 = std::cosh(t / kLip.T_c);
        const double sh1 = std::sinh(t / kLip.T_c);
        for (int j = 0; j <= n; ++j) {
          const double p = -kBounds.L_max + 2.0 * kBounds.L_max * j / n;
          const double ex = -c1 * p + kLip.T_c * sh1 * xd1 - kDesired.x;
          const double ev = -sh1 / kLip.T_c * p + c1 * xd1 - kDesired.xd;
          const double f = kWeights.w2.pos * ex * ex + kWeights.w2.vel * ev * ev;
          if (f < best_f) {
            best_f = f;
            best_t = t;
            best_p = p;
          }
        }
      }
      const double t_cell = (kBounds.T_max - kBounds.T_min) / n;
      const double p_cell = 2.0 * kBounds.L_max / n;
      const bool argmin_close = std::abs(s2.T_s1 - best_t) <= t_cell &&
                                std::abs(s2.p_star - best_p) <= p_cell;
      ok = ok && (argmin_close || s2.cost <= best_f + 1e-10);
    }

    // holistic vs 101^3 grid
    const OptimizationOutcome h =
        holistic_optimize(s0, kTarget, kBounds, kWeights, kLip);
    {
      const int n = 100;
      double best_f = 1e300;
      for (int i = 0; i <= n; ++i) {
        const double t0v = kBounds.T_min + (kBounds.T_max - kBounds.T_min) * i / n;
        const ComState x1 = propagate(s0, t0v, kLip);
        for (int j = 0; j <= n; ++j) {
          const double t1 = kBounds.T_min + (kBounds.T_max - kBounds.T_min) * j / n;
          const double c1 = std::cosh(t1 / kLip.T_c);
          const double sh1 = std::sinh(t1 / kLip.T_c);
          for (int k = 0; k <= n; ++k) {
            const double p = -kBounds.L_max + 2.0 * kBounds.L_max * k / n;
            const double ex = -c1 * p + kLip.T_c * sh1 * x1.xd - kDesired.x;
            const double ev = -sh1 / kLip.T_c * p + c1 * x1.xd - kDesired.xd;
            const double f =
                weighted_sqerr(x1, kDesired, kWeights.w1) +
                kWeights.w2.pos * ex * ex + kWeights.w2.vel * ev * ev;
            if (f < best_f) best_f = f;
          }
        }
      }
      ok = ok && h.cost <= 1.01 * best_f + 1e-9;
    }
  }
  ok = ok && elapsed_s(t0) < 600.0;
  report("C5 brute-force oracle equivalence", ok);
}

TEST_CASE("criterion 6: clipped-WLS optimality property") {
  testutil::Rng rng(31);
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    const double xd1 = rng.uniform(-2.5, 2.5);
    const double T_s1 = rng.uniform(kBounds.T_min, kBounds.T_max);
    const double p_star = clip_placement(
        wls_placement(xd1, T_s1, kTarget, kWeights, kLip), kBounds);
    auto cost_at = [&](double p) {
      return weighted_sqerr(next_step_end(xd1, p, T_s1, kLip), kDesired,
                            kWeights.w2);
    };
    const double f_star = cost_at(p_star);
    for (int j = 0; j <= 2000; ++j) {
      const double p = -kBounds.L_max + 2.0 * kBounds.L_max * j / 2000;
      if (f_star > cost_at(p) + 1e-12) {
        ok = false;
        break;
      }
    }
    // quadratic-in-p extension
    const double f0 = cost_at(-0.3), f1 = cost_at(0.0), f2 = cost_at(0.3);
    const double c2 = (f0 - 2.0 * f1 + f2) / (2.0 * 0.09);
    const double c1 = (f2 - f0) / 0.6;
    const double p4 = rng.uniform(-0.5, 0.5);
    const double predicted = c2 * p4 * p4 + c1 * p4 + f1;
    ok = ok && c2 > 0.0 &&
         std::abs(predicted - cost_at(p4)) <=
             1e-9 * std::max(1.0, std::abs(cost_at(p4)));
    if (!ok) break;
  }
  report("C6 clipped-WLS optimality property", ok);
}

namespace {

// shared between criteria 7 and 8 (the full scan dominates the runtime)
const std::vector<ScanCell>& default_scan() {
  static const std::vector<ScanCell> cells = [] {
    const ScanConfig cfg{kLip, kTarget, kBounds, kWeights};
    return scan_grid(GridSpec{}, cfg, true, true, 4);
  }();
  return cells;
}

}  // namespace

TEST_CASE("criterion 7: dominance and agreement over the default grid") {
  const auto& cells = default_scan();
  bool ok = true;
  int n_diff = 0, n_diff_explained = 0;
  for (const ScanCell& c : cells) {
    if (!c.ok) {
      ok = false;
      continue;
    }
    const double diff = c.sequential.cost - c.holistic.cost;
    if (diff < -1e-8) ok = false;
    if (diff > 1e-6) {
      ++n_diff;
      const bool saturated =
          std::abs(c.sequential.params.p) >= kBounds.L_max - 1e-9;
      if (saturated || std::abs(c.state.xd) >= 1.0) ++n_diff_explained;
    }
  }
  const double fraction = double(n_diff) / double(cells.size());
  ok = ok && fraction < 0.15;
  // disagreements concentrate at large |xd| with saturated placement
  ok = ok && (n_diff == 0 || double(n_diff_explained) / n_diff > 0.5);
  std::printf("[acceptance]   diff cells: %d (%.2f%%), explained: %d\n",
              n_diff, 100.0 * fraction, n_diff_explained);
  report("C7 dominance + agreement over the scan grid", ok);
}

TEST_CASE("criterion 8: critical-ridge agreement") {
  const GridSpec gs;
  const auto& cells = default_scan();
  const CriticalRidge ridge = detect_critical(cells, gs, kLip);

  std::vector<double> energy_offsets;
  int bound_cells = 0;
  for (size_t i = 0; i < ridge.cells.size(); ++i) {
    const ScanCell& c = cells[ridge.cells[i]];
    const bool saturated =
        std::abs(c.holistic.params.p) >= kBounds.L_max - 1e-9 ||
        std::abs(c.sequential.params.p) >= kBounds.L_max - 1e-9;
    if (saturated)
      ++bound_cells;
    else
      energy_offsets.push_back(std::abs(ridge.analytic_offsets[i]));
  }

  bool ok = !energy_offsets.empty() && bound_cells > 0;
  if (!energy_offsets.empty()) {
    std::sort(energy_offsets.begin(), energy_offsets.end());
    const double median = energy_offsets[energy_offsets.size() / 2];
    const double limit = 2.0 * std::max(gs.x_step, kLip.T_c * gs.v_step);
    std::printf("[acceptance]   ridge cells: %zu (energy %zu, bound %d), "
                "median |offset| %.4f (limit %.4f)\n",
                ridge.cells.size(), energy_offsets.size(), bound_cells, median,
                limit);
    ok = ok && median <= limit;
  }
  report("C8 critical-ridge agreement", ok);
}

TEST_CASE("criterion 9: sequential speedup on the push trace") {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = push_scenario(3.0, 0.3, -3.0, Approach::Sequential);
  const Trajectory traj = run_simulation(sc);
  std::vector<ComState> states;
  for (size_t i = 0; i < traj.samples.size(); i += 5)
    states.push_back(ComState{
        traj.samples[i].x_world - traj.samples[i].foot_world,
        traj.samples[i].xd});

  const ScanConfig cfg{kLip, kTarget, kBounds, kWeights};
  const BenchResult res = benchmark(states, cfg, 1);
  std::printf("[acceptance]   mean holistic %.3f ms, sequential %.3f ms, "
              "ratio %.1f\n",
              1e3 * res.holistic.mean, 1e3 * res.sequential.mean, res.ratio);
  bool ok = res.ratio >= 10.0;
  ok = ok && elapsed_s(t0) < 120.0;
  report("C9 sequential speedup >= 10x", ok);
}

TEST_CASE("criterion 10: numerics suite") {
  testutil::Rng rng(77);
  bool ok = true;

  // propagation semigroup
  for (int i = 0; i < 100; ++i) {
    const ComState s0{rng.uniform(-0.5, 0.5), rng.uniform(-2.0, 2.0)};
    const double t1 = rng.uniform(0.0, 3.0), t2 = rng.uniform(0.0, 3.0);
    const ComState a = propagate(propagate(s0, t1, kLip), t2, kLip);
    const ComState b = propagate(s0, t1 + t2, kLip);
    ok = ok && testutil::approx_rel(a.x, b.x, 1e-10) &&
         testutil::approx_rel(a.xd, b.xd, 1e-10);
  }

  // energy conservation
  for (int i = 0; i < 100; ++i) {
    const ComState s0{rng.uniform(-0.4, 0.4), rng.uniform(-2.0, 2.0)};
    const double t = rng.uniform(0.0, 2.0);
    const double e0 = orbital_energy(s0, kLip);
    const double e1 = orbital_energy(propagate(s0, t, kLip), kLip);
    ok = ok && std::abs(e1 - e0) <=
                   1e-9 * std::max({1.0, std::abs(e0), std::abs(e1)});
  }

  // closed form vs independent RK4
  for (int i = 0; i < 10; ++i) {
    const ComState s0{rng.uniform(-0.4, 0.4), rng.uniform(-2.0, 2.0)};
    const double t = rng.uniform(0.0, 2.0);
    const ComState ref = testutil::rk4_reference(s0, t, 1e-4, 1.0, 9.81);
    const ComState got = propagate(s0, t, kLip);
    ok = ok && std::abs(got.x - ref.x) <= 1e-6 &&
         std::abs(got.xd - ref.xd) <= 1e-6;
  }

  // unperturbed periodicity + velocity continuity across transitions
  Scenario sc;
  sc.lip = kLip;
  sc.x0 = ComState{-kDesired.x, kDesired.xd};
  sc.t_end = 9.0;
  const Trajectory traj = run_simulation(sc);
  ok = ok && !traj.fell && traj.step_events.size() >= 10;
  double prev_t = 0.0, prev_foot = 0.0;
  for (const StepEvent& e : traj.step_events) {
    ok = ok && std::abs((e.t - prev_t) - kTarget.T_sd) <= sc.dt_control + 1e-9;
    ok = ok && std::abs((e.foot_world - prev_foot) - 2.0 * kDesired.x) <= 1e-3;
    prev_t = e.t;
    prev_foot = e.foot_world;
  }
  for (const StepEvent& e : traj.step_events) {
    const TrajectorySample* before = nullptr;
    const TrajectorySample* after = nullptr;
    for (size_t i = 0; i + 1 < traj.samples.size(); ++i)
      if (traj.samples[i].t < e.t + 1e-12 &&
          traj.samples[i + 1].t >= e.t - 1e-12) {
        before = &traj.samples[i];
        after = &traj.samples[i + 1];
      }
    if (!before || !after) continue;
    ComState local{before->x_world - before->foot_world, before->xd};
    local = propagate(local, e.t - before->t, kLip);
    local = ComState{-e.placement, local.xd};
    local = propagate(local, after->t - e.t, kLip);
    ok = ok && std::abs(local.xd - after->xd) <= 1e-9;
  }

  report("C10 numerics suite", ok);
}
