#include "steprec/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace steprec {

SimulationError::SimulationError(double t, const std::string& what)
    : std::runtime_error("simulation failed at t=" + std::to_string(t) + ": " +
                         what),
      t_(t) {}

void validate_scenario(const Scenario& sc) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("scenario." + field + ": " + why);
  };
  if (!(sc.lip.z_c > 0.0)) fail("lip.z_c", "must be positive");
  if (!(sc.lip.g > 0.0)) fail("lip.g", "must be positive");
  if (!(sc.target.T_sd > 0.0)) fail("target.T_sd", "must be positive");
  if (!(sc.bounds.T_min > 0.0)) fail("bounds.T_min", "must be positive");
  if (!(sc.bounds.T_min <= sc.bounds.T_max))
    fail("bounds.T_min", "must not exceed T_max");
  if (!(sc.bounds.L_max > 0.0)) fail("bounds.L_max", "must be positive");
  if (!(sc.dt_int > 0.0)) fail("dt_int", "must be positive");
  if (!(sc.dt_control > 0.0)) fail("dt_control", "must be positive");
  if (sc.dt_int > sc.dt_control) fail("dt_int", "must not exceed dt_control");
  const double ratio = sc.dt_control / sc.dt_int;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    fail("dt_int", "must divide dt_control evenly");
  if (!(sc.t_end > 0.0)) fail("t_end", "must be positive");
  if (!std::isfinite(sc.x0.x) || !std::isfinite(sc.x0.xd))
    fail("x0", "must be finite");
  if (!(sc.fall_limits.x_limit > 0.0)) fail("fall_limits.x_limit", "must be positive");
  if (!(sc.fall_limits.v_limit > 0.0)) fail("fall_limits.v_limit", "must be positive");

  std::vector<PushEvent> pushes = sc.pushes;
  std::sort(pushes.begin(), pushes.end(),
            [](const PushEvent& a, const PushEvent& b) {
              return a.t_start < b.t_start;
            });
  for (size_t i = 0; i < pushes.size(); ++i) {
    if (!(pushes[i].duration > 0.0)) fail("pushes", "duration must be positive");
    if (i + 1 < pushes.size() &&
        pushes[i].t_start + pushes[i].duration > pushes[i + 1].t_start + 1e-12)
      fail("pushes", "events overlap in time");
  }
}

ComState integrate_tick(const ComState& s, double a_ext, double dt,
                        const LipParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_tick: dt <= 0");
  const double w2 = p.g / p.z_c;
  auto acc = [&](double x) { return w2 * x + a_ext; };

  const double k1x = s.xd, k1v = acc(s.x);
  const double k2x = s.xd + 0.5 * dt * k1v, k2v = acc(s.x + 0.5 * dt * k1x);
  const double k3x = s.xd + 0.5 * dt * k2v, k3v = acc(s.x + 0.5 * dt * k2x);
  const double k4x = s.xd + dt * k3v, k4v = acc(s.x + dt * k3x);
  return ComState{s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
                  s.xd + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

bool detect_fall(const ComState& s, const FallLimits& limits) {
  return std::abs(s.x) > limits.x_limit || std::abs(s.xd) > limits.v_limit;
}

namespace {

double push_accel(const std::vector<PushEvent>& pushes, double t) {
  double a = 0.0;
  for (const PushEvent& p : pushes)
    if (t >= p.t_start && t < p.t_start + p.duration) a += p.accel;
  return a;
}

/// Integrates `dur` seconds starting at absolute time `t_abs`, in
/// substeps of dt_int plus a final remainder. Push acceleration is held
/// constant over each substep.
void integrate_segment(ComState& s, double t_abs, double dur,
                       const Scenario& sc) {
  double done = 0.0;
  while (done < dur - 1e-15) {
    const double h = std::min(sc.dt_int, dur - done);
    s = integrate_tick(s, push_accel(sc.pushes, t_abs + done), h, sc.lip);
    done += h;
  }
}

OptimizationOutcome solve(const Scenario& sc, const ComState& s,
                          double T_elap) {
  if (sc.approach == Approach::Holistic)
    return holistic_optimize(s, sc.target, sc.bounds, sc.weights, sc.lip,
                             T_elap);
  return sequential_optimize(s, sc.target, sc.bounds, sc.weights, sc.lip,
                             T_elap);
}

}  // namespace

Trajectory run_simulation(const Scenario& sc_in) {
  Scenario sc = sc_in;
  sc.lip = make_params(sc.lip.z_c, sc.lip.g);
  validate_scenario(sc);

  Trajectory traj;
  ComState local = sc.x0;
  double foot_world = 0.0;
  double T_elap = 0.0;
  const long n_ticks = std::lround(sc.t_end / sc.dt_control);

  for (long k = 0; k < n_ticks; ++k) {
    const double t = k * sc.dt_control;
    OptimizationOutcome out;
    try {
      out = solve(sc, local, T_elap);
    } catch (const std::exception& e) {
      throw SimulationError(t, e.what());
    }
    traj.samples.push_back({t, foot_world + local.x, local.xd, foot_world,
                            out.params, out.cost, out.solve_time, out.x1_pred});

    if (out.params.T_s0 <= sc.dt_control + 1e-12) {
      // Execute the support exchange mid-tick at the exact remaining time.
      if (out.params.T_s0 > 0.0)
        integrate_segment(local, t, out.params.T_s0, sc);
      foot_world += local.x + out.params.p;  // new foot at CoM_world + p*
      traj.step_events.push_back({t + out.params.T_s0, foot_world, out.params.p});
      local = ComState{-out.params.p, local.xd};  // velocity is continuous
      const double rest = sc.dt_control - out.params.T_s0;
      if (rest > 0.0) integrate_segment(local, t + out.params.T_s0, rest, sc);
      T_elap = rest;
    } else {
      integrate_segment(local, t, sc.dt_control, sc);
      T_elap += sc.dt_control;
    }

    if (detect_fall(local, sc.fall_limits)) {
      traj.fell = true;
      traj.fall_time = (k + 1) * sc.dt_control;
      break;
    }
  }
  return traj;
}

std::optional<double> settling_time(const Trajectory& traj,
                                    const Scenario& sc) {
  double t_ref = 0.0;
  for (const PushEvent& p : sc.pushes)
    t_ref = std::max(t_ref, p.t_start + p.duration);

  const auto& s = traj.samples;
  if (s.empty()) return std::nullopt;
  auto ok = [&](const TrajectorySample& a) {
    return std::abs(a.x1_pred.xd - sc.target.xd_d) < kSettleBand;
  };
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i].t < t_ref || !ok(s[i])) continue;
    // candidate start; the band must hold over a full window
    bool sustained = true;
    bool window_complete = false;
    for (size_t j = i; j < s.size() && s[j].t <= s[i].t + kSettleWindow; ++j) {
      if (!ok(s[j])) {
        sustained = false;
        break;
      }
      if (s[j].t >= s[i].t + kSettleWindow - 1e-9) window_complete = true;
    }
    if (sustained && window_complete) return s[i].t;
  }
  return std::nullopt;
}

}  // namespace steprec
