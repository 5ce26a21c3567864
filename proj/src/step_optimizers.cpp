#include "steprec/step_optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "steprec/solvers.hpp"

namespace steprec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_inputs(const ComState& s0, const StepBounds& b, double T_elap) {
  if (!std::isfinite(s0.x) || !std::isfinite(s0.xd))
    throw std::invalid_argument("optimizer: non-finite CoM state");
  if (!(b.T_min > 0.0 && b.T_min <= b.T_max))
    throw std::invalid_argument("optimizer: need 0 < T_min <= T_max");
  if (!(b.L_max > 0.0))
    throw std::invalid_argument("optimizer: L_max must be positive");
  if (!(T_elap >= 0.0))
    throw std::invalid_argument("optimizer: negative elapsed time");
}

double ts0_lower_bound(const StepBounds& b, double T_elap) {
  return std::max(b.T_min - T_elap, 0.0);
}

}  // namespace

StepBounds bounds_from_friction_cone(double theta_m, const LipParams& p,
                                     double T_min, double T_max) {
  if (!(theta_m > 0.0))
    throw std::invalid_argument("bounds_from_friction_cone: theta_m <= 0");
  return StepBounds{T_min, T_max, p.z_c * std::tan(theta_m)};
}

double weighted_sqerr(const ComState& s, const ComState& ref,
                      const StateWeight& w) {
  const double ex = s.x - ref.x;
  const double ev = s.xd - ref.xd;
  return w.pos * ex * ex + w.vel * ev * ev;
}

double two_step_cost(const ComState& s0, const WalkingParams& v,
                     const GaitTarget& tgt, const CostWeights& w,
                     const LipParams& p, ComState* x1_out, ComState* x2_out) {
  const ComState xd = desired_final_state(tgt, p);
  const ComState x1 = propagate(s0, v.T_s0, p);
  const ComState x2 = next_step_end(x1.xd, v.p, v.T_s1, p);
  if (x1_out) *x1_out = x1;
  if (x2_out) *x2_out = x2;
  return weighted_sqerr(x1, xd, w.w1) + weighted_sqerr(x2, xd, w.w2);
}

ComState predict_step_end(const ComState& s0, double T_s0, const LipParams& p) {
  return propagate(s0, T_s0, p);
}

Stage1Result stage1_duration(const ComState& s0, const GaitTarget& tgt,
                             const StepBounds& b, const CostWeights& w,
                             const LipParams& p, double T_elap) {
  check_inputs(s0, b, T_elap);
  const ComState xd = desired_final_state(tgt, p);
  ScalarProblem prob;
  prob.lo = ts0_lower_bound(b, T_elap);
  prob.hi = b.T_max;
  prob.objective = [&](double t) {
    return weighted_sqerr(propagate(s0, t, p), xd, w.w1);
  };
  const ScalarResult r = minimize_scalar(prob);
  return {r.argmin, r.value};
}

double wls_placement(double xd1, double T_s1, const GaitTarget& tgt,
                     const CostWeights& w, const LipParams& p) {
  if (!(T_s1 > 0.0))
    throw std::invalid_argument("wls_placement: T_s1 must be positive");
  const ComState xd = desired_final_state(tgt, p);
  const double c1 = std::cosh(T_s1 / p.T_c);
  const double s1 = std::sinh(T_s1 / p.T_c);
  const double a1 = -c1;
  const double a2 = -s1 / p.T_c;
  const double b1 = xd.x - p.T_c * s1 * xd1;
  const double b2 = xd.xd - c1 * xd1;
  // A^T Q A is a positive scalar (c1 >= 1), so no singularity is possible.
  const double num = a1 * w.q.pos * b1 + a2 * w.q.vel * b2;
  const double den = a1 * a1 * w.q.pos + a2 * a2 * w.q.vel;
  return num / den;
}

double clip_placement(double p_ls, const StepBounds& b) {
  return std::clamp(p_ls, -b.L_max, b.L_max);
}

Stage2Result stage2_step(double xd1, const GaitTarget& tgt, const StepBounds& b,
                         const CostWeights& w, const LipParams& p) {
  const ComState xd = desired_final_state(tgt, p);
  ScalarProblem prob;
  prob.lo = b.T_min;
  prob.hi = b.T_max;
  prob.objective = [&](double t) {
    const double ps = clip_placement(wls_placement(xd1, t, tgt, w, p), b);
    return weighted_sqerr(next_step_end(xd1, ps, t, p), xd, w.w2);
  };
  const ScalarResult r = minimize_scalar(prob);
  const double p_star =
      clip_placement(wls_placement(xd1, r.argmin, tgt, w, p), b);
  return {r.argmin, p_star, r.value};
}

OptimizationOutcome sequential_optimize(const ComState& s0,
                                        const GaitTarget& tgt,
                                        const StepBounds& b,
                                        const CostWeights& w,
                                        const LipParams& p, double T_elap) {
  const auto t0 = Clock::now();
  const Stage1Result s1 = stage1_duration(s0, tgt, b, w, p, T_elap);
  const ComState x1 = propagate(s0, s1.T_s0, p);
  const Stage2Result s2 = stage2_step(x1.xd, tgt, b, w, p);

  OptimizationOutcome out;
  out.params = {s1.T_s0, s2.T_s1, s2.p_star};
  out.cost = two_step_cost(s0, out.params, tgt, w, p, &out.x1_pred, &out.x2_pred);
  out.solve_time = seconds_since(t0);
  return out;
}

OptimizationOutcome holistic_optimize(const ComState& s0, const GaitTarget& tgt,
                                      const StepBounds& b, const CostWeights& w,
                                      const LipParams& p, double T_elap) {
  const auto t0 = Clock::now();
  check_inputs(s0, b, T_elap);
  const ComState xd = desired_final_state(tgt, p);

  BoxProblem prob;
  prob.lo = {ts0_lower_bound(b, T_elap), b.T_min, -b.L_max};
  prob.hi = {b.T_max, b.T_max, b.L_max};
  prob.init = {std::clamp(tgt.T_sd, prob.lo[0], prob.hi[0]),
               std::clamp(tgt.T_sd, prob.lo[1], prob.hi[1]),
               std::clamp(xd.x, prob.lo[2], prob.hi[2])};
  prob.objective = [&](std::span<const double> v) {
    return two_step_cost(s0, {v[0], v[1], v[2]}, tgt, w, p);
  };

  // The sequential solution is cheap and seeds the basin that a pure
  // corner-midpoint restart schedule can miss near critical states.
  {
    const Stage1Result s1 = stage1_duration(s0, tgt, b, w, p, T_elap);
    const ComState x1 = propagate(s0, s1.T_s0, p);
    const Stage2Result s2 = stage2_step(x1.xd, tgt, b, w, p);
    prob.extra_inits.push_back({s1.T_s0, s2.T_s1, s2.p_star});
  }

  BoxResult r = minimize_box(prob);

  // Snap coordinates sitting within solver tolerance of a bound onto it,
  // keeping the snap only if the cost does not degrade.
  for (size_t d = 0; d < 3; ++d) {
    for (double bound : {prob.lo[d], prob.hi[d]}) {
      if (r.argmin[d] != bound && std::abs(r.argmin[d] - bound) < 10.0 * prob.tol) {
        std::vector<double> snapped = r.argmin;
        snapped[d] = bound;
        const double f = prob.objective(snapped);
        if (f <= r.value + 1e-10) {
          r.argmin = std::move(snapped);
          r.value = f;
        }
      }
    }
  }

  OptimizationOutcome out;
  out.params = {r.argmin[0], r.argmin[1], r.argmin[2]};
  out.cost = two_step_cost(s0, out.params, tgt, w, p, &out.x1_pred, &out.x2_pred);
  out.solve_time = seconds_since(t0);
  return out;
}

}  // namespace steprec
