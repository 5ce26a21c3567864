#pragma once

namespace steprec {

/// Physical constants of the linear inverted pendulum.
/// T_c is always sqrt(z_c / g); construct through make_params().
struct LipParams {
  double z_c;
  double g;
  double T_c;
};

LipParams make_params(double z_c, double g);

/// CoM position and velocity in the stance-foot-local frame.
struct ComState {
  double x = 0.0;
  double xd = 0.0;
};

/// Desired step duration and CoM velocity at step end.
struct GaitTarget {
  double T_sd = 0.8;
  double xd_d = 1.0;
};

enum class MotionClass {
  PassesOver,    // CoM ends up moving forward (crosses or stays past the pivot)
  Reverses,      // CoM ends up falling back
  CriticalStop,  // zero-energy approach, asymptotic stop over the pivot
};

// Durations above this would overflow exp(t/T_c); all experiments stay <= 2 s.
inline constexpr double kMaxDuration = 10.0;
inline constexpr double kCriticalTol = 1e-12;

/// Closed-form LIP propagation over time t (no numeric integration).
ComState propagate(const ComState& s0, double t, const LipParams& p);

/// Desired final state [x_d, xd_d] of a symmetric step.
ComState desired_final_state(const GaitTarget& tgt, const LipParams& p);

/// End state of the next step, taken in the local frame of the new
/// stance foot placed at offset `place` from the CoM.
/// Identical to propagate([-place, xd1], T_s1).
ComState next_step_end(double xd1, double place, double T_s1,
                       const LipParams& p);

/// Conserved orbital energy xd^2/2 - (g/2 z_c) x^2.
double orbital_energy(const ComState& s, const LipParams& p);

/// Signed distance x + T_c*xd from the critical line; equals the
/// capture-point offset. Zero exactly on the line.
double critical_offset(const ComState& s, const LipParams& p);

MotionClass classify_motion(const ComState& s, const LipParams& p);

}  // namespace steprec
