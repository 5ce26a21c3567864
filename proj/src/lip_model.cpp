#include "steprec/lip_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace steprec {

LipParams make_params(double z_c, double g) {
  if (!(z_c > 0.0) || !std::isfinite(z_c))
    throw std::invalid_argument("make_params: z_c must be positive, got " +
                                std::to_string(z_c));
  if (!(g > 0.0) || !std::isfinite(g))
    throw std::invalid_argument("make_params: g must be positive, got " +
                                std::to_string(g));
  return LipParams{z_c, g, std::sqrt(z_c / g)};
}

static void check_duration(double t, const char* op) {
  if (!(t >= 0.0))
    throw std::invalid_argument(std::string(op) + ": negative duration " +
                                std::to_string(t));
  if (t > kMaxDuration)
    throw std::invalid_argument(std::string(op) + ": duration " +
                                std::to_string(t) + " exceeds cap of " +
                                std::to_string(kMaxDuration) + " s");
}

ComState propagate(const ComState& s0, double t, const LipParams& p) {
  check_duration(t, "propagate");
  const double c = std::cosh(t / p.T_c);
  const double s = std::sinh(t / p.T_c);
  return ComState{s0.x * c + p.T_c * s0.xd * s,
                  s0.x / p.T_c * s + s0.xd * c};
}

ComState desired_final_state(const GaitTarget& tgt, const LipParams& p) {
  if (!(tgt.T_sd > 0.0))
    throw std::invalid_argument("desired_final_state: T_sd must be positive");
  check_duration(tgt.T_sd, "desired_final_state");
  const double cd = std::cosh(tgt.T_sd / p.T_c);
  const double sd = std::sinh(tgt.T_sd / p.T_c);
  return ComState{p.T_c * sd / (1.0 + cd) * tgt.xd_d, tgt.xd_d};
}

ComState next_step_end(double xd1, double place, double T_s1,
                       const LipParams& p) {
  check_duration(T_s1, "next_step_end");
  const double c1 = std::cosh(T_s1 / p.T_c);
  const double s1 = std::sinh(T_s1 / p.T_c);
  return ComState{-c1 * place + p.T_c * s1 * xd1,
                  -s1 / p.T_c * place + c1 * xd1};
}

double orbital_energy(const ComState& s, const LipParams& p) {
  return 0.5 * s.xd * s.xd - p.g / (2.0 * p.z_c) * s.x * s.x;
}

double critical_offset(const ComState& s, const LipParams& p) {
  return s.x + p.T_c * s.xd;
}

MotionClass classify_motion(const ComState& s, const LipParams& p) {
  // The divergent mode coefficient is (x + T_c*xd)/2; its sign decides
  // whether the CoM eventually travels forward or falls back.
  const double e = critical_offset(s, p);
  if (std::abs(e) <= kCriticalTol) return MotionClass::CriticalStop;
  return e > 0.0 ? MotionClass::PassesOver : MotionClass::Reverses;
}

}  // namespace steprec
