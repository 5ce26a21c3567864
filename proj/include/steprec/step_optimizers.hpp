#pragma once

#include "steprec/lip_model.hpp"

namespace steprec {

struct StepBounds {
  double T_min = 0.6;  // minimum step duration (s)
  double T_max = 2.0;  // maximum step duration (s)
  double L_max = 0.5;  // maximum step length (m)
};

/// L_max from the friction-cone half angle: z_c * tan(theta_m).
StepBounds bounds_from_friction_cone(double theta_m, const LipParams& p,
                                     double T_min = 0.6, double T_max = 2.0);

/// Diagonal 2x2 weight on a CoM state error.
struct StateWeight {
  double pos = 1.0;
  double vel = 1.0;
};

struct CostWeights {
  StateWeight w1;  // current-step final-state error
  StateWeight w2;  // next-step final-state error
  StateWeight q;   // least-squares placement weight
};

/// The optimization triple v = [T_s0, T_s1, p].
struct WalkingParams {
  double T_s0 = 0.0;
  double T_s1 = 0.0;
  double p = 0.0;
};

struct OptimizationOutcome {
  WalkingParams params;
  double cost = 0.0;
  ComState x1_pred;  // predicted current-step end
  ComState x2_pred;  // predicted next-step end
  double solve_time = 0.0;  // wall-clock seconds of the solve
};

double weighted_sqerr(const ComState& s, const ComState& ref,
                      const StateWeight& w);

/// Combined two-step cost of a parameter triple, plus the predicted states.
double two_step_cost(const ComState& s0, const WalkingParams& v,
                     const GaitTarget& tgt, const CostWeights& w,
                     const LipParams& p, ComState* x1_out = nullptr,
                     ComState* x2_out = nullptr);

ComState predict_step_end(const ComState& s0, double T_s0, const LipParams& p);

/// Simultaneous box-constrained minimization over (T_s0, T_s1, p).
OptimizationOutcome holistic_optimize(const ComState& s0, const GaitTarget& tgt,
                                      const StepBounds& b, const CostWeights& w,
                                      const LipParams& p, double T_elap = 0.0);

struct Stage1Result {
  double T_s0;
  double cost;
};

/// Stage 1: remaining current-step duration minimizing the current-step
/// final-state error over [max(T_min - T_elap, 0), T_max].
Stage1Result stage1_duration(const ComState& s0, const GaitTarget& tgt,
                             const StepBounds& b, const CostWeights& w,
                             const LipParams& p, double T_elap = 0.0);

/// Closed-form weighted-least-squares next foot placement for a given
/// next-step duration (unconstrained).
double wls_placement(double xd1, double T_s1, const GaitTarget& tgt,
                     const CostWeights& w, const LipParams& p);

double clip_placement(double p_ls, const StepBounds& b);

struct Stage2Result {
  double T_s1;
  double p_star;
  double cost;
};

/// Stage 2: next-step duration search with the placement given in closed
/// form by wls_placement and clipped to +-L_max.
Stage2Result stage2_step(double xd1, const GaitTarget& tgt, const StepBounds& b,
                         const CostWeights& w, const LipParams& p);

/// Stage 1 followed by stage 2; cost reported on the same combined
/// two-term scale as holistic_optimize.
OptimizationOutcome sequential_optimize(const ComState& s0,
                                        const GaitTarget& tgt,
                                        const StepBounds& b,
                                        const CostWeights& w,
                                        const LipParams& p,
                                        double T_elap = 0.0);

}  // namespace steprec
