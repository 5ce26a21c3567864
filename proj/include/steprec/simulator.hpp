#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "steprec/lip_model.hpp"
#include "steprec/step_optimizers.hpp"

namespace steprec {

enum class Approach { Holistic, Sequential };

/// Time-windowed constant CoM acceleration; positive points along
/// nominal travel.
struct PushEvent {
  double t_start = 0.0;
  double duration = 0.0;
  double accel = 0.0;
};

struct FallLimits {
  double x_limit = 1.0;  // m
  double v_limit = 5.0;  // m/s
};

struct Scenario {
  LipParams lip{1.0, 9.81, 0.0};  // rebuilt by validate() so T_c stays exact
  GaitTarget target;
  StepBounds bounds;
  CostWeights weights;
  ComState x0;  // foot-local start state
  Approach approach = Approach::Sequential;
  std::vector<PushEvent> pushes;
  double dt_control = 0.01;
  double dt_int = 0.001;
  double t_end = 10.0;
  FallLimits fall_limits;
};

struct TrajectorySample {
  double t;
  double x_world;
  double xd;
  double foot_world;
  WalkingParams cmd;
  double cost;
  double solve_time;
  ComState x1_pred;  // predicted step-end state of the commanding solve
};

struct StepEvent {
  double t;
  double foot_world;  // new stance foot position after the exchange
  double placement;   // the p* that was executed
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<StepEvent> step_events;
  bool fell = false;
  std::optional<double> fall_time;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(double t, const std::string& what);
  double tick_time() const { return t_; }

 private:
  double t_;
};

/// Throws std::invalid_argument naming the offending field.
void validate_scenario(const Scenario& sc);

/// One RK4 step of xdd = (g/z_c) x + a_ext over dt.
ComState integrate_tick(const ComState& s, double a_ext, double dt,
                        const LipParams& p);

bool detect_fall(const ComState& s, const FallLimits& limits);

Trajectory run_simulation(const Scenario& sc);

/// First time after the last push when the predicted step-end velocity
/// stays within 0.02 m/s of the desired velocity for 0.5 s.
std::optional<double> settling_time(const Trajectory& traj, const Scenario& sc);

inline constexpr double kSettleBand = 0.02;    // m/s
inline constexpr double kSettleWindow = 0.5;   // s

}  // namespace steprec
