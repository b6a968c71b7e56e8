#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "lrrl/rng.hpp"

namespace lrrl {

enum class Family { Valve, Reach };

// Valve-rotation task: 1-D torque control of a damped rotor toward a
// target angle.
struct ValveParams {
  double gain = 1.0;          // torque effectiveness, [0.7, 1.3]
  double friction = 0.15;     // viscous damping 1/s, [0.05, 0.3]
  int direction = 1;          // +1 clockwise, -1 counterclockwise
  double target_angle = 1.5;  // radians, (-pi, pi]
  static constexpr double kDt = 0.05;
  static constexpr double kVMax = 4.0;
};

// Planar goal-reach task: 2-D velocity-level point mass with a rotated
// actuation frame (emulating differing insertion orientations).
struct ReachParams {
  double goal_x = 0.5, goal_y = 0.5;  // [-1, 1]^2
  double gain = 1.0;                  // [0.7, 1.3]
  double friction = 0.15;             // [0.05, 0.3]
  double rotation = 0.0;              // actuation-frame rotation, (-pi, pi]
  static constexpr double kDt = 0.1;
  static constexpr double kVMax = 1.0;
  static constexpr double kWorkspace = 1.5;
};

struct TaskSpec {
  Family family = Family::Valve;
  std::variant<ValveParams, ReachParams> params = ValveParams{};
  int episode_len = 100;
  long t_task = 15000;
  double success_eps = 0.05;
  int task_id = 1;

  const ValveParams& valve() const { return std::get<ValveParams>(params); }
  const ReachParams& reach() const { return std::get<ReachParams>(params); }
  int state_dim() const { return family == Family::Valve ? 3 : 4; }
  int action_dim() const { return family == Family::Valve ? 1 : 2; }
};

// Observation plus the internal pose. For the valve the observation is
// (cos theta, sin theta, theta_dot); for reach it is (x, y, vx, vy). All
// components are rounded to float32 precision so stored transitions
// reproduce rewards bit-exactly.
struct EnvState {
  std::vector<double> obs;
  double theta = 0.0;  // valve internal angle
  int step_index = 0;
};

struct StepResult {
  EnvState next_state;
  double reward = 0.0;
  bool done = false;
};

// Wrap an angle into (-pi, pi].
double wrap_angle(double x);

TaskSpec default_task(Family family);

EnvState env_reset(const TaskSpec& spec, Rng& rng);

// Deterministic dynamics step. Actions are clamped to [-1, 1]. Stepping a
// finished episode throws UsageError. The reward is evaluated on the
// transition via reward_fn, using the float32-rounded observations.
StepResult env_step(const TaskSpec& spec, const EnvState& state,
                    std::span<const double> action);

// Pure reward function over observation vectors; usable on stored
// transitions for relabeling.
double reward_fn(const TaskSpec& spec, std::span<const double> s,
                 std::span<const double> a, std::span<const double> s_next);

bool is_success(const TaskSpec& spec, const EnvState& final_state);

// Terminal error metric used by evaluation: wrapped angle error (valve) or
// goal distance (reach).
double goal_error(const TaskSpec& spec, const EnvState& state);

std::vector<TaskSpec> sample_sequence(Family family, int n, uint64_t seed);

// Adversarial sequence: valve alternates rotation direction +1, -1, ...;
// reach alternates actuation rotation 0, pi/2, ...
std::vector<TaskSpec> hard_sequence(Family family, int n, uint64_t seed);

// Number of env_step calls per spec (by task_id), used to assert
// data-collection locality in tests.
long env_step_count(int task_id);
void reset_env_step_counts();

}  // namespace lrrl
