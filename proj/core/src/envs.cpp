#include "lrrl/envs.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "lrrl/errors.hpp"

namespace lrrl {

namespace {

// Round to float32 precision. The volatile store blocks an optimizer bug
// where the narrowing cast on sincos results is dropped at -O3.
double f32(double x) {
  volatile float f = static_cast<float>(x);
  return static_cast<double>(f);
}

double clamp(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

std::mutex g_count_mutex;
std::map<int, long> g_step_counts;

void count_step(int task_id) {
  std::lock_guard<std::mutex> lock(g_count_mutex);
  ++g_step_counts[task_id];
}

}  // namespace

long env_step_count(int task_id) {
  std::lock_guard<std::mutex> lock(g_count_mutex);
  auto it = g_step_counts.find(task_id);
  return it == g_step_counts.end() ? 0 : it->second;
}

void reset_env_step_counts() {
  std::lock_guard<std::mutex> lock(g_count_mutex);
  g_step_counts.clear();
}

double wrap_angle(double x) {
  double y = std::fmod(x + M_PI, 2.0 * M_PI);
  if (y <= 0.0) y += 2.0 * M_PI;
  return y - M_PI;
}

TaskSpec default_task(Family family) {
  TaskSpec spec;
  spec.family = family;
  if (family == Family::Valve) {
    spec.params = ValveParams{};
    spec.episode_len = 100;
  } else {
    spec.params = ReachParams{};
    spec.episode_len = 75;
  }
  spec.t_task = family == Family::Valve ? 15000 : 20000;
  return spec;
}

EnvState env_reset(const TaskSpec& spec, Rng& rng) {
  EnvState s;
  s.step_index = 0;
  if (spec.family == Family::Valve) {
    s.theta = 0.0;
    s.obs = {1.0, 0.0, 0.0};
  } else {
    double x = f32(rng.uniform(-0.05, 0.05));
    double y = f32(rng.uniform(-0.05, 0.05));
    s.obs = {x, y, 0.0, 0.0};
  }
  return s;
}

double reward_fn(const TaskSpec& spec, std::span<const double> s,
                 std::span<const double> a, std::span<const double> s_next) {
  (void)s;
  (void)a;
  if (spec.family == Family::Valve) {
    const double theta = std::atan2(s_next[1], s_next[0]);
    const double err = std::abs(wrap_angle(theta - spec.valve().target_angle));
    return -0.5 * err + (err < 0.05 ? 1.0 : 0.0);
  }
  const double dx = s_next[0] - spec.reach().goal_x;
  const double dy = s_next[1] - spec.reach().goal_y;
  return 1.0 - std::tanh(10.0 * std::sqrt(dx * dx + dy * dy));
}

StepResult env_step(const TaskSpec& spec, const EnvState& state,
                    std::span<const double> action) {
  if (state.step_index >= spec.episode_len) {
    throw UsageError("env_step: episode already finished");
  }
  if (static_cast<int>(action.size()) != spec.action_dim()) {
    throw ShapeError("env_step: action dimension mismatch");
  }
  count_step(spec.task_id);
  StepResult result;
  EnvState& next = result.next_state;
  next.step_index = state.step_index + 1;
  std::vector<double> a(action.begin(), action.end());
  for (double& v : a) v = f32(clamp(v, -1.0, 1.0));
  if (spec.family == Family::Valve) {
    const ValveParams& p = spec.valve();
    const double theta_dot = state.obs[2];
    double theta_dot_next =
        clamp(theta_dot + ValveParams::kDt *
                              (p.gain * p.direction * a[0] -
                               p.friction * theta_dot),
              -ValveParams::kVMax, ValveParams::kVMax);
    theta_dot_next = f32(theta_dot_next);
    next.theta = state.theta + ValveParams::kDt * theta_dot_next;
    next.obs = {f32(std::cos(next.theta)), f32(std::sin(next.theta)),
                theta_dot_next};
  } else {
    const ReachParams& p = spec.reach();
    const double c = std::cos(p.rotation), s = std::sin(p.rotation);
    const double ax = c * a[0] - s * a[1];
    const double ay = s * a[0] + c * a[1];
    double vx = clamp(state.obs[2] + ReachParams::kDt *
                                         (p.gain * ax - p.friction * state.obs[2]),
                      -ReachParams::kVMax, ReachParams::kVMax);
    double vy = clamp(state.obs[3] + ReachParams::kDt *
                                         (p.gain * ay - p.friction * state.obs[3]),
                      -ReachParams::kVMax, ReachParams::kVMax);
    vx = f32(vx);
    vy = f32(vy);
    double px = clamp(state.obs[0] + ReachParams::kDt * vx,
                      -ReachParams::kWorkspace, ReachParams::kWorkspace);
    double py = clamp(state.obs[1] + ReachParams::kDt * vy,
                      -ReachParams::kWorkspace, ReachParams::kWorkspace);
    next.obs = {f32(px), f32(py), vx, vy};
  }
  result.reward = reward_fn(spec, state.obs, a, next.obs);
  result.done = next.step_index == spec.episode_len;
  return result;
}

bool is_success(const TaskSpec& spec, const EnvState& final_state) {
  return goal_error(spec, final_state) < spec.success_eps;
}

double goal_error(const TaskSpec& spec, const EnvState& state) {
  if (spec.family == Family::Valve) {
    return std::abs(wrap_angle(state.theta - spec.valve().target_angle));
  }
  const double dx = state.obs[0] - spec.reach().goal_x;
  const double dy = state.obs[1] - spec.reach().goal_y;
  return std::sqrt(dx * dx + dy * dy);
}

namespace {

TaskSpec random_task(Family family, Rng& rng) {
  TaskSpec spec = default_task(family);
  if (family == Family::Valve) {
    ValveParams p;
    p.gain = rng.uniform(0.7, 1.3);
    p.friction = rng.uniform(0.05, 0.3);
    p.direction = rng.uniform() < 0.5 ? 1 : -1;
    p.target_angle = wrap_angle(rng.uniform(-M_PI, M_PI));
    spec.params = p;
  } else {
    ReachParams p;
    p.goal_x = rng.uniform(-1.0, 1.0);
    p.goal_y = rng.uniform(-1.0, 1.0);
    p.gain = rng.uniform(0.7, 1.3);
    p.friction = rng.uniform(0.05, 0.3);
    p.rotation = wrap_angle(rng.uniform(-M_PI, M_PI));
    spec.params = p;
  }
  return spec;
}

}  // namespace

std::vector<TaskSpec> sample_sequence(Family family, int n, uint64_t seed) {
  if (n < 1) throw ConfigError("sample_sequence: n must be >= 1");
  Rng rng(seed);
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < n; ++i) {
    TaskSpec spec = random_task(family, rng);
    spec.task_id = i + 1;
    tasks.push_back(spec);
  }
  return tasks;
}

std::vector<TaskSpec> hard_sequence(Family family, int n, uint64_t seed) {
  if (n < 2) throw ConfigError("hard_sequence: n must be >= 2");
  Rng rng(seed);
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < n; ++i) {
    TaskSpec spec = random_task(family, rng);
    spec.task_id = i + 1;
    if (family == Family::Valve) {
      auto p = std::get<ValveParams>(spec.params);
      p.direction = i % 2 == 0 ? 1 : -1;
      spec.params = p;
    } else {
      auto p = std::get<ReachParams>(spec.params);
      p.rotation = i % 2 == 0 ? 0.0 : M_PI / 2.0;
      spec.params = p;
    }
    tasks.push_back(spec);
  }
  return tasks;
}

}  // namespace lrrl
