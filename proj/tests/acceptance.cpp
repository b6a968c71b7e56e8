// Acceptance gate. Each criterion prints exactly one PASS/FAIL line with
// the measured quantities and its pinned thresholds. Run as:
//   lrrl_acceptance <criterion 1..9>
// Training-based criteria (4..7) run at desk scale: hidden [64,64],
// batch 128, one core. Reach runs use entropy temperature 0.05 because its
// per-step rewards are two orders of magnitude smaller than the valve's.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lrrl/envs.hpp"
#include "lrrl/lifelong.hpp"
#include "lrrl/mlp.hpp"
#include "lrrl/replay.hpp"
#include "lrrl/rng.hpp"
#include "lrrl/sac.hpp"
#include "lrrl/transfer.hpp"

namespace fs = std::filesystem;
using namespace lrrl;

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Scratch {
  fs::path path;
  explicit Scratch(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Scratch() { fs::remove_all(path); }
};

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

SacConfig desk_sac(double temperature = 0.2) {
  SacConfig sac;
  sac.hidden = {64, 64};
  sac.batch_size = 128;
  sac.temperature = temperature;
  return sac;
}

bool report(int criterion, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", criterion, ok ? "PASS" : "FAIL",
              detail.c_str());
  return ok;
}

// 1. Analytic gradients vs central finite differences on random MLPs.
bool criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  Rng shapes(101);
  for (int i = 0; i < 20; ++i) {
    std::vector<int> sizes;
    sizes.push_back(1 + int(shapes.uniform_index(8)));
    int depth = 1 + int(shapes.uniform_index(2));
    for (int d = 0; d < depth; ++d)
      sizes.push_back(i < 4 ? 256 : 8 + int(shapes.uniform_index(57)));
    sizes.push_back(1 + int(shapes.uniform_index(4)));
    Mlp mlp = mlp_init(1000 + uint64_t(i), sizes);
    Rng rng(2000 + uint64_t(i));
    Vec x(sizes.front());
    for (int j = 0; j < x.size(); ++j) x[j] = rng.normal();
    worst = std::max(worst, finite_diff_check(mlp, x, 1e-5));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max relative error %.3e, threshold 1e-4, 20 nets, %.1f s",
                worst, elapsed_s(t0));
  return report(1, worst < 1e-4, buf);
}

// 2. Relabeling equals a direct evaluation of the reward formulas, and
// relabeling with a task's own reward is the identity.
bool criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(7);
  TaskSpec valve = default_task(Family::Valve);
  TaskSpec reach = default_task(Family::Reach);
  reach.params = ReachParams{0.3, -0.4, 1.0, 0.15, 0.7};

  ReplayBuffer valve_src(3, 1, 1);
  ReplayBuffer reach_src(4, 2, 1);
  for (int i = 0; i < 10000; ++i) {
    Transition t;
    double th = rng.uniform(-M_PI, M_PI);
    t.s = {float(std::cos(th)), float(std::sin(th)),
           float(rng.uniform(-4, 4))};
    double th2 = rng.uniform(-M_PI, M_PI);
    t.s_next = {float(std::cos(th2)), float(std::sin(th2)),
                float(rng.uniform(-4, 4))};
    t.a = {float(rng.uniform(-1, 1))};
    t.r = float(rng.normal());
    t.task_id = 1;
    valve_src.push(t);

    Transition u;
    u.s = {float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-1.5, 1.5)),
           float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))};
    u.s_next = {float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-1.5, 1.5)),
                float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))};
    u.a = {float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))};
    u.r = float(rng.normal());
    u.task_id = 1;
    reach_src.push(u);
  }

  auto valve_reward = [&](std::span<const double>, std::span<const double>,
                          std::span<const double> sn) {
    return reward_fn(valve, {}, {}, sn);
  };
  ReplayBuffer rl_valve = aggregate_relabel({&valve_src}, valve_reward);
  double worst = 0.0;
  const ValveParams& vp = valve.valve();
  for (std::size_t i = 0; i < rl_valve.size(); ++i) {
    const Transition& t = rl_valve[i];
    // Independent formula: err = |wrap(atan2(y, x) - target)|,
    // r = -err/2 + [err < 0.05].
    double ang = std::atan2(double(t.s_next[1]), double(t.s_next[0]));
    double d = ang - vp.target_angle;
    d = std::remainder(d, 2.0 * M_PI);
    double err = std::abs(d);
    double want = -0.5 * err + (err < 0.05 ? 1.0 : 0.0);
    worst = std::max(worst, std::abs(double(t.r) - want));
  }

  auto reach_reward = [&](std::span<const double>, std::span<const double>,
                          std::span<const double> sn) {
    return reward_fn(reach, {}, {}, sn);
  };
  ReplayBuffer rl_reach = aggregate_relabel({&reach_src}, reach_reward);
  const ReachParams& rp = reach.reach();
  for (std::size_t i = 0; i < rl_reach.size(); ++i) {
    const Transition& t = rl_reach[i];
    double dx = double(t.s_next[0]) - rp.goal_x;
    double dy = double(t.s_next[1]) - rp.goal_y;
    double want = 1.0 - std::tanh(10.0 * std::hypot(dx, dy));
    worst = std::max(worst, std::abs(double(t.r) - want));
  }

  // Identity: rewards generated by the task itself survive relabeling
  // bit-for-bit. Collect rollouts under each task's own dynamics.
  bool identity = true;
  for (const TaskSpec* task : {&valve, &reach}) {
    ReplayBuffer own(task->state_dim(), task->action_dim(), 1);
    Rng roll(11);
    EnvState s = env_reset(*task, roll);
    for (int i = 0; i < 2000; ++i) {
      std::vector<double> a(size_t(task->action_dim()));
      for (double& v : a) v = roll.uniform(-1.0, 1.0);
      StepResult r = env_step(*task, s, a);
      Transition t;
      for (double v : s.obs) t.s.push_back(float(v));
      for (double v : a) t.a.push_back(float(v));
      for (double v : r.next_state.obs) t.s_next.push_back(float(v));
      t.r = float(r.reward);
      t.done = r.done;
      t.task_id = 1;
      own.push(t);
      s = r.done ? env_reset(*task, roll) : r.next_state;
    }
    auto same_reward = [&](std::span<const double> ss,
                           std::span<const double> aa,
                           std::span<const double> sn) {
      return reward_fn(*task, ss, aa, sn);
    };
    ReplayBuffer again = aggregate_relabel({&own}, same_reward);
    for (std::size_t i = 0; i < own.size(); ++i) {
      if (again[i] != own[i]) identity = false;
    }
  }

  char buf[200];
  std::snprintf(
      buf, sizeof(buf),
      "max |relabel - direct| %.3e, threshold 1e-7; own-reward identity %s; "
      "%.1f s",
      worst, identity ? "exact" : "BROKEN", elapsed_s(t0));
  return report(2, worst < 1e-7 && identity, buf);
}

// 3. Filter monotonicity in gamma, mix-ratio fixtures, clipped reward
// correction sign.
bool criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string why;

  // A real classifier trained briefly so the odds ratios are spread out.
  DomainClassifier clf = DomainClassifier::init(5, 3, 1, {16, 16}, 0.1);
  ReplayBuffer tgt(3, 1, 2), src(3, 1, 1);
  Rng rng(21);
  for (int i = 0; i < 512; ++i) {
    Transition t;
    t.s = {float(rng.normal() + 1.0), float(rng.normal()),
           float(rng.normal())};
    t.a = {float(rng.uniform(-1, 1))};
    t.s_next = t.s;
    t.task_id = 2;
    tgt.push(t);
    Transition u = t;
    u.s[0] -= 2.0f;
    u.s_next = u.s;
    u.task_id = 1;
    src.push(u);
  }
  for (int i = 0; i < 200; ++i) {
    classifier_update(clf, tgt.sample_batch(64, rng), src.sample_batch(64, rng),
                      rng);
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid = {0.0, 0.25, 0.5, 1.0, 2.0, inf};
  std::size_t prev = src.size() + 1;
  for (double g : grid) {
    std::size_t kept = filter_source(src, clf, g).size();
    if (kept > prev) {
      ok = false;
      why = "filter not monotone in gamma";
    }
    prev = kept;
  }
  if (filter_source(src, clf, 0.0).size() != src.size() ||
      !filter_source(src, clf, inf).empty()) {
    ok = false;
    why = "filter endpoints wrong";
  }

  if (mix_ratio(0, 12500) != 0.5 || mix_ratio(6250, 12500) != 0.75 ||
      mix_ratio(12500, 12500) != 1.0 || mix_ratio(99999, 12500) != 1.0) {
    ok = false;
    why = "mix_ratio fixtures";
  }

  DarcClassifiers dc = DarcClassifiers::init(9, 3, 1, {16, 16});
  int zero_mismatch = 0;
  double max_delta = -1e300;
  for (int i = 0; i < 10000; ++i) {
    Transition t;
    t.s = {float(rng.normal()), float(rng.normal()), float(rng.normal())};
    t.a = {float(rng.normal())};
    t.s_next = {float(rng.normal()), float(rng.normal()),
                float(rng.normal())};
    double delta = darc_delta_r(dc, t);
    max_delta = std::max(max_delta, delta);
    if (delta > 0.0) ok = false;
    // Equality holds exactly when the two logits agree.
    Vec full(7), prefix(4);
    for (int j = 0; j < 3; ++j) full[j] = t.s[size_t(j)];
    full[3] = t.a[0];
    for (int j = 0; j < 3; ++j) full[4 + j] = t.s_next[size_t(j)];
    for (int j = 0; j < 4; ++j) prefix[j] = full[j];
    double l_sas = mlp_forward(dc.c_sas, full)[0];
    double l_sa = mlp_forward(dc.c_sa, prefix)[0];
    if ((delta == 0.0) != (l_sas >= l_sa)) ++zero_mismatch;
  }
  if (zero_mismatch > 0) {
    ok = false;
    why = "reward-correction clipping boundary";
  }
  if (!ok && why.empty()) why = "reward correction exceeded 0";

  std::string why_part = ok ? std::string() : why + "; ";
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "filter monotone on {0,.25,.5,1,2,inf}; mix fixtures "
                ".5/.75/1; max correction %.3e <= 0; %s%.1f s",
                max_delta, why_part.c_str(), elapsed_s(t0));
  return report(3, ok, buf);
}

std::vector<MetricsRow> task_rows(const MetricsTable& table, int task_index) {
  std::vector<MetricsRow> out;
  for (const MetricsRow& r : table)
    if (r.task_index == task_index) out.push_back(r);
  return out;
}

// 4. From-scratch learnability of both families at desk scale.
bool criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  int valve_ok = 0, reach_ok = 0;
  std::ostringstream detail;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    TaskSpec task = default_task(Family::Valve);
    task.task_id = 1;
    RunConfig config;
    config.method = MethodVariant::Scratch;
    config.master_seed = seed;
    config.sac = desk_sac();
    SequenceResult res = run_sequence({task}, config);
    double best = 0.0;
    for (const MetricsRow& r : res.metrics)
      best = std::max(best, r.success_rate);
    if (best >= 0.9) ++valve_ok;
    detail << " v" << seed << "=" << best;
  }
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    TaskSpec task = default_task(Family::Reach);
    task.task_id = 1;
    RunConfig config;
    config.method = MethodVariant::Scratch;
    config.master_seed = seed;
    config.sac = desk_sac(0.05);
    SequenceResult res = run_sequence({task}, config);
    double final_err = res.metrics.empty()
                           ? 1e9
                           : res.metrics.back().final_error;
    if (final_err < 0.1) ++reach_ok;
    char b[32];
    std::snprintf(b, sizeof(b), " r%llu=%.3f",
                  (unsigned long long)seed, final_err);
    detail << b;
  }
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "valve success>=0.9 in 15k steps: %d/3 seeds; reach final "
                "dist<0.1 in 20k: %d/3 seeds;%s; %.0f s",
                valve_ok, reach_ok, detail.str().c_str(), elapsed_s(t0));
  return report(4, valve_ok >= 2 && reach_ok >= 2, buf);
}

struct SeqStats {
  double lifetime_avg = 0.0;
  double half_budget_late_tasks = 0.0;  // success at t_task/2, tasks 2..n
  double full_budget_late_tasks = 0.0;  // success at t_task, tasks 2..n
};

SeqStats sequence_stats(const MetricsTable& metrics, int n_tasks,
                        long t_task) {
  SeqStats s;
  s.lifetime_avg = compute_metrics(metrics).average_perf;
  int late = 0;
  for (int k = 2; k <= n_tasks; ++k) {
    ++late;
    for (const MetricsRow& r : task_rows(metrics, k)) {
      if (r.step_in_task == t_task / 2) s.half_budget_late_tasks += r.success_rate;
      if (r.step_in_task == t_task) s.full_budget_late_tasks += r.success_rate;
    }
  }
  if (late > 0) {
    s.half_budget_late_tasks /= late;
    s.full_budget_late_tasks /= late;
  }
  return s;
}

// 5. Forward transfer on a random 5-task valve sequence.
bool criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  const int n_tasks = 5;
  const long t_task = 10000;
  double ours_avg = 0.0, scratch_avg = 0.0;
  double ours_half = 0.0, scratch_full = 0.0;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<TaskSpec> tasks =
        sample_sequence(Family::Valve, n_tasks, derive_seed(seed, "accept5"));
    for (TaskSpec& t : tasks) t.t_task = t_task;
    for (MethodVariant m : {MethodVariant::Ours, MethodVariant::Scratch}) {
      RunConfig config;
      config.method = m;
      config.master_seed = seed;
      config.sac = desk_sac();
      config.pretrain_iters = 5000;
      SequenceResult res = run_sequence(tasks, config);
      SeqStats s = sequence_stats(res.metrics, n_tasks, t_task);
      if (m == MethodVariant::Ours) {
        ours_avg += s.lifetime_avg / 3.0;
        ours_half += s.half_budget_late_tasks / 3.0;
      } else {
        scratch_avg += s.lifetime_avg / 3.0;
        scratch_full += s.full_budget_late_tasks / 3.0;
      }
    }
  }
  bool ratio_ok = ours_avg >= 1.2 * scratch_avg;
  bool half_ok = ours_half >= scratch_full;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "lifetime avg ours %.3f vs scratch %.3f (need >=1.2x); "
                "tasks 2-5 ours@5k %.3f vs scratch@10k %.3f (need >=); "
                "3 seeds; %.0f s",
                ours_avg, scratch_avg, ours_half, scratch_full,
                elapsed_s(t0));
  return report(5, ratio_ok && half_ok, buf);
}

// 6. Selective replay on an alternating-direction valve sequence, against
// an unfiltered uniform-mix ablation.
bool criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  const int n_tasks = 4;
  const long t_task = 10000;
  double ours_flip = 0.0, ablation_flip = 0.0;
  double worst_shrink = 1.0;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<TaskSpec> tasks =
        hard_sequence(Family::Valve, n_tasks, derive_seed(seed, "accept6"));
    for (TaskSpec& t : tasks) t.t_task = t_task;
    for (int ablate = 0; ablate < 2; ++ablate) {
      RunConfig config;
      config.method = MethodVariant::Ours;
      config.master_seed = seed;
      config.sac = desk_sac();
      config.pretrain_iters = 5000;
      // Classifier input noise scaled to the toy observation magnitudes;
      // the published sigma of 1.0 is as large as the valve's per-step
      // dynamics signal and washes out the direction flip at this scale.
      config.filter.noise_sigma = 0.1;
      if (ablate) {
        config.filter.gamma = 0.0;
        config.mix_mode = MixMode::Uniform;
      }
      SequenceResult res = run_sequence(tasks, config);
      // Every task after the first flips the valve direction.
      double flip_final = 0.0;
      for (int k = 2; k <= n_tasks; ++k) {
        auto rows = task_rows(res.metrics, k);
        if (!rows.empty()) flip_final += rows.back().success_rate;
      }
      flip_final /= (n_tasks - 1);
      if (ablate) {
        ablation_flip += flip_final / 3.0;
      } else {
        ours_flip += flip_final / 3.0;
        // Classifier detects the flip: the active source shrinks below
        // 90% of the full pool once refiltering has run.
        for (int k = 2; k <= n_tasks; ++k) {
          std::size_t full = std::size_t(k - 1) * std::size_t(t_task);
          std::size_t smallest = full;
          for (const MetricsRow& r : task_rows(res.metrics, k)) {
            if (r.step_in_task >= config.filter.refilter_interval)
              smallest = std::min(smallest, r.active_source_size);
          }
          double ratio = double(smallest) / double(full);
          if (seed == 1 && k == 2 && ablate == 0) worst_shrink = ratio;
          worst_shrink = std::max(worst_shrink, ratio);
        }
      }
    }
  }
  bool order_ok = ours_flip > ablation_flip;
  bool shrink_ok = worst_shrink < 0.9;
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "flipped-task final success ours %.3f vs unfiltered %.3f "
                "(need >); worst active/full source %.3f (need <0.9); "
                "3 seeds; %.0f s",
                ours_flip, ablation_flip, worst_shrink, elapsed_s(t0));
  return report(6, order_ok && shrink_ok, buf);
}

// 7. Pretraining on identical-dynamics data yields an immediately
// competent agent; a fresh agent is not.
bool criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  int pre_ok = 0, fresh_ok = 0;
  std::ostringstream detail;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    TaskSpec task = default_task(Family::Valve);
    task.task_id = 1;
    // A longer source run gives the offline phase dense coverage around
    // the goal; with only 15k source steps the pretrained policy lands
    // right at the success threshold and flips between seeds.
    task.t_task = 25000;
    RunConfig config;
    config.method = MethodVariant::Scratch;
    config.master_seed = seed;
    config.sac = desk_sac();
    Scratch dir("lrrl_accept7_" + std::to_string(seed));
    run_sequence({task}, config, dir.path);
    ReplayBuffer source = load_buffer(dir.path / "task_1" / "buffer.lrrb");

    TaskSpec target = task;
    target.task_id = 2;
    config.pretrain_iters = 20000;
    PretrainResult pre = pretrain({&source}, target, InitMode::Fresh, nullptr,
                                  config, derive_seed(seed, "accept7"));
    double pre_succ =
        evaluate(pre.agent, target, 10, derive_seed(seed, "accept7eval"))
            .success_rate;
    Agent fresh = Agent::init(derive_seed(seed, "accept7fresh"),
                              target.state_dim(), target.action_dim(),
                              config.sac);
    double fresh_succ =
        evaluate(fresh, target, 10, derive_seed(seed, "accept7eval"))
            .success_rate;
    if (pre_succ >= 0.8) ++pre_ok;
    if (fresh_succ <= 0.2) ++fresh_ok;
    char b[48];
    std::snprintf(b, sizeof(b), " s%llu=%.2f/%.2f",
                  (unsigned long long)seed, pre_succ, fresh_succ);
    detail << b;
  }
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "pretrained success>=0.8 at step 0: %d/3; fresh <=0.2: "
                "%d/3;%s; %.0f s",
                pre_ok, fresh_ok, detail.str().c_str(), elapsed_s(t0));
  return report(7, pre_ok == 3 && fresh_ok == 3, buf);
}

// 8. Determinism and persistence.
bool criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<TaskSpec> tasks = sample_sequence(Family::Valve, 2, 42);
  for (TaskSpec& t : tasks) {
    t.t_task = 600;
    t.episode_len = 50;
  }
  RunConfig config;
  config.method = MethodVariant::Ours;
  config.master_seed = 5;
  config.sac.hidden = {16, 16};
  config.sac.batch_size = 32;
  config.pretrain_iters = 100;
  config.eval_interval = 200;
  config.eval_episodes = 2;
  config.random_action_steps = 50;
  config.filter.refilter_interval = 200;

  Scratch a("lrrl_accept8_a"), b("lrrl_accept8_b"), c("lrrl_accept8_c");
  run_sequence(tasks, config, a.path);
  run_sequence(tasks, config, b.path);
  bool metrics_same = read_bytes(a.path / "metrics.csv") ==
                      read_bytes(b.path / "metrics.csv");

  // Buffer and agent files round-trip bit-exactly.
  ReplayBuffer buf1 = load_buffer(a.path / "task_1" / "buffer.lrrb");
  save_buffer(buf1, c.path / "buffer.lrrb");
  bool buffer_same = read_bytes(a.path / "task_1" / "buffer.lrrb") ==
                     read_bytes(c.path / "buffer.lrrb");
  Agent agent = load_agent(a.path / "task_2" / "agent.lrrl");
  save_agent(agent, c.path / "agent.lrrl");
  bool agent_same = true;
  for (const auto& entry :
       fs::directory_iterator(a.path / "task_2")) {
    if (entry.path().extension() != ".lrrl") continue;
    if (read_bytes(entry.path()) !=
        read_bytes(c.path / entry.path().filename())) {
      agent_same = false;
    }
  }

  // Interrupt at the task boundary, then resume into the same metrics.
  Scratch part("lrrl_accept8_part");
  RunConfig partial = config;
  partial.stop_after_tasks = 1;
  run_sequence(tasks, partial, part.path);
  run_sequence(tasks, config, part.path);
  bool resume_same = read_bytes(a.path / "metrics.csv") ==
                     read_bytes(part.path / "metrics.csv");

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "metrics byte-identical %d; buffer round-trip %d; agent "
                "round-trip %d; resume identical %d; %.0f s",
                int(metrics_same), int(buffer_same), int(agent_same),
                int(resume_same), elapsed_s(t0));
  return report(8, metrics_same && buffer_same && agent_same && resume_same,
                buf);
}

// 9. Every variant completes a smoke sequence; empty-source runs of the
// filtered method match the from-scratch baseline step for step.
bool criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<TaskSpec> tasks = sample_sequence(Family::Valve, 2, 7);
  for (TaskSpec& t : tasks) t.t_task = 2000;
  bool all_ok = true;
  std::string failed;
  for (MethodVariant m :
       {MethodVariant::Scratch, MethodVariant::FineTune, MethodVariant::Ours,
        MethodVariant::OursWarmStart, MethodVariant::OursDarcWeights,
        MethodVariant::Darc, MethodVariant::OffPolicyIW}) {
    RunConfig config;
    config.method = m;
    config.master_seed = 3;
    config.sac = desk_sac();
    config.pretrain_iters = 500;
    try {
      SequenceResult res = run_sequence(tasks, config);
      bool well_formed = res.tasks_completed == 2 &&
                         res.metrics.size() == 4;
      long prev = 0;
      for (const MetricsRow& r : res.metrics) {
        if (r.global_step <= prev || r.success_rate < 0.0 ||
            r.success_rate > 1.0 || !std::isfinite(r.final_error)) {
          well_formed = false;
        }
        prev = r.global_step;
      }
      if (!well_formed) {
        all_ok = false;
        failed += variant_name(m) + " ";
      }
    } catch (const std::exception& e) {
      all_ok = false;
      failed += variant_name(m) + " ";
    }
  }

  // A single-task sequence gives the filtered method an empty source; its
  // trajectory must match the from-scratch baseline exactly.
  std::vector<TaskSpec> one = {tasks[0]};
  RunConfig ours;
  ours.method = MethodVariant::Ours;
  ours.master_seed = 9;
  ours.sac = desk_sac();
  RunConfig scratch = ours;
  scratch.method = MethodVariant::Scratch;
  MetricsTable mo = run_sequence(one, ours).metrics;
  MetricsTable ms = run_sequence(one, scratch).metrics;
  bool identical = mo.size() == ms.size();
  for (std::size_t i = 0; identical && i < mo.size(); ++i) {
    identical = mo[i].success_rate == ms[i].success_rate &&
                mo[i].final_error == ms[i].final_error &&
                mo[i].global_step == ms[i].global_step;
  }

  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "all 7 variants smoke-complete %s%s; empty-source == "
                "scratch: %d; %.0f s",
                all_ok ? "yes" : "no: ", failed.c_str(), int(identical),
                elapsed_s(t0));
  return report(9, all_ok && identical, buf);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: lrrl_acceptance <criterion 1..9>\n");
    return 2;
  }
  int criterion = std::atoi(argv[1]);
  bool ok = false;
  switch (criterion) {
    case 1: ok = criterion_1(); break;
    case 2: ok = criterion_2(); break;
    case 3: ok = criterion_3(); break;
    case 4: ok = criterion_4(); break;
    case 5: ok = criterion_5(); break;
    case 6: ok = criterion_6(); break;
    case 7: ok = criterion_7(); break;
    case 8: ok = criterion_8(); break;
    case 9: ok = criterion_9(); break;
    default:
      std::fprintf(stderr, "usage: lrrl_acceptance <criterion 1..9>\n");
      return 2;
  }
  return ok ? 0 : 1;
}
