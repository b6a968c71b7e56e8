#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lrrl/envs.hpp"
#include "lrrl/replay.hpp"
#include "lrrl/sac.hpp"
#include "lrrl/transfer.hpp"

namespace lrrl {

enum class MethodVariant {
  Scratch,
  FineTune,
  Ours,
  OursWarmStart,
  OursDarcWeights,
  Darc,
  OffPolicyIW,
};

std::string variant_name(MethodVariant v);
MethodVariant variant_from_name(const std::string& name);

enum class MixMode { Ramp, Uniform };

struct RunConfig {
  MethodVariant method = MethodVariant::Ours;
  long pretrain_iters = 10000;
  long eval_interval = 1000;
  int eval_episodes = 10;
  SacConfig sac;
  FilterConfig filter;
  // Environment steps taken with uniform random actions at the start of a
  // task when the agent begins from fresh weights without pretraining.
  long random_action_steps = 500;
  int updates_per_step = 1;
  // Early stop after this many consecutive perfect evaluations; 0 disables.
  int early_stop_consecutive = 0;
  bool warm_start_moments = true;
  MixMode mix_mode = MixMode::Ramp;
  // 0 means "t_task / 4" (the published ramp shape scaled to the task
  // budget).
  long mix_ramp_end = 0;
  uint64_t master_seed = 1;
  // Testing hook: stop the sequence after this many tasks (0 = all).
  int stop_after_tasks = 0;
};

struct MetricsRow {
  int task_index = 0;
  long step_in_task = 0;
  long global_step = 0;
  double success_rate = 0.0;
  double final_error = 0.0;
  std::size_t active_source_size = 0;
  double mix = 1.0;
};

using MetricsTable = std::vector<MetricsRow>;

struct EvalResult {
  double success_rate = 0.0;
  double mean_final_error = 0.0;
};

// Mean-policy rollouts; episode randomness comes only from reset noise,
// with per-episode seeds derived from rng_seed. Episodes may run in
// parallel up to the LRRL_THREADS cap; the reduction is order-independent.
EvalResult evaluate(const Agent& agent, const TaskSpec& task, int n_episodes,
                    uint64_t rng_seed);

enum class InitMode { Fresh, WarmStart };

struct PretrainResult {
  ReplayBuffer source;  // relabeled aggregate
  Agent agent;
};

// Aggregate-and-relabel the given buffers with the target task's reward,
// then run offline actor-critic updates on the result. WarmStart copies
// the previous agent's parameters (and, per config, optimizer moments)
// before updating.
PretrainResult pretrain(const std::vector<const ReplayBuffer*>& buffers,
                        const TaskSpec& target_task, InitMode init_mode,
                        const Agent* previous_agent, const RunConfig& config,
                        uint64_t seed);

struct ImproveResult {
  ReplayBuffer task_buffer;
  MetricsTable rows;
};

// Online phase for one task: environment interaction with classifier-
// filtered source replay (or the variant's source scheme), periodic
// re-filtering and evaluation.
ImproveResult improve(Agent& agent, const ReplayBuffer* full_source,
                      const Agent* prev_agent, const TaskSpec& task,
                      const RunConfig& config, int task_index,
                      long global_step_base);

struct SequenceResult {
  MetricsTable metrics;
  int tasks_completed = 0;
};

// Full lifelong loop over the task sequence. When output_dir is given,
// buffers and agent checkpoints are persisted at every task boundary
// (run/task_<k>/...) together with metrics.csv, and a later call with the
// same directory resumes after the last completed task.
SequenceResult run_sequence(const std::vector<TaskSpec>& tasks,
                            const RunConfig& config,
                            const std::optional<std::filesystem::path>&
                                output_dir = std::nullopt);

struct AggregateMetrics {
  double average_perf = 0.0;
  double final_perf = 0.0;
  std::vector<double> per_task_finals;
};

AggregateMetrics compute_metrics(const MetricsTable& table);

// metrics.csv with the fixed column set, written with stable formatting so
// identical runs produce identical bytes.
void write_metrics_csv(const MetricsTable& table,
                       const std::filesystem::path& path);
MetricsTable read_metrics_csv(const std::filesystem::path& path);

// Agent checkpoint: <stem>.lrrl JSON header listing network roles plus one
// parameter file per network (and Adam moments) in the same directory.
void save_agent(const Agent& agent, const std::filesystem::path& header_path);
Agent load_agent(const std::filesystem::path& header_path);

}  // namespace lrrl
