#include "lrrl/lifelong.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lrrl/checkpoint.hpp"
#include "lrrl/errors.hpp"

namespace lrrl {

namespace fs = std::filesystem;
using nlohmann::json;

std::string variant_name(MethodVariant v) {
  switch (v) {
    case MethodVariant::Scratch: return "scratch";
    case MethodVariant::FineTune: return "finetune";
    case MethodVariant::Ours: return "ours";
    case MethodVariant::OursWarmStart: return "ours_warm_start";
    case MethodVariant::OursDarcWeights: return "ours_darc_weights";
    case MethodVariant::Darc: return "darc";
    case MethodVariant::OffPolicyIW: return "offpolicy_iw";
  }
  return "unknown";
}

MethodVariant variant_from_name(const std::string& name) {
  for (MethodVariant v :
       {MethodVariant::Scratch, MethodVariant::FineTune, MethodVariant::Ours,
        MethodVariant::OursWarmStart, MethodVariant::OursDarcWeights,
        MethodVariant::Darc, MethodVariant::OffPolicyIW}) {
    if (variant_name(v) == name) return v;
  }
  throw ConfigError("unknown method variant: " + name);
}

namespace {

struct VariantTraits {
  bool pretrain = false;
  bool warm_init = false;
  bool use_source = false;
  bool use_filter = false;
  bool darc_relabel = false;
  bool op_weights = false;
};

VariantTraits traits_of(MethodVariant v) {
  VariantTraits t;
  switch (v) {
    case MethodVariant::Scratch:
      break;
    case MethodVariant::FineTune:
      t.warm_init = true;
      break;
    case MethodVariant::Ours:
      t.pretrain = t.use_source = t.use_filter = true;
      break;
    case MethodVariant::OursWarmStart:
      t.pretrain = t.warm_init = t.use_source = t.use_filter = true;
      break;
    case MethodVariant::OursDarcWeights:
      t.pretrain = t.use_source = t.darc_relabel = true;
      break;
    case MethodVariant::Darc:
      t.use_source = t.darc_relabel = true;
      break;
    case MethodVariant::OffPolicyIW:
      t.use_source = t.op_weights = true;
      break;
  }
  return t;
}

long ramp_end_for(const RunConfig& config, const TaskSpec& task) {
  return config.mix_ramp_end > 0 ? config.mix_ramp_end : task.t_task / 4;
}

Transition to_transition(const TaskSpec& spec, const EnvState& s,
                         std::span<const double> a, const StepResult& step) {
  Transition t;
  t.s.assign(s.obs.begin(), s.obs.end());
  t.a.reserve(a.size());
  for (double v : a) {
    t.a.push_back(static_cast<float>(std::min(std::max(v, -1.0), 1.0)));
  }
  t.s_next.assign(step.next_state.obs.begin(), step.next_state.obs.end());
  t.r = static_cast<float>(step.reward);
  t.done = step.done;
  t.task_id = static_cast<uint32_t>(spec.task_id);
  return t;
}

int eval_threads() {
  const char* env = std::getenv("LRRL_THREADS");
  if (env == nullptr) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

// Adds the clipped log dynamics-ratio correction to the rewards of source
// rows, batched over the two classifiers.
void apply_darc_correction(Batch& batch, const DarcClassifiers& dc) {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < batch.from_source.size(); ++i) {
    if (batch.from_source[i]) rows.push_back(static_cast<Eigen::Index>(i));
  }
  if (rows.empty()) return;
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  Mat in(m, batch.s.cols() + batch.a.cols() + batch.s_next.cols());
  for (Eigen::Index k = 0; k < m; ++k) {
    in.row(k) << batch.s.row(rows[k]), batch.a.row(rows[k]),
        batch.s_next.row(rows[k]);
  }
  Vec logit_sas = mlp_forward_batch(dc.c_sas, in).col(0);
  Vec logit_sa =
      mlp_forward_batch(dc.c_sa, in.leftCols(dc.c_sa.input_size())).col(0);
  for (Eigen::Index k = 0; k < m; ++k) {
    batch.r(rows[k]) += std::min(0.0, logit_sas(k) - logit_sa(k));
  }
}

}  // namespace

EvalResult evaluate(const Agent& agent, const TaskSpec& task, int n_episodes,
                    uint64_t rng_seed) {
  if (n_episodes < 1) throw UsageError("evaluate: n_episodes must be >= 1");
  std::vector<double> successes(n_episodes, 0.0);
  std::vector<double> errors(n_episodes, 0.0);
  auto run_episode = [&](int e) {
    Rng rng(derive_seed(rng_seed, "episode", static_cast<uint64_t>(e)));
    EnvState state = env_reset(task, rng);
    Vec obs(task.state_dim());
    for (int step = 0; step < task.episode_len; ++step) {
      for (int j = 0; j < task.state_dim(); ++j) obs(j) = state.obs[j];
      Vec a = mean_action(agent.actor, obs);
      std::vector<double> act(a.data(), a.data() + a.size());
      state = env_step(task, state, act).next_state;
    }
    successes[e] = is_success(task, state) ? 1.0 : 0.0;
    errors[e] = goal_error(task, state);
  };
  const int threads = std::min(eval_threads(), n_episodes);
  if (threads <= 1) {
    for (int e = 0; e < n_episodes; ++e) run_episode(e);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int e = next.fetch_add(1); e < n_episodes;
             e = next.fetch_add(1)) {
          run_episode(e);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  EvalResult result;
  for (int e = 0; e < n_episodes; ++e) {
    result.success_rate += successes[e];
    result.mean_final_error += errors[e];
  }
  result.success_rate /= n_episodes;
  result.mean_final_error /= n_episodes;
  return result;
}

PretrainResult pretrain(const std::vector<const ReplayBuffer*>& buffers,
                        const TaskSpec& target_task, InitMode init_mode,
                        const Agent* previous_agent, const RunConfig& config,
                        uint64_t seed) {
  PretrainResult result;
  RewardFunction reward = [&target_task](std::span<const double> s,
                                         std::span<const double> a,
                                         std::span<const double> s_next) {
    return reward_fn(target_task, s, a, s_next);
  };
  result.source = aggregate_relabel(buffers, reward);
  if (init_mode == InitMode::WarmStart) {
    if (previous_agent == nullptr) {
      throw ConfigError("pretrain: warm start requires a previous agent");
    }
    result.agent = *previous_agent;
    if (!config.warm_start_moments) {
      result.agent.actor.opt = AdamState::zeros_like(result.agent.actor.net);
      result.agent.critics.opt1 =
          AdamState::zeros_like(result.agent.critics.q1);
      result.agent.critics.opt2 =
          AdamState::zeros_like(result.agent.critics.q2);
    }
  } else {
    result.agent = Agent::init(seed, target_task.state_dim(),
                               target_task.action_dim(), config.sac);
  }
  if (config.pretrain_iters > 0 && result.source.empty()) {
    throw ConfigError("pretrain: no source data but pretrain_iters > 0");
  }
  Rng batch_rng(derive_seed(seed, "pretrain-batch"));
  Rng update_rng(derive_seed(seed, "pretrain-update"));
  for (long it = 0; it < config.pretrain_iters; ++it) {
    Batch batch = result.source.sample_batch(
        static_cast<std::size_t>(config.sac.batch_size), batch_rng);
    sac_update(result.agent, batch, config.sac, update_rng);
  }
  return result;
}

ImproveResult improve(Agent& agent, const ReplayBuffer* full_source,
                      const Agent* prev_agent, const TaskSpec& task,
                      const RunConfig& config, int task_index,
                      long global_step_base) {
  const VariantTraits traits = traits_of(config.method);
  const bool has_source = full_source != nullptr && !full_source->empty() &&
                          traits.use_source;
  const uint64_t ti = static_cast<uint64_t>(task_index);
  Rng env_rng(derive_seed(config.master_seed, "env", ti));
  Rng action_rng(derive_seed(config.master_seed, "actor-sampling", ti));
  Rng batch_rng(derive_seed(config.master_seed, "batch-sampling", ti));
  Rng noise_rng(derive_seed(config.master_seed, "classifier-noise", ti));
  const uint64_t eval_seed = derive_seed(config.master_seed, "eval", ti);

  ImproveResult result;
  result.task_buffer =
      ReplayBuffer(task.state_dim(), task.action_dim(), task.task_id);
  ReplayBuffer& d_task = result.task_buffer;
  if (task.t_task <= 0) return result;

  DomainClassifier clf;
  DarcClassifiers darc;
  if (traits.use_filter && has_source) {
    clf = DomainClassifier::init(
        derive_seed(config.master_seed, "classifier", ti), task.state_dim(),
        task.action_dim(), config.sac.hidden, config.filter.noise_sigma,
        config.filter.classifier_lr);
  }
  if (traits.darc_relabel && has_source) {
    darc = DarcClassifiers::init(
        derive_seed(config.master_seed, "classifier", ti), task.state_dim(),
        task.action_dim(), config.sac.hidden, config.filter.noise_sigma,
        config.filter.classifier_lr);
  }
  // An untrained classifier outputs 0.5 everywhere, so the initial active
  // set equals the full set whenever gamma <= 1.
  ReplayBuffer active;
  if (has_source) {
    active = traits.use_filter
                 ? filter_source(*full_source, clf, config.filter.gamma)
                 : *full_source;
  }

  // Random-action warmup only applies when starting from fresh weights
  // without pretraining.
  const bool fresh_start = !traits.warm_init || prev_agent == nullptr;
  const long warmup = (fresh_start && !(traits.pretrain && has_source))
                          ? config.random_action_steps
                          : 0;

  EnvState state = env_reset(task, env_rng);
  Vec obs(task.state_dim());
  long update_count = 0;
  int consecutive_perfect = 0;
  double current_mix = 1.0;
  const long ramp_end = ramp_end_for(config, task);
  const std::size_t batch_n =
      static_cast<std::size_t>(config.sac.batch_size);

  for (long step = 1; step <= task.t_task; ++step) {
    std::vector<double> act(task.action_dim());
    if (step <= warmup) {
      for (double& v : act) v = action_rng.uniform(-1.0, 1.0);
    } else {
      for (int j = 0; j < task.state_dim(); ++j) obs(j) = state.obs[j];
      Vec a = sample_action(agent.actor, obs, action_rng).action;
      for (int j = 0; j < task.action_dim(); ++j) act[j] = a(j);
    }
    StepResult sr = env_step(task, state, act);
    d_task.push(to_transition(task, state, act, sr));
    state = sr.done ? env_reset(task, env_rng) : sr.next_state;

    const bool updates_ready = step > warmup && !d_task.empty();
    if (updates_ready) {
      for (int u = 0; u < config.updates_per_step; ++u) {
        double rho = 1.0;
        if (has_source && !active.empty()) {
          if (config.mix_mode == MixMode::Ramp) {
            rho = mix_ratio(static_cast<long>(d_task.size()), ramp_end);
          } else {
            rho = static_cast<double>(d_task.size()) /
                  static_cast<double>(d_task.size() + active.size());
          }
        }
        current_mix = rho;
        Batch batch = has_source && !active.empty()
                          ? compose_batch(active, d_task, rho, batch_n,
                                          batch_rng)
                          : d_task.sample_batch(batch_n, batch_rng);
        std::vector<double> weights;
        const std::vector<double>* weights_ptr = nullptr;
        if (traits.darc_relabel && has_source) {
          apply_darc_correction(batch, darc);
        }
        if (traits.op_weights && has_source && prev_agent != nullptr) {
          weights.assign(static_cast<std::size_t>(batch.size()), 1.0);
          for (Eigen::Index i = 0; i < batch.size(); ++i) {
            if (batch.from_source[static_cast<std::size_t>(i)]) {
              weights[static_cast<std::size_t>(i)] = offpolicy_weight(
                  agent.actor, prev_agent->actor, batch.s.row(i).transpose(),
                  batch.a.row(i).transpose());
            }
          }
          weights_ptr = &weights;
        }
        sac_update(agent, batch, config.sac, action_rng, weights_ptr);

        if (has_source) {
          for (int c = 0; c < config.filter.classifier_updates_per_step;
               ++c) {
            if (traits.use_filter) {
              Batch tgt = d_task.sample_batch(batch_n, batch_rng);
              Batch src = full_source->sample_batch(batch_n, batch_rng);
              classifier_update(clf, tgt, src, noise_rng);
            }
            if (traits.darc_relabel) {
              Batch tgt = d_task.sample_batch(batch_n, batch_rng);
              Batch src = full_source->sample_batch(batch_n, batch_rng);
              darc_classifier_update(darc, tgt, src, noise_rng);
            }
          }
        }
        ++update_count;
        if (traits.use_filter && has_source &&
            update_count % config.filter.refilter_interval == 0) {
          const ReplayBuffer& base =
              config.filter.monotone_shrink ? active : *full_source;
          active = filter_source(base, clf, config.filter.gamma);
        }
      }
    }

    if (step % config.eval_interval == 0) {
      EvalResult eval = evaluate(
          agent, task, config.eval_episodes,
          derive_seed(eval_seed, "point",
                      static_cast<uint64_t>(step / config.eval_interval)));
      MetricsRow row;
      row.task_index = task_index;
      row.step_in_task = step;
      row.global_step = global_step_base + step;
      row.success_rate = eval.success_rate;
      row.final_error = eval.mean_final_error;
      row.active_source_size = has_source ? active.size() : 0;
      row.mix = current_mix;
      result.rows.push_back(row);
      if (config.early_stop_consecutive > 0) {
        consecutive_perfect =
            eval.success_rate >= 1.0 ? consecutive_perfect + 1 : 0;
        if (consecutive_perfect >= config.early_stop_consecutive) break;
      }
    }
  }
  return result;
}

AggregateMetrics compute_metrics(const MetricsTable& table) {
  if (table.empty()) throw UsageError("compute_metrics: empty table");
  AggregateMetrics agg;
  for (const MetricsRow& row : table) agg.average_perf += row.success_rate;
  agg.average_perf /= static_cast<double>(table.size());
  int current_task = table.front().task_index;
  double last = table.front().success_rate;
  for (const MetricsRow& row : table) {
    if (row.task_index != current_task) {
      agg.per_task_finals.push_back(last);
      current_task = row.task_index;
    }
    last = row.success_rate;
  }
  agg.per_task_finals.push_back(last);
  for (double f : agg.per_task_finals) agg.final_perf += f;
  agg.final_perf /= static_cast<double>(agg.per_task_finals.size());
  return agg;
}

void write_metrics_csv(const MetricsTable& table, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "task_index,step_in_task,global_step,success_rate,final_error,"
         "active_source_size,mix_ratio\n";
  char buf[256];
  for (const MetricsRow& row : table) {
    std::snprintf(buf, sizeof(buf), "%d,%ld,%ld,%.17g,%.17g,%zu,%.17g\n",
                  row.task_index, row.step_in_task, row.global_step,
                  row.success_rate, row.final_error, row.active_source_size,
                  row.mix);
    out << buf;
  }
}

MetricsTable read_metrics_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(path.string() + ": missing header row");
  }
  if (line != "task_index,step_in_task,global_step,success_rate,final_error,"
              "active_source_size,mix_ratio") {
    throw FormatError(path.string() + ": unexpected header row");
  }
  MetricsTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    MetricsRow row;
    unsigned long src_size = 0;
    if (std::sscanf(line.c_str(), "%d,%ld,%ld,%lf,%lf,%lu,%lf",
                    &row.task_index, &row.step_in_task, &row.global_step,
                    &row.success_rate, &row.final_error, &src_size,
                    &row.mix) != 7) {
      throw FormatError(path.string() + ": malformed row: " + line);
    }
    row.active_source_size = src_size;
    table.push_back(row);
  }
  return table;
}

namespace {

// Moments shape-match the network, so they reuse the parameter file format
// wrapped in an Mlp shell.
Mlp moments_shell(const Mlp& like, const std::vector<Mat>& w,
                  const std::vector<Vec>& b) {
  Mlp shell;
  shell.layer_sizes = like.layer_sizes;
  shell.weights = w;
  shell.biases = b;
  return shell;
}

void save_network_with_opt(const Mlp& net, const AdamState& opt,
                           const fs::path& dir, const std::string& role,
                           json& header) {
  save_mlp(net, dir / (role + ".lrrl"));
  save_mlp(moments_shell(net, opt.m_w, opt.m_b), dir / (role + "_m.lrrl"));
  save_mlp(moments_shell(net, opt.v_w, opt.v_b), dir / (role + "_v.lrrl"));
  header["networks"][role] = role + ".lrrl";
  header["adam"][role] = {{"step", opt.step_count},
                          {"m", role + "_m.lrrl"},
                          {"v", role + "_v.lrrl"}};
}

void load_network_with_opt(Mlp& net, AdamState& opt, const fs::path& dir,
                           const std::string& role, const json& header) {
  net = load_mlp(dir / header.at("networks").at(role).get<std::string>());
  Mlp m = load_mlp(dir / header.at("adam").at(role).at("m").get<std::string>());
  Mlp v = load_mlp(dir / header.at("adam").at(role).at("v").get<std::string>());
  opt.m_w = m.weights;
  opt.m_b = m.biases;
  opt.v_w = v.weights;
  opt.v_b = v.biases;
  opt.step_count = header.at("adam").at(role).at("step").get<int64_t>();
}

}  // namespace

void save_agent(const Agent& agent, const fs::path& header_path) {
  const fs::path dir = header_path.parent_path();
  json header;
  header["format"] = "lrrl-agent";
  header["version"] = 1;
  header["state_dim"] = agent.state_dim;
  header["action_dim"] = agent.actor.action_dim;
  save_network_with_opt(agent.actor.net, agent.actor.opt, dir, "actor",
                        header);
  save_network_with_opt(agent.critics.q1, agent.critics.opt1, dir, "q1",
                        header);
  save_network_with_opt(agent.critics.q2, agent.critics.opt2, dir, "q2",
                        header);
  save_mlp(agent.critics.q1_target, dir / "q1_target.lrrl");
  save_mlp(agent.critics.q2_target, dir / "q2_target.lrrl");
  header["networks"]["q1_target"] = "q1_target.lrrl";
  header["networks"]["q2_target"] = "q2_target.lrrl";
  std::ofstream out(header_path, std::ios::trunc);
  out << header.dump(2) << "\n";
  if (!out) throw FormatError("cannot write " + header_path.string());
}

Agent load_agent(const fs::path& header_path) {
  std::ifstream in(header_path);
  if (!in) throw FormatError("cannot read " + header_path.string());
  json header;
  try {
    in >> header;
  } catch (const json::exception& e) {
    throw FormatError(header_path.string() + ": " + e.what());
  }
  if (header.value("format", "") != "lrrl-agent") {
    throw FormatError(header_path.string() + ": not an agent checkpoint");
  }
  const fs::path dir = header_path.parent_path();
  Agent agent;
  agent.state_dim = header.at("state_dim").get<int>();
  agent.actor.action_dim = header.at("action_dim").get<int>();
  load_network_with_opt(agent.actor.net, agent.actor.opt, dir, "actor",
                        header);
  load_network_with_opt(agent.critics.q1, agent.critics.opt1, dir, "q1",
                        header);
  load_network_with_opt(agent.critics.q2, agent.critics.opt2, dir, "q2",
                        header);
  agent.critics.q1_target =
      load_mlp(dir / header.at("networks").at("q1_target").get<std::string>());
  agent.critics.q2_target =
      load_mlp(dir / header.at("networks").at("q2_target").get<std::string>());
  return agent;
}

SequenceResult run_sequence(const std::vector<TaskSpec>& tasks,
                            const RunConfig& config,
                            const std::optional<fs::path>& output_dir) {
  if (tasks.empty()) throw ConfigError("run_sequence: no tasks");
  const int state_dim = tasks.front().state_dim();
  const int action_dim = tasks.front().action_dim();
  for (const TaskSpec& t : tasks) {
    if (t.state_dim() != state_dim || t.action_dim() != action_dim) {
      throw ConfigError(
          "run_sequence: tasks must share state/action dimensions");
    }
  }
  const VariantTraits traits = traits_of(config.method);

  SequenceResult result;
  std::vector<ReplayBuffer> buffers;
  std::optional<Agent> prev_agent;
  long global_step_base = 0;
  int first_task = 1;

  auto task_dir = [&](int i) {
    return *output_dir / ("task_" + std::to_string(i));
  };

  // Resume from completed task boundaries if artifacts exist.
  if (output_dir) {
    fs::create_directories(*output_dir);
    for (int i = 1; i <= static_cast<int>(tasks.size()); ++i) {
      const fs::path dir = task_dir(i);
      if (!fs::exists(dir / "done")) break;
      buffers.push_back(load_buffer(dir / "buffer.lrrb"));
      prev_agent = load_agent(dir / "agent.lrrl");
      global_step_base += static_cast<long>(buffers.back().size());
      first_task = i + 1;
    }
    if (first_task > 1 && fs::exists(*output_dir / "metrics.csv")) {
      for (const MetricsRow& row :
           read_metrics_csv(*output_dir / "metrics.csv")) {
        if (row.task_index < first_task) result.metrics.push_back(row);
      }
    }
    result.tasks_completed = first_task - 1;
  }

  const int last_task =
      config.stop_after_tasks > 0
          ? std::min<int>(config.stop_after_tasks,
                          static_cast<int>(tasks.size()))
          : static_cast<int>(tasks.size());

  for (int i = first_task; i <= last_task; ++i) {
    const TaskSpec& task = tasks[static_cast<std::size_t>(i - 1)];
    const uint64_t agent_seed =
        derive_seed(config.master_seed, "agent", static_cast<uint64_t>(i));
    std::vector<const ReplayBuffer*> prior;
    for (const ReplayBuffer& b : buffers) prior.push_back(&b);
    const bool has_source = traits.use_source && !prior.empty();

    Agent agent;
    std::optional<ReplayBuffer> source;
    if (traits.pretrain && has_source) {
      PretrainResult pre = pretrain(
          prior, task,
          traits.warm_init && prev_agent ? InitMode::WarmStart
                                         : InitMode::Fresh,
          prev_agent ? &*prev_agent : nullptr, config, agent_seed);
      agent = std::move(pre.agent);
      source = std::move(pre.source);
    } else {
      if (traits.warm_init && prev_agent) {
        agent = *prev_agent;
        if (!config.warm_start_moments) {
          agent.actor.opt = AdamState::zeros_like(agent.actor.net);
          agent.critics.opt1 = AdamState::zeros_like(agent.critics.q1);
          agent.critics.opt2 = AdamState::zeros_like(agent.critics.q2);
        }
      } else {
        agent = Agent::init(agent_seed, state_dim, action_dim, config.sac);
      }
      if (has_source) {
        RewardFunction reward = [&task](std::span<const double> s,
                                        std::span<const double> a,
                                        std::span<const double> s_next) {
          return reward_fn(task, s, a, s_next);
        };
        source = aggregate_relabel(prior, reward);
      }
    }

    ImproveResult improved =
        improve(agent, source ? &*source : nullptr,
                prev_agent ? &*prev_agent : nullptr, task, config, i,
                global_step_base);
    global_step_base += task.t_task;
    buffers.push_back(std::move(improved.task_buffer));
    for (const MetricsRow& row : improved.rows) {
      result.metrics.push_back(row);
    }

    if (output_dir) {
      const fs::path dir = task_dir(i);
      fs::create_directories(dir);
      save_buffer(buffers.back(), dir / "buffer.lrrb");
      save_agent(agent, dir / "agent.lrrl");
      write_metrics_csv(result.metrics, *output_dir / "metrics.csv");
      std::ofstream(dir / "done") << "ok\n";
      // Reload through the float32 checkpoint so an interrupted run that
      // resumes from disk continues bit-identically.
      agent = load_agent(dir / "agent.lrrl");
    } else {
      quantize_to_float32(agent.actor.net);
      quantize_to_float32(agent.actor.opt);
      quantize_to_float32(agent.critics.q1);
      quantize_to_float32(agent.critics.q2);
      quantize_to_float32(agent.critics.q1_target);
      quantize_to_float32(agent.critics.q2_target);
      quantize_to_float32(agent.critics.opt1);
      quantize_to_float32(agent.critics.opt2);
    }
    prev_agent = std::move(agent);
    result.tasks_completed = i;
  }
  return result;
}

}  // namespace lrrl
