#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrrl/config.hpp"
#include "lrrl/errors.hpp"
#include "lrrl/plot.hpp"

namespace fs = std::filesystem;

namespace {

// On a failed run, record which outputs exist so partial results are
// recognizable.
void write_manifest(const fs::path& dir, const std::string& error) {
  std::ofstream out(dir / "MANIFEST");
  out << "status: incomplete\n";
  out << "error: " << error << "\n";
  out << "files:\n";
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() != "MANIFEST") {
      out << "  " << fs::relative(entry.path(), dir).string() << "\n";
    }
  }
}

int cmd_run(const std::string& config_path) {
  lrrl::ResolvedRun resolved = lrrl::load_config_file(config_path);
  fs::create_directories(resolved.output_dir);
  {
    std::ofstream out(resolved.output_dir / "resolved.json");
    out << lrrl::resolved_config_json(resolved);
  }
  try {
    lrrl::SequenceResult result =
        lrrl::run_sequence(resolved.tasks, resolved.run, resolved.output_dir);
    lrrl::AggregateMetrics agg = lrrl::compute_metrics(result.metrics);
    std::printf("tasks completed: %d\n", result.tasks_completed);
    std::printf("average success: %.4f\n", agg.average_perf);
    std::printf("final success:   %.4f\n", agg.final_perf);
  } catch (const std::exception& e) {
    write_manifest(resolved.output_dir, e.what());
    throw;
  }
  return 0;
}

int cmd_plot(const std::string& run_dir, std::string out_path,
             const std::vector<std::string>& overlays) {
  std::vector<std::pair<std::string, lrrl::MetricsTable>> series;
  std::vector<std::string> dirs = {run_dir};
  dirs.insert(dirs.end(), overlays.begin(), overlays.end());
  for (const std::string& d : dirs) {
    const fs::path csv = fs::path(d) / "metrics.csv";
    lrrl::MetricsTable table = lrrl::read_metrics_csv(csv);
    if (table.empty()) {
      throw lrrl::FormatError("metrics.csv has no data rows: " + csv.string());
    }
    std::string label = fs::path(d).filename().string();
    if (label.empty()) label = fs::absolute(d).parent_path().filename();
    series.emplace_back(label, std::move(table));
  }
  if (out_path.empty()) out_path = (fs::path(run_dir) / "plot.svg").string();
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw lrrl::UsageError("cannot write " + out_path);
  out << lrrl::render_metrics_svg(series);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_inspect(const std::string& path) {
  lrrl::ReplayBuffer buffer = lrrl::load_buffer(path);
  std::printf("file:       %s\n", path.c_str());
  std::printf("count:      %zu\n", buffer.size());
  std::printf("state_dim:  %d\n", buffer.state_dim());
  std::printf("action_dim: %d\n", buffer.action_dim());
  std::printf("task_id:    %d\n", buffer.task_id());
  if (buffer.empty()) return 0;
  float r_min = buffer[0].r, r_max = buffer[0].r;
  double r_sum = 0.0;
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    r_min = std::min(r_min, buffer[i].r);
    r_max = std::max(r_max, buffer[i].r);
    r_sum += buffer[i].r;
  }
  std::printf("reward:     min %.6g  mean %.6g  max %.6g\n", r_min,
              r_sum / static_cast<double>(buffer.size()), r_max);
  auto print_transition = [](const char* tag, const lrrl::Transition& t) {
    std::printf("%s s=[", tag);
    for (std::size_t j = 0; j < t.s.size(); ++j) {
      std::printf("%s%.6g", j ? " " : "", t.s[j]);
    }
    std::printf("] a=[");
    for (std::size_t j = 0; j < t.a.size(); ++j) {
      std::printf("%s%.6g", j ? " " : "", t.a[j]);
    }
    std::printf("] r=%.6g done=%d\n", t.r, t.done ? 1 : 0);
  };
  print_transition("first:     ", buffer[0]);
  print_transition("last:      ", buffer[buffer.size() - 1]);
  return 0;
}

int cmd_eval(const std::string& run_dir, int task, int episodes,
             uint64_t seed_override, bool has_seed) {
  const fs::path dir(run_dir);
  lrrl::ResolvedRun resolved;
  {
    std::ifstream in(dir / "resolved.json");
    if (!in) {
      throw lrrl::UsageError("no resolved.json in " + run_dir);
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    resolved = lrrl::parse_config(text);
  }
  if (task < 1 || task > static_cast<int>(resolved.tasks.size())) {
    throw lrrl::UsageError("task index out of range");
  }
  const fs::path agent_path =
      dir / ("task_" + std::to_string(task)) / "agent.lrrl";
  lrrl::Agent agent = lrrl::load_agent(agent_path);
  const uint64_t seed =
      has_seed ? seed_override
               : lrrl::derive_seed(resolved.run.master_seed, "eval",
                                   static_cast<uint64_t>(task));
  lrrl::EvalResult result = lrrl::evaluate(agent, resolved.tasks[task - 1],
                                           episodes, seed);
  std::printf("task %d over %d episodes:\n", task, episodes);
  std::printf("success_rate:     %.4f\n", result.success_rate);
  std::printf("mean_final_error: %.6f\n", result.mean_final_error);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifelong RL toolkit: retain, relabel, filter, replay"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Execute a task sequence");
  run->add_option("config", config_path, "JSON configuration file")
      ->required();

  std::string plot_dir, plot_out;
  std::vector<std::string> overlays;
  CLI::App* plot = app.add_subcommand("plot", "Render metrics.csv as SVG");
  plot->add_option("run_dir", plot_dir, "Run directory")->required();
  plot->add_option("-o,--out", plot_out, "Output SVG path");
  plot->add_option("--overlay", overlays, "Additional run directories");

  std::string buffer_path;
  CLI::App* inspect =
      app.add_subcommand("inspect", "Summarize a replay buffer file");
  inspect->add_option("buffer", buffer_path, "Buffer file (.lrrb)")
      ->required();

  std::string eval_dir;
  int eval_task = 1, eval_episodes = 10;
  uint64_t eval_seed = 0;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate a checkpointed agent");
  eval_cmd->add_option("run_dir", eval_dir, "Run directory")->required();
  CLI::Option* task_opt =
      eval_cmd->add_option("--task", eval_task, "Task index (1-based)")
          ->required();
  (void)task_opt;
  eval_cmd->add_option("--episodes", eval_episodes, "Evaluation episodes");
  CLI::Option* seed_opt =
      eval_cmd->add_option("--seed", eval_seed, "Override evaluation seed");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path);
    if (plot->parsed()) return cmd_plot(plot_dir, plot_out, overlays);
    if (inspect->parsed()) return cmd_inspect(buffer_path);
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_dir, eval_task, eval_episodes, eval_seed,
                      seed_opt->count() > 0);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const lrrl::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const lrrl::UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
