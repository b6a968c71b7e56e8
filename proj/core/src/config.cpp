#include "lrrl/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lrrl/errors.hpp"

namespace lrrl {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("config: " + path + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) fail(path + "." + key, "unknown key");
  }
}

template <typename T>
T get_number(const json& obj, const std::string& path, const std::string& key,
             T fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<T>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

void parse_sac(const json& obj, SacConfig& sac) {
  reject_unknown_keys(obj, "sac",
                      {"discount", "temperature", "tau", "lr", "batch_size",
                       "hidden", "twin_critics"});
  sac.discount = get_number(obj, "sac", "discount", sac.discount);
  sac.temperature = get_number(obj, "sac", "temperature", sac.temperature);
  sac.tau = get_number(obj, "sac", "tau", sac.tau);
  sac.lr = get_number(obj, "sac", "lr", sac.lr);
  sac.batch_size = get_number(obj, "sac", "batch_size", sac.batch_size);
  if (obj.contains("hidden")) {
    if (!obj.at("hidden").is_array()) fail("sac.hidden", "expected an array");
    sac.hidden.clear();
    for (const json& v : obj.at("hidden")) {
      if (!v.is_number_integer() || v.get<int>() < 1) {
        fail("sac.hidden", "expected positive integers");
      }
      sac.hidden.push_back(v.get<int>());
    }
    if (sac.hidden.empty()) fail("sac.hidden", "must not be empty");
  }
  sac.twin_critics = get_bool(obj, "sac", "twin_critics", sac.twin_critics);
  if (sac.discount <= 0.0 || sac.discount >= 1.0) {
    fail("sac.discount", "must lie in (0, 1)");
  }
  if (sac.temperature <= 0.0) fail("sac.temperature", "must be > 0");
  if (sac.tau < 0.0 || sac.tau > 1.0) fail("sac.tau", "must lie in [0, 1]");
  if (sac.lr <= 0.0) fail("sac.lr", "must be > 0");
  if (sac.batch_size < 1) fail("sac.batch_size", "must be >= 1");
}

void parse_filter(const json& obj, FilterConfig& filter) {
  reject_unknown_keys(obj, "filter",
                      {"gamma", "refilter_interval",
                       "classifier_updates_per_step", "classifier_lr",
                       "noise_sigma", "monotone_shrink"});
  if (obj.contains("gamma")) {
    const json& g = obj.at("gamma");
    if (g.is_string() && g.get<std::string>() == "inf") {
      filter.gamma = std::numeric_limits<double>::infinity();
    } else if (g.is_number()) {
      filter.gamma = g.get<double>();
    } else {
      fail("filter.gamma", "expected a number or \"inf\"");
    }
  }
  if (filter.gamma < 0.0) fail("filter.gamma", "must be >= 0");
  filter.refilter_interval =
      get_number(obj, "filter", "refilter_interval", filter.refilter_interval);
  if (filter.refilter_interval < 1) {
    fail("filter.refilter_interval", "must be >= 1");
  }
  filter.classifier_updates_per_step =
      get_number(obj, "filter", "classifier_updates_per_step",
                 filter.classifier_updates_per_step);
  filter.classifier_lr =
      get_number(obj, "filter", "classifier_lr", filter.classifier_lr);
  if (filter.classifier_lr <= 0.0) fail("filter.classifier_lr", "must be > 0");
  filter.noise_sigma =
      get_number(obj, "filter", "noise_sigma", filter.noise_sigma);
  if (filter.noise_sigma < 0.0) fail("filter.noise_sigma", "must be >= 0");
  filter.monotone_shrink =
      get_bool(obj, "filter", "monotone_shrink", filter.monotone_shrink);
}

struct RunSection {
  long t_task = 0;        // 0 = family default
  int episode_len = 0;    // 0 = family default
  double success_eps = 0.05;
};

RunSection parse_run(const json& obj, RunConfig& run) {
  reject_unknown_keys(
      obj, "run",
      {"pretrain_iters", "t_task", "eval_interval", "eval_episodes",
       "episode_len", "success_eps", "random_action_steps", "updates_per_step",
       "early_stop_consecutive", "warm_start_moments", "mix_mode",
       "mix_ramp_end", "stop_after_tasks"});
  RunSection section;
  run.pretrain_iters =
      get_number(obj, "run", "pretrain_iters", run.pretrain_iters);
  if (run.pretrain_iters < 0) fail("run.pretrain_iters", "must be >= 0");
  section.t_task = get_number<long>(obj, "run", "t_task", 0);
  if (obj.contains("t_task") && section.t_task < 1) {
    fail("run.t_task", "must be >= 1");
  }
  run.eval_interval =
      get_number(obj, "run", "eval_interval", run.eval_interval);
  if (run.eval_interval < 1) fail("run.eval_interval", "must be >= 1");
  run.eval_episodes =
      get_number(obj, "run", "eval_episodes", run.eval_episodes);
  if (run.eval_episodes < 1) fail("run.eval_episodes", "must be >= 1");
  section.episode_len = get_number<int>(obj, "run", "episode_len", 0);
  if (obj.contains("episode_len") && section.episode_len < 1) {
    fail("run.episode_len", "must be >= 1");
  }
  section.success_eps =
      get_number(obj, "run", "success_eps", section.success_eps);
  if (section.success_eps <= 0.0) fail("run.success_eps", "must be > 0");
  run.random_action_steps =
      get_number(obj, "run", "random_action_steps", run.random_action_steps);
  if (run.random_action_steps < 0) {
    fail("run.random_action_steps", "must be >= 0");
  }
  run.updates_per_step =
      get_number(obj, "run", "updates_per_step", run.updates_per_step);
  if (run.updates_per_step < 0) fail("run.updates_per_step", "must be >= 0");
  run.early_stop_consecutive = get_number(obj, "run", "early_stop_consecutive",
                                          run.early_stop_consecutive);
  run.warm_start_moments =
      get_bool(obj, "run", "warm_start_moments", run.warm_start_moments);
  const std::string mix = get_string(obj, "run", "mix_mode", "ramp");
  if (mix == "ramp") {
    run.mix_mode = MixMode::Ramp;
  } else if (mix == "uniform") {
    run.mix_mode = MixMode::Uniform;
  } else {
    fail("run.mix_mode", "expected \"ramp\" or \"uniform\"");
  }
  run.mix_ramp_end = get_number(obj, "run", "mix_ramp_end", run.mix_ramp_end);
  run.stop_after_tasks =
      get_number(obj, "run", "stop_after_tasks", run.stop_after_tasks);
  return section;
}

TaskSpec parse_explicit_task(const json& obj, Family family, int index,
                             const RunSection& section) {
  const std::string path = "sequence.tasks[" + std::to_string(index) + "]";
  TaskSpec spec = default_task(family);
  if (family == Family::Valve) {
    reject_unknown_keys(obj, path,
                        {"gain", "friction", "direction", "target_angle",
                         "episode_len", "t_task", "success_eps"});
    ValveParams p;
    p.gain = get_number(obj, path, "gain", p.gain);
    p.friction = get_number(obj, path, "friction", p.friction);
    p.direction = get_number(obj, path, "direction", p.direction);
    p.target_angle = get_number(obj, path, "target_angle", p.target_angle);
    if (p.gain <= 0.0) fail(path + ".gain", "must be > 0");
    if (p.friction < 0.0) fail(path + ".friction", "must be >= 0");
    if (p.direction != 1 && p.direction != -1) {
      fail(path + ".direction", "must be +1 or -1");
    }
    if (p.target_angle <= -M_PI || p.target_angle > M_PI) {
      fail(path + ".target_angle", "must lie in (-pi, pi]");
    }
    spec.params = p;
  } else {
    reject_unknown_keys(obj, path,
                        {"goal", "gain", "friction", "rotation", "episode_len",
                         "t_task", "success_eps"});
    ReachParams p;
    if (obj.contains("goal")) {
      const json& g = obj.at("goal");
      if (!g.is_array() || g.size() != 2 || !g[0].is_number() ||
          !g[1].is_number()) {
        fail(path + ".goal", "expected [x, y]");
      }
      p.goal_x = g[0].get<double>();
      p.goal_y = g[1].get<double>();
    }
    p.gain = get_number(obj, path, "gain", p.gain);
    p.friction = get_number(obj, path, "friction", p.friction);
    p.rotation = get_number(obj, path, "rotation", p.rotation);
    if (std::abs(p.goal_x) > ReachParams::kWorkspace ||
        std::abs(p.goal_y) > ReachParams::kWorkspace) {
      fail(path + ".goal", "must lie inside the workspace");
    }
    if (p.gain <= 0.0) fail(path + ".gain", "must be > 0");
    if (p.friction < 0.0) fail(path + ".friction", "must be >= 0");
    spec.params = p;
  }
  spec.episode_len = section.episode_len > 0 ? section.episode_len
                                             : spec.episode_len;
  spec.episode_len = get_number(obj, path, "episode_len", spec.episode_len);
  spec.t_task = section.t_task > 0 ? section.t_task : spec.t_task;
  spec.t_task = get_number(obj, path, "t_task", spec.t_task);
  spec.success_eps = get_number(obj, path, "success_eps", section.success_eps);
  if (spec.episode_len < 1) fail(path + ".episode_len", "must be >= 1");
  if (spec.t_task < spec.episode_len) {
    fail(path + ".t_task", "must be >= episode_len");
  }
  if (spec.success_eps <= 0.0) fail(path + ".success_eps", "must be > 0");
  spec.task_id = index + 1;
  return spec;
}

}  // namespace

ResolvedRun parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: root must be an object");
  reject_unknown_keys(doc, "$",
                      {"seed", "family", "sequence", "method", "output_dir",
                       "sac", "filter", "run"});
  for (const char* required : {"seed", "family", "sequence", "method"}) {
    if (!doc.contains(required)) {
      fail(required, "required key is missing");
    }
  }

  ResolvedRun resolved;
  if (!doc.at("seed").is_number_integer()) fail("seed", "expected an integer");
  resolved.run.master_seed = doc.at("seed").get<uint64_t>();

  const std::string family = doc.at("family").get<std::string>();
  if (family == "valve") {
    resolved.family = Family::Valve;
  } else if (family == "reach") {
    resolved.family = Family::Reach;
  } else {
    fail("family", "expected \"valve\" or \"reach\"");
  }

  resolved.run.method =
      variant_from_name(get_string(doc, "$", "method", "ours"));
  resolved.output_dir = get_string(doc, "$", "output_dir", "run");

  if (doc.contains("sac")) parse_sac(doc.at("sac"), resolved.run.sac);
  if (doc.contains("filter")) {
    parse_filter(doc.at("filter"), resolved.run.filter);
  }
  RunSection section;
  if (doc.contains("run")) {
    section = parse_run(doc.at("run"), resolved.run);
  }

  const json& seq = doc.at("sequence");
  if (!seq.is_object()) fail("sequence", "expected an object");
  const std::string kind = get_string(seq, "sequence", "kind", "");
  if (kind == "random" || kind == "hard") {
    reject_unknown_keys(seq, "sequence", {"kind", "n"});
    const int n = get_number<int>(seq, "sequence", "n", 0);
    if (kind == "random" && n < 1) fail("sequence.n", "must be >= 1");
    if (kind == "hard" && n < 2) fail("sequence.n", "must be >= 2");
    const uint64_t task_seed = derive_seed(resolved.run.master_seed, "tasks");
    resolved.tasks = kind == "random"
                         ? sample_sequence(resolved.family, n, task_seed)
                         : hard_sequence(resolved.family, n, task_seed);
    for (TaskSpec& t : resolved.tasks) {
      if (section.episode_len > 0) t.episode_len = section.episode_len;
      if (section.t_task > 0) t.t_task = section.t_task;
      t.success_eps = section.success_eps;
      if (t.t_task < t.episode_len) {
        fail("run.t_task", "must be >= episode_len");
      }
    }
  } else if (kind == "explicit") {
    reject_unknown_keys(seq, "sequence", {"kind", "tasks"});
    if (!seq.contains("tasks") || !seq.at("tasks").is_array() ||
        seq.at("tasks").empty()) {
      fail("sequence.tasks", "expected a non-empty array");
    }
    int index = 0;
    for (const json& t : seq.at("tasks")) {
      resolved.tasks.push_back(
          parse_explicit_task(t, resolved.family, index++, section));
    }
  } else {
    fail("sequence.kind", "expected \"random\", \"hard\" or \"explicit\"");
  }

  for (const TaskSpec& t : resolved.tasks) {
    if (t.t_task % resolved.run.eval_interval != 0) {
      fail("run.eval_interval", "must divide t_task");
    }
  }
  return resolved;
}

std::string resolved_config_json(const ResolvedRun& resolved) {
  json doc;
  doc["seed"] = resolved.run.master_seed;
  doc["family"] = resolved.family == Family::Valve ? "valve" : "reach";
  doc["method"] = variant_name(resolved.run.method);
  doc["output_dir"] = resolved.output_dir.string();
  const SacConfig& sac = resolved.run.sac;
  doc["sac"] = {{"discount", sac.discount},
                {"temperature", sac.temperature},
                {"tau", sac.tau},
                {"lr", sac.lr},
                {"batch_size", sac.batch_size},
                {"hidden", sac.hidden},
                {"twin_critics", sac.twin_critics}};
  const FilterConfig& filter = resolved.run.filter;
  if (std::isinf(filter.gamma)) {
    doc["filter"]["gamma"] = "inf";
  } else {
    doc["filter"]["gamma"] = filter.gamma;
  }
  doc["filter"]["refilter_interval"] = filter.refilter_interval;
  doc["filter"]["classifier_updates_per_step"] =
      filter.classifier_updates_per_step;
  doc["filter"]["classifier_lr"] = filter.classifier_lr;
  doc["filter"]["noise_sigma"] = filter.noise_sigma;
  doc["filter"]["monotone_shrink"] = filter.monotone_shrink;
  const RunConfig& run = resolved.run;
  doc["run"] = {{"pretrain_iters", run.pretrain_iters},
                {"eval_interval", run.eval_interval},
                {"eval_episodes", run.eval_episodes},
                {"random_action_steps", run.random_action_steps},
                {"updates_per_step", run.updates_per_step},
                {"early_stop_consecutive", run.early_stop_consecutive},
                {"warm_start_moments", run.warm_start_moments},
                {"mix_mode",
                 run.mix_mode == MixMode::Ramp ? "ramp" : "uniform"},
                {"mix_ramp_end", run.mix_ramp_end},
                {"stop_after_tasks", run.stop_after_tasks}};
  // Tasks are echoed explicitly so the resolved document pins the exact
  // sequence, including generated ones.
  json tasks = json::array();
  for (const TaskSpec& t : resolved.tasks) {
    json task;
    if (resolved.family == Family::Valve) {
      const ValveParams& p = t.valve();
      task = {{"gain", p.gain},
              {"friction", p.friction},
              {"direction", p.direction},
              {"target_angle", p.target_angle}};
    } else {
      const ReachParams& p = t.reach();
      task = {{"goal", {p.goal_x, p.goal_y}},
              {"gain", p.gain},
              {"friction", p.friction},
              {"rotation", p.rotation}};
    }
    task["episode_len"] = t.episode_len;
    task["t_task"] = t.t_task;
    task["success_eps"] = t.success_eps;
    tasks.push_back(task);
  }
  doc["sequence"] = {{"kind", "explicit"}, {"tasks", tasks}};
  return doc.dump(2) + "\n";
}

ResolvedRun load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace lrrl
