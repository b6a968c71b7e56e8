#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lrrl/envs.hpp"
#include "lrrl/lifelong.hpp"

namespace lrrl {

// Fully resolved run configuration: the typed config plus the task
// sequence it describes.
struct ResolvedRun {
  RunConfig run;
  Family family = Family::Valve;
  std::vector<TaskSpec> tasks;
  std::filesystem::path output_dir;
};

// Parse and validate a JSON configuration document. Unknown keys are
// rejected with their path; defaults are applied for omitted keys.
// Throws ConfigError on any violation.
ResolvedRun parse_config(const std::string& text);

// Serialize a resolved configuration with every default materialized; the
// output parses back to an identical run.
std::string resolved_config_json(const ResolvedRun& resolved);

ResolvedRun load_config_file(const std::filesystem::path& path);

}  // namespace lrrl
