#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace schwarzspec {

/// Raised for malformed config text (a line that is not `key = value`, duplicate keys).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat config: one `key = value` per line, `#` starts a comment. The `experiment`
/// and `output_dir` keys are lifted out of the parameter map.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> parameters;
  std::string output_dir;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct ExperimentInfo {
  std::string name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::string description;
};

const std::vector<ExperimentInfo>& list_experiments();

/// Every violation in the config, empty when it is runnable. Nothing is executed.
std::vector<std::string> validate(const ExperimentConfig& config);

struct RunResult {
  int exit_code = 0;  // 0 success, 1 validation error, 2 runtime failure
  std::filesystem::path output_dir;
  std::vector<std::string> files;
  std::vector<std::string> diagnostics;
  std::string error;
};

/// Validates, runs and writes the result files plus manifest.json into the output
/// directory: `output_dir_override` if non-empty, else the config's output_dir,
/// else "output". A validation failure writes nothing.
RunResult run(const ExperimentConfig& config, const std::filesystem::path& output_dir_override = {});

/// Full round-trip decimal representation used in every CSV file.
std::string format_number(double x);

}  // namespace schwarzspec
