#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "schwarzspec/experiments.hpp"

namespace ss = schwarzspec;

namespace {

constexpr int kValidationError = 1;
constexpr int kRuntimeFailure = 2;

int load(const std::string& path, ss::ExperimentConfig& config) {
  try {
    config = ss::ExperimentConfig::load(path);
  } catch (const ss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kValidationError;
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  ss::ExperimentConfig config;
  if (int rc = load(path, config)) return rc;
  const auto diag = ss::validate(config);
  for (const auto& d : diag) std::cerr << "error: " << d << '\n';
  if (!diag.empty()) return kValidationError;
  std::cout << path << ": ok (" << config.experiment << ")\n";
  return 0;
}

int cmd_run(const std::string& path) {
  ss::ExperimentConfig config;
  if (int rc = load(path, config)) return rc;
  std::filesystem::path override_dir;
  if (const char* env = std::getenv("SCHWARZSPEC_OUTPUT_DIR"); env && *env) override_dir = env;
  const auto result = ss::run(config, override_dir);
  for (const auto& d : result.diagnostics) std::cerr << "error: " << d << '\n';
  if (!result.error.empty()) std::cerr << "run failed: " << result.error << '\n';
  for (const auto& f : result.files) std::cout << (result.output_dir / f).string() << '\n';
  return result.exit_code;
}

int cmd_list() {
  for (const auto& e : ss::list_experiments()) {
    std::cout << e.name << ": " << e.description << "\n  required:";
    for (const auto& k : e.required) std::cout << ' ' << k;
    std::cout << "\n  optional:";
    for (const auto& k : e.optional) std::cout << ' ' << k;
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schwarz iteration spectra and scalability experiments"};
  app.require_subcommand(1);
  std::string path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", path, "Config file (key = value lines)")->required();
  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", path, "Config file (key = value lines)")->required();
  auto* list = app.add_subcommand("list-experiments", "List experiments and their keys");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidationError;
  }
  try {
    if (*run) return cmd_run(path);
    if (*validate) return cmd_validate(path);
    if (*list) return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return 0;
}
