#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "scmstream/experiment.hpp"

namespace {

// exit codes: 0 success, 2 config error, 3 missing inputs
int dispatch(const std::string& command, const std::string& config_path,
             const std::string& out_override, int jobs_override, long long seed_override) {
  using namespace scmstream;
  try {
    ExperimentConfig config = ExperimentConfig::parse_file(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    if (jobs_override > 0) config.jobs = jobs_override;
    if (seed_override >= 0) config.seeds = {static_cast<std::uint64_t>(seed_override)};

    if (command == "generate") return cmd_generate(config);
    if (command == "run") return cmd_run(config);
    if (command == "report") return cmd_report(config);
    std::cerr << "unknown command: " << command << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const MissingInputError& e) {
    std::cerr << "missing input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stream classification experiments: SCM-corrected wrappers over batch classifiers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  long long seed = -1;

  for (const char* name : {"generate", "run", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file (key=value)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--jobs", jobs, "worker pool size (overrides config)");
    sub->add_option("--seed", seed, "replace the configured seed list with one seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return dispatch(app.get_subcommands().front()->get_name(), config_path, out_dir, jobs, seed);
}
