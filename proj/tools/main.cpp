#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "app/app.hpp"

namespace app = herglotz::app;

int main(int argc, char** argv) {
  CLI::App cli{"Herglotz dynamics on Lie algebroids"};
  cli.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> prefix;
  std::optional<long> seed;
  std::optional<double> step;
  std::optional<double> horizon;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "config file")->required();
    sub->add_option("--output-prefix", prefix, "output file prefix");
    sub->add_option("--seed", seed, "seed for random connections and samples");
    sub->add_option("--step", step, "integrator step");
    sub->add_option("--horizon", horizon, "final time");
  };
  CLI::App* run = cli.add_subcommand("run", "integrate and write CSV/JSON outputs");
  add_common(run);
  CLI::App* verify = cli.add_subcommand("verify", "integrate and run checks");
  add_common(verify);
  CLI::App* list = cli.add_subcommand("list-scenarios", "list built-in scenarios");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kConfigError;
  }

  if (list->parsed()) return app::list_scenarios(std::cout);

  app::RunConfig config;
  try {
    config = app::load_config(config_path);
    if (prefix) config.output_prefix = *prefix;
    if (seed) {
      if (*seed < 0) throw app::ConfigError("--seed must be >= 0");
      config.seed = static_cast<std::uint64_t>(*seed);
    }
    if (step) {
      if (!(*step > 0.0)) throw app::ConfigError("--step must be > 0");
      config.integrator.step = *step;
    }
    if (horizon) {
      if (!(*horizon > 0.0)) throw app::ConfigError("--horizon must be > 0");
      config.horizon = *horizon;
    }
  } catch (const app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return app::kConfigError;
  } catch (const app::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return app::kIoError;
  }

  const app::Mode mode = run->parsed() ? app::Mode::run : app::Mode::verify;
  (void)verify;
  return app::execute(std::move(config), mode, std::cout, std::cerr);
}
