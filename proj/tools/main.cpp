#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "infoflow/error.hpp"

int main(int argc, char** argv) {
  using namespace infoflow;
  CLI::App app{"infoflow: information-flow model toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  bool verbose = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed, "override the master seed");
  app.add_option("--out", out, "override the output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", verbose, "progress messages on stderr");

  const char* help[] = {
      "draw a synthetic dataset",
      "build the compensation relations on the training set",
      "resampled fit producing a model artifact",
      "score the model artifact on the test set",
      "RRSS surface over a parameter pair",
      "Gompertz/Verhulst comparison",
      "forecast from parameters or an artifact"};
  const auto names = cli::command_names();
  for (std::size_t i = 0; i < names.size(); ++i) app.add_subcommand(names[i], help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  cli::RunConfig config;
  try {
    config = cli::load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  }
  if (seed) config.seed = *seed;
  if (out) config.paths.out = *out;
  if (threads) config.threads = *threads;
  return cli::run_command(app.get_subcommands().front()->get_name(), config, verbose, std::cerr);
}
