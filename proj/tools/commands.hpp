#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "infoflow/io.hpp"

namespace infoflow::cli {

/// Progress messages on a stream, shown only in verbose mode.
class Logger {
 public:
  Logger(std::ostream& stream, bool verbose) : stream_(stream), verbose_(verbose) {}
  void info(const std::string& message) const;

 private:
  std::ostream& stream_;
  bool verbose_;
};

/// Files written into the output directory by one command. A failure
/// leaves a `_FAILED` marker naming the command, the error and every file
/// written before it.
class OutputSet {
 public:
  OutputSet(std::filesystem::path dir, std::string command);
  std::filesystem::path write(const std::string& name, const std::string& text);
  void write_json(const std::string& name, const nlohmann::json& j);
  void mark_failed(const std::string& message) const;
  void mark_succeeded() const;
  const std::vector<std::filesystem::path>& written() const noexcept { return written_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::vector<std::filesystem::path> written_;
};

inline constexpr const char* kFailureMarker = "_FAILED";

DatasetPair load_datasets(const RunConfig& config);

/// Fit configuration for the fit step, with relations loaded when enabled.
FitConfig make_fit_config(const RunConfig& config);

ModelArtifact make_artifact(const RunConfig& config, const FitConfig& fit_config,
                            const FitResult& result);

void cmd_generate(const RunConfig& config, OutputSet& out, const Logger& log);
void cmd_relate(const RunConfig& config, OutputSet& out, const Logger& log);
void cmd_fit(const RunConfig& config, OutputSet& out, const Logger& log);
void cmd_evaluate(const RunConfig& config, OutputSet& out, const Logger& log);
void cmd_scan(const RunConfig& config, OutputSet& out, const Logger& log);
void cmd_baseline(const RunConfig& config, OutputSet& out, const Logger& log);
void cmd_simulate(const RunConfig& config, OutputSet& out, const Logger& log);

std::vector<std::string> command_names();

/// Runs one command by name, reporting errors on `err`. Returns the exit
/// status: 0 on success, 2 for configuration errors, 1 otherwise.
int run_command(const std::string& name, const RunConfig& config, bool verbose, std::ostream& err);

}  // namespace infoflow::cli
