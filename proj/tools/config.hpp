#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infoflow/baselines.hpp"
#include "infoflow/calibration.hpp"
#include "infoflow/direct.hpp"
#include "infoflow/grid.hpp"
#include "infoflow/io.hpp"
#include "infoflow/parameters.hpp"
#include "infoflow/schedule.hpp"
#include "infoflow/synthetic.hpp"

namespace infoflow::cli {

enum class GeneratorKind { Population, Growth };

struct FitSettings {
  std::vector<FreeParameter> free{{ParamId::Omega, 5.0, 20.0}, {ParamId::F, 200.0, 1600.0}};
  ObjectiveKind objective = ObjectiveKind::FullCurve;
  double endpoint_time = 1.0;
  std::size_t subsample_size = 20;
  std::size_t repetitions = 30;
  OptimizerBudget budget = make_budget(300);
  /// Complete r and u from the relate step's models.
  bool use_relations = true;
};

struct ScanSettings {
  ParamId a = ParamId::Omega;
  ParamId b = ParamId::R;
  std::vector<double> a_values;
  std::vector<double> b_values;
  Role dataset = Role::Training;
};

struct BaselineSettings {
  Interval a_bounds{0.01, 3.0};
  Interval k_bounds{0.5, 5.0};
  OptimizerBudget budget = make_budget(400);
  double anchor_time = 1.0;
  std::vector<double> instants{0.6, 1.52, 2.5};
};

struct SimulateSettings {
  std::vector<double> times;
  /// Schedule file; defaults to the inputs file.
  std::optional<std::filesystem::path> schedule;
  std::string individual;
  double initial_output = 0.0;
  /// Take parameters, grid and variant from the artifact instead of the config.
  bool from_artifact = false;
  bool write_fields = false;
};

struct Paths {
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> observations;
  std::optional<std::filesystem::path> relations;
  std::optional<std::filesystem::path> artifact;

  std::filesystem::path inputs_file() const { return inputs.value_or(out / "inputs.csv"); }
  std::filesystem::path observations_file() const {
    return observations.value_or(out / "observations.csv");
  }
  std::filesystem::path relations_file() const {
    return relations.value_or(out / "relations.json");
  }
  std::filesystem::path artifact_file() const { return artifact.value_or(out / "model.json"); }
};

struct RunConfig {
  GridSpec grid;
  InjectionProfile injection;
  UsageVariant variant = UsageVariant::Accumulative;
  /// Fixed values and the starting point for every command.
  ParameterSet parameters = reference_parameters();
  InitialOutputRule initial_output = InitialOutputRule::Zero;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  GeneratorKind generator = GeneratorKind::Population;
  GeneratorLaws laws;
  GenerationSpec generation;
  GrowthStandInSpec growth;

  std::vector<RelationSpec> relations = default_relations();
  FitSettings fit;
  std::vector<double> instants{1.0};
  ScanSettings scan;
  BaselineSettings baseline;
  SimulateSettings simulate;
  Paths paths;

  static std::vector<RelationSpec> default_relations();
  /// Propagates the master seed, grid-dependent settings and shared
  /// sections into the per-module structures and checks consistency.
  void finalize();
};

/// Relative paths are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace infoflow::cli
