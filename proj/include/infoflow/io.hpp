#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "infoflow/calibration.hpp"
#include "infoflow/dataset.hpp"
#include "infoflow/grid.hpp"
#include "infoflow/kernel_smoother.hpp"
#include "infoflow/parameters.hpp"
#include "infoflow/schedule.hpp"
#include "infoflow/solver.hpp"
#include "infoflow/synthetic.hpp"

namespace infoflow {

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);

/// Writes through a sibling temporary file and a rename. Creates parent
/// directories. Throws Error(IoError).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a mandatory column; throws Error(DataError) when missing.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(const std::string& text, const std::string& origin = "csv");
CsvTable read_csv(const std::filesystem::path& path);
double parse_number(const std::string& field, const std::string& context);

/// Builds comma-separated text row by row.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::initializer_list<std::string_view> header);
  CsvBuilder& cell(std::string_view text);
  CsvBuilder& cell(double value);
  CsvBuilder& cell(std::size_t value);
  void end_row();
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
  bool fresh_ = true;
};

// Dataset schemas.
std::string format_inputs_csv(std::span<const Dataset> datasets);
std::string format_observations_csv(std::span<const Dataset> datasets);
std::string format_ground_truth_csv(std::span<const GroundTruth> truth);
std::string format_growth_truth_csv(std::span<const GroundTruth> truth);

/// How an individual's starting Outcome is obtained from its files.
enum class InitialOutputRule { Zero, FirstObservation };
std::string_view to_string(InitialOutputRule rule) noexcept;
InitialOutputRule parse_initial_output_rule(std::string_view text);

struct DatasetPair {
  Dataset training{{}, Role::Training};
  Dataset test{{}, Role::Test};
};

/// Individuals appear in order of first appearance in the observations.
DatasetPair parse_datasets(const CsvTable& inputs, const CsvTable& observations,
                           const InjectionProfile& profile, InitialOutputRule rule);
DatasetPair read_datasets(const std::filesystem::path& inputs,
                          const std::filesystem::path& observations,
                          const InjectionProfile& profile, InitialOutputRule rule);

/// Schedule-only file (individual_id, time, volume) for one individual or
/// all rows when `id` is empty.
InputSchedule read_schedule(const std::filesystem::path& path, const InjectionProfile& profile,
                            const std::string& id = {});

std::string format_trajectory_csv(std::span<const double> times, std::span<const double> outcome);

struct FieldSnapshot {
  double t = 0.0;
  StateFields state;
};
std::string format_fields_csv(std::span<const FieldSnapshot> snapshots, const SimulationGrid& grid);

std::string format_surface_csv(const SurfaceScan& scan);
std::string format_evaluation_log_csv(
    const std::vector<std::pair<std::vector<double>, double>>& log);

// JSON encodings.
nlohmann::json to_json(const ParameterSet& p);
ParameterSet parameters_from_json(const nlohmann::json& j, const ParameterSet& defaults = {});
nlohmann::json to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j, const GridSpec& defaults = {});
nlohmann::json to_json(const InjectionProfile& p);
InjectionProfile profile_from_json(const nlohmann::json& j, const InjectionProfile& defaults = {});
nlohmann::json to_json(const RelationModel& m);
RelationModel relation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DerivedParameter& d);
DerivedParameter derived_from_json(const nlohmann::json& j);

/// Self-contained fitted model.
struct ModelArtifact {
  std::string toolkit_version;
  ParameterSet parameters;
  std::vector<ParamId> estimated;
  std::map<ParamId, double> rsd;
  std::vector<ParameterSet> repetitions;
  std::vector<DerivedParameter> relations;
  GridSpec grid;
  InjectionProfile profile;
  UsageVariant variant = UsageVariant::Accumulative;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const ModelArtifact& a);
ModelArtifact artifact_from_json(const nlohmann::json& j);
void save_artifact(const std::filesystem::path& path, const ModelArtifact& a);
ModelArtifact load_artifact(const std::filesystem::path& path);

/// Relations file written by the relate step.
nlohmann::json relations_to_json(const std::vector<DerivedParameter>& relations);
std::vector<DerivedParameter> relations_from_json(const nlohmann::json& j);

}  // namespace infoflow
