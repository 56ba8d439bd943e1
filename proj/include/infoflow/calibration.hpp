#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoflow/dataset.hpp"
#include "infoflow/direct.hpp"
#include "infoflow/grid.hpp"
#include "infoflow/kernel_smoother.hpp"
#include "infoflow/metrics.hpp"
#include "infoflow/parameters.hpp"

namespace infoflow {

/// Simulates one individual and returns O at its observation times.
std::vector<double> predict_individual(const ParameterSet& params, const Individual& individual,
                                       const SimulationGrid& grid, UsageVariant variant);

/// Simulates one individual and returns O at arbitrary times.
std::vector<double> predict_at(const ParameterSet& params, const Individual& individual,
                               const SimulationGrid& grid, UsageVariant variant,
                               std::span<const double> times);

std::vector<Curve> predict_dataset(const ParameterSet& params, const Dataset& dataset,
                                   const SimulationGrid& grid, UsageVariant variant,
                                   unsigned threads = 1);

struct FreeParameter {
  ParamId id;
  double lower = 0.0;
  double upper = 0.0;
};

/// `target` is computed from `driver` through a fitted relation.
struct DerivedParameter {
  ParamId target;
  ParamId driver;
  RelationModel relation;
};

enum class ObjectiveKind { FullCurve, Endpoint };

struct Resampling {
  std::size_t subsample_size = 0;  // 0 = whole dataset
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
};

struct FitConfig {
  std::vector<FreeParameter> free;
  std::vector<DerivedParameter> derived;
  /// Supplies every parameter that is neither free nor derived.
  ParameterSet fixed;
  ObjectiveKind objective = ObjectiveKind::FullCurve;
  double endpoint_time = 1.0;
  Resampling resampling;
  UsageVariant variant = UsageVariant::Accumulative;

  /// Throws Error(InvalidArgument) when a parameter is both free and
  /// derived, a driver is itself derived, or bounds are empty.
  void validate() const;
  SearchSpace search_space() const;
  /// Free values (in `free` order) completed with derived and fixed ones.
  ParameterSet complete(std::span<const double> free_values) const;
  /// Free and derived parameters, in that order.
  std::vector<ParamId> estimated() const;
};

/// (1/n) sum_i sum_j ((y_obs - y_pred) / y_obs)^2 over all observations.
/// Returns +inf if a simulation fails; throws Error(DataError) on a zero
/// observation.
double objective_full_curve(std::span<const double> free_values, const Dataset& dataset,
                            const FitConfig& config, const SimulationGrid& grid);

/// (1/n) sum_i ((s_obs(T) - s_pred(T)) / s_obs(T))^2 at T = endpoint_time.
double objective_endpoint(std::span<const double> free_values, const Dataset& dataset,
                          const FitConfig& config, const SimulationGrid& grid);

double objective_value(std::span<const double> free_values, const Dataset& dataset,
                       const FitConfig& config, const SimulationGrid& grid);

struct RepetitionResult {
  std::vector<std::size_t> subsample;
  ParameterSet params;
  double objective = 0.0;
  std::size_t evaluations = 0;
  bool ok = true;
  std::string failure;
};

struct FitResult {
  std::vector<RepetitionResult> repetitions;
  std::vector<ParamId> estimated;
  /// Fixed values overlaid with the means of the estimated parameters.
  ParameterSet mean_parameters;
  std::map<ParamId, double> means;
  /// std / |mean| with the sample standard deviation; 0 for one repetition.
  std::map<ParamId, double> rsd;
  std::size_t failed_repetitions = 0;
  /// Metrics of mean_parameters on the full training set.
  double training_mean_r_squared = 0.0;
  double training_rrss = 0.0;
  std::optional<double> training_are;
};

struct RunOptions {
  unsigned threads = 1;
};

/// Repeated subsample-and-fit. Each repetition draws its subsample from the
/// sub-stream ("resampling", repetition) of the configured seed and runs
/// DIRECT over the free parameters.
FitResult fit(const Dataset& dataset, const FitConfig& config, const SimulationGrid& grid,
              const OptimizerBudget& budget, const RunOptions& options = {});

/// Mean and RSD (sample standard deviation over |mean|).
std::pair<double, double> mean_and_rsd(std::span<const double> values);

struct SurfaceScan {
  ParamId a;
  ParamId b;
  std::vector<double> a_values;
  std::vector<double> b_values;
  /// rrss[i][j] evaluated at a_values[i], b_values[j]; summed over individuals.
  std::vector<std::vector<double>> rrss;
};

/// Throws Error(CflViolation) if a scanned omega or c breaks the grid bound.
SurfaceScan scan_surface(const Dataset& dataset, ParamId a, ParamId b,
                         std::span<const double> a_values, std::span<const double> b_values,
                         const ParameterSet& others, const SimulationGrid& grid,
                         UsageVariant variant, const RunOptions& options = {});

struct RelationSpec {
  ParamId driver = ParamId::Omega;
  ParamId driven = ParamId::R;
  std::vector<double> driver_values;
  std::size_t subsample_size = 0;  // 0 = whole dataset
  std::size_t subsample_count = 3;
  std::uint64_t seed = 0;
  double driven_lower = 0.0;
  double driven_upper = 1.0;
  OptimizerBudget budget = make_budget(80);
  std::optional<double> bandwidth;
};

struct RelationBuild {
  RelationModel model;
  /// (driver value, fitted driven value) for every successful refit.
  std::vector<SupportPoint> pairs;
  std::vector<double> objective_values;
  std::vector<std::vector<std::size_t>> subsamples;
  std::size_t failures = 0;
};

/// For each driver value and each subsample, fits the driven parameter alone
/// by DIRECT on the averaged full-curve objective, then smooths the pairs
/// with Nadaraya-Watson. The subsamples are shared across driver values.
RelationBuild build_relation(const Dataset& dataset, const RelationSpec& spec,
                             const ParameterSet& others, const SimulationGrid& grid,
                             UsageVariant variant, const RunOptions& options = {});

/// Default driver windows used for relation building.
std::vector<double> default_driver_values(ParamId driver, std::size_t count = 10);

}  // namespace infoflow
