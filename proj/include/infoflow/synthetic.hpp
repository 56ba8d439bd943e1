#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infoflow/dataset.hpp"
#include "infoflow/grid.hpp"
#include "infoflow/metrics.hpp"
#include "infoflow/parameters.hpp"
#include "infoflow/random.hpp"
#include "infoflow/schedule.hpp"

namespace infoflow {

/// How the second argument of a normal law is read.
enum class SpreadKind { Variance, StandardDeviation };

std::string_view to_string(SpreadKind kind) noexcept;
SpreadKind parse_spread_kind(std::string_view text);

struct NormalLaw {
  double mean = 0.0;
  double spread = 1.0;

  double sd(SpreadKind kind) const;
  bool operator==(const NormalLaw&) const = default;
};

struct GeneratorLaws {
  NormalLaw omega{10.0, 0.3125};
  NormalLaw r{35.0, 1.42};
  NormalLaw f{800.0, 5.175};
  NormalLaw u{125.0, 1.0};
  Interval volq{0.0, 1.0};
  Interval ct{0.0, 1.0};
  NormalLaw noise{0.0, 0.05};
  SpreadKind spread = SpreadKind::Variance;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One draw of `law`, redrawing negative values. Throws Error(DataError)
/// after 100 attempts.
double draw_nonnegative(Rng& rng, const NormalLaw& law, SpreadKind kind);

/// `count` evenly spaced instants on [lo, hi].
std::vector<double> uniform_times(double lo, double hi, std::size_t count);

struct GenerationSpec {
  std::size_t n_train = 30;
  std::size_t n_test = 20;
  std::vector<double> curve_times = uniform_times(0.0, 1.0, 51);
  std::size_t entries_per_individual = 1;
  InjectionProfile profile;
  UsageVariant variant = UsageVariant::Accumulative;
  /// Supplies c and any variant parameters; the drawn ones are overwritten.
  ParameterSet base = reference_parameters();
};

struct GroundTruth {
  std::string id;
  Role role = Role::Training;
  ParameterSet params;
  InputSchedule schedule;
  double initial_output = 0.0;
  /// Noise-free outcome at the individual's observation times.
  Curve clean;
};

struct GeneratedData {
  Dataset training;
  Dataset test;
  std::vector<GroundTruth> truth;  // training individuals first
};

/// Draws individuals from the laws, simulates them and adds noise. Throws
/// Error(DataError) when an individual cannot be drawn in 100 attempts.
GeneratedData generate_dataset(const GeneratorLaws& laws, const GenerationSpec& spec,
                               const SimulationGrid& grid, unsigned threads = 1);

/// Logistic-usage parameters of the growth stand-in.
ParameterSet growth_reference_parameters();

/// Logistic-usage stand-in for growth data: shared parameters, individual
/// starting outputs and feeding levels, multiplicative noise.
struct GrowthStandInSpec {
  ParameterSet params = growth_reference_parameters();
  std::size_t n_train = 8;
  std::size_t n_test = 7;
  std::vector<double> train_times{0.0, 1.0};
  std::vector<double> test_times{0.0, 0.6, 1.52, 2.5};
  Interval initial_output{0.5, 0.7};
  double intake_interval = 0.16;
  double intake_until = 2.4;
  Interval intake_level{0.025, 0.045};
  /// Relative spread of each intake around the individual's level.
  double intake_jitter = 0.1;
  double relative_noise = 0.02;
  InjectionProfile profile;
  std::uint64_t seed = 0;
};

GeneratedData generate_growth_standin(const GrowthStandInSpec& spec, const SimulationGrid& grid,
                                      unsigned threads = 1);

}  // namespace infoflow
