#include "infoflow/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "infoflow/error.hpp"
#include "infoflow/parallel.hpp"
#include "infoflow/random.hpp"
#include "infoflow/solver.hpp"

namespace infoflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonzero(const Dataset& dataset) {
  for (const auto& ind : dataset.individuals) {
    for (const auto& o : ind.observations) {
      if (o.value == 0.0) {
        fail(ErrorCode::DataError,
             "individual " + ind.id + " has a zero observation; relative error undefined");
      }
    }
  }
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

std::size_t resolve_subsample(std::size_t requested, std::size_t n) {
  const std::size_t k = requested == 0 ? n : requested;
  if (k > n) fail(ErrorCode::InvalidArgument, "subsample size exceeds dataset size");
  return k;
}

}  // namespace

std::vector<double> predict_at(const ParameterSet& params, const Individual& individual,
                               const SimulationGrid& grid, UsageVariant variant,
                               std::span<const double> times) {
  const StateFields initial = initial_state_for_output(grid, individual.initial_output);
  return simulate(params, individual.schedule, initial, grid, variant, times).outcome;
}

std::vector<double> predict_individual(const ParameterSet& params, const Individual& individual,
                                       const SimulationGrid& grid, UsageVariant variant) {
  const auto times = individual.observation_times();
  return predict_at(params, individual, grid, variant, times);
}

std::vector<Curve> predict_dataset(const ParameterSet& params, const Dataset& dataset,
                                   const SimulationGrid& grid, UsageVariant variant,
                                   unsigned threads) {
  std::vector<Curve> out(dataset.size());
  parallel_for(dataset.size(), threads, [&](std::size_t i) {
    out[i] = predict_individual(params, dataset.individuals[i], grid, variant);
  });
  return out;
}

void FitConfig::validate() const {
  std::set<ParamId> seen;
  for (const auto& p : free) {
    if (!seen.insert(p.id).second) {
      fail(ErrorCode::InvalidArgument, "parameter listed twice: " + std::string(to_string(p.id)));
    }
    if (!(p.lower < p.upper)) {
      fail(ErrorCode::InvalidArgument,
           "empty bounds for free parameter " + std::string(to_string(p.id)));
    }
  }
  std::set<ParamId> derived_targets;
  for (const auto& d : derived) {
    if (!seen.insert(d.target).second) {
      fail(ErrorCode::InvalidArgument,
           "parameter is both free and derived: " + std::string(to_string(d.target)));
    }
    derived_targets.insert(d.target);
  }
  for (const auto& d : derived) {
    if (derived_targets.count(d.driver) != 0) {
      fail(ErrorCode::InvalidArgument, "relation driver must be free or fixed");
    }
  }
  if (free.empty()) fail(ErrorCode::InvalidArgument, "fit needs at least one free parameter");
  if (resampling.repetitions == 0) fail(ErrorCode::InvalidArgument, "repetitions must be >= 1");
}

SearchSpace FitConfig::search_space() const {
  SearchSpace space;
  for (const auto& p : free) {
    space.lower.push_back(p.lower);
    space.upper.push_back(p.upper);
  }
  return space;
}

ParameterSet FitConfig::complete(std::span<const double> free_values) const {
  if (free_values.size() != free.size()) {
    fail(ErrorCode::InvalidArgument, "free value count does not match the configuration");
  }
  ParameterSet params = fixed;
  for (std::size_t i = 0; i < free.size(); ++i) params.set(free[i].id, free_values[i]);
  for (const auto& d : derived) params.set(d.target, d.relation(params.get(d.driver)));
  return params;
}

std::vector<ParamId> FitConfig::estimated() const {
  std::vector<ParamId> ids;
  for (const auto& p : free) ids.push_back(p.id);
  for (const auto& d : derived) ids.push_back(d.target);
  return ids;
}

double objective_full_curve(std::span<const double> free_values, const Dataset& dataset,
                            const FitConfig& config, const SimulationGrid& grid) {
  if (dataset.empty()) fail(ErrorCode::DataError, "objective on empty dataset");
  require_nonzero(dataset);
  const ParameterSet params = config.complete(free_values);
  double total = 0.0;
  for (const auto& ind : dataset.individuals) {
    std::vector<double> pred;
    try {
      pred = predict_individual(params, ind, grid, config.variant);
    } catch (const Error&) {
      return kInf;
    }
    for (std::size_t j = 0; j < pred.size(); ++j) {
      const double obs = ind.observations[j].value;
      const double rel = (obs - pred[j]) / obs;
      total += rel * rel;
    }
  }
  const double value = total / static_cast<double>(dataset.size());
  return std::isfinite(value) ? value : kInf;
}

double objective_endpoint(std::span<const double> free_values, const Dataset& dataset,
                          const FitConfig& config, const SimulationGrid& grid) {
  if (dataset.empty()) fail(ErrorCode::DataError, "objective on empty dataset");
  const double T = config.endpoint_time;
  std::vector<double> observed;
  observed.reserve(dataset.size());
  for (const auto& ind : dataset.individuals) {
    const auto obs = ind.observed_at(T);
    if (!obs) fail(ErrorCode::DataError, "individual " + ind.id + " has no endpoint observation");
    if (*obs == 0.0) fail(ErrorCode::DataError, "individual " + ind.id + " has a zero endpoint");
    observed.push_back(*obs);
  }
  const ParameterSet params = config.complete(free_values);
  const double times[] = {T};
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    double pred;
    try {
      pred = predict_at(params, dataset.individuals[i], grid, config.variant, times).front();
    } catch (const Error&) {
      return kInf;
    }
    const double rel = (observed[i] - pred) / observed[i];
    total += rel * rel;
  }
  const double value = total / static_cast<double>(dataset.size());
  return std::isfinite(value) ? value : kInf;
}

double objective_value(std::span<const double> free_values, const Dataset& dataset,
                       const FitConfig& config, const SimulationGrid& grid) {
  return config.objective == ObjectiveKind::FullCurve
             ? objective_full_curve(free_values, dataset, config, grid)
             : objective_endpoint(free_values, dataset, config, grid);
}

std::pair<double, double> mean_and_rsd(std::span<const double> values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, mean == 0.0 ? 0.0 : sd / std::abs(mean)};
}

FitResult fit(const Dataset& dataset, const FitConfig& config, const SimulationGrid& grid,
              const OptimizerBudget& budget, const RunOptions& options) {
  config.validate();
  dataset.validate(grid.t_end());
  if (config.objective == ObjectiveKind::FullCurve) require_nonzero(dataset);
  const std::size_t n = dataset.size();
  const std::size_t k = resolve_subsample(config.resampling.subsample_size, n);
  const SearchSpace space = config.search_space();

  FitResult result;
  result.estimated = config.estimated();
  result.repetitions.resize(config.resampling.repetitions);

  parallel_for(result.repetitions.size(), options.threads, [&](std::size_t rep) {
    RepetitionResult& out = result.repetitions[rep];
    Rng rng(derive_seed(config.resampling.seed, "resampling", rep));
    out.subsample = k == n ? all_indices(n) : rng.sample_without_replacement(n, k);
    const Dataset sub = dataset.subset(out.subsample);
    auto objective = [&](std::span<const double> x) {
      return objective_value(x, sub, config, grid);
    };
    try {
      const auto opt = minimize(objective, space, budget);
      out.params = config.complete(opt.best_point);
      out.params.validate(config.variant);
      if (!check_cfl(out.params, grid)) {
        fail(ErrorCode::CflViolation, check_cfl(out.params, grid).describe());
      }
      out.objective = opt.best_value;
      out.evaluations = opt.evaluations_used;
    } catch (const Error& e) {
      out.ok = false;
      out.failure = e.what();
    }
  });

  result.mean_parameters = config.fixed;
  for (ParamId id : result.estimated) {
    std::vector<double> values;
    for (const auto& rep : result.repetitions) {
      if (rep.ok) values.push_back(rep.params.get(id));
    }
    if (values.empty()) fail(ErrorCode::OptimizationFailure, "every fitting repetition failed");
    const auto [mean, rsd] = mean_and_rsd(values);
    result.means[id] = mean;
    result.rsd[id] = rsd;
    result.mean_parameters.set(id, mean);
  }
  for (const auto& rep : result.repetitions) {
    if (!rep.ok) ++result.failed_repetitions;
  }

  const auto predicted = predict_dataset(result.mean_parameters, dataset, grid, config.variant,
                                         options.threads);
  const auto report = evaluate(dataset, predicted, {});
  result.training_mean_r_squared = report.mean_r_squared;
  result.training_rrss = report.total_rrss;
  bool has_endpoint = true;
  std::vector<double> at_endpoint;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& obs = dataset.individuals[i].observations;
    bool found = false;
    for (std::size_t j = 0; j < obs.size(); ++j) {
      if (std::abs(obs[j].time - config.endpoint_time) <= 1e-9 && obs[j].value != 0.0) {
        at_endpoint.push_back(predicted[i][j]);
        found = true;
        break;
      }
    }
    has_endpoint = has_endpoint && found;
  }
  if (has_endpoint) result.training_are = are(dataset, at_endpoint, config.endpoint_time);
  return result;
}

SurfaceScan scan_surface(const Dataset& dataset, ParamId a, ParamId b,
                         std::span<const double> a_values, std::span<const double> b_values,
                         const ParameterSet& others, const SimulationGrid& grid,
                         UsageVariant variant, const RunOptions& options) {
  if (a_values.empty() || b_values.empty()) {
    fail(ErrorCode::InvalidArgument, "scan grids must be non-empty");
  }
  if (a == b) fail(ErrorCode::InvalidArgument, "scan needs two distinct parameters");
  dataset.validate(grid.t_end());
  require_nonzero(dataset);
  auto check = [&](ParamId id, std::span<const double> values) {
    for (double v : values) {
      ParameterSet p = others;
      p.set(id, v);
      if (const auto verdict = check_cfl(p, grid); !verdict) {
        fail(ErrorCode::CflViolation, verdict.describe());
      }
      if (!(v >= 0.0)) fail(ErrorCode::InvalidArgument, "scan values must be >= 0");
    }
  };
  check(a, a_values);
  check(b, b_values);

  SurfaceScan scan{a, b, {a_values.begin(), a_values.end()}, {b_values.begin(), b_values.end()},
                   std::vector<std::vector<double>>(a_values.size(),
                                                    std::vector<double>(b_values.size()))};
  const auto observed = dataset.observed_curves();
  const std::size_t cols = b_values.size();
  parallel_for(a_values.size() * cols, options.threads, [&](std::size_t cell) {
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    ParameterSet p = others;
    p.set(a, a_values[i]);
    p.set(b, b_values[j]);
    double value;
    try {
      value = rrss(observed, predict_dataset(p, dataset, grid, variant));
    } catch (const SimulationError&) {
      value = kInf;
    }
    scan.rrss[i][j] = value;
  });
  return scan;
}

RelationBuild build_relation(const Dataset& dataset, const RelationSpec& spec,
                             const ParameterSet& others, const SimulationGrid& grid,
                             UsageVariant variant, const RunOptions& options) {
  if (spec.driver_values.empty()) fail(ErrorCode::InvalidArgument, "no driver values given");
  if (spec.subsample_count == 0) fail(ErrorCode::InvalidArgument, "subsample_count must be >= 1");
  if (spec.driver == spec.driven) fail(ErrorCode::InvalidArgument, "driver equals driven");
  dataset.validate(grid.t_end());
  require_nonzero(dataset);
  for (double v : spec.driver_values) {
    ParameterSet p = others;
    p.set(spec.driver, v);
    if (const auto verdict = check_cfl(p, grid); !verdict) {
      fail(ErrorCode::CflViolation, verdict.describe());
    }
  }

  const std::size_t n = dataset.size();
  const std::size_t k = resolve_subsample(spec.subsample_size, n);
  const std::string stream =
      "relation:" + std::string(to_string(spec.driver)) + "->" + std::string(to_string(spec.driven));

  std::vector<std::vector<std::size_t>> subsamples;
  std::vector<Dataset> subsets;
  for (std::size_t s = 0; s < spec.subsample_count; ++s) {
    Rng rng(derive_seed(spec.seed, stream, s));
    subsamples.push_back(k == n ? all_indices(n) : rng.sample_without_replacement(n, k));
    subsets.push_back(dataset.subset(subsamples.back()));
  }

  struct Job {
    bool ok = false;
    double driven = 0.0;
    double objective = 0.0;
  };
  const std::size_t jobs = spec.driver_values.size() * spec.subsample_count;
  std::vector<Job> results(jobs);
  const SearchSpace space{{spec.driven_lower}, {spec.driven_upper}};

  parallel_for(jobs, options.threads, [&](std::size_t job) {
    const std::size_t d = job / spec.subsample_count;
    const std::size_t s = job % spec.subsample_count;
    FitConfig config;
    config.free = {{spec.driven, spec.driven_lower, spec.driven_upper}};
    config.fixed = others;
    config.fixed.set(spec.driver, spec.driver_values[d]);
    config.objective = ObjectiveKind::FullCurve;
    config.variant = variant;
    auto objective = [&](std::span<const double> x) {
      return objective_full_curve(x, subsets[s], config, grid);
    };
    try {
      const auto opt = minimize(objective, space, spec.budget);
      results[job] = {true, opt.best_point.front(), opt.best_value};
    } catch (const Error&) {
      results[job].ok = false;
    }
  });

  std::vector<SupportPoint> pairs;
  std::vector<double> values;
  std::size_t failures = 0;
  for (std::size_t job = 0; job < jobs; ++job) {
    if (!results[job].ok) {
      ++failures;
      continue;
    }
    pairs.push_back({spec.driver_values[job / spec.subsample_count], results[job].driven});
    values.push_back(results[job].objective);
  }
  if (pairs.empty()) fail(ErrorCode::OptimizationFailure, "every relation refit failed");

  std::set<double> distinct;
  for (const auto& p : pairs) distinct.insert(p.x);
  std::optional<double> bandwidth = spec.bandwidth;
  if (!bandwidth && distinct.size() < 2) {
    // A single driver value yields a constant relation whatever the width.
    bandwidth = std::max(1.0, std::abs(pairs.front().x));
  }
  RelationModel model = fit_nw(pairs, bandwidth);
  return RelationBuild{std::move(model), std::move(pairs), std::move(values),
                       std::move(subsamples), failures};
}

std::vector<double> default_driver_values(ParamId driver, std::size_t count) {
  double lo;
  double hi;
  switch (driver) {
    case ParamId::Omega: lo = 5.0; hi = 20.0; break;
    case ParamId::F: lo = 200.0; hi = 1600.0; break;
    default:
      fail(ErrorCode::InvalidArgument, "no default window for driver " +
                                           std::string(to_string(driver)));
  }
  std::vector<double> values;
  if (count == 1) return {0.5 * (lo + hi)};
  for (std::size_t i = 0; i < count; ++i) {
    values.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return values;
}

}  // namespace infoflow
