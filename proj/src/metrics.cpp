#include "infoflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "infoflow/error.hpp"

namespace infoflow {

double rrss(const std::vector<Curve>& observed, const std::vector<Curve>& predicted) {
  if (observed.size() != predicted.size()) {
    fail(ErrorCode::DataError, "rrss: curve counts differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (observed[i].size() != predicted[i].size()) {
      fail(ErrorCode::DataError, "rrss: curve lengths differ");
    }
    for (std::size_t j = 0; j < observed[i].size(); ++j) {
      const double obs = observed[i][j];
      if (obs == 0.0) fail(ErrorCode::DataError, "rrss: zero observation");
      const double rel = (obs - predicted[i][j]) / obs;
      total += rel * rel;
    }
  }
  return total;
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size()) {
    fail(ErrorCode::DataError, "r_squared: lengths differ");
  }
  if (observed.size() < 2) fail(ErrorCode::DataError, "r_squared needs at least two points");
  const double mean =
      std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    ss_res += (observed[j] - predicted[j]) * (observed[j] - predicted[j]);
    ss_tot += (observed[j] - mean) * (observed[j] - mean);
  }
  if (ss_tot == 0.0) fail(ErrorCode::DataError, "r_squared: observed curve is constant");
  return 1.0 - ss_res / ss_tot;
}

double are(const Dataset& dataset, std::span<const double> predictions, double t) {
  if (dataset.empty()) fail(ErrorCode::DataError, "are: empty dataset");
  if (predictions.size() != dataset.size()) {
    fail(ErrorCode::DataError, "are: one prediction per individual required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto obs = dataset.individuals[i].observed_at(t);
    if (!obs) {
      fail(ErrorCode::DataError,
           "are: individual " + dataset.individuals[i].id + " has no observation at t");
    }
    if (*obs == 0.0) fail(ErrorCode::DataError, "are: zero observation");
    total += std::abs(*obs - predictions[i]) / std::abs(*obs);
  }
  return total / static_cast<double>(dataset.size());
}

double ara(const Dataset& dataset, std::span<const double> predictions, double t) {
  return 1.0 - are(dataset, predictions, t);
}

EvaluationReport evaluate(const Dataset& dataset, const std::vector<Curve>& predicted,
                          std::span<const double> instants) {
  if (predicted.size() != dataset.size()) {
    fail(ErrorCode::DataError, "evaluate: one predicted curve per individual required");
  }
  EvaluationReport report;
  double r2_sum = 0.0;
  std::size_t r2_count = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& ind = dataset.individuals[i];
    const auto observed = ind.observed_values();
    IndividualScore score;
    score.id = ind.id;
    const bool has_zero = std::find(observed.begin(), observed.end(), 0.0) != observed.end();
    score.rrss = has_zero ? std::numeric_limits<double>::quiet_NaN()
                          : rrss({observed}, {predicted[i]});
    score.r_squared = std::numeric_limits<double>::quiet_NaN();
    if (observed.size() >= 2) {
      try {
        score.r_squared = r_squared(observed, predicted[i]);
        r2_sum += score.r_squared;
        ++r2_count;
      } catch (const Error&) {
      }
    }
    report.total_rrss += score.rrss;
    report.per_individual.push_back(std::move(score));
  }
  report.mean_r_squared = r2_count > 0 ? r2_sum / static_cast<double>(r2_count)
                                       : std::numeric_limits<double>::quiet_NaN();

  for (double t : instants) {
    std::vector<double> at_t;
    at_t.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& obs = dataset.individuals[i].observations;
      double value = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t j = 0; j < obs.size(); ++j) {
        if (std::abs(obs[j].time - t) <= 1e-9) value = predicted[i][j];
      }
      at_t.push_back(value);
    }
    const double e = are(dataset, at_t, t);
    report.instants.push_back({t, e, 1.0 - e});
  }
  return report;
}

}  // namespace infoflow
