#pragma once

#include <span>
#include <vector>

#include "infoflow/dataset.hpp"

namespace infoflow {

using Curve = std::vector<double>;

/// Sum over curves and points of ((obs - pred) / obs)^2.
/// Throws Error(DataError) on shape mismatch or a zero observation.
double rrss(const std::vector<Curve>& observed, const std::vector<Curve>& predicted);

/// 1 - SS_res / SS_tot. Throws for fewer than two points or a constant
/// observed curve.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

/// Average relative error at instant t: mean of |obs - pred| / obs, where
/// predictions[i] is the prediction for individual i at t.
double are(const Dataset& dataset, std::span<const double> predictions, double t);

/// 1 - are(...).
double ara(const Dataset& dataset, std::span<const double> predictions, double t);

struct IndividualScore {
  std::string id;
  /// NaN when the curve has a zero observation.
  double rrss = 0.0;
  /// NaN when the curve is too short or constant.
  double r_squared = 0.0;
};

struct InstantScore {
  double t = 0.0;
  double are = 0.0;
  double ara = 0.0;
};

struct EvaluationReport {
  std::vector<IndividualScore> per_individual;
  double total_rrss = 0.0;
  /// Unweighted mean over the individuals with a defined R^2.
  double mean_r_squared = 0.0;
  std::vector<InstantScore> instants;
};

/// Scores predicted curves (aligned with each individual's observations).
EvaluationReport evaluate(const Dataset& dataset, const std::vector<Curve>& predicted,
                          std::span<const double> instants);

}  // namespace infoflow
