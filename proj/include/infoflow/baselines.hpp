#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "infoflow/dataset.hpp"
#include "infoflow/direct.hpp"

namespace infoflow {

enum class BaselineKind { Gompertz, Verhulst };

std::string_view to_string(BaselineKind kind) noexcept;

struct BaselineModel {
  BaselineKind kind = BaselineKind::Verhulst;
  double a = 1.0;   // growth rate
  double K = 1.0;   // ceiling
  double y0 = 1.0;  // initial value

  void validate() const;
};

/// Closed-form solutions.
///   Verhulst: y(t) = K / (1 + ((K - y0) / y0) e^{-a t})
///   Gompertz: y(t) = K exp(ln(y0 / K) e^{-a t})
std::vector<double> simulate_baseline(const BaselineModel& model, std::span<const double> times);

/// dy/dt of the model's ODE at value y.
double baseline_rate(const BaselineModel& model, double y) noexcept;

/// Value at which the closed-form curve inflects (K/2 or K/e).
double inflection_value(BaselineKind kind, double K) noexcept;

struct BaselineFit {
  BaselineKind kind = BaselineKind::Verhulst;
  double a = 0.0;
  double K = 0.0;
  /// ARA at the anchor time on the fitted data.
  double ara_anchor = 0.0;
  /// Every individual is flat (observation at the anchor equals y0).
  bool degenerate = false;
  OptimizationResult optimization;

  /// Model for one individual with its own initial value.
  BaselineModel model_for(double y0) const { return {kind, a, K, y0}; }
};

/// Fits a shared (a, K) by minimizing ARE at `anchor_time`, each individual
/// starting from its observation at t=0. `space` is [a bounds, K bounds].
/// Throws Error(DataError) when an individual lacks either anchor.
BaselineFit fit_baseline(const Dataset& dataset, BaselineKind kind, const SearchSpace& space,
                         const OptimizerBudget& budget, double anchor_time = 1.0);

/// Predictions of a fitted baseline for every individual at time t.
std::vector<double> predict_baseline(const BaselineFit& fit, const Dataset& dataset, double t);

}  // namespace infoflow
