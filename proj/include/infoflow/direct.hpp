#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace infoflow {

/// Axis-aligned box; lower[i] < upper[i].
struct SearchSpace {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const noexcept { return lower.size(); }
  void validate() const;
};

struct OptimizerBudget {
  std::size_t max_evaluations = 2000;
  /// 0 means no iteration limit.
  std::size_t max_iterations = 0;
  /// Stop once the incumbent improved by less than this over the last
  /// `stall_iterations` iterations.
  std::optional<double> target_tolerance;
  std::size_t stall_iterations = 20;

  void validate() const;
};

inline OptimizerBudget make_budget(std::size_t max_evaluations) {
  OptimizerBudget b;
  b.max_evaluations = max_evaluations;
  return b;
}

struct DirectOptions {
  /// Balance parameter of the potentially-optimal test.
  double epsilon = 1e-4;
};

enum class StopReason { EvaluationBudget, IterationBudget, Stalled };

struct OptimizationResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  std::size_t evaluations_used = 0;
  std::size_t iterations = 0;
  /// Incumbent after the initial sample and after each iteration.
  std::vector<double> trace;
  StopReason stop_reason = StopReason::EvaluationBudget;
  bool budget_exhausted = false;
  /// Smallest rectangle center-to-vertex distance in normalized coordinates.
  double min_rectangle_size = 0.0;
};

using Objective = std::function<double(std::span<const double>)>;
/// Receives (evaluation index, point, value) for every evaluation.
using EvaluationSink = std::function<void(std::size_t, std::span<const double>, double)>;

/// DIRECT (DIviding RECTangles) global minimization over a box.
///
/// The box is mapped to the unit hypercube. Each iteration selects the
/// potentially-optimal rectangles from the lower convex hull of
/// (size, center value), keeping one rectangle per size (lowest value, then
/// oldest), and trisects each along all of its longest sides, ordering the
/// splits by the best value sampled along each side. Non-finite objective
/// values are treated as +inf and never selected.
///
/// Throws Error(OptimizationFailure) if the objective is not finite at the
/// box center.
OptimizationResult minimize(const Objective& objective, const SearchSpace& space,
                            const OptimizerBudget& budget, const DirectOptions& options = {},
                            const EvaluationSink& sink = {});

}  // namespace infoflow
