#include "infoflow/baselines.hpp"

#include <cmath>
#include <limits>

#include "infoflow/error.hpp"
#include "infoflow/metrics.hpp"

namespace infoflow {
namespace {

double initial_of(const Individual& ind) {
  const auto y0 = ind.observed_at(0.0);
  if (!y0) fail(ErrorCode::DataError, "baseline: individual " + ind.id + " lacks a t=0 value");
  if (!(*y0 > 0.0)) fail(ErrorCode::DataError, "baseline: initial value must be > 0");
  return *y0;
}

double closed_form(const BaselineModel& m, double t) {
  const double decay = std::exp(-m.a * t);
  if (m.kind == BaselineKind::Verhulst) {
    return m.K / (1.0 + ((m.K - m.y0) / m.y0) * decay);
  }
  return m.K * std::exp(std::log(m.y0 / m.K) * decay);
}

}  // namespace

std::string_view to_string(BaselineKind kind) noexcept {
  return kind == BaselineKind::Gompertz ? "gompertz" : "verhulst";
}

void BaselineModel::validate() const {
  if (!(y0 > 0.0)) fail(ErrorCode::InvalidArgument, "baseline requires y0 > 0");
  if (!(a > 0.0) || !(K > 0.0)) fail(ErrorCode::InvalidArgument, "baseline requires a, K > 0");
}

std::vector<double> simulate_baseline(const BaselineModel& model, std::span<const double> times) {
  model.validate();
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(closed_form(model, t));
  return out;
}

double baseline_rate(const BaselineModel& model, double y) noexcept {
  if (model.kind == BaselineKind::Verhulst) return model.a * y * (1.0 - y / model.K);
  return model.a * y * std::log(model.K / y);
}

double inflection_value(BaselineKind kind, double K) noexcept {
  return kind == BaselineKind::Verhulst ? 0.5 * K : K / std::exp(1.0);
}

BaselineFit fit_baseline(const Dataset& dataset, BaselineKind kind, const SearchSpace& space,
                         const OptimizerBudget& budget, double anchor_time) {
  if (dataset.empty()) fail(ErrorCode::DataError, "baseline: empty dataset");
  if (space.dimension() != 2) fail(ErrorCode::InvalidArgument, "baseline space must be (a, K)");
  std::vector<double> y0s;
  std::vector<double> anchors;
  for (const auto& ind : dataset.individuals) {
    y0s.push_back(initial_of(ind));
    const auto y1 = ind.observed_at(anchor_time);
    if (!y1) {
      fail(ErrorCode::DataError, "baseline: individual " + ind.id + " lacks the anchor value");
    }
    anchors.push_back(*y1);
  }

  BaselineFit fit;
  fit.kind = kind;
  fit.degenerate = true;
  for (std::size_t i = 0; i < y0s.size(); ++i) {
    if (std::abs(anchors[i] - y0s[i]) > 1e-12 * std::abs(y0s[i])) fit.degenerate = false;
  }

  auto objective = [&](std::span<const double> x) {
    const double a = x[0];
    const double K = x[1];
    std::vector<double> predictions;
    predictions.reserve(y0s.size());
    for (double y0 : y0s) predictions.push_back(closed_form({kind, a, K, y0}, anchor_time));
    const double e = are(dataset, predictions, anchor_time);
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
  };

  fit.optimization = minimize(objective, space, budget);
  fit.a = fit.optimization.best_point[0];
  fit.K = fit.optimization.best_point[1];

  // Flat curves sitting at a common level are fitted exactly by K = y0.
  if (fit.degenerate) {
    bool common = true;
    for (double y0 : y0s) common = common && y0 == y0s.front();
    if (common && y0s.front() >= space.lower[1] && y0s.front() <= space.upper[1]) {
      fit.K = y0s.front();
    }
  }
  std::vector<double> predictions;
  for (double y0 : y0s) predictions.push_back(closed_form(fit.model_for(y0), anchor_time));
  fit.ara_anchor = ara(dataset, predictions, anchor_time);
  return fit;
}

std::vector<double> predict_baseline(const BaselineFit& fit, const Dataset& dataset, double t) {
  std::vector<double> out;
  out.reserve(dataset.size());
  for (const auto& ind : dataset.individuals) {
    out.push_back(closed_form(fit.model_for(initial_of(ind)), t));
  }
  return out;
}

}  // namespace infoflow
