#include "infoflow/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rect {
  std::vector<double> center;  // normalized coordinates
  std::vector<int> level;      // side along dim i is 3^-level[i]
  double value = kInf;
  std::size_t id = 0;
  double size = 0.0;
};

double rect_size(const std::vector<int>& level) {
  std::vector<int> sorted = level;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (int k : sorted) sum += std::pow(9.0, -k);
  return 0.5 * std::sqrt(sum);
}

class Direct {
 public:
  Direct(const Objective& objective, const SearchSpace& space, const OptimizerBudget& budget,
         const DirectOptions& options, const EvaluationSink& sink)
      : objective_(objective), space_(space), budget_(budget), options_(options), sink_(sink),
        dim_(space.dimension()), point_(dim_) {}

  OptimizationResult run() {
    Rect root;
    root.center.assign(dim_, 0.5);
    root.level.assign(dim_, 0);
    root.value = evaluate(root.center);
    if (!std::isfinite(root.value)) {
      fail(ErrorCode::OptimizationFailure, "objective is not finite at the search-box center");
    }
    add(std::move(root));
    result_.trace.push_back(result_.best_value);

    for (;;) {
      if (budget_.max_iterations != 0 && result_.iterations >= budget_.max_iterations) {
        result_.stop_reason = StopReason::IterationBudget;
        break;
      }
      const auto selected = potentially_optimal();
      bool exhausted = false;
      for (std::size_t index : selected) {
        if (!divide(index)) {
          exhausted = true;
          break;
        }
      }
      if (exhausted) {
        result_.stop_reason = StopReason::EvaluationBudget;
        result_.budget_exhausted = true;
        if (result_.trace.back() != result_.best_value) {
          ++result_.iterations;
          result_.trace.push_back(result_.best_value);
        }
        break;
      }
      ++result_.iterations;
      result_.trace.push_back(result_.best_value);

      if (budget_.target_tolerance) {
        const std::size_t window = std::max<std::size_t>(1, budget_.stall_iterations);
        if (result_.trace.size() > window) {
          const double before = result_.trace[result_.trace.size() - 1 - window];
          if (before - result_.best_value < *budget_.target_tolerance) {
            result_.stop_reason = StopReason::Stalled;
            break;
          }
        }
      }
    }
    result_.min_rectangle_size = min_size_;
    return result_;
  }

 private:
  double evaluate(const std::vector<double>& unit) {
    for (std::size_t i = 0; i < dim_; ++i) {
      point_[i] = space_.lower[i] + unit[i] * (space_.upper[i] - space_.lower[i]);
      point_[i] = std::clamp(point_[i], space_.lower[i], space_.upper[i]);
    }
    double value = objective_(point_);
    if (!std::isfinite(value)) value = kInf;
    const std::size_t index = result_.evaluations_used++;
    if (sink_) sink_(index, point_, value);
    if (index == 0 || value < result_.best_value) {
      result_.best_value = value;
      result_.best_point = point_;
    }
    return value;
  }

  void add(Rect rect) {
    rect.id = next_id_++;
    rect.size = rect_size(rect.level);
    min_size_ = rects_.empty() ? rect.size : std::min(min_size_, rect.size);
    rects_.push_back(std::move(rect));
  }

  std::vector<std::size_t> potentially_optimal() const {
    // Best finite rectangle of each size.
    std::map<double, std::size_t> groups;
    for (std::size_t i = 0; i < rects_.size(); ++i) {
      const Rect& r = rects_[i];
      if (!std::isfinite(r.value)) continue;
      auto [it, inserted] = groups.try_emplace(r.size, i);
      if (!inserted) {
        const Rect& cur = rects_[it->second];
        if (r.value < cur.value || (r.value == cur.value && r.id < cur.id)) it->second = i;
      }
    }
    std::vector<std::size_t> pts;
    pts.reserve(groups.size());
    for (const auto& [size, index] : groups) pts.push_back(index);

    const double fmin = result_.best_value;
    std::size_t start = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (rects_[pts[k]].value <= fmin) start = k;
    }
    // Lower convex hull from the incumbent's group towards larger sizes,
    // keeping collinear points.
    std::vector<std::size_t> hull{start};
    std::size_t current = start;
    while (current + 1 < pts.size()) {
      const Rect& a = rects_[pts[current]];
      double best_slope = kInf;
      std::size_t next = current + 1;
      for (std::size_t k = current + 1; k < pts.size(); ++k) {
        const Rect& b = rects_[pts[k]];
        const double slope = (b.value - a.value) / (b.size - a.size);
        if (slope < best_slope) {
          best_slope = slope;
          next = k;
        }
      }
      hull.push_back(next);
      current = next;
    }

    std::vector<std::size_t> selected;
    const double threshold = fmin - options_.epsilon * std::abs(fmin);
    for (std::size_t h = 0; h < hull.size(); ++h) {
      const Rect& a = rects_[pts[hull[h]]];
      if (h + 1 == hull.size()) {
        selected.push_back(pts[hull[h]]);
        break;
      }
      const Rect& b = rects_[pts[hull[h + 1]]];
      const double slope = (b.value - a.value) / (b.size - a.size);
      if (a.value - slope * a.size <= threshold) selected.push_back(pts[hull[h]]);
    }
    // Largest rectangles first.
    std::reverse(selected.begin(), selected.end());
    return selected;
  }

  bool divide(std::size_t index) {
    const int k = *std::min_element(rects_[index].level.begin(), rects_[index].level.end());
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (rects_[index].level[i] == k) dims.push_back(i);
    }
    if (result_.evaluations_used + 2 * dims.size() > budget_.max_evaluations) return false;

    const double delta = std::pow(3.0, -(k + 1));
    struct Probe {
      std::size_t dim;
      std::vector<double> lo_center, hi_center;
      double lo_value, hi_value;
      double best() const { return std::min(lo_value, hi_value); }
    };
    std::vector<Probe> probes;
    probes.reserve(dims.size());
    for (std::size_t d : dims) {
      Probe p{d, rects_[index].center, rects_[index].center, kInf, kInf};
      p.lo_center[d] -= delta;
      p.hi_center[d] += delta;
      p.lo_value = evaluate(p.lo_center);
      p.hi_value = evaluate(p.hi_center);
      probes.push_back(std::move(p));
    }
    std::stable_sort(probes.begin(), probes.end(),
                     [](const Probe& a, const Probe& b) { return a.best() < b.best(); });

    std::vector<int> level = rects_[index].level;
    for (auto& p : probes) {
      level[p.dim] = k + 1;
      Rect lo{std::move(p.lo_center), level, p.lo_value, 0, 0.0};
      Rect hi{std::move(p.hi_center), level, p.hi_value, 0, 0.0};
      add(std::move(lo));
      add(std::move(hi));
    }
    rects_[index].level = level;
    rects_[index].size = rect_size(level);
    min_size_ = std::min(min_size_, rects_[index].size);
    return true;
  }

  const Objective& objective_;
  const SearchSpace& space_;
  const OptimizerBudget& budget_;
  const DirectOptions& options_;
  const EvaluationSink& sink_;
  std::size_t dim_;
  std::vector<double> point_;
  std::vector<Rect> rects_;
  std::size_t next_id_ = 0;
  double min_size_ = 0.0;
  OptimizationResult result_;
};

}  // namespace

void SearchSpace::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    fail(ErrorCode::InvalidArgument, "search space needs matching non-empty bounds");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
      fail(ErrorCode::InvalidArgument, "search space requires lower[i] < upper[i]");
    }
  }
}

void OptimizerBudget::validate() const {
  if (max_evaluations == 0) {
    fail(ErrorCode::InvalidArgument, "max_evaluations must be >= 1");
  }
}

OptimizationResult minimize(const Objective& objective, const SearchSpace& space,
                            const OptimizerBudget& budget, const DirectOptions& options,
                            const EvaluationSink& sink) {
  space.validate();
  budget.validate();
  if (!(options.epsilon >= 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  return Direct(objective, space, budget, options, sink).run();
}

}  // namespace infoflow
