#include "infoflow/kernel_smoother.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

constexpr double kVanishingWeight = 1e-300;

double gaussian(double z) { return std::exp(-0.5 * z * z); }

// NW estimate at x, optionally skipping one index. Falls back to the nearest
// remaining point when all weights underflow.
RelationPrediction estimate(std::span<const SupportPoint> points, double h, double x,
                            std::size_t skip) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == skip) continue;
    const double w = gaussian((x - points[i].x) / h);
    num += w * points[i].y;
    den += w;
  }
  RelationPrediction out;
  if (den > kVanishingWeight) {
    out.value = num / den;
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == skip) continue;
    const double d = std::abs(x - points[i].x);
    if (d < best) {
      best = d;
      out.value = points[i].y;
    }
  }
  out.nearest_fallback = true;
  return out;
}

}  // namespace

RelationModel::RelationModel(std::vector<SupportPoint> points, double bandwidth)
    : points_(std::move(points)), bandwidth_(bandwidth) {
  if (points_.empty()) fail(ErrorCode::InvalidArgument, "relation needs at least one point");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    fail(ErrorCode::InvalidArgument, "bandwidth must be finite and > 0");
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorCode::InvalidArgument, "relation support points must be finite");
    }
  }
  const auto [lo, hi] = std::minmax_element(
      points_.begin(), points_.end(),
      [](const SupportPoint& a, const SupportPoint& b) { return a.x < b.x; });
  min_x_ = lo->x;
  max_x_ = hi->x;
}

RelationPrediction RelationModel::predict(double x) const {
  auto out = estimate(points_, bandwidth_, x, points_.size());
  out.extrapolated = x < min_x_ || x > max_x_;
  return out;
}

double leave_one_out_score(std::span<const SupportPoint> points, double bandwidth) {
  if (points.size() < 2) return 0.0;
  double sse = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double e = estimate(points, bandwidth, points[i].x, i).value - points[i].y;
    sse += e * e;
  }
  return sse / static_cast<double>(points.size());
}

RelationModel fit_nw(std::vector<SupportPoint> points, std::optional<double> bandwidth) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "relation needs at least one point");
  if (bandwidth) return RelationModel(std::move(points), *bandwidth);

  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 2) {
    fail(ErrorCode::InvalidArgument, "bandwidth selection needs at least two distinct x values");
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < xs.size(); ++i) min_gap = std::min(min_gap, xs[i] - xs[i - 1]);
  const double range = xs.back() - xs.front();

  constexpr int kCandidates = 40;
  const double h_lo = std::max(0.25 * min_gap, 1e-3 * range);
  const double h_hi = range;
  double best_h = h_hi;
  double best_score = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kCandidates; ++k) {
    const double h = h_lo * std::pow(h_hi / h_lo, static_cast<double>(k) / (kCandidates - 1));
    const double score = leave_one_out_score(points, h);
    if (score < best_score) {
      best_score = score;
      best_h = h;
    }
  }
  return RelationModel(std::move(points), best_h);
}

}  // namespace infoflow
