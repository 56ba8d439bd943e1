#pragma once

#include <optional>
#include <span>
#include <vector>

namespace infoflow {

struct SupportPoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const SupportPoint&) const = default;
};

struct RelationPrediction {
  double value = 0.0;
  /// Query lies outside [min x, max x] of the support.
  bool extrapolated = false;
  /// Total kernel weight underflowed; value is the nearest support point's y.
  bool nearest_fallback = false;
};

/// Gaussian Nadaraya-Watson estimator y(x) = sum K_i y_i / sum K_i.
class RelationModel {
 public:
  RelationModel(std::vector<SupportPoint> points, double bandwidth);

  RelationPrediction predict(double x) const;
  double operator()(double x) const { return predict(x).value; }

  const std::vector<SupportPoint>& points() const noexcept { return points_; }
  double bandwidth() const noexcept { return bandwidth_; }
  double min_x() const noexcept { return min_x_; }
  double max_x() const noexcept { return max_x_; }

  bool operator==(const RelationModel&) const = default;

 private:
  std::vector<SupportPoint> points_;
  double bandwidth_;
  double min_x_;
  double max_x_;
};

/// Mean squared leave-one-out prediction error for bandwidth h.
double leave_one_out_score(std::span<const SupportPoint> points, double bandwidth);

/// Fits a relation. Without a bandwidth, picks the leave-one-out minimizer
/// over 40 log-spaced candidates between a fraction of the smallest x gap
/// and the x range. Throws Error(InvalidArgument) for an empty point set, a
/// non-positive bandwidth, or bandwidth selection on identical x.
RelationModel fit_nw(std::vector<SupportPoint> points, std::optional<double> bandwidth = {});

}  // namespace infoflow
