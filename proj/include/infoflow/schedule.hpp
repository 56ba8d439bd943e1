#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "infoflow/grid.hpp"

namespace infoflow {

/// One intake/injection: `volume` delivered starting at `time`.
struct Entry {
  double time = 0.0;
  double volume = 0.0;

  bool operator==(const Entry&) const = default;
};

/// Space-time shape each entry is rendered with: a top-hat of length
/// `duration` in time and a top-hat over the nodes of `site` in space.
struct InjectionProfile {
  double duration = 0.16;
  Interval site{0.025, 0.05};

  bool operator==(const InjectionProfile&) const = default;
};

struct InputSchedule {
  std::vector<Entry> entries;
  InjectionProfile profile;

  double total_volume() const noexcept;
  bool operator==(const InputSchedule&) const = default;
};

/// The rendered source density Q(t, x) on a grid.
///
/// Q(t, x_i) = rate(t) * spatial[i] where the spatial profile integrates to
/// one under the grid's trapezoid weights, so the space-time integral of a
/// single entry is exactly its volume.
class SourceTerm {
 public:
  SourceTerm(const InputSchedule& schedule, const SimulationGrid& grid);

  /// Total injection rate at time t (volume per unit time).
  double rate(double t) const noexcept;
  /// Exact mean of rate() over [t0, t1].
  double mean_rate(double t0, double t1) const noexcept;
  /// Volume injected during [t0, t1].
  double injected(double t0, double t1) const noexcept;

  double value(double t, std::size_t node) const noexcept { return rate(t) * spatial_[node]; }
  std::span<const double> spatial() const noexcept { return spatial_; }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
  double duration_ = 0.0;
  std::vector<double> spatial_;
};

/// Validates the schedule against the grid horizon and renders it.
/// Throws Error(InvalidArgument) for negative volumes or entry times outside [0, t_end].
SourceTerm render_entries(const InputSchedule& schedule, const SimulationGrid& grid);

}  // namespace infoflow
