#include "infoflow/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "infoflow/error.hpp"

namespace infoflow {

double InputSchedule::total_volume() const noexcept {
  double total = 0.0;
  for (const auto& e : entries) total += e.volume;
  return total;
}

SourceTerm::SourceTerm(const InputSchedule& schedule, const SimulationGrid& grid)
    : entries_(schedule.entries), duration_(schedule.profile.duration) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.time < b.time; });

  spatial_.assign(grid.nx(), 0.0);
  const auto nodes = grid.nodes_in(schedule.profile.site);
  if (nodes.empty()) {
    fail(ErrorCode::InvalidArgument, "injection site contains no grid node");
  }
  const auto weights = grid.domain_weights();
  double mass = 0.0;
  for (std::size_t i : nodes) mass += weights[i];
  for (std::size_t i : nodes) spatial_[i] = 1.0 / mass;
}

double SourceTerm::rate(double t) const noexcept {
  double total = 0.0;
  for (const auto& e : entries_) {
    if (e.time > t) break;
    if (t < e.time + duration_) total += e.volume / duration_;
  }
  return total;
}

double SourceTerm::injected(double t0, double t1) const noexcept {
  double total = 0.0;
  for (const auto& e : entries_) {
    if (e.time >= t1) break;
    const double overlap = std::min(t1, e.time + duration_) - std::max(t0, e.time);
    if (overlap > 0.0) total += e.volume * (overlap / duration_);
  }
  return total;
}

double SourceTerm::mean_rate(double t0, double t1) const noexcept {
  if (!(t1 > t0)) return rate(t0);
  return injected(t0, t1) / (t1 - t0);
}

SourceTerm render_entries(const InputSchedule& schedule, const SimulationGrid& grid) {
  if (!(schedule.profile.duration > 0.0)) {
    fail(ErrorCode::InvalidArgument, "injection duration must be > 0");
  }
  for (const auto& e : schedule.entries) {
    if (!std::isfinite(e.time) || e.time < 0.0 || e.time > grid.t_end() * (1.0 + 1e-12)) {
      fail(ErrorCode::InvalidArgument, "entry time outside [0, t_end]");
    }
    if (!std::isfinite(e.volume) || e.volume < 0.0) {
      fail(ErrorCode::InvalidArgument, "entry volume must be >= 0");
    }
  }
  return SourceTerm(schedule, grid);
}

}  // namespace infoflow
