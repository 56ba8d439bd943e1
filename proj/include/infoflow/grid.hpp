#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "infoflow/parameters.hpp"

namespace infoflow {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

struct GridSpec {
  double dx = 0.025;
  double dt = 0.001;
  double t_end = 1.0;
  Interval fixation_region{0.4, 0.6};
  Interval action_region{0.0, 1.0};
  /// Width of each linear ramp of the diffusion cutoff chi.
  double ramp_width = 0.05;

  bool operator==(const GridSpec&) const = default;
};

/// Space/time discretization of [0,1] plus the static spatial profiles.
/// Immutable after construction.
class SimulationGrid {
 public:
  explicit SimulationGrid(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  double dx() const noexcept { return spec_.dx; }
  double dt() const noexcept { return spec_.dt; }
  double t_end() const noexcept { return spec_.t_end; }
  std::size_t nx() const noexcept { return nx_; }

  double x(std::size_t i) const noexcept { return static_cast<double>(i) * spec_.dx; }

  std::span<const double> chi() const noexcept { return chi_; }
  /// chi averaged onto the nx-1 cell faces.
  std::span<const double> chi_faces() const noexcept { return chi_faces_; }
  std::span<const double> fixation() const noexcept { return fixation_; }

  /// Trapezoid weights (dx included) over [0,1].
  std::span<const double> domain_weights() const noexcept { return domain_weights_; }
  /// Trapezoid weights (dx included) restricted to the action region; zero outside.
  std::span<const double> action_weights() const noexcept { return action_weights_; }
  /// Discrete measure of the action region (sum of action weights).
  double action_measure() const noexcept { return action_measure_; }
  bool in_action_region(std::size_t i) const noexcept { return action_mask_[i] != 0; }

  /// Indices of nodes lying inside [region.lo, region.hi].
  std::vector<std::size_t> nodes_in(const Interval& region) const;

 private:
  GridSpec spec_;
  std::size_t nx_ = 0;
  std::vector<double> chi_;
  std::vector<double> chi_faces_;
  std::vector<double> fixation_;
  std::vector<double> domain_weights_;
  std::vector<double> action_weights_;
  std::vector<unsigned char> action_mask_;
  double action_measure_ = 0.0;
};

/// Validates and builds a grid. Throws Error(InvalidArgument).
SimulationGrid build_grid(const GridSpec& spec);

struct CflViolation {
  std::string parameter;
  double value = 0.0;
  double bound = 0.0;
};

struct CflVerdict {
  bool accepted = true;
  std::vector<CflViolation> violations;

  explicit operator bool() const noexcept { return accepted; }
  std::string describe() const;
};

/// omega <= dx/dt and c <= dx^2/dt.
CflVerdict check_cfl(const ParameterSet& params, const SimulationGrid& grid);

}  // namespace infoflow
