#include "infoflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

constexpr double kNodeTol = 1e-9;

bool inside_unit(const Interval& region) {
  return region.lo >= -kNodeTol && region.hi <= 1.0 + kNodeTol && region.lo <= region.hi;
}

}  // namespace

SimulationGrid::SimulationGrid(const GridSpec& spec) : spec_(spec) {
  if (!(spec.dx > 0.0) || !(spec.dt > 0.0) || !(spec.t_end > 0.0)) {
    fail(ErrorCode::InvalidArgument, "grid requires dx, dt, t_end > 0");
  }
  const double cells = 1.0 / spec.dx;
  const double rounded = std::round(cells);
  if (rounded < 2.0 || std::abs(cells - rounded) > 1e-9 * rounded) {
    fail(ErrorCode::InvalidArgument, "1/dx must be an integer >= 2");
  }
  nx_ = static_cast<std::size_t>(rounded) + 1;

  if (!(spec.ramp_width > 0.0) || spec.ramp_width > 0.5) {
    fail(ErrorCode::InvalidArgument, "ramp_width must lie in (0, 0.5]");
  }
  if (!inside_unit(spec.fixation_region) || !inside_unit(spec.action_region)) {
    fail(ErrorCode::InvalidArgument, "regions must be sub-intervals of [0,1]");
  }

  chi_.resize(nx_);
  for (std::size_t i = 0; i < nx_; ++i) {
    const double edge = static_cast<double>(std::min(i, nx_ - 1 - i)) * spec.dx;
    chi_[i] = std::clamp(edge / spec.ramp_width, 0.0, 1.0);
  }
  chi_.front() = 0.0;
  chi_.back() = 0.0;
  chi_faces_.resize(nx_ - 1);
  for (std::size_t i = 0; i + 1 < nx_; ++i) chi_faces_[i] = 0.5 * (chi_[i] + chi_[i + 1]);

  fixation_.assign(nx_, 0.0);
  const auto fixed_nodes = nodes_in(spec.fixation_region);
  if (fixed_nodes.empty() || !(spec.fixation_region.hi > spec.fixation_region.lo)) {
    fail(ErrorCode::InvalidArgument, "fixation region contains no grid node");
  }
  for (std::size_t i : fixed_nodes) fixation_[i] = 1.0;

  domain_weights_.assign(nx_, spec.dx);
  domain_weights_.front() = 0.5 * spec.dx;
  domain_weights_.back() = 0.5 * spec.dx;

  const auto action_nodes = nodes_in(spec.action_region);
  if (action_nodes.size() < 2) {
    fail(ErrorCode::InvalidArgument, "action region must contain at least two grid nodes");
  }
  action_weights_.assign(nx_, 0.0);
  action_mask_.assign(nx_, 0);
  for (std::size_t i : action_nodes) {
    action_weights_[i] = spec.dx;
    action_mask_[i] = 1;
  }
  action_weights_[action_nodes.front()] = 0.5 * spec.dx;
  action_weights_[action_nodes.back()] = 0.5 * spec.dx;
  action_measure_ = static_cast<double>(action_nodes.size() - 1) * spec.dx;
}

std::vector<std::size_t> SimulationGrid::nodes_in(const Interval& region) const {
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < nx_; ++i) {
    if (x(i) >= region.lo - kNodeTol && x(i) <= region.hi + kNodeTol) nodes.push_back(i);
  }
  return nodes;
}

SimulationGrid build_grid(const GridSpec& spec) { return SimulationGrid(spec); }

std::string CflVerdict::describe() const {
  if (accepted) return "CFL satisfied";
  std::ostringstream out;
  out << "CFL violated:";
  for (const auto& v : violations) {
    out << ' ' << v.parameter << '=' << v.value << " exceeds " << v.bound << ';';
  }
  return out.str();
}

CflVerdict check_cfl(const ParameterSet& params, const SimulationGrid& grid) {
  CflVerdict verdict;
  const double omega_bound = grid.dx() / grid.dt();
  const double c_bound = grid.dx() * grid.dx() / grid.dt();
  if (!(params.omega <= omega_bound)) {
    verdict.violations.push_back({"omega", params.omega, omega_bound});
  }
  if (!(params.c <= c_bound)) {
    verdict.violations.push_back({"c", params.c, c_bound});
  }
  verdict.accepted = verdict.violations.empty();
  return verdict;
}

}  // namespace infoflow
