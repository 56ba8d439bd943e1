#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "infoflow/grid.hpp"
#include "infoflow/parameters.hpp"
#include "infoflow/schedule.hpp"

namespace infoflow {

/// The four spatial densities and the scalar Outcome.
struct StateFields {
  std::vector<double> phi_f;  // forward flow
  std::vector<double> phi_b;  // backward flow
  std::vector<double> psi;    // fixed information
  std::vector<double> xi;     // used information
  double outcome = 0.0;

  static StateFields zeros(std::size_t nx);
  std::size_t size() const noexcept { return phi_f.size(); }
  bool operator==(const StateFields&) const = default;
};

/// Zero flows and fixed information; Xi = initial_output / |Omega| on the
/// action region so the Outcome starts at exactly initial_output.
StateFields initial_state_for_output(const SimulationGrid& grid, double initial_output);

/// Outcome integral of `xi` over the action region (trapezoid rule).
double outcome_of(std::span<const double> xi, const SimulationGrid& grid);

/// Trapezoid integral of phi_f + phi_b + psi + xi over [0,1].
double mass_balance(const StateFields& state, const SimulationGrid& grid);

/// Semi-discrete right-hand side.
///
/// `q_rate` is the schedule's total injection rate at the evaluation time;
/// it is spread over space with `source.spatial()`. Convection is upwind per
/// flow direction; diffusion is the conservative centered difference of the
/// chi-weighted flux. The two boundary nodes carry the coupled value
/// phi_f = phi_b and are updated as half-cells, which makes the scheme exactly
/// conservative under the trapezoid weights.
StateFields rhs(const StateFields& state, double q_rate, const ParameterSet& params,
                const SimulationGrid& grid, const SourceTerm& source, UsageVariant variant);

struct SimulationResult {
  std::vector<double> sample_times;
  std::vector<double> outcome;  // O at each sample time
  StateFields final_state;
  double final_time = 0.0;
  std::size_t steps = 0;
  /// RK4 substeps taken within each step.
  std::size_t substeps = 1;
};

/// Called after every accepted step with the step end time.
using StepObserver = std::function<void(double t, const StateFields& state)>;

struct SimulationOptions {
  /// Run past the last sample time up to this horizon if larger.
  double horizon = 0.0;
  StepObserver observer;
};

/// Number of equal RK4 substeps per dt that keeps the stiffest transport,
/// transfer and fixation mode inside the RK4 stability region. The CFL bounds
/// alone do not guarantee this for large f, r or c.
std::size_t rk4_substeps(const ParameterSet& params, const SimulationGrid& grid);

/// Classical RK4 with step dt, split into rk4_substeps() equal substeps when
/// the rates require it. Within a substep the source is held at its exact
/// mean, so injected volume is integrated without quadrature error.
/// Sample times off the step lattice are linearly interpolated.
///
/// Throws Error(CflViolation) before stepping and SimulationError when the
/// state becomes non-finite.
SimulationResult simulate(const ParameterSet& params, const InputSchedule& schedule,
                          const StateFields& initial, const SimulationGrid& grid,
                          UsageVariant variant, std::span<const double> sample_times,
                          const SimulationOptions& options = {});

}  // namespace infoflow
