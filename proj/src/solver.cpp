#include "infoflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

constexpr double kOverflow = 1e100;
// Below the RK4 reach of about 2.785 along the negative real axis.
constexpr double kRk4StableReach = 2.5;

// Flat layout: [phi_f | phi_b | psi | xi], each of length n.
class Kernel {
 public:
  Kernel(const ParameterSet& p, const SimulationGrid& g, const SourceTerm& s, UsageVariant v)
      : params_(p), grid_(g), source_(s), variant_(v), n_(g.nx()), flux_(g.nx() - 1) {}

  std::size_t n() const noexcept { return n_; }

  double outcome(const double* y) const noexcept {
    const auto w = grid_.action_weights();
    const double* xi = y + 3 * n_;
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) total += w[i] * xi[i];
    return total;
  }

  void eval(const double* y, double q_rate, double* dy) {
    const std::size_t n = n_;
    const std::size_t last = n - 1;
    const double* pf = y;
    const double* pb = y + n;
    const double* ps = y + 2 * n;
    const double* xi = y + 3 * n;
    double* dpf = dy;
    double* dpb = dy + n;
    double* dps = dy + 2 * n;
    double* dxi = dy + 3 * n;

    const double inv_h = 1.0 / grid_.dx();
    const double adv = params_.omega * inv_h;
    const double c = params_.c;
    const double f = params_.f;
    const double r = params_.r;
    const double u = params_.u;
    const auto chi_faces = grid_.chi_faces();
    const auto fix = grid_.fixation();
    const auto spatial = source_.spatial();

    for (std::size_t j = 0; j < last; ++j) {
      flux_[j] = c * chi_faces[j] * ((pf[j + 1] + pb[j + 1]) - (pf[j] + pb[j])) * inv_h;
    }

    for (std::size_t i = 1; i < last; ++i) {
      const double diff = (flux_[i] - flux_[i - 1]) * inv_h;
      const double half_q = 0.5 * q_rate * spatial[i];
      const double capture = f * fix[i];
      dpf[i] = -adv * (pf[i] - pf[i - 1]) + diff + half_q - capture * pf[i] - r * pf[i];
      dpb[i] = adv * (pb[i + 1] - pb[i]) + diff + half_q - capture * pb[i] + r * pf[i];
    }
    // Boundary half-cells: the outgoing flow sets the shared value, the
    // transfer term cancels between the two flows.
    {
      const double d = adv * (pb[1] - pb[0]) + 2.0 * flux_[0] * inv_h +
                       0.5 * q_rate * spatial[0] - f * fix[0] * pb[0];
      dpf[0] = d;
      dpb[0] = d;
    }
    {
      const double d = adv * (pf[last - 1] - pf[last]) - 2.0 * flux_[last - 1] * inv_h +
                       0.5 * q_rate * spatial[last] - f * fix[last] * pf[last];
      dpf[last] = d;
      dpb[last] = d;
    }

    for (std::size_t i = 0; i < n; ++i) {
      dps[i] = f * fix[i] * (pf[i] + pb[i]) - u * ps[i];
    }

    switch (variant_) {
      case UsageVariant::Accumulative:
        for (std::size_t i = 0; i < n; ++i) dxi[i] = u * ps[i];
        break;
      case UsageVariant::Logistic: {
        const double L = *params_.L;
        const double brake = (L - outcome(y)) / L;
        for (std::size_t i = 0; i < n; ++i) dxi[i] = u * ps[i] * brake;
        break;
      }
      case UsageVariant::DownwardBounded: {
        const double upp = *params_.upp;
        const double low = *params_.low;
        for (std::size_t i = 0; i < n; ++i) {
          dxi[i] = -(xi[i] - upp) - u * ps[i] * (xi[i] - low);
        }
        break;
      }
      case UsageVariant::UpwardBounded: {
        const double upp = *params_.upp;
        const double low = *params_.low;
        for (std::size_t i = 0; i < n; ++i) {
          dxi[i] = -u * ps[i] * (xi[i] - upp) - (xi[i] - low);
        }
        break;
      }
    }
  }

  void enforce_coupling(double* y) const noexcept {
    const std::size_t last = n_ - 1;
    y[n_] = y[0];               // phi_b(0) = phi_f(0)
    y[last] = y[n_ + last];     // phi_f(1) = phi_b(1)
  }

 private:
  const ParameterSet& params_;
  const SimulationGrid& grid_;
  const SourceTerm& source_;
  UsageVariant variant_;
  std::size_t n_;
  std::vector<double> flux_;
};

std::vector<double> flatten(const StateFields& s) {
  const std::size_t n = s.size();
  std::vector<double> y(4 * n);
  std::copy(s.phi_f.begin(), s.phi_f.end(), y.begin());
  std::copy(s.phi_b.begin(), s.phi_b.end(), y.begin() + n);
  std::copy(s.psi.begin(), s.psi.end(), y.begin() + 2 * n);
  std::copy(s.xi.begin(), s.xi.end(), y.begin() + 3 * n);
  return y;
}

StateFields unflatten(const std::vector<double>& y, std::size_t n, double outcome) {
  StateFields s;
  s.phi_f.assign(y.begin(), y.begin() + n);
  s.phi_b.assign(y.begin() + n, y.begin() + 2 * n);
  s.psi.assign(y.begin() + 2 * n, y.begin() + 3 * n);
  s.xi.assign(y.begin() + 3 * n, y.end());
  s.outcome = outcome;
  return s;
}

void check_shape(const StateFields& s, const SimulationGrid& grid) {
  const std::size_t n = grid.nx();
  if (s.phi_f.size() != n || s.phi_b.size() != n || s.psi.size() != n || s.xi.size() != n) {
    fail(ErrorCode::InvalidArgument, "state fields must have length nx");
  }
}

void require_cfl(const ParameterSet& params, const SimulationGrid& grid) {
  const auto verdict = check_cfl(params, grid);
  if (!verdict) fail(ErrorCode::CflViolation, verdict.describe());
}

}  // namespace

StateFields StateFields::zeros(std::size_t nx) {
  StateFields s;
  s.phi_f.assign(nx, 0.0);
  s.phi_b.assign(nx, 0.0);
  s.psi.assign(nx, 0.0);
  s.xi.assign(nx, 0.0);
  return s;
}

StateFields initial_state_for_output(const SimulationGrid& grid, double initial_output) {
  StateFields s = StateFields::zeros(grid.nx());
  const double density = initial_output / grid.action_measure();
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    if (grid.in_action_region(i)) s.xi[i] = density;
  }
  s.outcome = outcome_of(s.xi, grid);
  return s;
}

double outcome_of(std::span<const double> xi, const SimulationGrid& grid) {
  const auto w = grid.action_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) total += w[i] * xi[i];
  return total;
}

double mass_balance(const StateFields& state, const SimulationGrid& grid) {
  check_shape(state, grid);
  const auto w = grid.domain_weights();
  double total = 0.0;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    total += w[i] * (state.phi_f[i] + state.phi_b[i] + state.psi[i] + state.xi[i]);
  }
  return total;
}

StateFields rhs(const StateFields& state, double q_rate, const ParameterSet& params,
                const SimulationGrid& grid, const SourceTerm& source, UsageVariant variant) {
  check_shape(state, grid);
  Kernel kernel(params, grid, source, variant);
  const auto y = flatten(state);
  std::vector<double> dy(y.size());
  kernel.eval(y.data(), q_rate, dy.data());
  return unflatten(dy, grid.nx(), 0.0);
}

std::size_t rk4_substeps(const ParameterSet& params, const SimulationGrid& grid) {
  // Largest eigenvalue magnitude of the transport-transfer-fixation block
  // (Gershgorin), and of the consumption of Psi.
  double chi_max = 0.0;
  for (double v : grid.chi()) chi_max = std::max(chi_max, v);
  double fix_max = 0.0;
  for (double v : grid.fixation()) fix_max = std::max(fix_max, v);
  const double dx = grid.dx();
  // Diffusion acts on phi_f + phi_b, which doubles its reach.
  const double transport = 2.0 * params.omega / dx + 8.0 * params.c * chi_max / (dx * dx);
  const double rho = std::max(transport + params.r + params.f * fix_max, params.u);
  const double ratio = rho * grid.dt() / kRk4StableReach;
  if (!std::isfinite(ratio)) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio)));
}

SimulationResult simulate(const ParameterSet& params, const InputSchedule& schedule,
                          const StateFields& initial, const SimulationGrid& grid,
                          UsageVariant variant, std::span<const double> sample_times,
                          const SimulationOptions& options) {
  params.validate(variant);
  require_cfl(params, grid);
  check_shape(initial, grid);
  const SourceTerm source = render_entries(schedule, grid);

  double t_final = options.horizon;
  for (double s : sample_times) {
    if (!std::isfinite(s) || s < 0.0 || s > grid.t_end() * (1.0 + 1e-12)) {
      fail(ErrorCode::InvalidArgument, "sample time outside [0, t_end]");
    }
    t_final = std::max(t_final, s);
  }
  if (sample_times.empty() && !(options.horizon > 0.0)) t_final = grid.t_end();

  const double dt = grid.dt();
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));

  Kernel kernel(params, grid, source, variant);
  const std::size_t n = kernel.n();
  const std::size_t m = 4 * n;

  std::vector<double> y = flatten(initial);
  {
    const double left = 0.5 * (y[0] + y[n]);
    const double right = 0.5 * (y[n - 1] + y[2 * n - 1]);
    y[0] = y[n] = left;
    y[n - 1] = y[2 * n - 1] = right;
  }
  std::vector<double> k1(m), k2(m), k3(m), k4(m), stage(m);
  std::vector<double> outcomes(steps + 1);
  // Transport, transfer and fixation never create mass, so the absolute
  // mass of the first three fields is at most the initial mass plus what was
  // injected. An unstable mode breaks this bound long before overflowing.
  const auto weights = grid.domain_weights();
  auto transported_mass = [&](const double* v) {
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i < n; ++i) total += weights[i] * std::abs(v[k * n + i]);
    }
    return total;
  };
  const double initial_mass = transported_mass(y.data());
  outcomes[0] = kernel.outcome(y.data());

  StateFields observed;
  const std::size_t substeps = rk4_substeps(params, grid);
  const double h = dt / static_cast<double>(substeps);
  for (std::size_t step = 0; step < steps; ++step) {
    const double t0 = static_cast<double>(step) * dt;
    double magnitude = 0.0;
    for (std::size_t sub = 0; sub < substeps; ++sub) {
      const double ta = t0 + static_cast<double>(sub) * h;
      const double q = source.mean_rate(ta, sub + 1 == substeps ? t0 + dt : ta + h);

      kernel.eval(y.data(), q, k1.data());
      for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
      kernel.enforce_coupling(stage.data());
      kernel.eval(stage.data(), q, k2.data());
      for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
      kernel.enforce_coupling(stage.data());
      kernel.eval(stage.data(), q, k3.data());
      for (std::size_t i = 0; i < m; ++i) stage[i] = y[i] + h * k3[i];
      kernel.enforce_coupling(stage.data());
      kernel.eval(stage.data(), q, k4.data());

      magnitude = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        magnitude += std::abs(y[i]);
      }
      kernel.enforce_coupling(y.data());
    }

    const double t1 = static_cast<double>(step + 1) * dt;
    if (!std::isfinite(magnitude) || magnitude > kOverflow) {
      std::ostringstream msg;
      msg << "state became non-finite or overflowed at t=" << t1;
      throw SimulationError(t1, msg.str());
    }
    if (transported_mass(y.data()) > 2.0 * (initial_mass + source.injected(0.0, t1)) + 1e-12) {
      std::ostringstream msg;
      msg << "numerical instability at t=" << t1 << " (time step too large for these rates)";
      throw SimulationError(t1, msg.str());
    }
    outcomes[step + 1] = kernel.outcome(y.data());
    if (options.observer) {
      observed = unflatten(y, n, outcomes[step + 1]);
      options.observer(t1, observed);
    }
  }

  SimulationResult result;
  result.steps = steps;
  result.substeps = substeps;
  result.final_time = static_cast<double>(steps) * dt;
  result.sample_times.assign(sample_times.begin(), sample_times.end());
  result.outcome.reserve(sample_times.size());
  for (double s : sample_times) {
    const double k = s / dt;
    const double nearest = std::round(k);
    if (std::abs(k - nearest) <= 1e-9 * std::max(1.0, k)) {
      result.outcome.push_back(outcomes[static_cast<std::size_t>(nearest)]);
    } else {
      const auto lo = static_cast<std::size_t>(std::floor(k));
      const double frac = k - static_cast<double>(lo);
      const std::size_t hi = std::min(lo + 1, steps);
      result.outcome.push_back((1.0 - frac) * outcomes[lo] + frac * outcomes[hi]);
    }
  }
  result.final_state = unflatten(y, n, outcomes.back());
  return result;
}

}  // namespace infoflow
