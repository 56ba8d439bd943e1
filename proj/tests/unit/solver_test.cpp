#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "infoflow/error.hpp"
#include "infoflow/random.hpp"
#include "infoflow/solver.hpp"

using namespace infoflow;

namespace {

InputSchedule schedule_of(std::initializer_list<Entry> entries) {
  InputSchedule s;
  s.entries = entries;
  return s;
}

std::vector<double> lattice(double t_end, int count) {
  std::vector<double> t;
  for (int i = 0; i <= count; ++i) t.push_back(t_end * i / count);
  return t;
}

double minimum(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// Smooth initial flows with matching boundary values and no source, so the
// time integration error is the only one that changes with dt.
StateFields smooth_state(const SimulationGrid& g) {
  StateFields s = StateFields::zeros(g.nx());
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double x = g.x(i);
    s.phi_f[i] = 1.0 + 0.5 * std::cos(std::numbers::pi * x);
    s.phi_b[i] = 1.0 + 0.5 * std::cos(std::numbers::pi * x);
  }
  return s;
}

}  // namespace

TEST(Solver, ZeroInputStaysZero) {
  const SimulationGrid g(GridSpec{});
  const auto t = lattice(1.0, 10);
  const auto r = simulate(ParameterSet{}, {}, StateFields::zeros(g.nx()), g,
                          UsageVariant::Accumulative, t);
  for (double o : r.outcome) EXPECT_EQ(o, 0.0);
  EXPECT_EQ(r.steps, 1000u);
}

TEST(Solver, InitialOutputIsReproducedAtTimeZero) {
  const SimulationGrid g(GridSpec{});
  const StateFields s = initial_state_for_output(g, 0.6);
  EXPECT_NEAR(s.outcome, 0.6, 1e-15);
  const double t[] = {0.0};
  const auto r = simulate(ParameterSet{}, {}, s, g, UsageVariant::Accumulative, t);
  EXPECT_NEAR(r.outcome[0], 0.6, 1e-15);
}

TEST(Solver, SourceOnlyRhsSplitsBetweenFlows) {
  const SimulationGrid g(GridSpec{});
  const auto schedule = schedule_of({{0.0, 0.16}});
  const SourceTerm q = render_entries(schedule, g);
  const StateFields d = rhs(StateFields::zeros(g.nx()), 1.0, ParameterSet{}, g, q,
                            UsageVariant::Accumulative);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    EXPECT_DOUBLE_EQ(d.phi_f[i], 0.5 * q.spatial()[i]) << i;
    EXPECT_DOUBLE_EQ(d.phi_b[i], 0.5 * q.spatial()[i]) << i;
    EXPECT_EQ(d.psi[i], 0.0);
    EXPECT_EQ(d.xi[i], 0.0);
  }
}

TEST(Solver, AccumulativeConservesMass) {
  const SimulationGrid g(GridSpec{});
  Rng rng(20240501);
  for (int trial = 0; trial < 10; ++trial) {
    ParameterSet p;
    p.omega = rng.uniform(0.0, 25.0);
    p.c = rng.uniform(0.0, 0.625);
    p.r = rng.uniform(0.0, 100.0);
    p.f = rng.uniform(0.0, 2000.0);
    p.u = rng.uniform(0.0, 500.0);
    InputSchedule s;
    for (int e = 0; e < 3; ++e) s.entries.push_back({rng.uniform(0.0, 0.8), rng.uniform(0.0, 1.0)});
    // Each flow receives the diffusion of the sum, so only the total flow,
    // Psi and Xi keep their sign over the whole CFL range.
    double lowest = 0.0;
    const auto r = simulate(p, s, StateFields::zeros(g.nx()), g, UsageVariant::Accumulative, {},
                            {0.0, [&](double, const StateFields& st) {
                               for (std::size_t i = 0; i < g.nx(); ++i) {
                                 lowest = std::min({lowest, st.phi_f[i] + st.phi_b[i], st.psi[i], st.xi[i]});
                               }
                             }});
    EXPECT_GE(lowest, -1e-9) << trial;
    const double injected = render_entries(s, g).injected(0.0, 1.0);
    EXPECT_NEAR(mass_balance(r.final_state, g), injected, 1e-12 * std::max(1.0, injected))
        << trial;
  }
}

TEST(Solver, SingleFlowCanDipBelowZeroAtHighDiffusion) {
  // Strong transfer drains phi_f while the shared diffusion of the sum keeps
  // pushing into it; the dip is a property of the equations, not of dt.
  ParameterSet p;
  p.omega = 1.73;
  p.c = 0.481;
  p.r = 56.8;
  p.f = 1449.0;
  p.u = 330.0;
  auto lowest_phi_f = [&](double dt) {
    GridSpec spec;
    spec.dt = dt;
    const SimulationGrid g(spec);
    double lowest = 0.0;
    simulate(p, schedule_of({{0.2, 0.8}}), StateFields::zeros(g.nx()), g,
             UsageVariant::Accumulative, {},
             {0.0, [&](double, const StateFields& st) {
                for (double x : st.phi_f) lowest = std::min(lowest, x);
              }});
    return lowest;
  };
  const double coarse = lowest_phi_f(0.001);
  const double fine = lowest_phi_f(0.0005);
  EXPECT_LT(coarse, -1e-6);
  EXPECT_NEAR(coarse, fine, 1e-3 * std::abs(fine));
}

TEST(Solver, BoundaryValuesStayCoupled) {
  const SimulationGrid g(GridSpec{});
  StateFields init = StateFields::zeros(g.nx());
  init.phi_f.front() = 1.0;  // deliberately uncoupled input
  const auto r = simulate(ParameterSet{}, schedule_of({{0.0, 0.5}}), init, g,
                          UsageVariant::Accumulative, {},
                          {0.3, [&](double, const StateFields& s) {
                             ASSERT_EQ(s.phi_f.front(), s.phi_b.front());
                             ASSERT_EQ(s.phi_f.back(), s.phi_b.back());
                           }});
  EXPECT_EQ(r.final_state.phi_f.front(), r.final_state.phi_b.front());
  EXPECT_EQ(r.final_state.phi_f.back(), r.final_state.phi_b.back());
}

TEST(Solver, AccumulativeOutcomeIsNonNegativeAndNonDecreasing) {
  const SimulationGrid g(GridSpec{});
  const auto t = lattice(1.0, 200);
  const auto r = simulate(ParameterSet{}, schedule_of({{0.1, 0.4}, {0.5, 0.3}}),
                          StateFields::zeros(g.nx()), g, UsageVariant::Accumulative, t);
  for (std::size_t i = 1; i < r.outcome.size(); ++i) {
    EXPECT_GE(r.outcome[i], r.outcome[i - 1] - 1e-12) << i;
  }
  EXPECT_GE(minimum(r.final_state.phi_f), -1e-12);
  EXPECT_GE(minimum(r.final_state.psi), -1e-12);
  // Almost everything injected is used by t = 1 with the reference rates.
  EXPECT_NEAR(r.outcome.back(), 0.7, 1e-2);
}

TEST(Solver, LogisticOutcomeStaysBelowCeiling) {
  GridSpec spec;
  spec.t_end = 3.0;
  const SimulationGrid g(spec);
  ParameterSet p;
  p.L = 1.0;
  InputSchedule s;
  for (int k = 0; k < 15; ++k) s.entries.push_back({0.2 * k, 0.5});
  const auto t = lattice(3.0, 300);
  const auto r = simulate(p, s, initial_state_for_output(g, 0.2), g, UsageVariant::Logistic, t);
  for (double o : r.outcome) EXPECT_LE(o, 1.0 + 1e-9);
  EXPECT_GT(r.outcome.back(), 0.9);
}

TEST(Solver, BoundedVariantsStayBetweenLowAndUpp) {
  const SimulationGrid g(GridSpec{});
  ParameterSet p;
  p.upp = 2.0;
  p.low = 0.5;
  for (UsageVariant v : {UsageVariant::DownwardBounded, UsageVariant::UpwardBounded}) {
    StateFields init = StateFields::zeros(g.nx());
    std::fill(init.xi.begin(), init.xi.end(), 1.0);
    const auto r = simulate(p, schedule_of({{0.1, 1.0}}), init, g, v, {});
    for (double x : r.final_state.xi) {
      EXPECT_GE(x, 0.5 - 1e-9);
      EXPECT_LE(x, 2.0 + 1e-9);
    }
  }
}

TEST(Solver, DownwardBoundedRelaxesToUppWithoutInput) {
  GridSpec spec;
  spec.t_end = 10.0;
  spec.dt = 0.005;
  const SimulationGrid g(spec);
  ParameterSet p;
  p.omega = 4.0;
  p.upp = 2.0;
  p.low = 0.5;
  StateFields init = StateFields::zeros(g.nx());
  std::fill(init.xi.begin(), init.xi.end(), 1.0);
  const auto r = simulate(p, {}, init, g, UsageVariant::DownwardBounded, {});
  // dXi/dt = -(Xi - Upp) with Psi = 0 gives Xi = Upp + (Xi0 - Upp) e^{-t}.
  for (double x : r.final_state.xi) EXPECT_NEAR(x, 2.0 - std::exp(-10.0), 1e-8);
}

TEST(Solver, RungeKuttaIsFourthOrderInTime) {
  auto outcome = [](double dt) {
    GridSpec spec;
    spec.dt = dt;
    spec.t_end = 0.5;
    const SimulationGrid g(spec);
    ParameterSet p;
    p.omega = 5.0;
    p.c = 0.01;
    p.r = 20.0;
    p.f = 200.0;
    p.u = 50.0;
    const double t[] = {0.5};
    return simulate(p, {}, smooth_state(g), g, UsageVariant::Accumulative, t).outcome[0];
  };
  const double o1 = outcome(0.002);
  const double o2 = outcome(0.001);
  const double o3 = outcome(0.0005);
  const double order = std::log2(std::abs(o1 - o2) / std::abs(o2 - o3));
  EXPECT_GE(order, 3.5);
}

TEST(Solver, SpatialRefinementConverges) {
  auto outcome = [](double dx) {
    GridSpec spec;
    spec.dx = dx;
    spec.dt = 0.0002;
    const SimulationGrid g(spec);
    const double t[] = {0.6};
    return simulate(ParameterSet{}, schedule_of({{0.05, 0.5}}), StateFields::zeros(g.nx()), g,
                    UsageVariant::Accumulative, t)
        .outcome[0];
  };
  const double coarse = outcome(0.05);
  const double mid = outcome(0.025);
  const double fine = outcome(0.0125);
  EXPECT_LT(std::abs(mid - fine), std::abs(coarse - mid));
}

TEST(Solver, SampleTimesOnLatticeAreExactSteps) {
  const SimulationGrid g(GridSpec{});
  std::vector<double> seen;
  const double t[] = {0.25, 0.5};
  const auto r = simulate(ParameterSet{}, schedule_of({{0.0, 0.5}}), StateFields::zeros(g.nx()),
                          g, UsageVariant::Accumulative, t,
                          {0.0, [&](double time, const StateFields& s) {
                             if (std::abs(time - 0.25) < 1e-12 || std::abs(time - 0.5) < 1e-12) {
                               seen.push_back(s.outcome);
                             }
                           }});
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(r.outcome[0], seen[0]);
  EXPECT_EQ(r.outcome[1], seen[1]);
  EXPECT_NEAR(r.final_time, 0.5, 1e-15);
}

TEST(Solver, OffLatticeSamplesInterpolate) {
  const SimulationGrid g(GridSpec{});
  const double lattice_t[] = {0.3, 0.301};
  const double mid_t[] = {0.3005};
  const auto s = schedule_of({{0.2, 0.5}});
  const auto a = simulate(ParameterSet{}, s, StateFields::zeros(g.nx()), g,
                          UsageVariant::Accumulative, lattice_t);
  const auto b = simulate(ParameterSet{}, s, StateFields::zeros(g.nx()), g,
                          UsageVariant::Accumulative, mid_t);
  EXPECT_NEAR(b.outcome[0], 0.5 * (a.outcome[0] + a.outcome[1]), 1e-15);
}

TEST(Solver, CflViolationIsRejectedBeforeStepping) {
  const SimulationGrid g(GridSpec{});
  for (auto [omega, c] : {std::pair{25.1, 0.001}, std::pair{10.0, 0.7}}) {
    ParameterSet p;
    p.omega = omega;
    p.c = c;
    bool stepped = false;
    try {
      simulate(p, {}, StateFields::zeros(g.nx()), g, UsageVariant::Accumulative, {},
               {0.0, [&](double, const StateFields&) { stepped = true; }});
      ADD_FAILURE() << "accepted omega=" << omega << " c=" << c;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CflViolation);
    }
    EXPECT_FALSE(stepped);
  }
}

TEST(Solver, StiffRatesAreSubstepped) {
  const SimulationGrid g(GridSpec{});
  EXPECT_EQ(rk4_substeps(reference_parameters(), g), 1u);
  ParameterSet p;
  p.f = 1e5;  // f * dt far outside the RK4 stability interval
  EXPECT_GE(rk4_substeps(p, g), 40u);
  const auto s = schedule_of({{0.0, 1.0}});
  const auto r = simulate(p, s, StateFields::zeros(g.nx()), g, UsageVariant::Accumulative, {});
  EXPECT_EQ(r.substeps, rk4_substeps(p, g));
  EXPECT_NEAR(mass_balance(r.final_state, g), 1.0, 1e-12);
}

TEST(Solver, CflLimitRatesStayBounded) {
  const SimulationGrid g(GridSpec{});
  ParameterSet p;
  p.omega = 25.0;
  p.c = 0.625;
  p.r = 100.0;
  p.f = 2000.0;
  p.u = 1000.0;
  const auto t = lattice(1.0, 20);
  const auto r = simulate(p, schedule_of({{0.1, 0.5}}), StateFields::zeros(g.nx()), g,
                          UsageVariant::Accumulative, t);
  EXPECT_GT(r.substeps, 1u);
  for (double o : r.outcome) {
    EXPECT_GE(o, -1e-9);
    EXPECT_LE(o, 0.5 + 1e-9);
  }
  EXPECT_NEAR(mass_balance(r.final_state, g), 0.5, 1e-12);
}

TEST(Solver, RejectsBadInputs) {
  const SimulationGrid g(GridSpec{});
  const double late[] = {1.5};
  EXPECT_THROW(simulate(ParameterSet{}, {}, StateFields::zeros(g.nx()), g,
                        UsageVariant::Accumulative, late),
               Error);
  EXPECT_THROW(simulate(ParameterSet{}, {}, StateFields::zeros(5), g,
                        UsageVariant::Accumulative, {}),
               Error);
  EXPECT_THROW(simulate(ParameterSet{}, {}, StateFields::zeros(g.nx()), g,
                        UsageVariant::Logistic, {}),
               Error);
  ParameterSet negative;
  negative.r = -1.0;
  EXPECT_THROW(simulate(negative, {}, StateFields::zeros(g.nx()), g,
                        UsageVariant::Accumulative, {}),
               Error);
}
