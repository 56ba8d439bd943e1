#include "infoflow/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "infoflow/error.hpp"
#include "infoflow/parallel.hpp"
#include "infoflow/random.hpp"
#include "infoflow/solver.hpp"

namespace infoflow {
namespace {

constexpr int kMaxAttempts = 100;

std::string individual_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "I%03zu", i + 1);
  return buf;
}

void split_into(GeneratedData& data, std::vector<GroundTruth> truth,
                std::vector<Individual> individuals, std::size_t n_train) {
  data.training.role = Role::Training;
  data.test.role = Role::Test;
  for (std::size_t i = 0; i < individuals.size(); ++i) {
    auto& target = i < n_train ? data.training : data.test;
    target.individuals.push_back(std::move(individuals[i]));
  }
  data.truth = std::move(truth);
}

}  // namespace

std::string_view to_string(SpreadKind kind) noexcept {
  return kind == SpreadKind::Variance ? "variance" : "sd";
}

SpreadKind parse_spread_kind(std::string_view text) {
  if (text == "variance") return SpreadKind::Variance;
  if (text == "sd" || text == "standard_deviation") return SpreadKind::StandardDeviation;
  fail(ErrorCode::ConfigError, "unknown spread kind '" + std::string(text) + "'");
}

double draw_nonnegative(Rng& rng, const NormalLaw& law, SpreadKind kind) {
  const double sd = law.sd(kind);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double v = rng.normal(law.mean, sd);
    if (v >= 0.0) return v;
  }
  fail(ErrorCode::DataError, "could not draw a non-negative parameter");
}

double NormalLaw::sd(SpreadKind kind) const {
  return kind == SpreadKind::Variance ? std::sqrt(spread) : spread;
}

void GeneratorLaws::validate() const {
  for (const NormalLaw* law : {&omega, &r, &f, &u}) {
    if (!(law->spread > 0.0) || !std::isfinite(law->mean)) {
      fail(ErrorCode::InvalidArgument, "parameter laws need a finite mean and positive spread");
    }
  }
  if (!(noise.spread >= 0.0)) fail(ErrorCode::InvalidArgument, "noise spread must be >= 0");
  for (const Interval* iv : {&volq, &ct}) {
    if (!(iv->lo <= iv->hi) || iv->lo < 0.0) {
      fail(ErrorCode::InvalidArgument, "uniform input laws need 0 <= lo <= hi");
    }
  }
}

std::vector<double> uniform_times(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) {
    t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  t.back() = hi;
  return t;
}

GeneratedData generate_dataset(const GeneratorLaws& laws, const GenerationSpec& spec,
                               const SimulationGrid& grid, unsigned threads) {
  laws.validate();
  const std::size_t n = spec.n_train + spec.n_test;
  if (n == 0) fail(ErrorCode::InvalidArgument, "no individuals requested");
  if (spec.curve_times.empty()) fail(ErrorCode::InvalidArgument, "no curve times");
  if (spec.entries_per_individual == 0) fail(ErrorCode::InvalidArgument, "no entries requested");
  if (laws.ct.hi > grid.t_end()) {
    fail(ErrorCode::InvalidArgument, "entry times may exceed the grid horizon");
  }
  const double noise_sd = laws.noise.sd(laws.spread);
  std::vector<GroundTruth> truth(n);
  std::vector<Individual> individuals(n);

  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng(derive_seed(laws.seed, "generation", i));
    int attempts = 0;
    for (;;) {
      ParameterSet p = spec.base;
      p.omega = draw_nonnegative(rng, laws.omega, laws.spread);
      p.r = draw_nonnegative(rng, laws.r, laws.spread);
      p.f = draw_nonnegative(rng, laws.f, laws.spread);
      p.u = draw_nonnegative(rng, laws.u, laws.spread);
      InputSchedule schedule;
      schedule.profile = spec.profile;
      for (std::size_t e = 0; e < spec.entries_per_individual; ++e) {
        const double t = rng.uniform(laws.ct.lo, laws.ct.hi);
        const double v = rng.uniform(laws.volq.lo, laws.volq.hi);
        schedule.entries.push_back({t, v});
      }
      std::sort(schedule.entries.begin(), schedule.entries.end(),
                [](const Entry& a, const Entry& b) { return a.time < b.time; });

      Curve noisy;
      bool usable = static_cast<bool>(check_cfl(p, grid));
      Curve clean;
      if (usable) {
        clean = simulate(p, schedule, StateFields::zeros(grid.nx()), grid, spec.variant,
                         spec.curve_times)
                    .outcome;
        for (double c : clean) {
          const double y = c + noise_sd * rng.normal();
          noisy.push_back(y);
          // Exact zeros are kept when there is no noise to blame.
          if (noise_sd > 0.0 && std::abs(y) < 1e-6) usable = false;
        }
      }
      if (usable) {
        GroundTruth& g = truth[i];
        g.id = individual_id(i);
        g.role = i < spec.n_train ? Role::Training : Role::Test;
        g.params = p;
        g.schedule = schedule;
        g.clean = std::move(clean);
        Individual& ind = individuals[i];
        ind.id = g.id;
        ind.schedule = std::move(schedule);
        for (std::size_t j = 0; j < noisy.size(); ++j) {
          ind.observations.push_back({spec.curve_times[j], noisy[j]});
        }
        return;
      }
      if (++attempts >= kMaxAttempts) {
        fail(ErrorCode::DataError, "could not draw a usable individual " + individual_id(i));
      }
    }
  });

  GeneratedData data;
  split_into(data, std::move(truth), std::move(individuals), spec.n_train);
  return data;
}

ParameterSet growth_reference_parameters() {
  ParameterSet p;
  p.omega = 9.24;
  p.c = 0.001;
  p.r = 17.91;
  p.f = 707.01;
  p.u = 21.49;
  p.L = 1.70;
  return p;
}

GeneratedData generate_growth_standin(const GrowthStandInSpec& spec, const SimulationGrid& grid,
                                      unsigned threads) {
  const std::size_t n = spec.n_train + spec.n_test;
  if (n == 0) fail(ErrorCode::InvalidArgument, "no individuals requested");
  if (spec.train_times.empty() || spec.test_times.empty()) {
    fail(ErrorCode::InvalidArgument, "stand-in needs observation times");
  }
  if (!(spec.intake_interval > 0.0) || spec.intake_until > grid.t_end()) {
    fail(ErrorCode::InvalidArgument, "intake calendar must be positive and within the horizon");
  }
  if (!(spec.relative_noise >= 0.0) || !(spec.intake_jitter >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "noise and jitter must be >= 0");
  }
  spec.params.validate(UsageVariant::Logistic);
  if (const auto verdict = check_cfl(spec.params, grid); !verdict) {
    fail(ErrorCode::CflViolation, verdict.describe());
  }

  std::vector<GroundTruth> truth(n);
  std::vector<Individual> individuals(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng(derive_seed(spec.seed, "generation", i));
    const bool training = i < spec.n_train;
    const auto& times = training ? spec.train_times : spec.test_times;
    const double start = rng.uniform(spec.initial_output.lo, spec.initial_output.hi);
    const double level = rng.uniform(spec.intake_level.lo, spec.intake_level.hi);
    InputSchedule schedule;
    schedule.profile = spec.profile;
    const auto count = static_cast<std::size_t>(spec.intake_until / spec.intake_interval + 1e-9);
    for (std::size_t k = 0; k <= count; ++k) {
      const double t = static_cast<double>(k) * spec.intake_interval;
      const double v = level * (1.0 + spec.intake_jitter * rng.uniform(-1.0, 1.0));
      schedule.entries.push_back({std::min(t, grid.t_end()), std::max(v, 0.0)});
    }
    Curve clean = simulate(spec.params, schedule, initial_state_for_output(grid, start), grid,
                           UsageVariant::Logistic, times)
                      .outcome;

    GroundTruth& g = truth[i];
    g.id = individual_id(i);
    g.role = training ? Role::Training : Role::Test;
    g.params = spec.params;
    g.schedule = schedule;
    g.initial_output = start;
    Individual& ind = individuals[i];
    ind.id = g.id;
    ind.schedule = std::move(schedule);
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double y = clean[j] * (1.0 + spec.relative_noise * rng.normal());
      ind.observations.push_back({times[j], y});
    }
    // Practitioners start the model from the measured initial output.
    ind.initial_output = ind.observed_at(0.0).value_or(start);
    g.clean = std::move(clean);
  });

  GeneratedData data;
  split_into(data, std::move(truth), std::move(individuals), spec.n_train);
  return data;
}

}  // namespace infoflow
