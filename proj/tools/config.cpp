#include "config.hpp"

#include <algorithm>
#include <initializer_list>

#include "infoflow/error.hpp"

namespace infoflow::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(ErrorCode::ConfigError, "unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

Interval read_interval(const json& j, const char* key, Interval fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    fail(ErrorCode::ConfigError, std::string(key) + " must be a [lo, hi] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

/// A list of numbers or {"lo", "hi", "count"}.
std::vector<double> read_values(const json& v, const std::string& where) {
  if (v.is_array()) return v.get<std::vector<double>>();
  if (v.is_object()) {
    check_keys(v, {"lo", "hi", "count"}, where);
    return uniform_times(v.at("lo").get<double>(), v.at("hi").get<double>(),
                         v.at("count").get<std::size_t>());
  }
  fail(ErrorCode::ConfigError, where + " must be a list or {lo, hi, count}");
}

NormalLaw read_law(const json& j, const char* key, NormalLaw fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    fail(ErrorCode::ConfigError, std::string(key) + " law must be [mean, spread]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

OptimizerBudget read_budget(const json& j, OptimizerBudget b) {
  check_keys(j, {"max_evaluations", "max_iterations", "target_tolerance", "stall_iterations"},
             "budget");
  read(j, "max_evaluations", b.max_evaluations);
  read(j, "max_iterations", b.max_iterations);
  read(j, "stall_iterations", b.stall_iterations);
  if (j.contains("target_tolerance")) b.target_tolerance = j.at("target_tolerance").get<double>();
  b.validate();
  return b;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void parse_generator(const json& j, RunConfig& c) {
  check_keys(j, {"kind", "n_train", "n_test", "curve_times", "entries_per_individual", "spread",
                 "laws", "growth"},
             "generator");
  if (j.contains("kind")) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "population") {
      c.generator = GeneratorKind::Population;
    } else if (kind == "growth") {
      c.generator = GeneratorKind::Growth;
    } else {
      fail(ErrorCode::ConfigError, "unknown generator kind '" + kind + "'");
    }
  }
  read(j, "n_train", c.generation.n_train);
  read(j, "n_test", c.generation.n_test);
  if (j.contains("curve_times")) c.generation.curve_times = read_values(j.at("curve_times"), "curve_times");
  read(j, "entries_per_individual", c.generation.entries_per_individual);
  if (j.contains("spread")) c.laws.spread = parse_spread_kind(j.at("spread").get<std::string>());
  if (j.contains("laws")) {
    const auto& l = j.at("laws");
    check_keys(l, {"omega", "r", "f", "u", "volq", "ct", "noise"}, "generator.laws");
    c.laws.omega = read_law(l, "omega", c.laws.omega);
    c.laws.r = read_law(l, "r", c.laws.r);
    c.laws.f = read_law(l, "f", c.laws.f);
    c.laws.u = read_law(l, "u", c.laws.u);
    c.laws.noise = read_law(l, "noise", c.laws.noise);
    c.laws.volq = read_interval(l, "volq", c.laws.volq);
    c.laws.ct = read_interval(l, "ct", c.laws.ct);
  }
  if (j.contains("growth")) {
    const auto& g = j.at("growth");
    auto& s = c.growth;
    check_keys(g, {"n_train", "n_test", "train_times", "test_times", "initial_output",
                   "intake_interval", "intake_until", "intake_level", "intake_jitter",
                   "relative_noise", "parameters"},
               "generator.growth");
    read(g, "n_train", s.n_train);
    read(g, "n_test", s.n_test);
    if (g.contains("train_times")) s.train_times = read_values(g.at("train_times"), "train_times");
    if (g.contains("test_times")) s.test_times = read_values(g.at("test_times"), "test_times");
    s.initial_output = read_interval(g, "initial_output", s.initial_output);
    read(g, "intake_interval", s.intake_interval);
    read(g, "intake_until", s.intake_until);
    s.intake_level = read_interval(g, "intake_level", s.intake_level);
    read(g, "intake_jitter", s.intake_jitter);
    read(g, "relative_noise", s.relative_noise);
    if (g.contains("parameters")) s.params = parameters_from_json(g.at("parameters"), s.params);
  }
}

RelationSpec parse_relation(const json& j, std::size_t index) {
  const std::string where = "relations[" + std::to_string(index) + "]";
  check_keys(j, {"driver", "driven", "driver_values", "subsample_size", "subsample_count",
                 "bounds", "budget", "bandwidth"},
             where);
  RelationSpec s;
  s.driver = parse_param_id(j.at("driver").get<std::string>());
  s.driven = parse_param_id(j.at("driven").get<std::string>());
  s.driver_values = j.contains("driver_values") ? read_values(j.at("driver_values"), where)
                                                : default_driver_values(s.driver);
  read(j, "subsample_size", s.subsample_size);
  read(j, "subsample_count", s.subsample_count);
  const Interval bounds = read_interval(j, "bounds", {s.driven_lower, s.driven_upper});
  s.driven_lower = bounds.lo;
  s.driven_upper = bounds.hi;
  if (j.contains("budget")) s.budget = read_budget(j.at("budget"), s.budget);
  if (j.contains("bandwidth")) s.bandwidth = j.at("bandwidth").get<double>();
  return s;
}

void parse_fit(const json& j, FitSettings& f) {
  check_keys(j, {"free", "objective", "endpoint_time", "subsample_size", "repetitions", "budget",
                 "use_relations"},
             "fit");
  if (j.contains("free")) {
    f.free.clear();
    for (const auto& p : j.at("free")) {
      check_keys(p, {"name", "bounds"}, "fit.free");
      const Interval b = read_interval(p, "bounds", {0.0, 0.0});
      f.free.push_back({parse_param_id(p.at("name").get<std::string>()), b.lo, b.hi});
    }
  }
  if (j.contains("objective")) {
    const auto kind = j.at("objective").get<std::string>();
    if (kind == "full_curve") {
      f.objective = ObjectiveKind::FullCurve;
    } else if (kind == "endpoint") {
      f.objective = ObjectiveKind::Endpoint;
    } else {
      fail(ErrorCode::ConfigError, "unknown objective '" + kind + "'");
    }
  }
  read(j, "endpoint_time", f.endpoint_time);
  read(j, "subsample_size", f.subsample_size);
  read(j, "repetitions", f.repetitions);
  read(j, "use_relations", f.use_relations);
  if (j.contains("budget")) f.budget = read_budget(j.at("budget"), f.budget);
}

}  // namespace

std::vector<RelationSpec> RunConfig::default_relations() {
  RelationSpec omega_r;
  omega_r.driver = ParamId::Omega;
  omega_r.driven = ParamId::R;
  omega_r.driver_values = default_driver_values(ParamId::Omega);
  omega_r.subsample_size = 20;
  omega_r.driven_lower = 5.0;
  omega_r.driven_upper = 80.0;
  RelationSpec f_u = omega_r;
  f_u.driver = ParamId::F;
  f_u.driven = ParamId::U;
  f_u.driver_values = default_driver_values(ParamId::F);
  f_u.driven_lower = 20.0;
  f_u.driven_upper = 400.0;
  return {omega_r, f_u};
}

void RunConfig::finalize() {
  laws.seed = seed;
  growth.seed = seed;
  for (auto& r : relations) r.seed = seed;
  generation.variant = variant;
  generation.profile = injection;
  generation.base = parameters;
  growth.profile = injection;
  if (threads == 0) threads = 1;
  if (instants.empty()) instants = {fit.endpoint_time};
  if (simulate.times.empty()) simulate.times = generation.curve_times;
  for (const auto& p : fit.free) {
    ParameterSet probe = parameters;
    probe.set(p.id, p.upper);
    if (const auto verdict = check_cfl(probe, SimulationGrid(grid)); !verdict) {
      fail(ErrorCode::ConfigError, "fit bounds break the CFL condition: " + verdict.describe());
    }
  }
  laws.validate();
}

RunConfig parse_config(const json& j, const fs::path& base_dir) {
  RunConfig c;
  if (!base_dir.empty()) c.paths.out = base_dir / "out";
  try {
    check_keys(j, {"grid", "injection", "variant", "parameters", "initial_output", "seed",
                   "threads", "generator", "relations", "fit", "evaluate", "scan", "baseline",
                   "simulate", "paths"},
               "config");
    if (j.contains("grid")) {
      check_keys(j.at("grid"),
                 {"dx", "dt", "t_end", "fixation_region", "omega_region", "ramp_width"}, "grid");
      c.grid = grid_from_json(j.at("grid"), c.grid);
    }
    if (j.contains("injection")) {
      check_keys(j.at("injection"), {"duration", "site"}, "injection");
      c.injection = profile_from_json(j.at("injection"), c.injection);
    }
    if (j.contains("variant")) {
      const auto& v = j.at("variant");
      if (v.is_string()) {
        c.variant = parse_usage_variant(v.get<std::string>());
      } else {
        check_keys(v, {"tag", "L", "Upp", "Low"}, "variant");
        c.variant = parse_usage_variant(v.at("tag").get<std::string>());
        for (const char* key : {"L", "Upp", "Low"}) {
          if (v.contains(key)) c.parameters.set(parse_param_id(key), v.at(key).get<double>());
        }
      }
    }
    if (j.contains("parameters")) c.parameters = parameters_from_json(j.at("parameters"), c.parameters);
    if (j.contains("initial_output")) {
      c.initial_output = parse_initial_output_rule(j.at("initial_output").get<std::string>());
    }
    read(j, "seed", c.seed);
    read(j, "threads", c.threads);
    if (j.contains("generator")) parse_generator(j.at("generator"), c);
    if (j.contains("relations")) {
      c.relations.clear();
      std::size_t i = 0;
      for (const auto& r : j.at("relations")) c.relations.push_back(parse_relation(r, i++));
    }
    if (j.contains("fit")) parse_fit(j.at("fit"), c.fit);
    if (j.contains("evaluate")) {
      check_keys(j.at("evaluate"), {"instants"}, "evaluate");
      if (j.at("evaluate").contains("instants")) {
        c.instants = read_values(j.at("evaluate").at("instants"), "evaluate.instants");
      }
    }
    if (j.contains("scan")) {
      const auto& s = j.at("scan");
      check_keys(s, {"a", "b", "a_values", "b_values", "dataset"}, "scan");
      c.scan.a = parse_param_id(s.at("a").get<std::string>());
      c.scan.b = parse_param_id(s.at("b").get<std::string>());
      c.scan.a_values = read_values(s.at("a_values"), "scan.a_values");
      c.scan.b_values = read_values(s.at("b_values"), "scan.b_values");
      if (s.contains("dataset")) c.scan.dataset = parse_role(s.at("dataset").get<std::string>());
    }
    if (j.contains("baseline")) {
      const auto& b = j.at("baseline");
      check_keys(b, {"a_bounds", "K_bounds", "budget", "anchor_time", "instants"}, "baseline");
      c.baseline.a_bounds = read_interval(b, "a_bounds", c.baseline.a_bounds);
      c.baseline.k_bounds = read_interval(b, "K_bounds", c.baseline.k_bounds);
      if (b.contains("budget")) c.baseline.budget = read_budget(b.at("budget"), c.baseline.budget);
      read(b, "anchor_time", c.baseline.anchor_time);
      if (b.contains("instants")) c.baseline.instants = read_values(b.at("instants"), "baseline.instants");
    }
    if (j.contains("simulate")) {
      const auto& s = j.at("simulate");
      check_keys(s, {"times", "schedule", "individual", "initial_output", "from_artifact",
                     "write_fields"},
                 "simulate");
      if (s.contains("times")) c.simulate.times = read_values(s.at("times"), "simulate.times");
      if (s.contains("schedule")) {
        c.simulate.schedule = resolve(base_dir, s.at("schedule").get<std::string>());
      }
      read(s, "individual", c.simulate.individual);
      read(s, "initial_output", c.simulate.initial_output);
      read(s, "from_artifact", c.simulate.from_artifact);
      read(s, "write_fields", c.simulate.write_fields);
    }
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      check_keys(p, {"out", "inputs", "observations", "relations", "artifact"}, "paths");
      if (p.contains("out")) c.paths.out = resolve(base_dir, p.at("out").get<std::string>());
      auto opt = [&](const char* key, std::optional<fs::path>& target) {
        if (p.contains(key)) target = resolve(base_dir, p.at(key).get<std::string>());
      };
      opt("inputs", c.paths.inputs);
      opt("observations", c.paths.observations);
      opt("relations", c.paths.relations);
      opt("artifact", c.paths.artifact);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("invalid configuration: ") + e.what());
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

}  // namespace infoflow::cli
