#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "infoflow/baselines.hpp"
#include "infoflow/error.hpp"
#include "infoflow/metrics.hpp"
#include "infoflow/parallel.hpp"
#include "infoflow/solver.hpp"
#include "infoflow/version.hpp"

namespace infoflow::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string relation_stem(const DerivedParameter& d) {
  return "relation_" + std::string(to_string(d.driver)) + "_" + std::string(to_string(d.target));
}

std::vector<double> predictions_at(const ParameterSet& params, const Dataset& dataset,
                                   const SimulationGrid& grid, UsageVariant variant, double t,
                                   unsigned threads) {
  std::vector<double> out(dataset.size());
  const double times[] = {t};
  parallel_for(dataset.size(), threads, [&](std::size_t i) {
    out[i] = predict_at(params, dataset.individuals[i], grid, variant, times).front();
  });
  return out;
}

const Dataset& pick(const DatasetPair& data, Role role) {
  return role == Role::Training ? data.training : data.test;
}

void require_individuals(const Dataset& d, const char* what) {
  if (d.empty()) fail(ErrorCode::DataError, std::string("no ") + what + " individuals in the dataset");
}

}  // namespace

void Logger::info(const std::string& message) const {
  if (verbose_) stream_ << message << '\n';
}

OutputSet::OutputSet(fs::path dir, std::string command)
    : dir_(std::move(dir)), command_(std::move(command)) {}

fs::path OutputSet::write(const std::string& name, const std::string& text) {
  const fs::path path = dir_ / name;
  write_text_atomic(path, text);
  written_.push_back(path);
  return path;
}

void OutputSet::write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

void OutputSet::mark_failed(const std::string& message) const {
  std::string text = "command: " + command_ + "\nerror: " + message + "\n";
  for (const auto& p : written_) text += "partial: " + p.filename().string() + "\n";
  try {
    write_text_atomic(dir_ / kFailureMarker, text);
  } catch (const Error&) {
    // The output directory itself is unusable; nothing to flag.
  }
}

void OutputSet::mark_succeeded() const {
  std::error_code ec;
  fs::remove(dir_ / kFailureMarker, ec);
}

DatasetPair load_datasets(const RunConfig& config) {
  return read_datasets(config.paths.inputs_file(), config.paths.observations_file(),
                       config.injection, config.initial_output);
}

FitConfig make_fit_config(const RunConfig& config) {
  FitConfig fc;
  fc.free = config.fit.free;
  fc.fixed = config.parameters;
  fc.objective = config.fit.objective;
  fc.endpoint_time = config.fit.endpoint_time;
  fc.resampling = {config.fit.subsample_size, config.fit.repetitions, config.seed};
  fc.variant = config.variant;
  if (config.fit.use_relations && !config.relations.empty()) {
    const fs::path path = config.paths.relations_file();
    std::vector<DerivedParameter> relations;
    try {
      relations = relations_from_json(json::parse(read_text(path)));
    } catch (const json::exception& e) {
      fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    std::set<ParamId> taken;
    for (const auto& p : fc.free) taken.insert(p.id);
    for (auto& d : relations) {
      if (taken.count(d.target) != 0) continue;
      taken.insert(d.target);
      fc.derived.push_back(std::move(d));
    }
  }
  fc.validate();
  return fc;
}

ModelArtifact make_artifact(const RunConfig& config, const FitConfig& fc, const FitResult& result) {
  ModelArtifact a;
  a.toolkit_version = kToolkitVersion;
  a.parameters = result.mean_parameters;
  a.estimated = result.estimated;
  a.rsd = result.rsd;
  for (const auto& rep : result.repetitions) {
    if (rep.ok) a.repetitions.push_back(rep.params);
  }
  a.relations = fc.derived;
  a.grid = config.grid;
  a.profile = config.injection;
  a.variant = config.variant;
  a.seed = config.seed;
  return a;
}

void cmd_generate(const RunConfig& config, OutputSet& out, const Logger& log) {
  const SimulationGrid grid(config.grid);
  GeneratedData data;
  if (config.generator == GeneratorKind::Population) {
    log.info("generating " + std::to_string(config.generation.n_train + config.generation.n_test) +
             " individuals from the parameter laws");
    data = generate_dataset(config.laws, config.generation, grid, config.threads);
  } else {
    log.info("generating the logistic growth stand-in");
    data = generate_growth_standin(config.growth, grid, config.threads);
  }
  const Dataset sets[] = {data.training, data.test};
  out.write("inputs.csv", format_inputs_csv(sets));
  out.write("observations.csv", format_observations_csv(sets));
  out.write("ground_truth.csv", format_ground_truth_csv(data.truth));
  if (config.generator == GeneratorKind::Growth) {
    out.write("growth_truth.csv", format_growth_truth_csv(data.truth));
  }
  CsvBuilder clean{"individual_id", "time", "value"};
  std::size_t k = 0;
  for (const auto& d : sets) {
    for (const auto& ind : d.individuals) {
      const auto& g = data.truth[k++];
      for (std::size_t j = 0; j < g.clean.size(); ++j) {
        clean.cell(ind.id).cell(ind.observations[j].time).cell(g.clean[j]).end_row();
      }
    }
  }
  out.write("clean_observations.csv", clean.text());
}

void cmd_relate(const RunConfig& config, OutputSet& out, const Logger& log) {
  if (config.relations.empty()) fail(ErrorCode::ConfigError, "no relations configured");
  const SimulationGrid grid(config.grid);
  const DatasetPair data = load_datasets(config);
  require_individuals(data.training, "training");
  std::vector<DerivedParameter> models;
  for (const auto& spec : config.relations) {
    log.info("building relation " + std::string(to_string(spec.driver)) + " -> " +
             std::string(to_string(spec.driven)));
    const RelationBuild build = build_relation(data.training, spec, config.parameters, grid,
                                               config.variant, {config.threads});
    DerivedParameter d{spec.driven, spec.driver, build.model};
    CsvBuilder points{to_string(spec.driver), to_string(spec.driven), "objective"};
    for (std::size_t i = 0; i < build.pairs.size(); ++i) {
      points.cell(build.pairs[i].x).cell(build.pairs[i].y).cell(build.objective_values[i]).end_row();
    }
    out.write(relation_stem(d) + "_points.csv", points.text());
    const auto [lo, hi] = std::minmax_element(spec.driver_values.begin(), spec.driver_values.end());
    CsvBuilder curve{to_string(spec.driver), to_string(spec.driven), "extrapolated"};
    for (double x : uniform_times(*lo, *hi, 101)) {
      const auto p = build.model.predict(x);
      curve.cell(x).cell(p.value).cell(std::string_view(p.extrapolated ? "1" : "0")).end_row();
    }
    out.write(relation_stem(d) + "_curve.csv", curve.text());
    models.push_back(std::move(d));
  }
  out.write_json(config.paths.relations_file().filename().string(), relations_to_json(models));
}

void cmd_fit(const RunConfig& config, OutputSet& out, const Logger& log) {
  const SimulationGrid grid(config.grid);
  const DatasetPair data = load_datasets(config);
  require_individuals(data.training, "training");
  const FitConfig fc = make_fit_config(config);
  log.info("fitting " + std::to_string(fc.resampling.repetitions) + " repetitions");
  const FitResult result = fit(data.training, fc, grid, config.fit.budget, {config.threads});

  const ModelArtifact artifact = make_artifact(config, fc, result);
  out.write_json("model.json", to_json(artifact));

  CsvBuilder table{"parameter", "mean", "rsd"};
  for (ParamId id : result.estimated) {
    table.cell(to_string(id)).cell(result.means.at(id)).cell(result.rsd.at(id)).end_row();
  }
  out.write("fit_parameters.csv", table.text());

  std::string header = "repetition,ok,objective,evaluations";
  for (ParamId id : result.estimated) header += "," + std::string(to_string(id));
  header += ",subsample\n";
  std::string reps = header;
  for (std::size_t r = 0; r < result.repetitions.size(); ++r) {
    const auto& rep = result.repetitions[r];
    reps += std::to_string(r) + "," + (rep.ok ? "1" : "0") + "," + format_double(rep.objective) +
            "," + std::to_string(rep.evaluations);
    for (ParamId id : result.estimated) {
      reps += "," + (rep.ok ? format_double(rep.params.get(id)) : std::string("nan"));
    }
    std::string ids;
    for (std::size_t k : rep.subsample) {
      if (!ids.empty()) ids += ';';
      ids += data.training.individuals[k].id;
    }
    reps += "," + ids + "\n";
  }
  out.write("fit_repetitions.csv", reps);

  CsvBuilder summary{"metric", "value"};
  summary.cell("training_mean_r_squared").cell(result.training_mean_r_squared).end_row();
  summary.cell("training_rrss").cell(result.training_rrss).end_row();
  if (result.training_are) {
    summary.cell("training_are").cell(*result.training_are).end_row();
    summary.cell("training_ara").cell(1.0 - *result.training_are).end_row();
  }
  summary.cell("failed_repetitions").cell(result.failed_repetitions).end_row();
  out.write("fit_summary.csv", summary.text());
}

void cmd_evaluate(const RunConfig& config, OutputSet& out, const Logger& log) {
  const ModelArtifact artifact = load_artifact(config.paths.artifact_file());
  const SimulationGrid grid(artifact.grid);
  DatasetPair data = load_datasets(config);
  require_individuals(data.test, "test");
  log.info("evaluating on " + std::to_string(data.test.size()) + " test individuals");
  const auto predicted = predict_dataset(artifact.parameters, data.test, grid, artifact.variant,
                                         config.threads);
  const auto report = evaluate(data.test, predicted, config.instants);

  CsvBuilder individuals{"individual_id", "rrss", "r_squared"};
  for (const auto& s : report.per_individual) {
    individuals.cell(s.id).cell(s.rrss).cell(s.r_squared).end_row();
  }
  out.write("evaluation_individuals.csv", individuals.text());

  CsvBuilder instants{"t", "are", "ara"};
  for (const auto& s : report.instants) instants.cell(s.t).cell(s.are).cell(s.ara).end_row();
  out.write("evaluation_instants.csv", instants.text());

  CsvBuilder pairs{"individual_id", "time", "observed", "predicted"};
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    const auto& ind = data.test.individuals[i];
    for (std::size_t j = 0; j < ind.observations.size(); ++j) {
      pairs.cell(ind.id).cell(ind.observations[j].time).cell(ind.observations[j].value);
      pairs.cell(predicted[i][j]).end_row();
    }
  }
  out.write("evaluation_predictions.csv", pairs.text());

  std::string text = "test individuals: " + std::to_string(data.test.size()) + "\n";
  text += "total rrss: " + format_double(report.total_rrss) + "\n";
  text += "mean r_squared: " + format_double(report.mean_r_squared) + "\n";
  for (const auto& s : report.instants) {
    text += "are(" + format_double(s.t) + "): " + format_double(s.are) + "\n";
  }
  out.write("evaluation_summary.txt", text);
}

void cmd_scan(const RunConfig& config, OutputSet& out, const Logger& log) {
  if (config.scan.a_values.empty() || config.scan.b_values.empty()) {
    fail(ErrorCode::ConfigError, "scan section with a_values and b_values is required");
  }
  const SimulationGrid grid(config.grid);
  const DatasetPair data = load_datasets(config);
  const Dataset& d = pick(data, config.scan.dataset);
  require_individuals(d, "scanned");
  log.info("scanning " + std::to_string(config.scan.a_values.size() * config.scan.b_values.size()) +
           " cells");
  const auto scan = scan_surface(d, config.scan.a, config.scan.b, config.scan.a_values,
                                 config.scan.b_values, config.parameters, grid, config.variant,
                                 {config.threads});
  out.write("surface_" + std::string(to_string(config.scan.a)) + "_" +
                std::string(to_string(config.scan.b)) + ".csv",
            format_surface_csv(scan));
}

void cmd_baseline(const RunConfig& config, OutputSet& out, const Logger& log) {
  const DatasetPair data = load_datasets(config);
  require_individuals(data.training, "training");
  const auto& b = config.baseline;
  const SearchSpace space{{b.a_bounds.lo, b.k_bounds.lo}, {b.a_bounds.hi, b.k_bounds.hi}};

  CsvBuilder table{"model", "a", "K", "ara_anchor"};
  CsvBuilder series{"model", "t", "ara"};
  for (BaselineKind kind : {BaselineKind::Gompertz, BaselineKind::Verhulst}) {
    log.info("fitting " + std::string(to_string(kind)));
    const BaselineFit f = fit_baseline(data.training, kind, space, b.budget, b.anchor_time);
    table.cell(to_string(kind)).cell(f.a).cell(f.K).cell(f.ara_anchor).end_row();
    if (!data.test.empty()) {
      for (double t : b.instants) {
        series.cell(to_string(kind)).cell(t).cell(ara(data.test, predict_baseline(f, data.test, t), t));
        series.end_row();
      }
    }
  }
  const fs::path artifact_path = config.paths.artifact_file();
  if (fs::exists(artifact_path)) {
    const ModelArtifact artifact = load_artifact(artifact_path);
    const SimulationGrid grid(artifact.grid);
    const auto at_anchor = predictions_at(artifact.parameters, data.training, grid,
                                          artifact.variant, b.anchor_time, config.threads);
    const double anchor_ara = ara(data.training, at_anchor, b.anchor_time);
    table.cell("biomimetic").cell("").cell("").cell(anchor_ara).end_row();
    if (!data.test.empty()) {
      for (double t : b.instants) {
        const auto pred = predictions_at(artifact.parameters, data.test, grid, artifact.variant, t,
                                         config.threads);
        series.cell("biomimetic").cell(t).cell(ara(data.test, pred, t)).end_row();
      }
    }
  } else {
    log.info("no fitted model at " + artifact_path.string() + "; comparing baselines only");
  }
  out.write("baseline_table.csv", table.text());
  out.write("baseline_ara.csv", series.text());
}

void cmd_simulate(const RunConfig& config, OutputSet& out, const Logger& log) {
  ParameterSet params = config.parameters;
  GridSpec grid_spec = config.grid;
  InjectionProfile profile = config.injection;
  UsageVariant variant = config.variant;
  if (config.simulate.from_artifact) {
    const ModelArtifact a = load_artifact(config.paths.artifact_file());
    params = a.parameters;
    grid_spec = a.grid;
    profile = a.profile;
    variant = a.variant;
  }
  const SimulationGrid grid(grid_spec);
  const fs::path schedule_path = config.simulate.schedule.value_or(config.paths.inputs_file());
  const InputSchedule schedule = read_schedule(schedule_path, profile, config.simulate.individual);
  log.info("simulating " + std::to_string(schedule.entries.size()) + " entries");

  const auto& times = config.simulate.times;
  std::vector<FieldSnapshot> snapshots;
  SimulationOptions options;
  const StateFields initial = initial_state_for_output(grid, config.simulate.initial_output);
  if (config.simulate.write_fields) {
    auto wanted = [&](double t) {
      return std::any_of(times.begin(), times.end(),
                         [&](double s) { return std::abs(s - t) <= 0.5 * grid.dt() * 1e-6; });
    };
    if (wanted(0.0)) snapshots.push_back({0.0, initial});
    options.observer = [&](double t, const StateFields& s) {
      if (wanted(t)) snapshots.push_back({t, s});
    };
  }
  const auto result = simulate(params, schedule, initial, grid, variant, times, options);
  out.write("trajectory.csv", format_trajectory_csv(result.sample_times, result.outcome));
  if (config.simulate.write_fields) out.write("fields.csv", format_fields_csv(snapshots, grid));
}

std::vector<std::string> command_names() {
  return {"generate", "relate", "fit", "evaluate", "scan", "baseline", "simulate"};
}

int run_command(const std::string& name, const RunConfig& config, bool verbose, std::ostream& err) {
  using Command = void (*)(const RunConfig&, OutputSet&, const Logger&);
  static const std::pair<const char*, Command> table[] = {
      {"generate", cmd_generate}, {"relate", cmd_relate},     {"fit", cmd_fit},
      {"evaluate", cmd_evaluate}, {"scan", cmd_scan},         {"baseline", cmd_baseline},
      {"simulate", cmd_simulate}};
  Command command = nullptr;
  for (const auto& [n, c] : table) {
    if (name == n) command = c;
  }
  if (command == nullptr) {
    err << "error[config_error]: unknown command '" << name << "'\n";
    return 2;
  }
  OutputSet out(config.paths.out, name);
  const Logger log(err, verbose);
  try {
    RunConfig finalized = config;
    finalized.finalize();
    command(finalized, out, log);
    out.mark_succeeded();
    return 0;
  } catch (const Error& e) {
    out.mark_failed(e.what());
    err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    out.mark_failed(e.what());
    err << "error[internal]: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace infoflow::cli
