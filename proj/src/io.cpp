#include "infoflow/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unordered_map>

#include "infoflow/error.hpp"
#include "infoflow/version.hpp"

namespace infoflow {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Interval interval_from(const json& j, const char* key, Interval fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) {
    fail(ErrorCode::ConfigError, std::string(key) + " must be a [lo, hi] pair");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

// Non-finite doubles have no JSON literal; they are stored as strings.
json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from(const json& j) {
  if (j.is_string()) return parse_number(j.get<std::string>(), "json number");
  return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& field, const std::string& context) {
  const std::string t = trim(field);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (t.empty() || res.ec != std::errc() || res.ptr != last) {
    fail(ErrorCode::DataError, context + ": not a number '" + t + "'");
  }
  return v;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) fail(ErrorCode::IoError, "cannot create directory for " + path.string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::IoError, "cannot move output into place: " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorCode::DataError, "missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      fail(ErrorCode::DataError, origin + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header.size()) + " fields");
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) fail(ErrorCode::DataError, origin + ": missing header");
  return table;
}

CsvTable read_csv(const fs::path& path) { return parse_csv(read_text(path), path.string()); }

CsvBuilder::CsvBuilder(std::initializer_list<std::string_view> header) {
  for (auto h : header) cell(h);
  end_row();
}

CsvBuilder& CsvBuilder::cell(std::string_view text) {
  if (!fresh_) text_ += ',';
  text_ += text;
  fresh_ = false;
  return *this;
}

CsvBuilder& CsvBuilder::cell(double value) { return cell(format_double(value)); }
CsvBuilder& CsvBuilder::cell(std::size_t value) { return cell(std::to_string(value)); }

void CsvBuilder::end_row() {
  text_ += '\n';
  fresh_ = true;
}

std::string format_inputs_csv(std::span<const Dataset> datasets) {
  CsvBuilder csv{"individual_id", "time", "volume"};
  for (const auto& d : datasets) {
    for (const auto& ind : d.individuals) {
      for (const auto& e : ind.schedule.entries) {
        csv.cell(ind.id).cell(e.time).cell(e.volume).end_row();
      }
    }
  }
  return csv.text();
}

std::string format_observations_csv(std::span<const Dataset> datasets) {
  CsvBuilder csv{"individual_id", "time", "value", "role"};
  for (const auto& d : datasets) {
    for (const auto& ind : d.individuals) {
      for (const auto& o : ind.observations) {
        csv.cell(ind.id).cell(o.time).cell(o.value).cell(to_string(d.role)).end_row();
      }
    }
  }
  return csv.text();
}

std::string format_ground_truth_csv(std::span<const GroundTruth> truth) {
  CsvBuilder csv{"individual_id", "omega", "r", "f", "u", "ct", "volq"};
  for (const auto& g : truth) {
    for (const auto& e : g.schedule.entries) {
      csv.cell(g.id).cell(g.params.omega).cell(g.params.r).cell(g.params.f).cell(g.params.u);
      csv.cell(e.time).cell(e.volume).end_row();
    }
  }
  return csv.text();
}

std::string format_growth_truth_csv(std::span<const GroundTruth> truth) {
  CsvBuilder csv{"individual_id", "omega", "c", "r", "f", "u", "L", "initial_output"};
  for (const auto& g : truth) {
    const auto& p = g.params;
    csv.cell(g.id).cell(p.omega).cell(p.c).cell(p.r).cell(p.f).cell(p.u).cell(p.get(ParamId::L));
    csv.cell(g.initial_output).end_row();
  }
  return csv.text();
}

std::string_view to_string(InitialOutputRule rule) noexcept {
  return rule == InitialOutputRule::Zero ? "zero" : "first_observation";
}

InitialOutputRule parse_initial_output_rule(std::string_view text) {
  if (text == "zero") return InitialOutputRule::Zero;
  if (text == "first_observation") return InitialOutputRule::FirstObservation;
  fail(ErrorCode::ConfigError, "unknown initial output rule '" + std::string(text) + "'");
}

DatasetPair parse_datasets(const CsvTable& inputs, const CsvTable& observations,
                           const InjectionProfile& profile, InitialOutputRule rule) {
  const std::size_t o_id = observations.column("individual_id");
  const std::size_t o_t = observations.column("time");
  const std::size_t o_v = observations.column("value");
  const std::size_t o_role = observations.column("role");

  std::vector<Individual> order;
  std::vector<Role> roles;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& row : observations.rows) {
    const std::string& id = row[o_id];
    if (id.empty()) fail(ErrorCode::DataError, "observation with empty individual_id");
    const Role role = parse_role(row[o_role]);
    auto [it, inserted] = index.try_emplace(id, order.size());
    if (inserted) {
      Individual ind;
      ind.id = id;
      ind.schedule.profile = profile;
      order.push_back(std::move(ind));
      roles.push_back(role);
    } else if (roles[it->second] != role) {
      fail(ErrorCode::DataError, "individual " + id + " has conflicting roles");
    }
    order[it->second].observations.push_back(
        {parse_number(row[o_t], "observation time"), parse_number(row[o_v], "observation value")});
  }

  const std::size_t i_id = inputs.column("individual_id");
  const std::size_t i_t = inputs.column("time");
  const std::size_t i_v = inputs.column("volume");
  for (const auto& row : inputs.rows) {
    const auto it = index.find(row[i_id]);
    if (it == index.end()) {
      fail(ErrorCode::DataError, "input for unknown individual " + row[i_id]);
    }
    order[it->second].schedule.entries.push_back(
        {parse_number(row[i_t], "input time"), parse_number(row[i_v], "input volume")});
  }

  DatasetPair pair;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Individual& ind = order[i];
    for (std::size_t j = 1; j < ind.observations.size(); ++j) {
      if (!(ind.observations[j - 1].time < ind.observations[j].time)) {
        fail(ErrorCode::DataError, "observations of " + ind.id + " are not strictly increasing");
      }
    }
    if (rule == InitialOutputRule::FirstObservation) {
      const auto first = ind.observed_at(0.0);
      if (!first) fail(ErrorCode::DataError, "individual " + ind.id + " has no t=0 observation");
      ind.initial_output = *first;
    }
    (roles[i] == Role::Training ? pair.training : pair.test).individuals.push_back(std::move(ind));
  }
  return pair;
}

DatasetPair read_datasets(const fs::path& inputs, const fs::path& observations,
                          const InjectionProfile& profile, InitialOutputRule rule) {
  return parse_datasets(read_csv(inputs), read_csv(observations), profile, rule);
}

InputSchedule read_schedule(const fs::path& path, const InjectionProfile& profile,
                            const std::string& id) {
  const CsvTable table = read_csv(path);
  const std::size_t c_t = table.column("time");
  const std::size_t c_v = table.column("volume");
  std::size_t c_id = table.header.size();
  if (!id.empty()) c_id = table.column("individual_id");
  InputSchedule schedule;
  schedule.profile = profile;
  for (const auto& row : table.rows) {
    if (!id.empty() && row[c_id] != id) continue;
    schedule.entries.push_back({parse_number(row[c_t], "input time"),
                                parse_number(row[c_v], "input volume")});
  }
  return schedule;
}

std::string format_trajectory_csv(std::span<const double> times, std::span<const double> outcome) {
  CsvBuilder csv{"t", "O"};
  for (std::size_t i = 0; i < times.size(); ++i) csv.cell(times[i]).cell(outcome[i]).end_row();
  return csv.text();
}

std::string format_fields_csv(std::span<const FieldSnapshot> snapshots, const SimulationGrid& grid) {
  CsvBuilder csv{"t", "node", "x", "field", "value"};
  for (const auto& s : snapshots) {
    const std::pair<const char*, const std::vector<double>*> fields[] = {
        {"phi_f", &s.state.phi_f}, {"phi_b", &s.state.phi_b}, {"psi", &s.state.psi},
        {"xi", &s.state.xi}};
    for (const auto& [name, values] : fields) {
      for (std::size_t i = 0; i < values->size(); ++i) {
        csv.cell(s.t).cell(i).cell(grid.x(i)).cell(name).cell((*values)[i]).end_row();
      }
    }
  }
  return csv.text();
}

std::string format_surface_csv(const SurfaceScan& scan) {
  CsvBuilder csv{"A", "B", "rrss"};
  for (std::size_t i = 0; i < scan.a_values.size(); ++i) {
    for (std::size_t j = 0; j < scan.b_values.size(); ++j) {
      csv.cell(scan.a_values[i]).cell(scan.b_values[j]).cell(scan.rrss[i][j]).end_row();
    }
  }
  return csv.text();
}

std::string format_evaluation_log_csv(
    const std::vector<std::pair<std::vector<double>, double>>& log) {
  CsvBuilder csv{"evaluation", "point", "value"};
  for (std::size_t i = 0; i < log.size(); ++i) {
    std::string point;
    for (std::size_t k = 0; k < log[i].first.size(); ++k) {
      if (k) point += ';';
      point += format_double(log[i].first[k]);
    }
    csv.cell(i).cell(point).cell(log[i].second).end_row();
  }
  return csv.text();
}

json to_json(const ParameterSet& p) {
  json j = json::object();
  for (ParamId id : kAllParams) {
    const double v = p.get(id);
    if (!std::isnan(v)) j[std::string(to_string(id))] = v;
  }
  return j;
}

ParameterSet parameters_from_json(const json& j, const ParameterSet& defaults) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, "parameters must be an object");
  ParameterSet p = defaults;
  for (const auto& [key, value] : j.items()) p.set(parse_param_id(key), value.get<double>());
  return p;
}

json to_json(const GridSpec& g) {
  return {{"dx", g.dx},
          {"dt", g.dt},
          {"t_end", g.t_end},
          {"fixation_region", interval_json(g.fixation_region)},
          {"omega_region", interval_json(g.action_region)},
          {"ramp_width", g.ramp_width}};
}

GridSpec grid_from_json(const json& j, const GridSpec& defaults) {
  GridSpec g = defaults;
  g.dx = get_or(j, "dx", g.dx);
  g.dt = get_or(j, "dt", g.dt);
  g.t_end = get_or(j, "t_end", g.t_end);
  g.fixation_region = interval_from(j, "fixation_region", g.fixation_region);
  g.action_region = interval_from(j, "omega_region", g.action_region);
  g.ramp_width = get_or(j, "ramp_width", g.ramp_width);
  return g;
}

json to_json(const InjectionProfile& p) {
  return {{"duration", p.duration}, {"site", interval_json(p.site)}};
}

InjectionProfile profile_from_json(const json& j, const InjectionProfile& defaults) {
  InjectionProfile p = defaults;
  p.duration = get_or(j, "duration", p.duration);
  p.site = interval_from(j, "site", p.site);
  return p;
}

json to_json(const RelationModel& m) {
  json points = json::array();
  for (const auto& p : m.points()) points.push_back({p.x, p.y});
  return {{"bandwidth", m.bandwidth()}, {"points", points}};
}

RelationModel relation_from_json(const json& j) {
  std::vector<SupportPoint> points;
  for (const auto& p : j.at("points")) points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return RelationModel(std::move(points), j.at("bandwidth").get<double>());
}

json to_json(const DerivedParameter& d) {
  json j = to_json(d.relation);
  j["driver"] = to_string(d.driver);
  j["driven"] = to_string(d.target);
  return j;
}

DerivedParameter derived_from_json(const json& j) {
  return {parse_param_id(j.at("driven").get<std::string>()),
          parse_param_id(j.at("driver").get<std::string>()), relation_from_json(j)};
}

json relations_to_json(const std::vector<DerivedParameter>& relations) {
  json list = json::array();
  for (const auto& d : relations) list.push_back(to_json(d));
  return {{"relations", list}};
}

std::vector<DerivedParameter> relations_from_json(const json& j) {
  std::vector<DerivedParameter> out;
  for (const auto& r : j.at("relations")) out.push_back(derived_from_json(r));
  return out;
}

json to_json(const ModelArtifact& a) {
  json estimated = json::array();
  for (ParamId id : a.estimated) estimated.push_back(to_string(id));
  json rsd = json::object();
  for (const auto& [id, v] : a.rsd) rsd[std::string(to_string(id))] = number_json(v);
  json reps = json::array();
  for (const auto& p : a.repetitions) reps.push_back(to_json(p));
  return {{"format", kArtifactFormat},
          {"toolkit_version", a.toolkit_version},
          {"variant", to_string(a.variant)},
          {"parameters", to_json(a.parameters)},
          {"estimated", estimated},
          {"rsd", rsd},
          {"repetitions", reps},
          {"relations", relations_to_json(a.relations).at("relations")},
          {"grid", to_json(a.grid)},
          {"injection", to_json(a.profile)},
          {"seed", a.seed}};
}

ModelArtifact artifact_from_json(const json& j) {
  try {
    const int format = j.at("format").get<int>();
    if (format != kArtifactFormat) {
      fail(ErrorCode::ConfigError, "unsupported artifact format " + std::to_string(format));
    }
    ModelArtifact a;
    a.toolkit_version = j.at("toolkit_version").get<std::string>();
    a.variant = parse_usage_variant(j.at("variant").get<std::string>());
    a.parameters = parameters_from_json(j.at("parameters"));
    for (const auto& id : j.at("estimated")) a.estimated.push_back(parse_param_id(id.get<std::string>()));
    for (const auto& [key, v] : j.at("rsd").items()) a.rsd[parse_param_id(key)] = number_from(v);
    for (const auto& p : j.at("repetitions")) a.repetitions.push_back(parameters_from_json(p));
    for (const auto& r : j.at("relations")) a.relations.push_back(derived_from_json(r));
    a.grid = grid_from_json(j.at("grid"));
    a.profile = profile_from_json(j.at("injection"));
    a.seed = j.at("seed").get<std::uint64_t>();
    return a;
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("malformed artifact: ") + e.what());
  }
}

void save_artifact(const fs::path& path, const ModelArtifact& a) {
  write_text_atomic(path, to_json(a).dump(2) + "\n");
}

ModelArtifact load_artifact(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return artifact_from_json(j);
}

}  // namespace infoflow
