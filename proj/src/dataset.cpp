#include "infoflow/dataset.hpp"

#include <cmath>

#include "infoflow/error.hpp"

namespace infoflow {

std::vector<double> Individual::observation_times() const {
  std::vector<double> out;
  out.reserve(observations.size());
  for (const auto& o : observations) out.push_back(o.time);
  return out;
}

std::vector<double> Individual::observed_values() const {
  std::vector<double> out;
  out.reserve(observations.size());
  for (const auto& o : observations) out.push_back(o.value);
  return out;
}

std::optional<double> Individual::observed_at(double t) const {
  for (const auto& o : observations) {
    if (std::abs(o.time - t) <= 1e-9) return o.value;
  }
  return std::nullopt;
}

std::string_view to_string(Role role) noexcept {
  return role == Role::Training ? "training" : "test";
}

Role parse_role(std::string_view text) {
  if (text == "training" || text == "train") return Role::Training;
  if (text == "test") return Role::Test;
  fail(ErrorCode::DataError, "unknown dataset role '" + std::string(text) + "'");
}

std::vector<std::vector<double>> Dataset::observed_curves() const {
  std::vector<std::vector<double>> out;
  out.reserve(individuals.size());
  for (const auto& ind : individuals) out.push_back(ind.observed_values());
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.role = role;
  out.individuals.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= individuals.size()) fail(ErrorCode::InvalidArgument, "subset index out of range");
    out.individuals.push_back(individuals[i]);
  }
  return out;
}

void Dataset::validate(double horizon) const {
  if (individuals.empty()) fail(ErrorCode::DataError, "dataset is empty");
  for (const auto& ind : individuals) {
    double previous = -1.0;
    for (const auto& o : ind.observations) {
      if (!std::isfinite(o.value)) {
        fail(ErrorCode::DataError, "individual " + ind.id + " has a non-finite observation");
      }
      if (o.time < 0.0 || o.time > horizon * (1.0 + 1e-12) || o.time < previous) {
        fail(ErrorCode::DataError,
             "individual " + ind.id + " has unsorted or out-of-horizon observation times");
      }
      previous = o.time;
    }
    if (!std::isfinite(ind.initial_output)) {
      fail(ErrorCode::DataError, "individual " + ind.id + " has a non-finite initial output");
    }
  }
}

}  // namespace infoflow
