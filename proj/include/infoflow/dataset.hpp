#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infoflow/schedule.hpp"

namespace infoflow {

struct Observation {
  double time = 0.0;
  double value = 0.0;

  bool operator==(const Observation&) const = default;
};

struct Individual {
  std::string id;
  InputSchedule schedule;
  std::vector<Observation> observations;  // sorted by time
  double initial_output = 0.0;

  std::vector<double> observation_times() const;
  std::vector<double> observed_values() const;
  /// Observation at time t (within 1e-9), if any.
  std::optional<double> observed_at(double t) const;

  bool operator==(const Individual&) const = default;
};

enum class Role { Training, Test };

std::string_view to_string(Role role) noexcept;
Role parse_role(std::string_view text);

struct Dataset {
  std::vector<Individual> individuals;
  Role role = Role::Training;

  std::size_t size() const noexcept { return individuals.size(); }
  bool empty() const noexcept { return individuals.empty(); }
  /// Observed curves in individual order.
  std::vector<std::vector<double>> observed_curves() const;
  /// The individuals at `indices`, same role.
  Dataset subset(const std::vector<std::size_t>& indices) const;
  /// Non-empty, sorted finite observations within [0, horizon].
  void validate(double horizon) const;

  bool operator==(const Dataset&) const = default;
};

}  // namespace infoflow
