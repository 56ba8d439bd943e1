#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace infoflow {

/// Form of the fourth ("usage") equation.
enum class UsageVariant {
  Accumulative,     // dXi/dt = u Psi
  Logistic,         // dXi/dt = u Psi (L - O) / L
  DownwardBounded,  // dXi/dt = -(Xi - Upp) - u Psi (Xi - Low)
  UpwardBounded,    // dXi/dt = -u Psi (Xi - Upp) - (Xi - Low)
};

std::string_view to_string(UsageVariant variant) noexcept;
UsageVariant parse_usage_variant(std::string_view text);

/// Every scalar the model can be parametrized by.
enum class ParamId { Omega, C, R, F, U, L, Upp, Low };

inline constexpr std::array<ParamId, 8> kAllParams = {
    ParamId::Omega, ParamId::C, ParamId::R,   ParamId::F,
    ParamId::U,     ParamId::L, ParamId::Upp, ParamId::Low};

std::string_view to_string(ParamId id) noexcept;
ParamId parse_param_id(std::string_view text);

struct ParameterSet {
  double omega = 10.0;  // convection speed
  double c = 0.001;     // diffusion speed
  double r = 35.0;      // forward -> backward transfer rate
  double f = 800.0;     // fixation rate
  double u = 125.0;     // usage rate
  std::optional<double> L;
  std::optional<double> upp;
  std::optional<double> low;

  /// Reads a parameter; an unset variant parameter reads as NaN.
  double get(ParamId id) const noexcept;
  void set(ParamId id, double value) noexcept;

  /// Checks sign constraints and the variant-specific requirements.
  /// Throws Error(InvalidArgument).
  void validate(UsageVariant variant) const;

  bool operator==(const ParameterSet&) const = default;
};

/// Population means of the synthetic generator with the fixed diffusion speed.
ParameterSet reference_parameters();

}  // namespace infoflow
