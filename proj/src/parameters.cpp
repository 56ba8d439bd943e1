#include "infoflow/parameters.hpp"

#include <cmath>
#include <limits>

#include "infoflow/error.hpp"

namespace infoflow {

std::string_view to_string(UsageVariant variant) noexcept {
  switch (variant) {
    case UsageVariant::Accumulative: return "accumulative";
    case UsageVariant::Logistic: return "logistic";
    case UsageVariant::DownwardBounded: return "downward_bounded";
    case UsageVariant::UpwardBounded: return "upward_bounded";
  }
  return "accumulative";
}

UsageVariant parse_usage_variant(std::string_view text) {
  if (text == "accumulative") return UsageVariant::Accumulative;
  if (text == "logistic") return UsageVariant::Logistic;
  if (text == "downward_bounded") return UsageVariant::DownwardBounded;
  if (text == "upward_bounded") return UsageVariant::UpwardBounded;
  fail(ErrorCode::InvalidArgument, "unknown usage variant '" + std::string(text) + "'");
}

std::string_view to_string(ParamId id) noexcept {
  switch (id) {
    case ParamId::Omega: return "omega";
    case ParamId::C: return "c";
    case ParamId::R: return "r";
    case ParamId::F: return "f";
    case ParamId::U: return "u";
    case ParamId::L: return "L";
    case ParamId::Upp: return "Upp";
    case ParamId::Low: return "Low";
  }
  return "omega";
}

ParamId parse_param_id(std::string_view text) {
  for (ParamId id : kAllParams) {
    if (to_string(id) == text) return id;
  }
  fail(ErrorCode::InvalidArgument, "unknown parameter '" + std::string(text) + "'");
}

double ParameterSet::get(ParamId id) const noexcept {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  switch (id) {
    case ParamId::Omega: return omega;
    case ParamId::C: return c;
    case ParamId::R: return r;
    case ParamId::F: return f;
    case ParamId::U: return u;
    case ParamId::L: return L.value_or(nan);
    case ParamId::Upp: return upp.value_or(nan);
    case ParamId::Low: return low.value_or(nan);
  }
  return nan;
}

void ParameterSet::set(ParamId id, double value) noexcept {
  switch (id) {
    case ParamId::Omega: omega = value; break;
    case ParamId::C: c = value; break;
    case ParamId::R: r = value; break;
    case ParamId::F: f = value; break;
    case ParamId::U: u = value; break;
    case ParamId::L: L = value; break;
    case ParamId::Upp: upp = value; break;
    case ParamId::Low: low = value; break;
  }
}

void ParameterSet::validate(UsageVariant variant) const {
  const std::pair<const char*, double> core[] = {
      {"omega", omega}, {"c", c}, {"r", r}, {"f", f}, {"u", u}};
  for (const auto& [name, value] : core) {
    if (!std::isfinite(value) || value < 0.0) {
      fail(ErrorCode::InvalidArgument,
           std::string("parameter ") + name + " must be finite and >= 0");
    }
  }
  switch (variant) {
    case UsageVariant::Accumulative:
      break;
    case UsageVariant::Logistic:
      if (!L || !std::isfinite(*L) || *L <= 0.0) {
        fail(ErrorCode::InvalidArgument, "logistic usage requires L > 0");
      }
      break;
    case UsageVariant::DownwardBounded:
    case UsageVariant::UpwardBounded:
      if (!upp || !low || !std::isfinite(*upp) || !std::isfinite(*low) || !(*upp > *low)) {
        fail(ErrorCode::InvalidArgument, "bounded usage requires Upp > Low");
      }
      break;
  }
}

ParameterSet reference_parameters() { return ParameterSet{}; }

}  // namespace infoflow
