#pragma once

#include <numbers>
#include <span>
#include <string_view>

namespace spinvault {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class FrequencyMode { OrdinaryHz, AngularRadPerS };

std::string_view to_string(FrequencyMode mode) noexcept;

constexpr double to_angular(double ordinary_hz) noexcept {
  return kTwoPi * ordinary_hz;
}
constexpr double to_ordinary(double angular) noexcept {
  return angular / kTwoPi;
}

/// How a formula family consumes the stored (ordinary Hz) rates.
///
/// `OrdinaryHz` means the stored number is used as-is; `AngularRadPerS` means
/// the formula multiplies the stored value by 2*pi before use.
struct FormulaConvention {
  std::string_view family;
  FrequencyMode mode;
  std::string_view note;
};

std::span<const FormulaConvention> convention_table() noexcept;

/// Throws std::out_of_range for an unknown family name.
const FormulaConvention& convention_for(std::string_view family);

enum class EchoConvention {
  AngularSeparation,   // rephasing time 2*pi/(2*pi*Delta) = 1/Delta
  LiteralOrdinary,     // rephasing time 2*pi/Delta with Delta in Hz
};

std::string_view to_string(EchoConvention c) noexcept;
EchoConvention echo_convention_from_string(std::string_view s);

}  // namespace spinvault
