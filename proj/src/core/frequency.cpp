#include "spinvault/core/frequency.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "spinvault/core/error.hpp"

namespace spinvault {

std::string_view to_string(FrequencyMode mode) noexcept {
  switch (mode) {
    case FrequencyMode::OrdinaryHz:
      return "ordinary-Hz";
    case FrequencyMode::AngularRadPerS:
      return "angular-rad-per-s";
  }
  return "unknown";
}

std::string_view to_string(EchoConvention c) noexcept {
  switch (c) {
    case EchoConvention::AngularSeparation:
      return "angular-separation";
    case EchoConvention::LiteralOrdinary:
      return "literal-ordinary";
  }
  return "unknown";
}

EchoConvention echo_convention_from_string(std::string_view s) {
  if (s == "angular-separation") return EchoConvention::AngularSeparation;
  if (s == "literal-ordinary") return EchoConvention::LiteralOrdinary;
  throw Error(Errc::InvalidParameter,
              "unknown echo convention '" + std::string(s) + "'");
}

namespace {

constexpr std::array kTable{
    FormulaConvention{"cavity", FrequencyMode::OrdinaryHz,
                      "kappa, Z, G enter reflection and cooperativity as ratios"},
    FormulaConvention{"comb", FrequencyMode::OrdinaryHz,
                      "finesse and capacity are ratios of comb widths"},
    FormulaConvention{"echo", FrequencyMode::AngularRadPerS,
                      "rephasing time 2pi/Delta with Delta angular; literal "
                      "option keeps Delta in Hz"},
    FormulaConvention{"optical-transfer", FrequencyMode::OrdinaryHz,
                      "Omega, Gamma, chirp and detunings enter the two-level "
                      "equations and the transfer exponent unscaled"},
    FormulaConvention{"optical-dephasing", FrequencyMode::AngularRadPerS,
                      "gamma_p is quoted as linewidth x 2pi"},
    FormulaConvention{"spin-exchange", FrequencyMode::OrdinaryHz,
                      "J, gamma_s, gamma_k, delta_s, delta_k enter the spin "
                      "equations and T' = (pi J - gamma_s)/(2 J^2) unscaled"},
    FormulaConvention{"repeater", FrequencyMode::OrdinaryHz,
                      "interface delay pi/(2J) uses J unscaled"},
};

}  // namespace

std::span<const FormulaConvention> convention_table() noexcept {
  return kTable;
}

const FormulaConvention& convention_for(std::string_view family) {
  for (const auto& entry : kTable) {
    if (entry.family == family) return entry;
  }
  throw std::out_of_range("no frequency convention for family '" +
                          std::string(family) + "'");
}

}  // namespace spinvault
