#include "spinvault/core/error.hpp"

namespace spinvault {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeRate: return "NegativeRate";
    case Errc::PolarizationOutOfRange: return "PolarizationOutOfRange";
    case Errc::FinesseMismatch: return "FinesseMismatch";
    case Errc::HierarchyViolation: return "HierarchyViolation";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::NonPositiveKappa: return "NonPositiveKappa";
    case Errc::FinesseTooSmall: return "FinesseTooSmall";
    case Errc::OverdampedExchange: return "OverdampedExchange";
    case Errc::OutOfWindow: return "OutOfWindow";
    case Errc::IntegratorFailure: return "IntegratorFailure";
    case Errc::StiffnessBailout: return "StiffnessBailout";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::DegenerateLink: return "DegenerateLink";
    case Errc::NoCrossover: return "NoCrossover";
    case Errc::NeverReachable: return "NeverReachable";
    case Errc::ConfigNotFound: return "ConfigNotFound";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::ComputeFailed: return "ComputeFailed";
    case Errc::UnknownField: return "UnknownField";
    case Errc::EmptyGrid: return "EmptyGrid";
  }
  return "Unknown";
}

}  // namespace spinvault
