#include "spinvault/core/params.hpp"

#include <string>

#include "spinvault/core/error.hpp"

namespace spinvault {

namespace {

[[noreturn]] void bad_enum(std::string_view what, std::string_view s) {
  throw Error(Errc::InvalidParameter,
              "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(WallBoundary b) noexcept {
  return b == WallBoundary::Destructive ? "destructive" : "non-destructive";
}

WallBoundary wall_boundary_from_string(std::string_view s) {
  if (s == "destructive" || s == "dirichlet") return WallBoundary::Destructive;
  if (s == "non-destructive" || s == "neumann")
    return WallBoundary::NonDestructive;
  bad_enum("wall boundary", s);
}

std::string_view to_string(PulseKind k) noexcept {
  switch (k) {
    case PulseKind::SquarePi: return "square";
    case PulseKind::ChirpedSech: return "sech";
    case PulseKind::HSH: return "hsh";
  }
  return "unknown";
}

PulseKind pulse_kind_from_string(std::string_view s) {
  if (s == "square" || s == "square-pi") return PulseKind::SquarePi;
  if (s == "sech" || s == "chirped-sech") return PulseKind::ChirpedSech;
  if (s == "hsh") return PulseKind::HSH;
  bad_enum("pulse shape", s);
}

std::string_view to_string(TransferExponent e) noexcept {
  return e == TransferExponent::Literal ? "literal" : "total-efficiency";
}

TransferExponent transfer_exponent_from_string(std::string_view s) {
  if (s == "literal") return TransferExponent::Literal;
  if (s == "total-efficiency") return TransferExponent::TotalEfficiency;
  bad_enum("transfer exponent", s);
}

std::string_view to_string(TransferSource s) noexcept {
  return s == TransferSource::Analytic ? "analytic" : "numeric";
}

TransferSource transfer_source_from_string(std::string_view s) {
  if (s == "analytic") return TransferSource::Analytic;
  if (s == "numeric") return TransferSource::Numeric;
  bad_enum("transfer source", s);
}

}  // namespace spinvault
