#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spinvault/core/error.hpp"
#include "spinvault/core/params.hpp"

namespace spinvault {

inline constexpr int kSchemaVersion = 1;

/// Full parameter bundle for one run.
struct Scenario {
  int schema_version = kSchemaVersion;
  CombParams comb;
  EnsembleParams ensemble;
  CavityParams cavity;
  CellGeometry cell;
  PulseSpec pulse;
  RepeaterParams repeater;
  ProtocolParams protocol;
};

/// Hot K / 3He configuration: 1 cm uncoated spherical cell at vapor pressure,
/// N2 quench gas, 8-finesse comb across the pressure-broadened D1 line.
Scenario canonical_scenario();

enum class Severity { Error, Warning };

struct Issue {
  Errc code;
  std::string field;
  std::string message;
  Severity severity = Severity::Error;
};

/// Every violated invariant, errors and warnings alike. Empty means clean.
std::vector<Issue> check(const Scenario& s);

/// Returns `s` unchanged when no error-severity issue exists, otherwise throws
/// Error(ValidationFailed) listing every error.
const Scenario& validate(const Scenario& s);

bool has_errors(const std::vector<Issue>& issues) noexcept;

nlohmann::json to_json(const Scenario& s);

/// Raw field-by-field load. Missing keys keep the canonical values; a missing
/// or mismatched schema_version is rejected.
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Dotted field paths, e.g. "comb.finesse" or "ensemble.J".
std::vector<std::string> field_paths();

nlohmann::json get_field(const Scenario& s, std::string_view path);

/// Override one field from its textual form. Coupled comb fields stay
/// consistent: setting finesse or peak_separation recomputes peak_width,
/// setting peak_width recomputes finesse.
void set_field(Scenario& s, std::string_view path, std::string_view value);

}  // namespace spinvault
