#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinvault/core/error.hpp"

namespace spinvault::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;    // missing or invalid configuration
inline constexpr int kExitCompute = 3;  // computation failed

/// Everything that determines a run's outputs.
struct RunManifest {
  std::string scenario_path;  // empty: built-in canonical scenario
  std::string subcommand;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> arguments;
  std::vector<std::string> outputs;
  std::string format;

  nlohmann::json to_json() const;
};

int exit_code_for(Errc code) noexcept;

/// Parses argv, runs the subcommand and writes its artifacts. Results go to
/// `out` unless --out names a file, in which case a manifest copy is written
/// next to it as <file>.manifest.json.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinvault::cli
