#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "cavfermi/config.hpp"

namespace cavfermi {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int { exit_ok = 0, exit_numerical = 1, exit_config = 2 };

struct RunResult {
  int exit_code = exit_ok;
  std::string csv;      ///< full artifact, header block included
  std::string message;  ///< first numerical failure, empty on success
};

/// Computes the artifact for a validated config. Never throws for numerical
/// trouble: failed points become flagged rows and exit_numerical.
RunResult run(const RunConfig& config);

struct CliRequest {
  Mode mode = Mode::steady;
  std::string config_path;
  std::optional<std::string> out_path;  ///< overrides config.output
  std::optional<std::uint64_t> seed;    ///< overrides config.seed
};

/// Reads and validates the config, checks the output is writable, runs, and
/// writes the CSV (stdout when no path is set). Diagnostics go to `err`.
int run_cli(const CliRequest& request, std::ostream& out, std::ostream& err);

}  // namespace cavfermi
