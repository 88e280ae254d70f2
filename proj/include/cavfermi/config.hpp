#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cavfermi/dynamics.hpp"
#include "cavfermi/params.hpp"
#include "cavfermi/steadystate.hpp"

namespace cavfermi {

enum class Mode { coeffs, steady, sweep_atoms, sweep_pump, dynamics, basins, stability_check };

std::string_view to_string(Mode mode);
/// Throws ConfigError for an unknown name.
Mode parse_mode(std::string_view name);

/// Invalid run configuration. key() names the offending entry (dotted path).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& constraint)
      : std::runtime_error(key + ": " + constraint), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct HysteresisSweep {
  double n0_low = 1.2;
  double n0_high = 50.0;
  bool operator==(const HysteresisSweep&) const = default;
};

struct RunConfig {
  Mode mode = Mode::steady;
  SystemParams params{};
  SolverOptions solver{};
  bool classify = true;
  StabilityOptions stability{};
  DynamicsOptions integrator{};  // also copied into stability.dynamics
  std::uint64_t seed = 0;
  std::string output;
  int threads = 0;

  // Mode blocks; only the one matching `mode` is populated.
  std::vector<double> y_list;                 // coeffs
  std::vector<int> n_list;                    // sweep-atoms
  std::vector<double> eta_list;               // sweep-pump
  std::optional<HysteresisSweep> hysteresis;   // sweep-pump, optional
  double n0 = 0.0;                            // dynamics
  std::vector<double> n0_list;                // basins
  int trials = 1000;                          // stability-check
  std::optional<double> n_photons;            // stability-check; default: top valid branch

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON run document. Unknown keys are errors.
/// If `cli_mode` is given it selects the mode; a "mode" entry in the document
/// must then agree with it.
RunConfig parse_config(std::string_view text, std::optional<Mode> cli_mode = std::nullopt);

/// Canonical JSON for a config: every default spelled out, lists expanded.
/// parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config, int indent = -1);

}  // namespace cavfermi
