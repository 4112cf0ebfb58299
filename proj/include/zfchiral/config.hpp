#pragma once

// Experiment configuration: a small INI-style format.
//
//   # comment
//   scenario = enantiomer-pair
//   [coupling]
//   j0 = 100
//   j1bar = 1
//
// Sections: spin_system, coupling, orientation, acquisition, pulse, output.
// Keys outside any section: scenario, seed. Unknown sections or keys are
// rejected. Angles accept a trailing "pi" (e.g. 3.977pi).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zfchiral/coupling.hpp"
#include "zfchiral/dynamics.hpp"

namespace zfchiral {

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"enantiomer-pair", "enantiomer-R", "enantiomer-L",
                                                 "racemic",         "field-reversal", "achiral-control"};
  return names;
}

struct PulseConfig {
  bool ideal = false;  // ideal_inverted_state instead of a rotation
  Axis axis = Axis::x;
  double theta1 = constants::pi;
  double theta2 = 3.977 * constants::pi;
};

struct AcquisitionConfig {
  double dt = 0.002;
  std::size_t n = 16384;
  double t2eff = 2.0;
  double detector_tilt = 0.0;  // rad; rotates the x detector toward y
  double prepolarization_field = 2.0;         // T
  double prepolarization_temperature = 300.0;  // K
  double fit_half_width = 2.0;                 // Hz
};

struct OutputConfig {
  std::string directory = ".";
  std::string prefix;  // defaults to the scenario name
};

struct ExperimentConfig {
  SpinPair spins;
  std::optional<CartesianJ> cartesian;  // exactly one of cartesian / zf
  std::optional<ZFParams> zf;
  OrientationConditions orientation;
  std::optional<double> order_parameter;  // overrides the value derived from orientation
  double dipolar_sign = 1.0;
  double kappa = kDefaultKappa;
  AcquisitionConfig acquisition;
  PulseConfig pulse;
  std::string scenario = "enantiomer-pair";
  OutputConfig output;
  std::uint64_t seed = 0;  // reserved

  void validate() const;
  /// Effective couplings: direct ZF values, or the Cartesian tensor averaged
  /// with the order parameter.
  ZFParams resolved_params() const;
  double resolved_order_parameter() const;
  std::string output_prefix() const { return output.prefix.empty() ? scenario : output.prefix; }
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Apply "section.key=value" overrides (from CLI flags) with the same rules.
void apply_override(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value);

}  // namespace zfchiral
