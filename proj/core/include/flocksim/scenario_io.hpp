#pragma once

#include <filesystem>

#include "flocksim/engine.hpp"

namespace flocksim {

/// Parses a sectioned key/value scenario file into a fully validated
/// Scenario.  Sections: [plant], [leader], [potential], [controller],
/// [integration], [output].  Physical quantities carry explicit unit
/// suffixes (m, km, s, min, kg, m/s, km/s, m/s^2, m^3/s^2, km^3/s^2, N);
/// gains are dimensionless and take no suffix.
///
/// Throws ParseError (with line number) for syntax problems and
/// ConfigError (naming the key path) for unknown keys, missing keys, unit
/// mismatches, and invalid values.
Scenario parse_scenario(const std::filesystem::path& path);

/// Bundled spacecraft formation cases (1, 2, 3), identical to the shipped
/// scenario files: four spacecraft of 35..50 kg about a 7000 km circular
/// reference orbit, R = 200 m, dbar = 80 m, dt = 0.01 s, 300 s horizon.
///   1: constant-velocity leader, continuous law (gamma = 0.04)
///   2: sinusoidal leader, fixed-gain discontinuous law (alpha = 0.04, tanh)
///   3: sinusoidal leader, fully distributed law (gamma1 = gamma2 = 0.003)
Scenario spacecraft_case(int which);

}  // namespace flocksim
