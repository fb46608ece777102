#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qpv/transcript.hpp"

namespace qpv {

/// Authentication follow-up parameters. length 0 means "derive from the
/// accumulated key" (2 bits per accepted round, capped at 16 qubits).
struct AuthConfig {
    int z_p = 3;
    int z_v = 4;
    int length = 0;

    bool operator==(const AuthConfig&) const = default;
};

/// One scenario: which scheme, where everyone stands, how many rounds and
/// trials, and under which adversary. Every field has a default; unknown
/// config keys are rejected.
struct ScenarioConfig {
    std::string scheme;                      // required before running
    double d = 1.0;                          // light-seconds
    std::map<std::string, double> positions; // optional per-party overrides
    int rounds = 1;                          // rounds per trial (key length 2N)
    int trials = 1;                          // independent Monte-Carlo trials
    std::uint64_t seed = 1;
    std::string adversary = "none";
    double tolerance = 1e-6;
    int challenges = 8;                      // scheme i only
    AuthConfig auth;
    std::string expect = "auto";             // auto | accept | spoof | none

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses a config object, rejecting unknown keys (std::invalid_argument).
ScenarioConfig config_from_json(const Json& j);
Json config_to_json(const ScenarioConfig& c);

} // namespace qpv
