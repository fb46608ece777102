#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpv/bell.hpp"

namespace qpv {

using Json = nlohmann::ordered_json;

/// One timestamped protocol event. `kind` is one of
/// send / deliver / intercept / bsm / announce / verify.
struct TranscriptEvent {
    double t = 0.0;
    std::string actor;
    std::string kind;
    Json payload;
};

/// Per-verifier 2-bit round secrets: `v` is the verifier's own private BSM
/// result, `p` is the prover-side BSM result for that verifier's chain.
/// Accumulated across accepted rounds they form the keys K_V and K_P.
struct RoundKeys {
    TwoBits v;
    TwoBits p;
};

struct Outcome {
    bool accepted = false;
    bool detected_adversary = false;
    double elapsed = 0.0;
    std::optional<std::map<std::string, RoundKeys>> round_keys;
    Json details;   // scheme-specific: announced labels, inferences, branch id
    Json adversary; // strategy report: recovered secrets, observations
};

/// Complete record of one protocol round, sufficient to replay and audit it.
struct Transcript {
    int version = 1;
    std::string scheme;
    std::uint64_t seed = 0;
    std::vector<TranscriptEvent> events;
    Outcome outcome;

    Json to_json() const;
    /// Single-line JSON (the line-delimited log format).
    std::string to_json_line() const;
};

/// How much of a run to record. Monte-Carlo batches keep outcomes only.
enum class RecordLevel { full, outcome_only };

class TranscriptBuilder {
public:
    TranscriptBuilder(std::string scheme, std::uint64_t seed, RecordLevel level)
        : level_(level) {
        t_.scheme = std::move(scheme);
        t_.seed = seed;
    }

    void event(double t, const std::string& actor, const std::string& kind, Json payload) {
        if (level_ == RecordLevel::full)
            t_.events.push_back(TranscriptEvent{t, actor, kind, std::move(payload)});
    }

    Outcome& outcome() { return t_.outcome; }
    Transcript take() { return std::move(t_); }

private:
    Transcript t_;
    RecordLevel level_;
};

} // namespace qpv
