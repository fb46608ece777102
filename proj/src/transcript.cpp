#include "qpv/transcript.hpp"

namespace qpv {

Json Transcript::to_json() const {
    Json j;
    j["v"] = version;
    j["scheme"] = scheme;
    j["seed"] = seed;
    Json evs = Json::array();
    for (const TranscriptEvent& e : events) {
        Json je;
        je["t"] = e.t;
        je["actor"] = e.actor;
        je["kind"] = e.kind;
        je["payload"] = e.payload;
        evs.push_back(std::move(je));
    }
    j["events"] = std::move(evs);
    Json out;
    out["accepted"] = outcome.accepted;
    out["detected_adversary"] = outcome.detected_adversary;
    out["elapsed"] = outcome.elapsed;
    if (outcome.round_keys) {
        Json rk;
        for (const auto& [verifier, keys] : *outcome.round_keys) {
            rk[verifier] = Json{{"v", keys.v.str()}, {"p", keys.p.str()}};
        }
        out["round_keys"] = std::move(rk);
    }
    if (!outcome.details.is_null()) out["details"] = outcome.details;
    if (!outcome.adversary.is_null()) out["adversary"] = outcome.adversary;
    j["outcome"] = std::move(out);
    return j;
}

std::string Transcript::to_json_line() const { return to_json().dump(); }

} // namespace qpv
