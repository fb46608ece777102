#include "qpv/config.hpp"

#include <set>
#include <stdexcept>

namespace qpv {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

} // namespace

ScenarioConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    reject_unknown(j,
                   {"scheme", "d", "positions", "rounds", "trials", "seed", "adversary",
                    "tolerance", "challenges", "auth", "expect"},
                   "top level");
    ScenarioConfig c;
    if (j.contains("scheme")) c.scheme = j.at("scheme").get<std::string>();
    if (j.contains("d")) c.d = j.at("d").get<double>();
    if (j.contains("positions")) {
        for (auto it = j.at("positions").begin(); it != j.at("positions").end(); ++it)
            c.positions[it.key()] = it.value().get<double>();
    }
    if (j.contains("rounds")) c.rounds = j.at("rounds").get<int>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("adversary")) c.adversary = j.at("adversary").get<std::string>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("challenges")) c.challenges = j.at("challenges").get<int>();
    if (j.contains("auth")) {
        const Json& a = j.at("auth");
        reject_unknown(a, {"z_p", "z_v", "length"}, "auth");
        if (a.contains("z_p")) c.auth.z_p = a.at("z_p").get<int>();
        if (a.contains("z_v")) c.auth.z_v = a.at("z_v").get<int>();
        if (a.contains("length")) c.auth.length = a.at("length").get<int>();
    }
    if (j.contains("expect")) c.expect = j.at("expect").get<std::string>();

    if (c.rounds < 1 || c.trials < 1)
        throw std::invalid_argument("config: rounds and trials must be positive");
    if (c.tolerance < 0) throw std::invalid_argument("config: tolerance must be nonnegative");
    if (!(c.d > 0)) throw std::invalid_argument("config: d must be positive");
    return c;
}

Json config_to_json(const ScenarioConfig& c) {
    Json j;
    j["scheme"] = c.scheme;
    j["d"] = c.d;
    if (!c.positions.empty()) {
        Json p;
        for (const auto& [k, v] : c.positions) p[k] = v;
        j["positions"] = p;
    }
    j["rounds"] = c.rounds;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["adversary"] = c.adversary;
    j["tolerance"] = c.tolerance;
    j["challenges"] = c.challenges;
    j["auth"] = Json{{"z_p", c.auth.z_p}, {"z_v", c.auth.z_v}, {"length", c.auth.length}};
    j["expect"] = c.expect;
    return j;
}

} // namespace qpv
