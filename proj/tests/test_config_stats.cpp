#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpv/config.hpp"
#include "qpv/protocols.hpp"
#include "qpv/stats.hpp"

using namespace qpv;

TEST_CASE("config round-trips through json") {
    ScenarioConfig c;
    c.scheme = "b";
    c.d = 2.5;
    c.positions["E0"] = 0.75;
    c.rounds = 12;
    c.trials = 3;
    c.seed = 987654321;
    c.adversary = "entangling-intercept";
    c.tolerance = 1e-9;
    c.challenges = 5;
    c.auth = AuthConfig{2, 6, 8};
    c.expect = "none";
    CHECK(config_from_json(config_to_json(c)) == c);

    // defaults round-trip too
    CHECK(config_from_json(config_to_json(ScenarioConfig{})) == ScenarioConfig{});
}

TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_AS(config_from_json(Json{{"schema", "a"}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(Json{{"auth", Json{{"zp", 1}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(Json{{"rounds", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(Json{{"d", -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(Json{{"tolerance", -2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(Json::array()), std::invalid_argument);
}

TEST_CASE("transcript json carries the version field and the outcome") {
    const WorldLine w = WorldLine::canonical(1.0);
    RunOptions o;
    o.seed = 7;
    const Transcript t = run_scheme_a(w, std::move(o));
    const Json j = t.to_json();
    CHECK(j.at("v").get<int>() == 1);
    CHECK(j.at("scheme").get<std::string>() == "a");
    CHECK(j.at("seed").get<std::uint64_t>() == 7);
    CHECK(j.at("outcome").at("accepted").get<bool>());
    CHECK(j.at("outcome").at("round_keys").contains("V0"));
    CHECK(j.at("events").is_array());
    CHECK_FALSE(j.at("events").empty());
}

TEST_CASE("stats: all-accepted batches, detection counts, per-branch histogram") {
    const WorldLine w = WorldLine::canonical(1.0);
    std::vector<Transcript> batch;
    for (int i = 0; i < 24; ++i) {
        RunOptions o;
        o.seed = derive_seed(5, static_cast<std::uint64_t>(i));
        o.level = RecordLevel::outcome_only;
        batch.push_back(run_scheme_a(w, std::move(o)));
    }
    const BatchStats s = compute_stats(batch);
    CHECK(s.runs == 24);
    CHECK(s.acceptance_rate == 1.0);
    CHECK(s.detection_rate == 0.0);
    CHECK(s.mean_elapsed == doctest::Approx(2.0));
    std::size_t total = 0;
    for (const auto& [branch, count] : s.branch_counts) total += count;
    CHECK(total == 24);
    CHECK_FALSE(s.recovery_rate.has_value()); // no adversary info configured
    CHECK_FALSE(s.mutual_information_bits.has_value());
}

TEST_CASE("stats: empty batch is empty, not a crash") {
    const BatchStats s = compute_stats({});
    CHECK(s.runs == 0);
    CHECK(s.acceptance_rate == 0.0);
}

TEST_CASE("plug-in mutual information estimator") {
    // independent uniform pair: MI near zero
    std::vector<std::pair<int, int>> ind;
    Rng rng(9);
    for (int i = 0; i < 20000; ++i) ind.emplace_back(rng.uniform_int(4), rng.uniform_int(4));
    CHECK(mutual_information_bits(ind, 4, 4) < 0.01);

    // perfectly dependent pair with exactly uniform marginals: 2 bits
    std::vector<std::pair<int, int>> dep;
    for (int i = 0; i < 20000; ++i) dep.emplace_back(i % 4, i % 4);
    CHECK(mutual_information_bits(dep, 4, 4) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("replaying a config yields byte-identical transcript streams") {
    const WorldLine w = WorldLine::canonical(1.0);
    const auto stream = [&](std::uint64_t seed) {
        std::string lines;
        for (int r = 0; r < 20; ++r) {
            RunOptions o;
            o.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
            o.adversary = r % 2 ? make_strategy("entangling-intercept") : nullptr;
            lines += run_scheme_b(w, std::move(o)).to_json_line();
            lines += "\n";
        }
        return lines;
    };
    CHECK(stream(31337) == stream(31337));
    CHECK(stream(31337) != stream(31338));
}
