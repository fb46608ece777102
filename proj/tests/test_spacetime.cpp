#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpv/rng.hpp"
#include "qpv/spacetime.hpp"

using namespace qpv;

namespace {
struct Rig {
    WorldLine world = WorldLine::canonical(1.0);
    TranscriptBuilder log{"rig", 0, RecordLevel::full};
    Scheduler sched;
    Network net{world, sched, log};
};
} // namespace

TEST_CASE("transit times are pure 1-D geometry at c = 1") {
    const WorldLine w = WorldLine::canonical(1.0);
    CHECK(w.transit_time("V0", "P") == doctest::Approx(1.0));
    CHECK(w.transit_time("V0", "P") + w.transit_time("P", "V0") == doctest::Approx(2.0));
    CHECK(w.transit_time("V0", "V1") == doctest::Approx(2.0));
    CHECK(w.transit_time("P", "V0") == w.transit_time("V0", "P"));
    CHECK_THROWS_AS(w.transit_time("V0", "nobody"), std::invalid_argument);

    WorldLine bad = w;
    bad.positions["P"] = 5.0; // outside the verifier segment
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("verify_timing is a symmetric window test") {
    CHECK(verify_timing(2.0, 2.0, 1e-6));
    CHECK_FALSE(verify_timing(2.0, 2.5, 1e-6)); // responder farther than claimed
    CHECK_FALSE(verify_timing(2.0, 1.5, 1e-6)); // or suspiciously close
    CHECK(verify_timing(2.0, 2.0 + 5e-7, 1e-6));
    CHECK_THROWS_AS(verify_timing(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("untapped sends deliver exactly one transit time later") {
    Rig rig;
    double delivered_at = -1.0;
    rig.net.on_deliver("P", [&](const Delivery& d) { delivered_at = d.at; });
    rig.net.send("V0", "P", Payload{"bit", Json{{"v", 1}}, {}}, 0.25);
    rig.sched.run();
    CHECK(delivered_at == doctest::Approx(0.25 + 1.0));
}

TEST_CASE("causality: random sends always deliver after one transit time") {
    Rig rig;
    Rng rng(5);
    std::vector<std::pair<double, double>> sent_vs_arrived;
    for (const char* to : {"P", "V1"}) {
        rig.net.on_deliver(to, [&](const Delivery& d) {
            sent_vs_arrived.emplace_back(d.sent_at, d.at);
        });
    }
    for (int i = 0; i < 40; ++i) {
        const bool to_p = rng.bit();
        rig.net.send("V0", to_p ? "P" : "V1", Payload{"bit", {}, {}}, rng.uniform() * 10.0);
    }
    rig.sched.run();
    REQUIRE(sent_vs_arrived.size() == 40);
    for (const auto& [sent, arrived] : sent_vs_arrived) CHECK(arrived >= sent + 1.0 - 1e-12);
}

TEST_CASE("a tap fires at the tap coordinate and substitution keeps the schedule") {
    Rig rig;
    double intercept_at = -1.0, delivered_at = -1.0;
    std::string delivered_kind;
    rig.net.add_tap("V0", "P", "E0", [&](const InterceptContext& ctx) {
        intercept_at = ctx.at;
        Payload swapped = ctx.payload;
        swapped.kind = "substituted";
        return TapAction::replace(std::move(swapped));
    });
    rig.net.on_deliver("P", [&](const Delivery& d) {
        delivered_at = d.at;
        delivered_kind = d.payload.kind;
    });
    rig.net.send("V0", "P", Payload{"qubit", {}, {7}}, 0.0);
    rig.sched.run();
    CHECK(intercept_at == doctest::Approx(0.5));  // E0 sits midway
    CHECK(delivered_at == doctest::Approx(1.0));  // timing indistinguishable
    CHECK(delivered_kind == "substituted");
}

TEST_CASE("a jammed payload is never delivered") {
    Rig rig;
    bool delivered = false;
    rig.net.add_tap("V0", "P", "E0", [](const InterceptContext&) { return TapAction::jam(); });
    rig.net.on_deliver("P", [&](const Delivery&) { delivered = true; });
    rig.net.send("V0", "P", Payload{"bit", {}, {}}, 0.0);
    rig.sched.run();
    CHECK_FALSE(delivered);
}

TEST_CASE("taps are directional") {
    Rig rig;
    int intercepts = 0;
    rig.net.add_tap("V0", "P", "E0", [&](const InterceptContext&) {
        ++intercepts;
        return TapAction::forward();
    });
    rig.net.on_deliver("P", [](const Delivery&) {});
    rig.net.on_deliver("V0", [](const Delivery&) {});
    rig.net.send("V0", "P", Payload{"bit", {}, {}}, 0.0);
    rig.net.send("P", "V0", Payload{"bit", {}, {}}, 0.0);
    rig.sched.run();
    CHECK(intercepts == 1);

    // tap coordinate must lie strictly between the endpoints
    CHECK_THROWS_AS(rig.net.add_tap("V1", "P", "E0", [](const InterceptContext&) {
        return TapAction::forward();
    }), std::invalid_argument);
}

TEST_CASE("scheduler is deterministic and breaks time ties stably") {
    // two messages sent at the same instant arrive in send order, and a
    // forwarding tap on one of them does not change that order
    const auto run_once = [](bool tapped) {
        Rig rig;
        std::vector<std::string> order;
        if (tapped)
            rig.net.add_tap("V0", "P", "E0",
                            [](const InterceptContext&) { return TapAction::forward(); });
        rig.net.on_deliver("P", [&](const Delivery& d) {
            order.push_back(d.payload.data.at("tag").get<std::string>());
        });
        rig.net.send("V0", "P", Payload{"bit", Json{{"tag", "first"}}, {}}, 0.0);
        rig.net.send("V1", "P", Payload{"bit", Json{{"tag", "second"}}, {}}, 0.0);
        rig.sched.run();
        return order;
    };
    const auto plain = run_once(false);
    REQUIRE(plain.size() == 2);
    CHECK(plain[0] == "first");
    CHECK(plain[1] == "second");
    CHECK(run_once(true) == plain);
}

TEST_CASE("forward-only taps leave the event log unchanged except intercepts") {
    const auto run_once = [](bool tapped) {
        Rig rig;
        rig.net.on_deliver("P", [&rig](const Delivery& d) {
            if (d.payload.kind == "ping")
                rig.net.send("P", "V0", Payload{"pong", {}, {}}, d.at);
        });
        rig.net.on_deliver("V0", [](const Delivery&) {});
        if (tapped) {
            rig.net.add_tap("V0", "P", "E0",
                            [](const InterceptContext&) { return TapAction::forward(); });
            rig.net.add_tap("P", "V0", "E0",
                            [](const InterceptContext&) { return TapAction::forward(); });
        }
        rig.net.send("V0", "P", Payload{"ping", {}, {}}, 0.0);
        rig.sched.run();
        Transcript t = rig.log.take();
        Json evs = Json::array();
        for (const TranscriptEvent& e : t.events) {
            if (e.kind == "intercept") continue;
            evs.push_back(Json{{"t", e.t}, {"actor", e.actor}, {"kind", e.kind},
                               {"payload", e.payload}});
        }
        return evs;
    };
    CHECK(run_once(false) == run_once(true));
}
