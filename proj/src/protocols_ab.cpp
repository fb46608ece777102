#include "protocols_common.hpp"

namespace qpv {

// ---------------------------------------------------------------------------
// Scheme A: all entanglement is pre-shared, nothing quantum flies until the
// keyed messages. Private BSMs at both verifiers, two public announcements,
// then each verifier already knows the 2-bit key P will extract from his own
// BSMs; messages ride on conjugate-coded qubits and must echo back intact
// within 2d/c.
//
// Inventory: V0 holds 1,2,3,4; P holds 5,6,7,8; V1 holds 9,10,11,12.
// Pairs (2,5)=(3,7)=01 V0-P, (1,9)=(4,12)=11 V0-V1, (6,10)=(8,11)=01 V1-P.
// ---------------------------------------------------------------------------

Transcript run_scheme_a(const WorldLine& world, RunOptions opts) {
    Env env(Scheme::a, world, std::move(opts));
    const double d = env.dist("V0", "P");

    struct State {
        BellLabel mv0, mv1;           // private results, step 2
        BellLabel a0, a1;             // public announcements, step 3
        bool a0_at_v1 = false, a1_at_v0 = false;
        TwoBits key0, key1;           // keys the verifiers expect
        TwoBits msg0, msg1;
        BellLabel kp0, kp1;           // keys P measures
        TwoBits p_dec0, p_dec1;
        bool p_done = false;
        int msgs_at_p = 0;
        TwoBits echo0, echo1;
        double echo_at_v0 = -1.0, echo_at_v1 = -1.0;
    };
    auto st = std::make_shared<State>();

    const BellLabel l25(0, 1), l37(0, 1), l19(1, 1), l412(1, 1), l610(0, 1), l811(0, 1);
    env.q.add_bell_pair(2, 5, l25, "V0", "P");
    env.q.add_bell_pair(3, 7, l37, "V0", "P");
    env.q.add_bell_pair(1, 9, l19, "V0", "V1");
    env.q.add_bell_pair(4, 12, l412, "V0", "V1");
    env.q.add_bell_pair(6, 10, l610, "P", "V1");
    env.q.add_bell_pair(8, 11, l811, "P", "V1");

    st->msg0 = env.two_bits("msg(V0)");
    st->msg1 = env.two_bits("msg(V1)");

    // step 2: private swaps
    env.sched.post(-3.0 * d, [&env, st, d]() {
        st->mv0 = env.q.bsm("V0", bsm_site(1, 2), 1, 2, -3.0 * d);
        st->mv1 = env.q.bsm("V1", bsm_site(11, 12), 11, 12, -3.0 * d);
    });

    // step 3: public swaps, results broadcast
    env.sched.post(-2.0 * d, [&env, st, d]() {
        st->a0 = env.q.bsm("V0", bsm_site(3, 4), 3, 4, -2.0 * d);
        env.log.event(-2.0 * d, "V0", "announce", Json{{"label", st->a0.str()}});
        env.net.send("V0", "V1", classical_payload("public(V0)", Json{{"label", st->a0.str()}}),
                     -2.0 * d);
        env.net.send("V0", "P", classical_payload("public(V0)", Json{{"label", st->a0.str()}}),
                     -2.0 * d);
        st->a1 = env.q.bsm("V1", bsm_site(9, 10), 9, 10, -2.0 * d);
        env.log.event(-2.0 * d, "V1", "announce", Json{{"label", st->a1.str()}});
        env.net.send("V1", "V0", classical_payload("public(V1)", Json{{"label", st->a1.str()}}),
                     -2.0 * d);
        env.net.send("V1", "P", classical_payload("public(V1)", Json{{"label", st->a1.str()}}),
                     -2.0 * d);
    });

    // step 4 at t=0: keyed messages toward P
    env.net.on_deliver("V0", [&env, st, l25, l19, l610](const Delivery& del) {
        if (del.payload.kind == "public(V1)") {
            st->a1_at_v0 = true;
            const BellLabel a1 = *BellLabel::parse(del.payload.data.at("label").get<std::string>());
            // V0's private residual (5,9), then the (5,6) endpoint P will read
            const BellLabel l59 = chain_label(std::array{l19, l25}, std::array{st->mv0});
            st->key0 = chain_label(std::array{l59, l610}, std::array{a1});
            env.sched.post(0.0, [&env, st]() {
                encode_keyed_message(env.q, "V0", 101, 102, st->msg0, st->key0);
                env.net.send("V0", "P",
                             qubit_payload("keyed", {101, 102}, Json{{"verifier", "V0"}}), 0.0);
            });
            return;
        }
        if (del.payload.kind == "echo") {
            env.take_qubits(del);
            st->echo0 = decode_keyed_message(env.q, "V0", "decode(V0)",
                                             del.payload.qubits.at(0), del.payload.qubits.at(1),
                                             st->key0);
            st->echo_at_v0 = del.at;
        }
    });

    env.net.on_deliver("V1", [&env, st, l37, l412, l811](const Delivery& del) {
        if (del.payload.kind == "public(V0)") {
            st->a0_at_v1 = true;
            const BellLabel a0 = *BellLabel::parse(del.payload.data.at("label").get<std::string>());
            const BellLabel l48 = chain_label(std::array{l412, l811}, std::array{st->mv1});
            st->key1 = chain_label(std::array{l37, l48}, std::array{a0});
            env.sched.post(0.0, [&env, st]() {
                encode_keyed_message(env.q, "V1", 103, 104, st->msg1, st->key1);
                env.net.send("V1", "P",
                             qubit_payload("keyed", {103, 104}, Json{{"verifier", "V1"}}), 0.0);
            });
            return;
        }
        if (del.payload.kind == "echo") {
            env.take_qubits(del);
            st->echo1 = decode_keyed_message(env.q, "V1", "decode(V1)",
                                             del.payload.qubits.at(0), del.payload.qubits.at(1),
                                             st->key1);
            st->echo_at_v1 = del.at;
        }
    });

    // step 5: P extracts both keys with his own BSMs and echoes each message
    struct PendingMsg {
        std::string verifier;
        int q0, q1;
    };
    auto pending = std::make_shared<std::vector<PendingMsg>>();
    env.net.on_deliver("P", [&env, st, pending](const Delivery& del) {
        env.take_qubits(del);
        if (del.payload.kind != "keyed") return;
        pending->push_back(PendingMsg{del.payload.data.at("verifier").get<std::string>(),
                                      del.payload.qubits.at(0), del.payload.qubits.at(1)});
        if (++st->msgs_at_p < 2) return;
        const double now = env.sched.now();
        st->kp0 = env.q.bsm("P", bsm_site(5, 6), 5, 6, now);
        st->kp1 = env.q.bsm("P", bsm_site(7, 8), 7, 8, now);
        st->p_done = true;
        int next_id = 105;
        for (const PendingMsg& m : *pending) {
            const TwoBits key = m.verifier == "V0" ? TwoBits(st->kp0) : TwoBits(st->kp1);
            const TwoBits dec = decode_keyed_message(env.q, "P", "decode(P," + m.verifier + ")",
                                                     m.q0, m.q1, key);
            (m.verifier == "V0" ? st->p_dec0 : st->p_dec1) = dec;
            const int e0 = next_id++, e1 = next_id++;
            encode_keyed_message(env.q, "P", e0, e1, dec, key);
            env.net.send("P", m.verifier, qubit_payload("echo", {e0, e1}), now);
        }
    });

    env.sched.run();

    Outcome out;
    const double tf = env.sched.now();
    bool ok = true;
    ok &= env.verify(tf, "V0", "echo", st->msg0.str(),
                     st->echo_at_v0 < 0 ? "-" : st->echo0.str(),
                     st->echo_at_v0 >= 0 && st->echo0 == st->msg0);
    ok &= env.verify(tf, "V1", "echo", st->msg1.str(),
                     st->echo_at_v1 < 0 ? "-" : st->echo1.str(),
                     st->echo_at_v1 >= 0 && st->echo1 == st->msg1);
    ok &= env.verify_time(tf, "V0", "round trip", 2.0 * d, st->echo_at_v0);
    ok &= env.verify_time(tf, "V1", "round trip", 2.0 * d, st->echo_at_v1);
    out.accepted = ok;
    out.elapsed = st->echo_at_v0 < 0 ? 0.0 : st->echo_at_v0;
    out.round_keys = std::map<std::string, RoundKeys>{
        {"V0", RoundKeys{st->mv0, st->kp0}}, {"V1", RoundKeys{st->mv1, st->kp1}}};
    out.details =
        Json{{"private", Json{{"V0", st->mv0.str()}, {"V1", st->mv1.str()}}},
             {"announced", Json{{"V0", st->a0.str()}, {"V1", st->a1.str()}}},
             {"keys_expected", Json{{"V0", st->key0.str()}, {"V1", st->key1.str()}}},
             {"keys_measured", st->p_done
                                   ? Json{{"V0", st->kp0.str()}, {"V1", st->kp1.str()}}
                                   : Json(nullptr)},
             {"branch", st->mv0.str() + "," + st->mv1.str() + "," + st->a0.str() + "," +
                            st->a1.str()}};
    return env.finish(std::move(out));
}

// ---------------------------------------------------------------------------
// Scheme B: simultaneous private BSMs collapse two chains whose endpoints
// (1,5) and (7,11) are unknown to everyone; qubits 1 and 11 fly to P, whose
// announced endpoint labels let each side solve for the other's hidden BSM
// result. Position is verified twice: at the announcement round trip and at
// the keyed-message echo.
//
// Inventory: V0 holds 1,2,3; P holds 4..9; V1 holds 10,11,12.
// Pairs (1,2)=(11,12)=11, (3,4)=(9,10)=01, (5,6)=(7,8)=00.
// ---------------------------------------------------------------------------

Transcript run_scheme_b(const WorldLine& world, RunOptions opts) {
    Env env(Scheme::b, world, std::move(opts));
    const double d = env.dist("V0", "P");

    const BellLabel l12(1, 1), l34(0, 1), l56(0, 0), l78(0, 0), l910(0, 1), l1112(1, 1);

    struct State {
        BellLabel mv0, mp0, mp1, mv1; // step-2 private results
        int flying_at_p = 0;
        int recv_v0_leg = -1, recv_v1_leg = -1;
        BellLabel a0, a1; // P's announced endpoint labels
        bool p_announced = false;
        BellLabel p_inferred_v0, p_inferred_v1;
        BellLabel v0_inferred_p, v1_inferred_p;
        bool v0_stage4 = false, v1_stage4 = false;
        double announce_at_v0 = -1.0, announce_at_v1 = -1.0;
        TwoBits msg0, msg1;
        int keyed_at_p = 0;
        TwoBits p_dec0, p_dec1;
        TwoBits echo0, echo1;
        double echo_at_v0 = -1.0, echo_at_v1 = -1.0;
        double stage5_sent = -1.0;
    };
    auto st = std::make_shared<State>();

    env.q.add_bell_pair(1, 2, l12, "V0", "V0");
    env.q.add_bell_pair(3, 4, l34, "V0", "P");
    env.q.add_bell_pair(5, 6, l56, "P", "P");
    env.q.add_bell_pair(7, 8, l78, "P", "P");
    env.q.add_bell_pair(9, 10, l910, "P", "V1");
    env.q.add_bell_pair(11, 12, l1112, "V1", "V1");

    st->msg0 = env.two_bits("msg(V0)");
    st->msg1 = env.two_bits("msg(V1)");

    // step 2: simultaneous BSMs, results private to each party
    env.sched.post(-d, [&env, st, d]() {
        st->mv0 = env.q.bsm("V0", bsm_site(2, 3), 2, 3, -d);
        st->mp0 = env.q.bsm("P", bsm_site(4, 6), 4, 6, -d);
        st->mp1 = env.q.bsm("P", bsm_site(8, 9), 8, 9, -d);
        st->mv1 = env.q.bsm("V1", bsm_site(10, 12), 10, 12, -d);
    });

    // step 3: qubits 1 and 11 fly to P
    env.sched.post(0.0, [&env]() {
        env.net.send("V0", "P", qubit_payload("flying", {1}, Json{{"leg", "V0"}}), 0.0);
        env.net.send("V1", "P", qubit_payload("flying", {11}, Json{{"leg", "V1"}}), 0.0);
    });

    env.net.on_deliver("P", [&env, st, l12, l34, l56, l78, l910, l1112](const Delivery& del) {
        env.take_qubits(del);
        if (del.payload.kind == "flying") {
            (del.payload.data.at("leg") == "V0" ? st->recv_v0_leg : st->recv_v1_leg) =
                del.payload.qubits.at(0);
            if (++st->flying_at_p < 2) return;
            const double now = env.sched.now();
            st->a0 = env.q.bsm("P", bsm_site(st->recv_v0_leg, 5), st->recv_v0_leg, 5, now);
            st->a1 = env.q.bsm("P", bsm_site(7, st->recv_v1_leg), 7, st->recv_v1_leg, now);
            st->p_announced = true;
            // step 4, prover side: solve each chain for the verifier's result
            st->p_inferred_v0 =
                infer_hidden(std::array{l12, l34, l56}, std::array{st->mp0}, st->a0);
            st->p_inferred_v1 =
                infer_hidden(std::array{l78, l910, l1112}, std::array{st->mp1}, st->a1);
            env.log.event(now, "P", "announce",
                          Json{{"to", "V0"}, {"label", st->a0.str()}});
            env.log.event(now, "P", "announce",
                          Json{{"to", "V1"}, {"label", st->a1.str()}});
            env.net.send("P", "V0", classical_payload("endpoint", Json{{"label", st->a0.str()}}),
                         now);
            env.net.send("P", "V1", classical_payload("endpoint", Json{{"label", st->a1.str()}}),
                         now);
            return;
        }
        if (del.payload.kind == "keyed") {
            const std::string leg = del.payload.data.at("verifier").get<std::string>();
            const TwoBits key = leg == "V0" ? TwoBits(st->mp0) : TwoBits(st->mp1);
            const TwoBits dec = decode_keyed_message(env.q, "P", "decode(P," + leg + ")",
                                                     del.payload.qubits.at(0),
                                                     del.payload.qubits.at(1), key);
            (leg == "V0" ? st->p_dec0 : st->p_dec1) = dec;
            const double now = env.sched.now();
            const int base = leg == "V0" ? 105 : 107;
            encode_keyed_message(env.q, "P", base, base + 1, dec, key);
            env.net.send("P", leg, qubit_payload("echo", {base, base + 1}), now);
        }
    });

    // step 4 verifier side + step 5 keyed messages (only if stage 4 passed)
    const auto stage4 = [&env, st, d](const std::string& who, const Delivery& del,
                                      BellLabel own_result, BellLabel actual_p_result,
                                      std::array<BellLabel, 3> chain, TwoBits msg, int qbase,
                                      double& announce_at, BellLabel& inferred_store,
                                      bool& stage_flag) {
        announce_at = del.at;
        const BellLabel endpoint =
            *BellLabel::parse(del.payload.data.at("label").get<std::string>());
        inferred_store = infer_hidden(chain, std::array{own_result}, endpoint);
        const bool timing_ok = verify_timing(2.0 * d, del.at, env.opts.tolerance);
        const bool consistent = inferred_store == actual_p_result;
        stage_flag =
            env.verify(del.at, who, "stage-4 timing", 2.0 * d, del.at, timing_ok) &&
            env.verify(del.at, who, "stage-4 inference", actual_p_result.str(),
                       inferred_store.str(), consistent);
        if (!stage_flag) return;
        const TwoBits key = TwoBits(inferred_store);
        st->stage5_sent = del.at;
        encode_keyed_message(env.q, who, qbase, qbase + 1, msg, key);
        env.net.send(who, "P", qubit_payload("keyed", {qbase, qbase + 1}, Json{{"verifier", who}}),
                     del.at);
    };

    env.net.on_deliver("V0", [&env, st, stage4, l12, l34, l56](const Delivery& del) {
        if (del.payload.kind == "endpoint") {
            stage4("V0", del, st->mv0, st->mp0, std::array{l12, l34, l56}, st->msg0, 101,
                   st->announce_at_v0, st->v0_inferred_p, st->v0_stage4);
            return;
        }
        if (del.payload.kind == "echo") {
            env.take_qubits(del);
            st->echo0 = decode_keyed_message(env.q, "V0", "decode(V0)", del.payload.qubits.at(0),
                                             del.payload.qubits.at(1), TwoBits(st->v0_inferred_p));
            st->echo_at_v0 = del.at;
        }
    });
    env.net.on_deliver("V1", [&env, st, stage4, l78, l910, l1112](const Delivery& del) {
        if (del.payload.kind == "endpoint") {
            stage4("V1", del, st->mv1, st->mp1, std::array{l78, l910, l1112}, st->msg1, 103,
                   st->announce_at_v1, st->v1_inferred_p, st->v1_stage4);
            return;
        }
        if (del.payload.kind == "echo") {
            env.take_qubits(del);
            st->echo1 = decode_keyed_message(env.q, "V1", "decode(V1)", del.payload.qubits.at(0),
                                             del.payload.qubits.at(1), TwoBits(st->v1_inferred_p));
            st->echo_at_v1 = del.at;
        }
    });

    env.sched.run();

    Outcome out;
    const double tf = env.sched.now();
    bool ok = st->v0_stage4 && st->v1_stage4;
    if (ok) {
        ok &= env.verify(tf, "V0", "echo", st->msg0.str(),
                         st->echo_at_v0 < 0 ? "-" : st->echo0.str(),
                         st->echo_at_v0 >= 0 && st->echo0 == st->msg0);
        ok &= env.verify(tf, "V1", "echo", st->msg1.str(),
                         st->echo_at_v1 < 0 ? "-" : st->echo1.str(),
                         st->echo_at_v1 >= 0 && st->echo1 == st->msg1);
        ok &= env.verify_time(tf, "V0", "echo round trip", 2.0 * d,
                              st->echo_at_v0 - st->stage5_sent);
        ok &= env.verify_time(tf, "V1", "echo round trip", 2.0 * d,
                              st->echo_at_v1 - st->stage5_sent);
    }
    out.accepted = ok;
    out.elapsed = st->announce_at_v0 < 0 ? 0.0 : st->announce_at_v0;
    out.round_keys = std::map<std::string, RoundKeys>{
        {"V0", RoundKeys{st->mv0, st->mp0}}, {"V1", RoundKeys{st->mv1, st->mp1}}};
    out.details =
        Json{{"step2", Json{{"V0", st->mv0.str()},
                            {"P", Json::array({st->mp0.str(), st->mp1.str()})},
                            {"V1", st->mv1.str()}}},
             {"announced", st->p_announced ? Json::array({st->a0.str(), st->a1.str()})
                                           : Json(nullptr)},
             {"inferred",
              Json{{"V0", st->v0_inferred_p.str()},
                   {"V1", st->v1_inferred_p.str()},
                   {"P", Json::array({st->p_inferred_v0.str(), st->p_inferred_v1.str()})}}},
             {"stage4", Json{{"V0", st->v0_stage4}, {"V1", st->v1_stage4}}},
             {"branch", st->mv0.str() + "," + st->mp0.str() + "," + st->mp1.str() + "," +
                            st->mv1.str()}};
    return env.finish(std::move(out));
}

Transcript run_scheme(Scheme scheme, const WorldLine& world, RunOptions opts) {
    switch (scheme) {
        case Scheme::pv_bb84: return run_pv_bb84(world, std::move(opts));
        case Scheme::i: return run_scheme_i(world, std::move(opts));
        case Scheme::ii: return run_scheme_ii(world, std::move(opts));
        case Scheme::iii: return run_scheme_iii(world, std::move(opts));
        case Scheme::iv: return run_scheme_iv(world, std::move(opts));
        case Scheme::a: return run_scheme_a(world, std::move(opts));
        case Scheme::b: return run_scheme_b(world, std::move(opts));
    }
    throw std::invalid_argument("unknown scheme");
}

} // namespace qpv
