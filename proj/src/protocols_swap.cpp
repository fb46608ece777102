#include "protocols_common.hpp"

namespace qpv {

// ---------------------------------------------------------------------------
// Scheme III: verifiers hold pairs (1,2) and (3,4); the flying halves 2 and 3
// meet at P for a BSM, V1 ships qubit 4 to V0, and V0 confirms with his own
// BSM that his residual pair carries the label P announced.
// ---------------------------------------------------------------------------

Transcript run_scheme_iii(const WorldLine& world, RunOptions opts) {
    Env env(Scheme::iii, world, std::move(opts));
    const double d = env.dist("V0", "P");

    struct State {
        int qubits_at_p = 0;
        int recv_a = -1, recv_b = -1;
        BellLabel p_result;
        bool p_done = false;
        double t0 = 0.0, t1 = 0.0;     // challenge send times
        double T0 = -1.0, T1 = -1.0;   // announcement arrival times
        double t1_reported = -1.0;
        BellLabel v0_result;
        bool v0_done = false;
        BellLabel announced_to_v0;
        bool announce_seen_v0 = false, announce_seen_v1 = false;
    };
    auto st = std::make_shared<State>();

    env.q.add_bell_pair(1, 2, BellLabel(1, 1), "V0", "V0");
    env.q.add_bell_pair(3, 4, BellLabel(1, 1), "V1", "V1");

    env.sched.post(0.0, [&env, st]() {
        env.net.send("V0", "P", qubit_payload("qubit", {2}), st->t0);
        env.net.send("V1", "P", qubit_payload("qubit", {3}), st->t1);
    });

    env.net.on_deliver("P", [&env, st](const Delivery& del) {
        env.take_qubits(del);
        if (del.payload.kind != "qubit") return;
        (st->qubits_at_p == 0 ? st->recv_a : st->recv_b) = del.payload.qubits.at(0);
        if (++st->qubits_at_p < 2) return;
        const double now = env.sched.now();
        st->p_result = env.q.bsm("P", bsm_site(st->recv_a, st->recv_b), st->recv_a, st->recv_b, now);
        st->p_done = true;
        env.log.event(now, "P", "announce", Json{{"label", st->p_result.str()}});
        env.net.send("P", "V0", classical_payload("result", Json{{"label", st->p_result.str()}}),
                     now);
        env.net.send("P", "V1", classical_payload("result", Json{{"label", st->p_result.str()}}),
                     now);
    });

    env.net.on_deliver("V1", [&env, st](const Delivery& del) {
        if (del.payload.kind != "result") return;
        st->T1 = del.at;
        st->announce_seen_v1 = true;
        // qubit 4 plus timing and result go to V0 over the verifier channel
        env.net.send("V1", "V0",
                     qubit_payload("shipment", {4},
                                   Json{{"T1", st->T1}, {"label", del.payload.data.at("label")}}),
                     del.at);
    });

    env.net.on_deliver("V0", [&env, st](const Delivery& del) {
        if (del.payload.kind == "result") {
            st->T0 = del.at;
            st->announced_to_v0 = *BellLabel::parse(del.payload.data.at("label").get<std::string>());
            st->announce_seen_v0 = true;
            return;
        }
        if (del.payload.kind != "shipment") return;
        env.take_qubits(del);
        const int arrived = del.payload.qubits.at(0);
        st->t1_reported = del.payload.data.at("T1").get<double>();
        st->v0_result = env.q.bsm("V0", bsm_site(1, arrived), 1, arrived, del.at);
        st->v0_done = true;
    });

    env.sched.run();

    Outcome out;
    const double tf = env.sched.now();
    bool ok = st->announce_seen_v0 && st->announce_seen_v1 && st->v0_done;
    ok &= env.verify(tf, "V0", "BSM consistency",
                     st->announce_seen_v0 ? Json(st->announced_to_v0.str()) : Json(nullptr),
                     st->v0_done ? Json(st->v0_result.str()) : Json(nullptr),
                     st->v0_done && st->announce_seen_v0 && st->v0_result == st->announced_to_v0);
    ok &= env.verify_time(tf, "V0", "T0-t0", 2.0 * d, st->T0 - st->t0);
    ok &= env.verify_time(tf, "V1", "T1-t1", 2.0 * d,
                          (st->t1_reported < 0 ? -1.0 : st->t1_reported) - st->t1);
    out.accepted = ok;
    out.elapsed = st->T0 < 0 ? 0.0 : st->T0 - st->t0;
    out.details = Json{{"pairs", Json{{"(1,2)", "11"}, {"(3,4)", "11"}}},
                       {"p_result", st->p_done ? Json(st->p_result.str()) : Json(nullptr)},
                       {"v0_result", st->v0_done ? Json(st->v0_result.str()) : Json(nullptr)},
                       {"branch", st->p_done ? st->p_result.str() : "-"}};
    return env.finish(std::move(out));
}

// ---------------------------------------------------------------------------
// Scheme IV: V0 swaps entanglement toward V1 (BSM on 3,5), both verifiers
// superdense-code a 2-bit message on their half of a pair with P, and P reads
// the messages back with BSMs and returns them.
// ---------------------------------------------------------------------------

Transcript run_scheme_iv(const WorldLine& world, RunOptions opts) {
    Env env(Scheme::iv, world, std::move(opts));
    const double d = env.dist("V0", "P");
    struct State {
        BellLabel r35;                 // V0's swap result, announced
        TwoBits msg0, msg1;            // the verifiers' secret messages
        BellLabel prior12{0, 0};       // public initial label of (1,2)
        BellLabel prior46;             // label of (4,6) after the swap
        int recv_for_v0 = -1, recv_for_v1 = -1;
        BellLabel o0, o1;              // P's BSM outcomes
        TwoBits p_decoded0, p_decoded1;
        bool p_done = false;
        TwoBits at_v0, at_v1;
        double reply_at_v0 = -1.0, reply_at_v1 = -1.0;
    };
    auto st = std::make_shared<State>();

    env.q.add_bell_pair(1, 2, BellLabel(0, 0), "V0", "P");
    env.q.add_bell_pair(3, 4, BellLabel(0, 0), "V0", "P");
    env.q.add_bell_pair(5, 6, BellLabel(1, 1), "V0", "V1");

    const double t_prep = -3.0 * d;
    env.sched.post(t_prep, [&env, st, t_prep]() {
        st->r35 = env.q.bsm("V0", bsm_site(3, 5), 3, 5, t_prep);
        env.log.event(t_prep, "V0", "announce", Json{{"label", st->r35.str()}});
        // swap result travels to V1 (and to P, who needs it to decode later)
        env.net.send("V0", "V1", classical_payload("swap-result", Json{{"label", st->r35.str()}}),
                     t_prep);
        env.net.send("V0", "P", classical_payload("swap-result", Json{{"label", st->r35.str()}}),
                     t_prep);
    });

    st->msg0 = env.two_bits("msg(V0)");
    st->msg1 = env.two_bits("msg(V1)");

    env.sched.post(0.0, [&env, st]() {
        env.q.dense_encode("V0", 1, st->msg0);
        env.net.send("V0", "P", qubit_payload("encoded", {1}, Json{{"verifier", "V0"}}), 0.0);
    });

    env.net.on_deliver("V1", [&env, st](const Delivery& del) {
        if (del.payload.kind == "swap-result") {
            // V1 now knows (4,6) = (3,4) ^ (5,6) ^ result
            st->prior46 = BellLabel(0, 0) ^ BellLabel(1, 1) ^
                          *BellLabel::parse(del.payload.data.at("label").get<std::string>());
            env.sched.post(0.0, [&env, st]() {
                env.q.dense_encode("V1", 6, st->msg1);
                env.net.send("V1", "P", qubit_payload("encoded", {6}, Json{{"verifier", "V1"}}),
                             0.0);
            });
            return;
        }
        if (del.payload.kind == "message") {
            st->at_v1 = *TwoBits::parse(del.payload.data.at("msg").get<std::string>());
            st->reply_at_v1 = del.at;
        }
    });

    env.net.on_deliver("P", [&env, st](const Delivery& del) {
        env.take_qubits(del);
        if (del.payload.kind == "swap-result") {
            st->prior46 = BellLabel(0, 0) ^ BellLabel(1, 1) ^
                          *BellLabel::parse(del.payload.data.at("label").get<std::string>());
            return;
        }
        if (del.payload.kind != "encoded") return;
        if (del.payload.data.at("verifier") == "V0")
            st->recv_for_v0 = del.payload.qubits.at(0);
        else
            st->recv_for_v1 = del.payload.qubits.at(0);
        if (st->recv_for_v0 < 0 || st->recv_for_v1 < 0) return;
        const double now = env.sched.now();
        st->o0 = env.q.bsm("P", bsm_site(st->recv_for_v0, 2), st->recv_for_v0, 2, now);
        st->o1 = env.q.bsm("P", bsm_site(st->recv_for_v1, 4), st->recv_for_v1, 4, now);
        st->p_decoded0 = st->o0 ^ st->prior12;
        st->p_decoded1 = st->o1 ^ st->prior46;
        st->p_done = true;
        env.net.send("P", "V0", classical_payload("message", Json{{"msg", st->p_decoded0.str()}}),
                     now);
        env.net.send("P", "V1", classical_payload("message", Json{{"msg", st->p_decoded1.str()}}),
                     now);
    });

    env.net.on_deliver("V0", [st](const Delivery& del) {
        if (del.payload.kind == "message") {
            st->at_v0 = *TwoBits::parse(del.payload.data.at("msg").get<std::string>());
            st->reply_at_v0 = del.at;
        }
    });

    env.sched.run();

    Outcome out;
    const double tf = env.sched.now();
    bool ok = true;
    ok &= env.verify(tf, "V0", "message", st->msg0.str(),
                     st->reply_at_v0 < 0 ? "-" : st->at_v0.str(),
                     st->reply_at_v0 >= 0 && st->at_v0 == st->msg0);
    ok &= env.verify(tf, "V1", "message", st->msg1.str(),
                     st->reply_at_v1 < 0 ? "-" : st->at_v1.str(),
                     st->reply_at_v1 >= 0 && st->at_v1 == st->msg1);
    ok &= env.verify_time(tf, "V0", "round trip", 2.0 * d, st->reply_at_v0);
    ok &= env.verify_time(tf, "V1", "round trip", 2.0 * d, st->reply_at_v1);
    out.accepted = ok;
    out.elapsed = st->reply_at_v0 < 0 ? 0.0 : st->reply_at_v0;
    out.details = Json{{"r35", st->r35.str()},
                       {"messages", Json::array({st->msg0.str(), st->msg1.str()})},
                       {"p_bsm", st->p_done
                                     ? Json::array({st->o0.str(), st->o1.str()})
                                     : Json(nullptr)},
                       {"p_decoded", st->p_done ? Json::array({st->p_decoded0.str(),
                                                               st->p_decoded1.str()})
                                                : Json(nullptr)},
                       {"p_decode_correct",
                        st->p_done ? Json::array({st->p_decoded0 == st->msg0,
                                                  st->p_decoded1 == st->msg1})
                                   : Json(nullptr)},
                       {"branch", st->p_done ? st->r35.str() + "," + st->o0.str() + "," +
                                                   st->o1.str()
                                             : "-"}};
    return env.finish(std::move(out));
}

} // namespace qpv
