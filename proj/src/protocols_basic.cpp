#include "protocols_common.hpp"

namespace qpv {

// ---------------------------------------------------------------------------
// PV_BB84: V0 sends H^y|x>, V1 sends the basis bit y so both arrive at P
// together; P measures in basis y and broadcasts the bit; the verifiers check
// the bit and the round-trip time.
// ---------------------------------------------------------------------------

Transcript run_pv_bb84(const WorldLine& world, RunOptions opts) {
    Env env(Scheme::pv_bb84, world, std::move(opts));
    const double d = env.dist("V0", "P");
    const double dv = env.dist("V0", "V1");

    struct State {
        int x = 0, y = 0;
        int qubit = 100;
        int y_at_p = -1;
        bool qubit_at_p = false;
        int received_qubit = -1;
        int answer = -1;
        double v0_reply_at = -1.0, v1_reply_at = -1.0;
    };
    auto st = std::make_shared<State>();
    st->x = env.bit("x");
    st->y = env.bit("y");

    // The verifiers' mutual channel is trusted by this scheme's assumptions;
    // no strategy taps it here.
    env.net.send("V0", "V1", classical_payload("xy", Json{{"x", st->x}, {"y", st->y}}), -dv);

    env.net.on_deliver("V1", [&env, st](const Delivery& del) {
        if (del.payload.kind == "xy") {
            env.net.send("V1", "P", classical_payload("basis", Json{{"y", st->y}}), 0.0);
        } else if (del.payload.kind == "answer") {
            st->v1_reply_at = del.at;
        }
    });

    env.sched.post(0.0, [&env, st]() {
        env.q.add_qubit(st->qubit, "V0");
        if (st->x) env.q.apply_pauli("V0", st->qubit, PauliOp::X);
        if (st->y) env.q.apply_hadamard("V0", st->qubit);
        env.net.send("V0", "P", qubit_payload("qubit", {st->qubit}), 0.0);
    });

    env.net.on_deliver("P", [&env, st](const Delivery& del) {
        env.take_qubits(del);
        if (del.payload.kind == "basis") st->y_at_p = del.payload.data.at("y").get<int>();
        if (del.payload.kind == "qubit") {
            st->qubit_at_p = true;
            st->received_qubit = del.payload.qubits.at(0);
        }
        if (st->y_at_p < 0 || !st->qubit_at_p) return;
        const double now = env.sched.now();
        if (st->y_at_p) env.q.apply_hadamard("P", st->received_qubit);
        const int bit = env.q.measure_z("P", "measure(P)", st->received_qubit);
        env.log.event(now, "P", "announce", Json{{"bit", bit}});
        env.net.send("P", "V0", classical_payload("answer", Json{{"bit", bit}}), now);
        env.net.send("P", "V1", classical_payload("answer", Json{{"bit", bit}}), now);
    });

    env.net.on_deliver("V0", [st](const Delivery& del) {
        if (del.payload.kind == "answer") {
            st->v0_reply_at = del.at;
            st->answer = del.payload.data.at("bit").get<int>();
        }
    });

    env.sched.run();

    Outcome out;
    const double tf = env.sched.now();
    bool ok = true;
    ok &= env.verify(tf, "V0", "answer bit", st->x, st->answer, st->answer == st->x);
    ok &= env.verify_time(tf, "V0", "round trip", 2.0 * d,
                          st->v0_reply_at < 0 ? -1.0 : st->v0_reply_at);
    ok &= env.verify_time(tf, "V1", "round trip", 2.0 * d,
                          st->v1_reply_at < 0 ? -1.0 : st->v1_reply_at);
    out.accepted = ok;
    out.elapsed = st->v0_reply_at < 0 ? 0.0 : st->v0_reply_at;
    out.details = Json{{"x", st->x}, {"y", st->y}, {"answer", st->answer}};
    return env.finish(std::move(out));
}

// ---------------------------------------------------------------------------
// Scheme I: prover and V0 pre-share a 4N-bit key; each challenge round sends
// x_i and y_i to arrive together and the prover answers k_{4i+2x+y}.
// ---------------------------------------------------------------------------

Transcript run_scheme_i(const WorldLine& world, RunOptions opts) {
    Env env(Scheme::i, world, std::move(opts));
    const double d = env.dist("V0", "P");
    const double dv = env.dist("V0", "V1");
    const int n = env.opts.challenges;
    if (n < 1) throw std::invalid_argument("scheme i: need at least one challenge round");

    struct State {
        std::vector<int> key; // pre-shared between V0 and P
        std::vector<int> xs, ys;
        std::map<int, int> x_at_p, y_at_p;
        std::vector<int> replies_v0;
        std::vector<double> reply_at_v0, reply_at_v1;
    };
    auto st = std::make_shared<State>();
    for (int i = 0; i < 4 * n; ++i) st->key.push_back(env.bit("key[" + std::to_string(i) + "]"));
    for (int i = 0; i < n; ++i) {
        st->xs.push_back(env.bit("x[" + std::to_string(i) + "]"));
        st->ys.push_back(env.bit("y[" + std::to_string(i) + "]"));
    }
    st->replies_v0.assign(static_cast<std::size_t>(n), -1);
    st->reply_at_v0.assign(static_cast<std::size_t>(n), -1.0);
    st->reply_at_v1.assign(static_cast<std::size_t>(n), -1.0);

    // V1 discloses his challenge string to V0 over their trusted channel so
    // V0 can verify replies.
    env.net.send("V1", "V0", classical_payload("ys", Json{{"ys", st->ys}}), -dv);

    for (int i = 0; i < n; ++i) {
        const double t_i = 2.0 * d * i;
        env.sched.post(t_i, [&env, st, i, t_i]() {
            env.net.send("V0", "P", classical_payload("x", Json{{"i", i}, {"bit", st->xs[i]}}),
                         t_i);
            env.net.send("V1", "P", classical_payload("y", Json{{"i", i}, {"bit", st->ys[i]}}),
                         t_i);
        });
    }

    env.net.on_deliver("P", [&env, st](const Delivery& del) {
        const int i = del.payload.data.at("i").get<int>();
        if (del.payload.kind == "x") st->x_at_p[i] = del.payload.data.at("bit").get<int>();
        if (del.payload.kind == "y") st->y_at_p[i] = del.payload.data.at("bit").get<int>();
        if (!st->x_at_p.count(i) || !st->y_at_p.count(i)) return;
        const int idx = 4 * i + 2 * st->x_at_p[i] + st->y_at_p[i];
        const int bit = st->key[static_cast<std::size_t>(idx)];
        const double now = env.sched.now();
        env.net.send("P", "V0", classical_payload("reply", Json{{"i", i}, {"bit", bit}}), now);
        env.net.send("P", "V1", classical_payload("reply", Json{{"i", i}, {"bit", bit}}), now);
    });

    env.net.on_deliver("V0", [st](const Delivery& del) {
        if (del.payload.kind != "reply") return;
        const int i = del.payload.data.at("i").get<int>();
        st->replies_v0[static_cast<std::size_t>(i)] = del.payload.data.at("bit").get<int>();
        st->reply_at_v0[static_cast<std::size_t>(i)] = del.at;
    });
    env.net.on_deliver("V1", [st](const Delivery& del) {
        if (del.payload.kind != "reply") return;
        const int i = del.payload.data.at("i").get<int>();
        st->reply_at_v1[static_cast<std::size_t>(i)] = del.at;
    });

    env.sched.run();

    Outcome out;
    bool ok = true;
    int errors = 0;
    for (int i = 0; i < n; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const int want = st->key[static_cast<std::size_t>(4 * i + 2 * st->xs[ui] + st->ys[ui])];
        const bool bit_ok = st->replies_v0[ui] == want;
        const bool t0_ok = verify_timing(2.0 * d * i + 2.0 * d, st->reply_at_v0[ui],
                                         env.opts.tolerance);
        const bool t1_ok = verify_timing(2.0 * d * i + 2.0 * d, st->reply_at_v1[ui],
                                         env.opts.tolerance);
        if (!(bit_ok && t0_ok && t1_ok)) ++errors;
        ok &= bit_ok && t0_ok && t1_ok;
    }
    env.verify(env.sched.now(), "V0", "key replies", n, n - errors, ok);
    out.accepted = ok;
    out.elapsed = 2.0 * d;
    out.details = Json{{"challenges", n}, {"errors", errors}};
    return env.finish(std::move(out));
}

// ---------------------------------------------------------------------------
// Scheme II: V0 keeps one half of a Bell pair and sends the other to P, who
// measures it in the basis V1 announces; V0 measures his half in the same
// basis once the answer is back and checks the correlation.
// ---------------------------------------------------------------------------

Transcript run_scheme_ii(const WorldLine& world, RunOptions opts) {
    Env env(Scheme::ii, world, std::move(opts));
    const double d = env.dist("V0", "P");
    const double dv = env.dist("V0", "V1");

    struct State {
        int y = 0;
        int y_at_p = -1;
        int received_qubit = -1;
        int answer = -1;
        int v0_bit = -1;
        double v0_reply_at = -1.0, v1_reply_at = -1.0;
    };
    auto st = std::make_shared<State>();
    st->y = env.bit("y");

    env.net.send("V0", "V1", classical_payload("basis-secret", Json{{"y", st->y}}), -dv);

    env.net.on_deliver("V1", [&env, st](const Delivery& del) {
        if (del.payload.kind == "basis-secret") {
            env.net.send("V1", "P", classical_payload("basis", Json{{"y", st->y}}), 0.0);
        } else if (del.payload.kind == "answer") {
            st->v1_reply_at = del.at;
        }
    });

    env.sched.post(0.0, [&env]() {
        env.q.add_bell_pair(1, 2, BellLabel(0, 0), "V0", "V0");
        env.net.send("V0", "P", qubit_payload("qubit", {2}), 0.0);
    });

    env.net.on_deliver("P", [&env, st](const Delivery& del) {
        env.take_qubits(del);
        if (del.payload.kind == "basis") st->y_at_p = del.payload.data.at("y").get<int>();
        if (del.payload.kind == "qubit") st->received_qubit = del.payload.qubits.at(0);
        if (st->y_at_p < 0 || st->received_qubit < 0) return;
        const double now = env.sched.now();
        if (st->y_at_p) env.q.apply_hadamard("P", st->received_qubit);
        const int bit = env.q.measure_z("P", "measure(P)", st->received_qubit);
        env.log.event(now, "P", "announce", Json{{"bit", bit}});
        env.net.send("P", "V0", classical_payload("answer", Json{{"bit", bit}}), now);
        env.net.send("P", "V1", classical_payload("answer", Json{{"bit", bit}}), now);
    });

    env.net.on_deliver("V0", [&env, st](const Delivery& del) {
        if (del.payload.kind != "answer") return;
        st->v0_reply_at = del.at;
        st->answer = del.payload.data.at("bit").get<int>();
        if (st->y) env.q.apply_hadamard("V0", 1);
        st->v0_bit = env.q.measure_z("V0", "measure(V0)", 1);
        // result shared with V1 over the verifiers' channel
        env.net.send("V0", "V1", classical_payload("check", Json{{"bit", st->v0_bit}}), del.at);
    });

    env.sched.run();

    Outcome out;
    const double tf = env.sched.now();
    bool ok = true;
    ok &= env.verify(tf, "V0", "correlation", st->v0_bit, st->answer,
                     st->answer >= 0 && st->answer == st->v0_bit);
    ok &= env.verify_time(tf, "V0", "round trip", 2.0 * d,
                          st->v0_reply_at < 0 ? -1.0 : st->v0_reply_at);
    ok &= env.verify_time(tf, "V1", "round trip", 2.0 * d,
                          st->v1_reply_at < 0 ? -1.0 : st->v1_reply_at);
    out.accepted = ok;
    out.elapsed = st->v0_reply_at < 0 ? 0.0 : st->v0_reply_at;
    out.details = Json{{"y", st->y}, {"answer", st->answer}, {"v0_bit", st->v0_bit}};
    return env.finish(std::move(out));
}

} // namespace qpv
