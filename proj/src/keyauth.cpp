#include "qpv/keyauth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpv {

std::map<std::string, KeyPair> accumulate_keys(std::span<const Transcript> transcripts) {
    std::map<std::string, KeyPair> keys;
    std::string scheme;
    for (const Transcript& t : transcripts) {
        if (scheme.empty()) scheme = t.scheme;
        if (t.scheme != scheme)
            throw std::invalid_argument("accumulate_keys: mixed schemes in one batch");
        if (!t.outcome.accepted)
            throw std::invalid_argument("accumulate_keys: rejected round in key material");
        if (!t.outcome.round_keys)
            throw std::invalid_argument("accumulate_keys: scheme produced no round keys");
        for (const auto& [verifier, rk] : *t.outcome.round_keys) {
            KeyPair& kp = keys[verifier];
            kp.k_v += rk.v.str();
            kp.k_p += rk.p.str();
            kp.rounds += 1;
        }
    }
    return keys;
}

AuthSession AuthSession::random(int length, int z_p, int z_v, Rng& rng) {
    if (length < 1 || length > kMaxQubits)
        throw std::invalid_argument("AuthSession: length must be in 1..16");
    if (z_p < 1 || z_v < 1) throw std::invalid_argument("AuthSession: z must be >= 1");
    AuthSession s;
    s.z_p = z_p;
    s.z_v = z_v;
    // integers range over one full rotation period so distinct values map to
    // distinct states
    const int mod_p = z_p >= 16 ? INT32_MAX : (1 << (2 * z_p));
    const int mod_v = z_v >= 16 ? INT32_MAX : (1 << (2 * z_v));
    for (int i = 0; i < length; ++i) {
        s.s.push_back(rng.uniform_int(mod_p));
        s.t.push_back(rng.uniform_int(mod_v));
        s.m.push_back(rng.bit());
    }
    return s;
}

std::vector<int> key_bits(const std::string& key, int length) {
    if (static_cast<int>(key.size()) < length)
        throw std::invalid_argument("key_bits: key shorter than session length");
    std::vector<int> bits;
    for (int i = 0; i < length; ++i) {
        if (key[static_cast<std::size_t>(i)] != '0' && key[static_cast<std::size_t>(i)] != '1')
            throw std::invalid_argument("key_bits: key must be a 0/1 string");
        bits.push_back(key[static_cast<std::size_t>(i)] - '0');
    }
    return bits;
}

StateVector auth_encode_s(const AuthSession& session) {
    StateVector state(session.length());
    for (int i = 0; i < session.length(); ++i)
        state.apply_rotation(i, session.s[static_cast<std::size_t>(i)] * session.theta_p());
    return state;
}

void auth_counter_encode(const AuthSession& session, StateVector& state) {
    for (int i = 0; i < session.length(); ++i)
        state.apply_rotation(i, session.t[static_cast<std::size_t>(i)] * session.theta_v());
}

void auth_strip_s(const AuthSession& session, StateVector& state) {
    for (int i = 0; i < session.length(); ++i)
        state.apply_rotation(i, -(session.s[static_cast<std::size_t>(i)] * session.theta_p()));
}

void auth_encrypt_message(const AuthSession& session, StateVector& state,
                          std::span<const int> key) {
    if (static_cast<int>(key.size()) != session.length())
        throw std::invalid_argument("auth_encrypt_message: key length mismatch");
    for (int i = 0; i < session.length(); ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const int flip = key[ui] ^ session.m[ui];
        if (flip) state.apply_rotation(i, RotationAngle(std::numbers::pi / 2.0));
    }
}

std::vector<int> auth_decode_verify(const AuthSession& session, StateVector& state,
                                    std::span<const int> key, Rng& rng) {
    if (static_cast<int>(key.size()) != session.length())
        throw std::invalid_argument("auth_decode_verify: key length mismatch");
    std::vector<int> message;
    for (int i = 0; i < session.length(); ++i) {
        state.apply_rotation(i, -(session.t[static_cast<std::size_t>(i)] * session.theta_v()));
        const int bit = state.measure_z(i, rng);
        message.push_back(bit ^ key[static_cast<std::size_t>(i)]);
    }
    return message;
}

std::vector<int> auth_roundtrip(const AuthSession& session, std::span<const int> key, Rng& rng) {
    StateVector state = auth_encode_s(session);
    auth_counter_encode(session, state);
    auth_strip_s(session, state);
    auth_encrypt_message(session, state, key);
    return auth_decode_verify(session, state, key, rng);
}

double nearest_neighbor_distance(int z) {
    if (z < 1) throw std::invalid_argument("nearest_neighbor_distance: z must be >= 1");
    const RotationAngle theta = RotationAngle::auth_step(z);
    StateVector a(1), b(1);
    a.apply_rotation(0, 1 * theta);
    b.apply_rotation(0, 2 * theta);
    std::complex<double> overlap(0, 0);
    for (std::size_t i = 0; i < a.dim(); ++i)
        overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
    const double f2 = std::norm(overlap);
    return std::sqrt(std::max(0.0, 1.0 - f2));
}

AuthExchangeResult run_auth_exchange(const WorldLine& world, AuthExchangeOptions opts) {
    world.validate();
    Rng rng(opts.seed);
    ForcedOutcomes forced;
    TranscriptBuilder log("auth", opts.seed, opts.level);
    Scheduler sched;
    Network net(world, sched, log);
    QuantumContext q(rng, forced, log);

    std::unique_ptr<Strategy::Run> attack;
    if (opts.adversary) {
        AttackRuntime rt{&q, &net, &sched, &rng, &world};
        attack = opts.adversary->install(rt, Scheme::b);
    }

    AuthSession session = AuthSession::random(opts.length, opts.z_p, opts.z_v, rng);
    const std::vector<int> key = key_bits(opts.key, opts.length);
    const double d = world.transit_time("V0", "P");

    std::vector<int> ids;
    for (int i = 0; i < opts.length; ++i) ids.push_back(300 + i);

    struct State {
        int leg = 0;
        std::vector<int> decoded;
        double last_at = -1.0;
    };
    auto st = std::make_shared<State>();

    const auto payload_with = [&ids](const char* kind) {
        Payload p;
        p.kind = kind;
        p.qubits = ids;
        return p;
    };

    sched.post(0.0, [&]() {
        for (int i = 0; i < opts.length; ++i) {
            q.add_qubit(ids[static_cast<std::size_t>(i)], "P");
            q.apply_rotation("P", ids[static_cast<std::size_t>(i)],
                             session.s[static_cast<std::size_t>(i)] * session.theta_p());
        }
        net.send("P", "V0", payload_with("auth-s"), 0.0);
    });

    net.on_deliver("V0", [&, st](const Delivery& del) {
        for (int qb : del.payload.qubits) q.transfer(qb, "V0");
        if (del.payload.kind == "auth-s") {
            for (int i = 0; i < opts.length; ++i)
                q.apply_rotation("V0", ids[static_cast<std::size_t>(i)],
                                 session.t[static_cast<std::size_t>(i)] * session.theta_v());
            net.send("V0", "P", payload_with("auth-st"), del.at);
        } else if (del.payload.kind == "auth-tm") {
            for (int i = 0; i < opts.length; ++i) {
                const std::size_t ui = static_cast<std::size_t>(i);
                q.apply_rotation("V0", ids[ui], -(session.t[ui] * session.theta_v()));
                const int bit =
                    q.measure_z("V0", "auth[" + std::to_string(i) + "]", ids[ui]);
                st->decoded.push_back(bit ^ key[ui]);
            }
            st->last_at = del.at;
        }
    });

    net.on_deliver("P", [&](const Delivery& del) {
        for (int qb : del.payload.qubits) q.transfer(qb, "P");
        if (del.payload.kind != "auth-st") return;
        for (int i = 0; i < opts.length; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            q.apply_rotation("P", ids[ui], -(session.s[ui] * session.theta_p()));
            if (key[ui] ^ session.m[ui])
                q.apply_rotation("P", ids[ui], RotationAngle(std::numbers::pi / 2.0));
        }
        net.send("P", "V0", payload_with("auth-tm"), del.at);
    });

    sched.run();

    AuthExchangeResult result;
    result.message = session.m;
    result.decoded = st->decoded;
    result.decoded_ok = st->decoded == session.m;
    Outcome out;
    out.accepted = result.decoded_ok && verify_timing(3.0 * d, st->last_at, opts.tolerance);
    out.elapsed = st->last_at < 0 ? 0.0 : st->last_at;
    out.details = Json{{"z_p", opts.z_p}, {"z_v", opts.z_v}, {"length", opts.length},
                       {"decoded_ok", result.decoded_ok}};
    if (attack) {
        attack->finalize(out);
        if (!out.accepted) out.detected_adversary = true;
    }
    log.outcome() = std::move(out);
    result.transcript = log.take();
    return result;
}

} // namespace qpv
