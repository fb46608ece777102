#pragma once

#include "qpv/protocols.hpp"

#include "qpv/bell_algebra.hpp"
#include "qpv/keyed_message.hpp"

namespace qpv {

/// Everything one protocol run owns: scheduler, network, PRNG, quantum
/// state, transcript. Strictly single-threaded; a fresh Env per run.
struct Env {
    WorldLine world;
    RunOptions opts;
    Rng rng;
    ForcedOutcomes forced;
    TranscriptBuilder log;
    Scheduler sched;
    Network net;
    QuantumContext q;
    std::unique_ptr<Strategy::Run> attack;

    Env(Scheme scheme, const WorldLine& w, RunOptions o)
        : world(w),
          opts(std::move(o)),
          rng(opts.seed),
          forced(std::move(opts.forced)),
          log(to_string(scheme), opts.seed, opts.level),
          sched(),
          net(world, sched, log),
          q(rng, forced, log) {
        world.validate();
        if (opts.adversary) {
            if (!opts.adversary->supports(scheme))
                throw std::invalid_argument("adversary '" + opts.adversary->id() +
                                            "' does not apply to scheme " + to_string(scheme));
            AttackRuntime rt{&q, &net, &sched, &rng, &world};
            attack = opts.adversary->install(rt, scheme);
        }
    }

    double dist(const std::string& a, const std::string& b) const {
        return world.transit_time(a, b);
    }

    /// The receiving party takes custody of any qubits in a delivery.
    void take_qubits(const Delivery& d) {
        for (int id : d.payload.qubits) q.transfer(id, d.to);
    }

    /// Logs a verify event and folds the result into the accept decision.
    bool verify(double t, const std::string& actor, const std::string& check, const Json& expected,
                const Json& observed, bool pass) {
        log.event(t, actor, "verify",
                  Json{{"check", check}, {"expected", expected}, {"observed", observed},
                       {"pass", pass}});
        return pass;
    }

    bool verify_time(double t, const std::string& actor, const std::string& check, double expected,
                     double observed) {
        return verify(t, actor, check, expected, observed,
                      verify_timing(expected, observed, opts.tolerance));
    }

    /// Draws a bit / 2-bit word, honoring a forced site value if present.
    int bit(const std::string& site) {
        if (auto f = forced.take(site)) return *f & 1;
        return rng.bit();
    }
    TwoBits two_bits(const std::string& site) {
        if (auto f = forced.take(site)) return TwoBits::from_code(*f);
        return TwoBits::from_code(rng.uniform_int(4));
    }

    Transcript finish(Outcome outcome) {
        if (!forced.fully_consumed())
            throw std::invalid_argument("forced outcomes left unconsumed (unknown site name?)");
        if (attack) attack->finalize(outcome);
        if (!outcome.accepted && opts.adversary) outcome.detected_adversary = true;
        log.outcome() = std::move(outcome);
        return log.take();
    }
};

inline std::string bsm_site(int qa, int qb) {
    return "BSM(" + std::to_string(qa) + "," + std::to_string(qb) + ")";
}

inline Payload qubit_payload(std::string kind, std::initializer_list<int> qubits, Json data = {}) {
    Payload p;
    p.kind = std::move(kind);
    p.data = std::move(data);
    p.qubits.assign(qubits.begin(), qubits.end());
    return p;
}

inline Payload classical_payload(std::string kind, Json data) {
    Payload p;
    p.kind = std::move(kind);
    p.data = std::move(data);
    return p;
}

} // namespace qpv
