#include "qpv/adversaries.hpp"

#include <stdexcept>

namespace qpv {

namespace {

std::string bsm_site(int qa, int qb) {
    return "BSM(" + std::to_string(qa) + "," + std::to_string(qb) + ")";
}

Json classical_record(const InterceptContext& ctx) {
    return Json{{"t", ctx.at}, {"from", ctx.from}, {"to", ctx.to},
                {"payload", ctx.payload.to_json()}};
}

// ---------------------------------------------------------------------------

class PassiveCollector : public Strategy {
public:
    std::string id() const override { return "passive-collector"; }
    bool supports(Scheme) const override { return true; }

    std::unique_ptr<Run> install(const AttackRuntime& rt, Scheme s) override {
        struct R : Run {
            std::shared_ptr<Json> seen = std::make_shared<Json>(Json::array());
            void finalize(Outcome& out) override {
                out.adversary = Json{{"id", "passive-collector"}, {"observed", *seen}};
            }
        };
        auto run = std::make_unique<R>();
        auto seen = run->seen;
        const auto listen = [seen](const InterceptContext& ctx) {
            if (ctx.payload.qubits.empty()) seen->push_back(classical_record(ctx));
            return TapAction::forward();
        };
        rt.net->add_tap("V0", "P", "E0", listen);
        rt.net->add_tap("P", "V0", "E0", listen);
        rt.net->add_tap("V1", "P", "E1", listen);
        rt.net->add_tap("P", "V1", "E1", listen);
        // The early schemes assume a trusted verifier-verifier channel; only
        // the swap-based and proposed schemes run over a fully open network.
        if (s == Scheme::iii || s == Scheme::iv || s == Scheme::a || s == Scheme::b) {
            rt.net->add_tap("V0", "V1", "E0", listen);
            rt.net->add_tap("V1", "V0", "E0", listen);
        }
        return run;
    }
};

// ---------------------------------------------------------------------------

class InterceptResend : public Strategy {
public:
    explicit InterceptResend(BasisPolicy policy) : policy_(policy) {}

    std::string id() const override {
        return policy_ == BasisPolicy::random ? "intercept-resend" : "intercept-resend-z";
    }
    bool supports(Scheme) const override { return true; }

    std::unique_ptr<Run> install(const AttackRuntime& rt, Scheme) override {
        struct R : Run {
            std::string policy;
            std::shared_ptr<std::string> observed = std::make_shared<std::string>();
            std::shared_ptr<Json> classical = std::make_shared<Json>(Json::array());
            void finalize(Outcome& out) override {
                out.adversary = Json{{"id", "intercept-resend"},
                                     {"policy", policy},
                                     {"observed", *observed},
                                     {"classical", *classical}};
            }
        };
        auto run = std::make_unique<R>();
        run->policy = policy_ == BasisPolicy::random ? "random" : "fixed-z";
        auto observed = run->observed;
        auto classical = run->classical;
        const BasisPolicy policy = policy_;
        rt.net->add_tap("V0", "P", "E0",
                        [rt, observed, classical, policy](const InterceptContext& ctx) {
            if (ctx.payload.qubits.empty()) {
                classical->push_back(classical_record(ctx));
                return TapAction::forward();
            }
            for (int qb : ctx.payload.qubits) {
                rt.q->transfer(qb, "E0");
                const int basis = policy == BasisPolicy::random ? rt.rng->bit() : 0;
                if (basis) rt.q->apply_hadamard("E0", qb);
                const int bit = rt.q->measure_z("E0", "tap(" + std::to_string(qb) + ")", qb);
                if (basis) rt.q->apply_hadamard("E0", qb); // resend the collapsed state
                observed->push_back(static_cast<char>('0' + bit));
            }
            return TapAction::forward(); // same qubits, now collapsed
        });
        return run;
    }

private:
    BasisPolicy policy_;
};

// ---------------------------------------------------------------------------

class EntanglingIntercept : public Strategy {
public:
    explicit EntanglingIntercept(int target) : target_(target) {
        if (target != 1 && target != 11)
            throw std::invalid_argument("entangling intercept targets qubit 1 or 11");
    }

    std::string id() const override {
        return target_ == 1 ? "entangling-intercept" : "entangling-intercept-v1";
    }
    bool supports(Scheme s) const override { return s == Scheme::b; }

    std::unique_ptr<Run> install(const AttackRuntime& rt, Scheme) override {
        struct R : Run {
            std::shared_ptr<Json> report = std::make_shared<Json>();
            void finalize(Outcome& out) override { out.adversary = *report; }
        };
        auto run = std::make_unique<R>();
        auto report = run->report;
        const std::string eve = target_ == 1 ? "E0" : "E1";
        const std::string from = target_ == 1 ? "V0" : "V1";
        const int target = target_;
        rt.q->add_bell_pair(13, 14, BellLabel(0, 0), eve, eve);
        rt.net->add_tap(from, "P", eve, [rt, report, eve, target](const InterceptContext& ctx) {
            if (ctx.payload.qubits.size() != 1 || ctx.payload.qubits[0] != target)
                return TapAction::forward();
            rt.q->transfer(target, eve);
            const BellLabel e = rt.q->bsm(eve, bsm_site(target, 13), target, 13, ctx.at);
            *report = Json{{"id", "entangling-intercept"}, {"target", target}, {"bsm", e.str()}};
            Payload onward = ctx.payload;
            onward.qubits = {14};
            return TapAction::replace(std::move(onward));
        });
        return run;
    }

private:
    int target_;
};

// ---------------------------------------------------------------------------

class KeyGuess : public Strategy {
public:
    std::string id() const override { return "key-guess"; }
    bool supports(Scheme s) const override { return s == Scheme::i; }

    std::unique_ptr<Run> install(const AttackRuntime& rt, Scheme) override {
        struct Shared {
            std::map<int, int> guesses;
            int guess(int i, Rng& rng) {
                auto it = guesses.find(i);
                if (it != guesses.end()) return it->second;
                return guesses[i] = rng.bit();
            }
        };
        struct R : Run {
            std::shared_ptr<Shared> shared = std::make_shared<Shared>();
            void finalize(Outcome& out) override {
                Json g = Json::array();
                for (const auto& [i, bit] : shared->guesses) g.push_back(bit);
                out.adversary = Json{{"id", "key-guess"}, {"guesses", g}};
            }
        };
        auto run = std::make_unique<R>();
        auto shared = run->shared;

        // Challenge bits are jammed; each tap answers its own verifier with a
        // shared guessed bit, delayed so the reply lands exactly at t + 2d/c.
        const auto make_tap = [rt, shared](const std::string& eve, const std::string& verifier) {
            return [rt, shared, eve, verifier](const InterceptContext& ctx) {
                if (ctx.payload.kind != "x" && ctx.payload.kind != "y")
                    return TapAction::forward();
                const int i = ctx.payload.data.at("i").get<int>();
                const int bit = shared->guess(i, *rt.rng);
                const double arrival = ctx.sent_at + 2.0 * rt.world->transit_time("V0", "P");
                const double send_at = arrival - rt.world->transit_time(eve, verifier);
                rt.net->send(eve, verifier,
                             Payload{"reply", Json{{"i", i}, {"bit", bit}}, {}}, send_at);
                return TapAction::jam();
            };
        };
        rt.net->add_tap("V0", "P", "E0", make_tap("E0", "V0"));
        rt.net->add_tap("V1", "P", "E1", make_tap("E1", "V1"));
        return run;
    }
};

// ---------------------------------------------------------------------------

class SchemeIIIAttack : public Strategy {
public:
    explicit SchemeIIIAttack(bool apply_fixup) : apply_fixup_(apply_fixup) {}

    std::string id() const override {
        return apply_fixup_ ? "scheme-iii-attack" : "scheme-iii-attack-nofix";
    }
    bool supports(Scheme s) const override { return s == Scheme::iii; }

    std::unique_ptr<Run> install(const AttackRuntime& rt, Scheme) override {
        struct R : Run {
            std::shared_ptr<Json> report = std::make_shared<Json>();
            void finalize(Outcome& out) override { out.adversary = *report; }
        };
        auto run = std::make_unique<R>();
        auto report = run->report;
        const bool fixup = apply_fixup_;

        // E0 holds (5,6); (7,8) starts split E0/E1 and qubit 7 is handed to
        // E0 before the round (the eavesdroppers may pre-share entanglement).
        rt.q->add_bell_pair(5, 6, BellLabel(0, 0), "E0", "E0");
        rt.q->add_bell_pair(7, 8, BellLabel(0, 0), "E0", "E1");

        rt.net->add_tap("V0", "P", "E0", [rt](const InterceptContext& ctx) {
            if (ctx.payload.qubits.size() != 1 || ctx.payload.qubits[0] != 2)
                return TapAction::forward();
            rt.q->transfer(2, "E0");
            Payload onward = ctx.payload;
            onward.qubits = {6};
            return TapAction::replace(std::move(onward));
        });
        rt.net->add_tap("V1", "P", "E1", [rt](const InterceptContext& ctx) {
            if (ctx.payload.qubits.size() != 1 || ctx.payload.qubits[0] != 3)
                return TapAction::forward();
            rt.q->transfer(3, "E1");
            Payload onward = ctx.payload;
            onward.qubits = {8};
            return TapAction::replace(std::move(onward));
        });
        // the V1 -> V0 shipment: swap in qubit 2, patched to carry P's label
        rt.net->add_tap("V1", "V0", "E0", [rt, report, fixup](const InterceptContext& ctx) {
            if (ctx.payload.kind != "shipment") return TapAction::forward();
            rt.q->transfer(ctx.payload.qubits.at(0), "E0");
            const BellLabel r = rt.q->bsm("E0", bsm_site(5, 7), 5, 7, ctx.at);
            if (fixup) {
                // (1,2) is publicly 11; shift it to r so V0's check matches
                rt.q->apply_pauli("E0", 2, pauli_for(BellLabel(1, 1) ^ r));
            }
            *report = Json{{"id", "scheme-iii-attack"}, {"bsm_57", r.str()}, {"fixup", fixup}};
            Payload onward = ctx.payload;
            onward.qubits = {2};
            return TapAction::replace(std::move(onward));
        });
        return run;
    }

private:
    bool apply_fixup_;
};

// ---------------------------------------------------------------------------

class SchemeIVAttack : public Strategy {
public:
    std::string id() const override { return "scheme-iv-attack"; }
    bool supports(Scheme s) const override { return s == Scheme::iv; }

    std::unique_ptr<Run> install(const AttackRuntime& rt, Scheme) override {
        struct Shared {
            BellLabel prior46;   // learned from V0's announced swap result
            bool prior46_known = false;
            TwoBits recovered0, recovered1;
            BellLabel r0, r1;    // retained-pair BSM results
            bool done0 = false, done1 = false;
        };
        struct R : Run {
            std::shared_ptr<Shared> shared = std::make_shared<Shared>();
            void finalize(Outcome& out) override {
                out.adversary =
                    Json{{"id", "scheme-iv-attack"},
                         {"recovered", shared->done0 && shared->done1
                                           ? Json::array({shared->recovered0.str(),
                                                          shared->recovered1.str()})
                                           : Json(nullptr)},
                         {"retained_bsm", shared->done0 && shared->done1
                                              ? Json::array({shared->r0.str(), shared->r1.str()})
                                              : Json(nullptr)}};
            }
        };
        auto run = std::make_unique<R>();
        auto sh = run->shared;

        rt.q->add_bell_pair(7, 8, BellLabel(0, 0), "E0", "E0");
        rt.q->add_bell_pair(9, 10, BellLabel(0, 0), "E1", "E1");

        rt.net->add_tap("V0", "P", "E0", [rt](const InterceptContext& ctx) {
            if (ctx.payload.kind != "encoded") return TapAction::forward();
            rt.q->transfer(ctx.payload.qubits.at(0), "E0");
            Payload onward = ctx.payload;
            onward.qubits = {7};
            return TapAction::replace(std::move(onward));
        });
        rt.net->add_tap("V1", "P", "E1", [rt](const InterceptContext& ctx) {
            if (ctx.payload.kind != "encoded") return TapAction::forward();
            rt.q->transfer(ctx.payload.qubits.at(0), "E1");
            Payload onward = ctx.payload;
            onward.qubits = {9};
            return TapAction::replace(std::move(onward));
        });
        // the verifiers' channel leaks V0's swap result, which fixes (4,6)
        rt.net->add_tap("V0", "V1", "E1", [sh](const InterceptContext& ctx) {
            if (ctx.payload.kind == "swap-result") {
                sh->prior46 = BellLabel(0, 0) ^ BellLabel(1, 1) ^
                              *BellLabel::parse(ctx.payload.data.at("label").get<std::string>());
                sh->prior46_known = true;
            }
            return TapAction::forward();
        });
        // replies: recover each message from the retained pair and P's answer,
        // then pass the exact message along in place of P's wrong decode
        rt.net->add_tap("P", "V0", "E0", [rt, sh](const InterceptContext& ctx) {
            if (ctx.payload.kind != "message") return TapAction::forward();
            const TwoBits p_says =
                *TwoBits::parse(ctx.payload.data.at("msg").get<std::string>());
            const BellLabel m0 = p_says ^ BellLabel(0, 0); // P's raw BSM outcome
            sh->r0 = rt.q->bsm("E0", bsm_site(8, 1), 8, 1, ctx.at);
            sh->recovered0 = sh->r0 ^ m0;
            sh->done0 = true;
            Payload onward = ctx.payload;
            onward.data = Json{{"msg", sh->recovered0.str()}};
            return TapAction::replace(std::move(onward));
        });
        rt.net->add_tap("P", "V1", "E1", [rt, sh](const InterceptContext& ctx) {
            if (ctx.payload.kind != "message") return TapAction::forward();
            if (!sh->prior46_known) throw internal_error("scheme-iv attack missed the swap result");
            const TwoBits p_says =
                *TwoBits::parse(ctx.payload.data.at("msg").get<std::string>());
            const BellLabel m1 = p_says ^ sh->prior46;
            sh->r1 = rt.q->bsm("E1", bsm_site(10, 6), 10, 6, ctx.at);
            sh->recovered1 = sh->r1 ^ m1 ^ sh->prior46;
            sh->done1 = true;
            Payload onward = ctx.payload;
            onward.data = Json{{"msg", sh->recovered1.str()}};
            return TapAction::replace(std::move(onward));
        });
        return run;
    }
};

} // namespace

std::shared_ptr<Strategy> scheme_iii_attack(bool apply_fixup) {
    return std::make_shared<SchemeIIIAttack>(apply_fixup);
}
std::shared_ptr<Strategy> scheme_iv_attack() { return std::make_shared<SchemeIVAttack>(); }
std::shared_ptr<Strategy> intercept_resend(BasisPolicy policy) {
    return std::make_shared<InterceptResend>(policy);
}
std::shared_ptr<Strategy> passive_collector() { return std::make_shared<PassiveCollector>(); }
std::shared_ptr<Strategy> entangling_intercept(int target_qubit) {
    return std::make_shared<EntanglingIntercept>(target_qubit);
}
std::shared_ptr<Strategy> key_guess() { return std::make_shared<KeyGuess>(); }

std::shared_ptr<Strategy> make_strategy(const std::string& id) {
    if (id.empty() || id == "none") return nullptr;
    if (id == "passive-collector") return passive_collector();
    if (id == "intercept-resend") return intercept_resend(BasisPolicy::random);
    if (id == "intercept-resend-z") return intercept_resend(BasisPolicy::fixed_z);
    if (id == "entangling-intercept") return entangling_intercept(1);
    if (id == "entangling-intercept-v1") return entangling_intercept(11);
    if (id == "key-guess") return key_guess();
    if (id == "scheme-iii-attack") return scheme_iii_attack(true);
    if (id == "scheme-iii-attack-nofix") return scheme_iii_attack(false);
    if (id == "scheme-iv-attack") return scheme_iv_attack();
    throw std::invalid_argument("unknown adversary '" + id + "'");
}

std::vector<std::string> strategy_ids() {
    return {"none",
            "passive-collector",
            "intercept-resend",
            "intercept-resend-z",
            "entangling-intercept",
            "entangling-intercept-v1",
            "key-guess",
            "scheme-iii-attack",
            "scheme-iii-attack-nofix",
            "scheme-iv-attack"};
}

} // namespace qpv
