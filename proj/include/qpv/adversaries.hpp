#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qpv/quantum_context.hpp"
#include "qpv/scheme.hpp"
#include "qpv/spacetime.hpp"

namespace qpv {

/// Everything a strategy may touch during a run. Custody rules still apply:
/// an adversary acts only at its taps and on qubits it owns, where owning an
/// in-flight qubit requires having intercepted it.
struct AttackRuntime {
    QuantumContext* q = nullptr;
    Network* net = nullptr;
    Scheduler* sched = nullptr;
    Rng* rng = nullptr;
    const WorldLine* world = nullptr;
};

/// A pluggable adversary. The strategy object itself is stateless
/// configuration; install() binds taps for one run and returns the per-run
/// state, which reports what the adversary learned when the run ends.
class Strategy {
public:
    struct Run {
        virtual ~Run() = default;
        virtual void finalize(Outcome&) {}
    };

    virtual ~Strategy() = default;
    virtual std::string id() const = 0;
    virtual bool supports(Scheme s) const = 0;
    virtual std::unique_ptr<Run> install(const AttackRuntime& rt, Scheme s) = 0;
};

enum class BasisPolicy { random, fixed_z };

/// The published scheme-III cheat: E0/E1 substitute halves of their own
/// pairs toward the prover, read the swapped label with a BSM, and patch the
/// verifier-side pair with a Pauli so the final consistency check passes.
/// `apply_fixup = false` drops the patch step (for measuring how essential
/// it is); the attack then fails 3 out of 4 branches.
std::shared_ptr<Strategy> scheme_iii_attack(bool apply_fixup = true);

/// The published scheme-IV cheat: substitute qubits, recover both encoded
/// 2-bit messages from retained pairs plus the prover's announcements, and
/// swap the prover's (wrong) replies for the exact messages.
std::shared_ptr<Strategy> scheme_iv_attack();

/// Measures qubits crossing the verifier->prover leg (per policy) and
/// forwards the collapsed states; records outcomes and any classical
/// traffic. Classical payloads are read and forwarded untouched.
std::shared_ptr<Strategy> intercept_resend(BasisPolicy policy);

/// Reads classical payloads at every tap and forwards everything untouched,
/// including qubits. Pure listener: acceptance statistics are unaffected.
std::shared_ptr<Strategy> passive_collector();

/// Entangles an in-flight qubit with half of the adversary's own pair via a
/// BSM and forwards the other half. Breaks the announcement/inference
/// consistency of the chain 3 times out of 4. `target_qubit` selects which
/// flying qubit to hit (1: the V0 leg, 11: the V1 leg).
std::shared_ptr<Strategy> entangling_intercept(int target_qubit = 1);

/// Colluding taps for the shared-key scheme: jam both challenge bits and
/// answer with a shared guessed key bit, timed so replies look honest.
std::shared_ptr<Strategy> key_guess();

/// Strategy by CLI identifier; nullptr for "none", nullopt-style throw for
/// unknown ids (std::invalid_argument).
std::shared_ptr<Strategy> make_strategy(const std::string& id);
std::vector<std::string> strategy_ids();

} // namespace qpv
