#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "qpv/bell_algebra.hpp"
#include "qpv/state_vector.hpp"
#include "qpv/transcript.hpp"

namespace qpv {

/// Named forced measurement branches. Protocol runners consult this before
/// sampling, so tests and replays can walk a specific branch of a protocol
/// (measurement sites are named after the qubits involved, e.g. "BSM(1,2)").
/// Forcing a branch of zero probability is an internal error.
class ForcedOutcomes {
public:
    void force(const std::string& site, int value) { queues_[site].push_back(value); }
    void force_label(const std::string& site, BellLabel l) { force(site, l.code()); }

    std::optional<int> take(const std::string& site) {
        auto it = queues_.find(site);
        if (it == queues_.end() || it->second.empty()) return std::nullopt;
        const int v = it->second.front();
        it->second.pop_front();
        return v;
    }

    bool fully_consumed() const {
        for (const auto& [site, q] : queues_)
            if (!q.empty()) return false;
        return true;
    }

    bool empty() const { return queues_.empty(); }

private:
    std::map<std::string, std::deque<int>> queues_;
};

/// Quantum state of one simulation run, with two synchronized backends:
///
///  * ground truth: exact state vectors, held in lazily merged registers so
///    a run never pays for more amplitudes than its entanglement needs;
///  * bookkeeping: a PairRegistry of exact Bell labels for every live pair.
///
/// Every Bell measurement runs on the state vector (Born rule or forced
/// branch) and is then replayed on the label registry; any disagreement
/// between the two backends raises internal_error. Qubits carry an owner
/// tag, and operations name the acting party, so adversary code can never
/// reach into honest parties' registers.
class QuantumContext {
public:
    QuantumContext(Rng& rng, ForcedOutcomes& forced, TranscriptBuilder& log)
        : rng_(&rng), forced_(&forced), log_(&log) {}

    /// Allocates two fresh qubits holding the labeled Bell state.
    void add_bell_pair(int qubit_a, int qubit_b, BellLabel label, const std::string& owner_a,
                       const std::string& owner_b);

    /// Allocates one fresh qubit in |0>.
    void add_qubit(int qubit, const std::string& owner);

    const std::string& owner_of(int qubit) const;
    void transfer(int qubit, const std::string& new_owner);

    // -- gates (actor must own the qubit) ------------------------------------

    void apply_hadamard(const std::string& actor, int qubit);
    void apply_pauli(const std::string& actor, int qubit, PauliOp p);
    void apply_rotation(const std::string& actor, int qubit, RotationAngle a);
    void dense_encode(const std::string& actor, int qubit, TwoBits msg);

    // -- measurements ---------------------------------------------------------

    /// Bell state measurement at a named site. Merges registers if needed,
    /// samples (or takes a forced branch), updates the label registry, and
    /// cross-checks the residual pair's label against the state vector.
    BellLabel bsm(const std::string& actor, const std::string& site, int qubit_a, int qubit_b,
                  double at);

    /// Computational-basis measurement; breaks any Bell pair the qubit was in.
    int measure_z(const std::string& actor, const std::string& site, int qubit);

    /// Registry view of a live pair's label (exact bookkeeping).
    BellLabel pair_label(int qubit_a, int qubit_b) const { return registry_.label_of(qubit_a, qubit_b); }
    bool is_live_pair(int qubit_a, int qubit_b) const { return registry_.same_pair(qubit_a, qubit_b); }

    /// State-vector classification of a pair (oracle view).
    std::optional<BellLabel> classify_pair(int qubit_a, int qubit_b);

    PairRegistry& registry() { return registry_; }
    Rng& rng() { return *rng_; }
    ForcedOutcomes& forced() { return *forced_; }

private:
    struct Register {
        StateVector sv;
        std::vector<int> qubits; // id at each local index
    };
    using RegisterPtr = std::shared_ptr<Register>;

    RegisterPtr register_of(int qubit) const;
    int local_index(const RegisterPtr& reg, int qubit) const;
    RegisterPtr merge(const RegisterPtr& a, const RegisterPtr& b);
    void require_owner(const std::string& actor, int qubit) const;

    std::map<int, RegisterPtr> reg_of_;
    std::map<int, std::string> owner_;
    PairRegistry registry_;
    Rng* rng_;
    ForcedOutcomes* forced_;
    TranscriptBuilder* log_;
};

} // namespace qpv
