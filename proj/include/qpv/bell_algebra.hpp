#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qpv/bell.hpp"
#include "qpv/rng.hpp"

namespace qpv {

/// Label of the residual pair after entanglement swapping: a BSM on one
/// qubit from each of two pairs labeled `a` and `b` that yields outcome `m`
/// leaves the two untouched qubits in the pair labeled a ^ b ^ m.
///
/// The XOR closed form is not taken on faith: the test suite certifies all
/// 64 (a, b, m) cases against the state-vector engine.
inline BellLabel swap_label(BellLabel a, BellLabel b, BellLabel m) { return a ^ b ^ m; }

/// Endpoint label of a chain of Bell pairs after all interior BSMs:
/// the XOR of every pair label and every measurement outcome.
/// Requires outcomes.size() == pairs.size() - 1 and a nonempty chain.
BellLabel chain_label(std::span<const BellLabel> pair_labels,
                      std::span<const BellLabel> bsm_outcomes);

/// Solves a chain for the single missing BSM outcome, given every pair
/// label, every other outcome, and the observed endpoint label. XOR always
/// produces an answer; consistency with announcements is the caller's check.
BellLabel infer_hidden(std::span<const BellLabel> known_pairs,
                       std::span<const BellLabel> known_outcomes,
                       BellLabel observed_endpoint);

/// Plain-text table of all 64 swap cases: initial labels (a, b), BSM outcome
/// m, residual label r. Byte-identical across platforms; the committed golden
/// copy pins it in CI.
std::string emit_table();

/// Exact label bookkeeping for the Bell pairs of one simulation run.
///
/// Tracks which qubits form live pairs and what each pair's label is. No
/// amplitudes are stored; this backend is valid for protocol segments built
/// from Bell preparations, BSMs and Pauli frames only, and is cross-checked
/// against the state-vector engine wherever both run.
class PairRegistry {
public:
    /// Registers a fresh pair. Qubit ids must not belong to live pairs.
    int add_pair(int qubit_a, int qubit_b, BellLabel label);

    bool has_live_pair(int qubit) const;
    bool same_pair(int qubit_a, int qubit_b) const;
    /// Label of the live pair formed by exactly these two qubits.
    BellLabel label_of(int qubit_a, int qubit_b) const;
    /// Partner qubit within a live pair.
    int partner_of(int qubit) const;

    /// Pauli frame update: label ^= pauli_label(p). Qubit must be live.
    void apply_pauli(int qubit, PauliOp p);

    /// BSM on one qubit from each of two distinct live pairs. Samples the
    /// outcome uniformly (the state-vector projector weights are exactly 1/4
    /// for independent pairs), consumes both pairs, registers the measured
    /// qubits and the residual qubits as new live pairs, returns the outcome.
    BellLabel bsm_label(int qubit_a, int qubit_b, Rng& rng);
    /// Same bookkeeping with a forced outcome.
    BellLabel bsm_label_forced(int qubit_a, int qubit_b, BellLabel outcome);

    /// Deterministic read of a complete live pair: a BSM on both qubits of
    /// one pair always returns its label. Consumes the pair and re-registers
    /// it (measured, label unchanged).
    BellLabel close_pair(int qubit_a, int qubit_b);

    /// Drops the pair containing this qubit (single-qubit measurement or a
    /// non-Pauli gate broke the Bell structure). No-op for unpaired qubits.
    void release(int qubit);

    std::size_t live_pairs() const { return qubit_to_pair_.size() / 2; }

private:
    struct Pair {
        int a;
        int b;
        BellLabel label;
    };

    const Pair& live_pair_of(int qubit) const;
    BellLabel do_swap(int qubit_a, int qubit_b, BellLabel outcome);

    std::vector<Pair> pairs_;            // all ever created; index = pair id
    std::map<int, int> qubit_to_pair_;   // live qubits only
};

} // namespace qpv
