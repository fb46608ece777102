#include "qpv/quantum_context.hpp"

#include <cmath>
#include <stdexcept>

namespace qpv {

void QuantumContext::add_bell_pair(int qubit_a, int qubit_b, BellLabel label,
                                   const std::string& owner_a, const std::string& owner_b) {
    if (reg_of_.count(qubit_a) || reg_of_.count(qubit_b))
        throw std::invalid_argument("QuantumContext: qubit id already allocated");
    auto reg = std::make_shared<Register>(Register{StateVector::make_bell(label), {qubit_a, qubit_b}});
    reg_of_[qubit_a] = reg;
    reg_of_[qubit_b] = reg;
    owner_[qubit_a] = owner_a;
    owner_[qubit_b] = owner_b;
    registry_.add_pair(qubit_a, qubit_b, label);
}

void QuantumContext::add_qubit(int qubit, const std::string& owner) {
    if (reg_of_.count(qubit))
        throw std::invalid_argument("QuantumContext: qubit id already allocated");
    auto reg = std::make_shared<Register>(Register{StateVector(1), {qubit}});
    reg_of_[qubit] = reg;
    owner_[qubit] = owner;
}

const std::string& QuantumContext::owner_of(int qubit) const {
    auto it = owner_.find(qubit);
    if (it == owner_.end()) throw std::invalid_argument("QuantumContext: unknown qubit");
    return it->second;
}

void QuantumContext::transfer(int qubit, const std::string& new_owner) {
    owner_of(qubit);
    owner_[qubit] = new_owner;
}

void QuantumContext::require_owner(const std::string& actor, int qubit) const {
    if (owner_of(qubit) != actor)
        throw std::invalid_argument("QuantumContext: " + actor + " does not hold qubit " +
                                    std::to_string(qubit));
}

QuantumContext::RegisterPtr QuantumContext::register_of(int qubit) const {
    auto it = reg_of_.find(qubit);
    if (it == reg_of_.end()) throw std::invalid_argument("QuantumContext: unknown qubit");
    return it->second;
}

int QuantumContext::local_index(const RegisterPtr& reg, int qubit) const {
    for (std::size_t i = 0; i < reg->qubits.size(); ++i)
        if (reg->qubits[i] == qubit) return static_cast<int>(i);
    throw internal_error("QuantumContext: qubit/register map out of sync");
}

QuantumContext::RegisterPtr QuantumContext::merge(const RegisterPtr& a, const RegisterPtr& b) {
    if (a == b) return a;
    auto merged = std::make_shared<Register>(Register{tensor(a->sv, b->sv), a->qubits});
    merged->qubits.insert(merged->qubits.end(), b->qubits.begin(), b->qubits.end());
    for (int q : merged->qubits) reg_of_[q] = merged;
    return merged;
}

void QuantumContext::apply_hadamard(const std::string& actor, int qubit) {
    require_owner(actor, qubit);
    auto reg = register_of(qubit);
    reg->sv.apply_hadamard(local_index(reg, qubit));
    registry_.release(qubit); // non-Pauli gate breaks exact label tracking
}

void QuantumContext::apply_rotation(const std::string& actor, int qubit, RotationAngle a) {
    require_owner(actor, qubit);
    auto reg = register_of(qubit);
    reg->sv.apply_rotation(local_index(reg, qubit), a);
    registry_.release(qubit);
}

void QuantumContext::apply_pauli(const std::string& actor, int qubit, PauliOp p) {
    require_owner(actor, qubit);
    auto reg = register_of(qubit);
    reg->sv.apply_pauli(local_index(reg, qubit), p);
    if (registry_.has_live_pair(qubit)) registry_.apply_pauli(qubit, p);
}

void QuantumContext::dense_encode(const std::string& actor, int qubit, TwoBits msg) {
    apply_pauli(actor, qubit, pauli_for(msg));
}

BellLabel QuantumContext::bsm(const std::string& actor, const std::string& site, int qubit_a,
                              int qubit_b, double at) {
    require_owner(actor, qubit_a);
    require_owner(actor, qubit_b);
    if (!registry_.has_live_pair(qubit_a) || !registry_.has_live_pair(qubit_b))
        throw std::invalid_argument("QuantumContext: BSM requires qubits from live Bell pairs");

    auto reg = merge(register_of(qubit_a), register_of(qubit_b));
    const int ia = local_index(reg, qubit_a);
    const int ib = local_index(reg, qubit_b);
    const auto weights = reg->sv.bsm_probabilities(ia, ib);

    const bool complete_pair = registry_.same_pair(qubit_a, qubit_b);
    if (complete_pair) {
        // A complete live pair must sit exactly in its labeled Bell state.
        const BellLabel expected = registry_.label_of(qubit_a, qubit_b);
        if (std::abs(weights[static_cast<std::size_t>(expected.code())] - 1.0) > kNormTolerance)
            throw internal_error("backend mismatch: complete pair not in its recorded Bell state");
    } else {
        // Independent pairs: the four projector weights are exactly 1/4.
        for (double w : weights)
            if (std::abs(w - 0.25) > kNormTolerance)
                throw internal_error("backend mismatch: cross-pair BSM weights not uniform");
    }

    BellLabel outcome;
    if (auto forcedv = forced_->take(site)) {
        outcome = BellLabel::from_code(*forcedv);
        if (weights[static_cast<std::size_t>(outcome.code())] <= 1e-12)
            throw internal_error("forced zero-probability branch at " + site);
    } else {
        const int k = rng_->pick(std::span<const double>(weights.data(), 4));
        outcome = BellLabel::from_code(k);
    }
    reg->sv.collapse_bsm(ia, ib, outcome);

    int residual_a = -1, residual_b = -1;
    if (complete_pair) {
        registry_.close_pair(qubit_a, qubit_b);
    } else {
        residual_a = registry_.partner_of(qubit_a);
        residual_b = registry_.partner_of(qubit_b);
        registry_.bsm_label_forced(qubit_a, qubit_b, outcome);
    }

    // Cross-check: both backends must agree on every pair label they share.
    const auto check = [&](int qa, int qb) {
        const BellLabel want = registry_.label_of(qa, qb);
        auto regc = register_of(qa);
        if (regc != register_of(qb)) throw internal_error("paired qubits in different registers");
        const auto got = regc->sv.bell_label_of(local_index(regc, qa), local_index(regc, qb));
        if (!got || *got != want)
            throw internal_error("backend mismatch: label registry disagrees with state vector");
    };
    check(qubit_a, qubit_b);
    if (!complete_pair) check(residual_a, residual_b);

    log_->event(at, actor, "bsm",
                Json{{"site", site},
                     {"qubits", Json::array({qubit_a, qubit_b})},
                     {"outcome", outcome.str()}});
    return outcome;
}

int QuantumContext::measure_z(const std::string& actor, const std::string& site, int qubit) {
    require_owner(actor, qubit);
    auto reg = register_of(qubit);
    const int local = local_index(reg, qubit);
    int bit;
    if (auto forcedv = forced_->take(site)) {
        bit = *forcedv & 1;
        const auto p = reg->sv.z_probabilities(local);
        if (p[static_cast<std::size_t>(bit)] <= 1e-12)
            throw internal_error("forced zero-probability branch at " + site);
        reg->sv.collapse_z(local, bit);
    } else {
        bit = reg->sv.measure_z(local, *rng_);
    }
    registry_.release(qubit);
    return bit;
}

std::optional<BellLabel> QuantumContext::classify_pair(int qubit_a, int qubit_b) {
    auto ra = register_of(qubit_a);
    auto rb = register_of(qubit_b);
    if (ra != rb) return std::nullopt; // separate registers cannot be entangled
    return ra->sv.bell_label_of(local_index(ra, qubit_a), local_index(ra, qubit_b));
}

} // namespace qpv
