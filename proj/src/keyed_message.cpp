#include "qpv/keyed_message.hpp"

namespace qpv {

namespace {
int msg_bit(TwoBits msg, int i) { return i == 0 ? msg.ui() : msg.uj(); }
} // namespace

StateVector encode_keyed_message(TwoBits msg, TwoBits key) {
    StateVector s(2);
    for (int i = 0; i < 2; ++i) {
        if (msg_bit(msg, i) ^ key.ui()) s.apply_pauli(i, PauliOp::X);
        if (key.uj()) s.apply_hadamard(i);
    }
    return s;
}

TwoBits decode_keyed_message(StateVector& qubits, TwoBits key, Rng& rng) {
    int bits[2];
    for (int i = 0; i < 2; ++i) {
        if (key.uj()) qubits.apply_hadamard(i);
        bits[i] = qubits.measure_z(i, rng) ^ key.ui();
    }
    return TwoBits(bits[0], bits[1]);
}

void encode_keyed_message(QuantumContext& q, const std::string& actor, int qubit0, int qubit1,
                          TwoBits msg, TwoBits key) {
    const int ids[2] = {qubit0, qubit1};
    for (int i = 0; i < 2; ++i) {
        q.add_qubit(ids[i], actor);
        if (msg_bit(msg, i) ^ key.ui()) q.apply_pauli(actor, ids[i], PauliOp::X);
        if (key.uj()) q.apply_hadamard(actor, ids[i]);
    }
}

TwoBits decode_keyed_message(QuantumContext& q, const std::string& actor,
                             const std::string& site_prefix, int qubit0, int qubit1, TwoBits key) {
    const int ids[2] = {qubit0, qubit1};
    int bits[2];
    for (int i = 0; i < 2; ++i) {
        if (key.uj()) q.apply_hadamard(actor, ids[i]);
        bits[i] = q.measure_z(actor, site_prefix + "[" + std::to_string(i) + "]", ids[i]) ^ key.ui();
    }
    return TwoBits(bits[0], bits[1]);
}

} // namespace qpv
