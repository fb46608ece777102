#pragma once

#include "qpv/quantum_context.hpp"
#include "qpv/state_vector.hpp"

namespace qpv {

/// 2-bit messages ride on two conjugate-coded qubits keyed by a 2-bit
/// secret: qubit i is prepared as H^{key_uj} |msg_i xor key_ui>. The pad bit
/// hides the message from anyone without the key; the basis bit makes
/// measuring taps disturb the state, so tampering shows up at the echo check.
/// Qubit 0 carries the first (u_i) message bit.

/// Standalone codec on a fresh 2-qubit register.
StateVector encode_keyed_message(TwoBits msg, TwoBits key);
TwoBits decode_keyed_message(StateVector& qubits, TwoBits key, Rng& rng);

/// In-run variants: the qubits are allocated in the context (ids supplied by
/// the caller) so they can travel over tapped channels like any payload.
void encode_keyed_message(QuantumContext& q, const std::string& actor, int qubit0, int qubit1,
                          TwoBits msg, TwoBits key);
TwoBits decode_keyed_message(QuantumContext& q, const std::string& actor,
                             const std::string& site_prefix, int qubit0, int qubit1, TwoBits key);

} // namespace qpv
