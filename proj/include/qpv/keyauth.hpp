#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qpv/adversaries.hpp"
#include "qpv/state_vector.hpp"
#include "qpv/transcript.hpp"

namespace qpv {

/// The two keys a verifier ends up sharing with the prover after N accepted
/// rounds: K_V from the verifier's own private BSM results, K_P from the
/// prover-side results, 2 bits per round each. In scheme B both ends know
/// both strings; in scheme A the prover learns only K_P.
struct KeyPair {
    std::string k_v; // bit string, length 2N
    std::string k_p;
    int rounds = 0;
};

/// Concatenates per-round 2-bit secrets, in round order, per verifier.
/// All transcripts must be accepted rounds of the same (key-producing) scheme.
std::map<std::string, KeyPair> accumulate_keys(std::span<const Transcript> transcripts);

/// One authentication exchange: the prover rotation-encodes a random integer
/// string S on `length` qubits with step angle pi/4^z_p, the verifier stacks
/// a second string T with step pi/4^z_v, the prover strips S and encrypts a
/// message bit per qubit as R((p_i xor m_i) pi/2), and the verifier strips T,
/// measures, and XORs with the key to read the message.
struct AuthSession {
    int z_p = 1;
    int z_v = 2;
    std::vector<int> s; // prover integers in [0, 4^z_p)
    std::vector<int> t; // verifier integers in [0, 4^z_v)
    std::vector<int> m; // message bits

    int length() const { return static_cast<int>(m.size()); }
    RotationAngle theta_p() const { return RotationAngle::auth_step(z_p); }
    RotationAngle theta_v() const { return RotationAngle::auth_step(z_v); }

    /// Random session of `length` qubits (length <= 16).
    static AuthSession random(int length, int z_p, int z_v, Rng& rng);
};

/// Key bits as a '0'/'1' string of the session length.
std::vector<int> key_bits(const std::string& key, int length);

StateVector auth_encode_s(const AuthSession& session);
void auth_counter_encode(const AuthSession& session, StateVector& state);
void auth_strip_s(const AuthSession& session, StateVector& state);
void auth_encrypt_message(const AuthSession& session, StateVector& state,
                          std::span<const int> key);
std::vector<int> auth_decode_verify(const AuthSession& session, StateVector& state,
                                    std::span<const int> key, Rng& rng);

/// Convenience: full encode -> counter-encode -> strip -> encrypt -> decode
/// pipeline on one state; returns the decoded message bits.
std::vector<int> auth_roundtrip(const AuthSession& session, std::span<const int> key, Rng& rng);

/// Distinguishability of adjacent rotation-encoded states,
/// sqrt(1 - |<psi_s | psi_{s+1}>|^2), computed from explicit single-qubit
/// states. Analytically |sin(pi/4^z)|; it vanishes as z grows, which is what
/// makes the encoding safe to expose.
double nearest_neighbor_distance(int z);

/// Runs the exchange over the simulated network (prover at P, verifier at
/// V0) so taps can interfere with the travelling qubits.
struct AuthExchangeOptions {
    std::uint64_t seed = 1;
    int z_p = 1;
    int z_v = 2;
    int length = 8;
    std::string key; // bit string; length must match
    double tolerance = 1e-6;
    RecordLevel level = RecordLevel::full;
    std::shared_ptr<Strategy> adversary;
};

struct AuthExchangeResult {
    bool decoded_ok = false;
    std::vector<int> message;
    std::vector<int> decoded;
    Transcript transcript;
};

AuthExchangeResult run_auth_exchange(const WorldLine& world, AuthExchangeOptions opts);

} // namespace qpv
