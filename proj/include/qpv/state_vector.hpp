#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "qpv/bell.hpp"
#include "qpv/common.hpp"
#include "qpv/rng.hpp"

namespace qpv {

/// Rotation angle in radians for the real rotation
///   R(t) = [[cos t, -sin t], [sin t, cos t]]
/// acting in the {|0>,|1>} plane. All R(t) commute and R(pi/2)|0> = |1>,
/// which the rotation-cipher authentication relies on.
struct RotationAngle {
    double radians = 0.0;

    constexpr RotationAngle() = default;
    constexpr explicit RotationAngle(double r) : radians(r) {}

    /// Authentication step angle pi / 4^z for integer z >= 1.
    static RotationAngle auth_step(int z);

    friend constexpr RotationAngle operator*(int k, RotationAngle a) {
        return RotationAngle(k * a.radians);
    }
    constexpr RotationAngle operator-() const { return RotationAngle(-radians); }
};

/// Exact state-vector register of 1..16 qubits.
///
/// Qubit ordering is little-endian: qubit 0 is the least significant bit of
/// the amplitude index. Global phase is never meaningful; classification
/// helpers ignore it. Every mutating operation re-checks normalization to
/// within 1e-9 and throws internal_error on drift.
class StateVector {
public:
    using Complex = std::complex<double>;

    /// |0...0> on n qubits.
    explicit StateVector(int num_qubits);

    /// Two-qubit register holding the Bell state with the given label;
    /// qubit 0 is the first ket of the label convention.
    static StateVector make_bell(BellLabel label);

    int num_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex amplitude(std::size_t i) const { return amps_.at(i); }
    double norm_sq() const;

    // -- gates -------------------------------------------------------------

    void apply_hadamard(int q);
    void apply_pauli(int q, PauliOp p);
    void apply_rotation(int q, RotationAngle angle);
    /// Pure relabeling of qubit indices (amplitude permutation).
    void swap_qubits(int a, int b);

    // -- computational-basis measurement ------------------------------------

    std::array<double, 2> z_probabilities(int q) const;
    /// Born-rule sample; collapses and renormalizes.
    int measure_z(int q, Rng& rng);
    /// Forces the given outcome (projective post-selection). Throws
    /// internal_error if that branch has (near) zero probability.
    void collapse_z(int q, int bit);

    // -- Bell-basis measurement ----------------------------------------------

    /// Projector weights onto the four Bell states of the (q1, q2) pair,
    /// ordered by label code. Always sums to 1 for a normalized state.
    std::array<double, 4> bsm_probabilities(int q1, int q2) const;
    /// Bell state measurement: samples an outcome by the Born rule, leaves
    /// the measured pair in the outcome Bell state, renormalizes.
    BellLabel bsm(int q1, int q2, Rng& rng);
    /// Forces a specific Bell outcome; throws on a zero-probability branch.
    void collapse_bsm(int q1, int q2, BellLabel outcome);

    /// Classifies the (q1, q2) pair: returns its label if the full state
    /// factors as (Bell state on the pair) x (rest) up to global phase
    /// within `tol`, otherwise nullopt ("not a Bell pair").
    std::optional<BellLabel> bell_label_of(int q1, int q2, double tol = kNormTolerance) const;

    friend StateVector tensor(const StateVector& a, const StateVector& b);

private:
    void check_index(int q) const;
    void check_norm() const;
    void apply_2x2(int q, Complex g00, Complex g01, Complex g10, Complex g11);

    std::vector<Complex> amps_;
    int n_;
};

/// Kronecker product; qubit indices of `b` shift up by a.num_qubits().
/// Throws std::length_error when the combined register would exceed 16 qubits.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Superdense coding: applies I/X/Z/XZ to qubit q according to the 2-bit
/// message (see pauli_for for the convention).
void dense_encode(StateVector& state, int q, TwoBits msg);

/// Coefficients c[m][r] of a 4-qubit state in the product Bell basis
/// |b_m> on (pair_a) x |b_r> on (pair_b). The two pairs must cover all four
/// qubits. Used as an algebraic oracle in tests and cross-checks.
std::array<std::array<std::complex<double>, 4>, 4>
bell_coefficients(const StateVector& state, std::pair<int, int> pair_a, std::pair<int, int> pair_b);

} // namespace qpv
