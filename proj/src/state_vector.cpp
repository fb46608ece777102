#include "qpv/state_vector.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpv {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

RotationAngle RotationAngle::auth_step(int z) {
    if (z < 1) throw std::invalid_argument("auth_step: z must be >= 1");
    return RotationAngle(std::numbers::pi / std::pow(4.0, z));
}

StateVector::StateVector(int num_qubits) : n_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::length_error("StateVector: qubit count must be in 1..16");
    amps_.assign(std::size_t{1} << num_qubits, Complex(0.0, 0.0));
    amps_[0] = Complex(1.0, 0.0);
}

StateVector StateVector::make_bell(BellLabel label) {
    StateVector s(2);
    s.amps_[0] = Complex(0.0, 0.0);
    // |0>|uj> then (-1)^ui |1>|1 xor uj>, qubit 0 = first ket.
    s.amps_[static_cast<std::size_t>(label.uj()) << 1] = Complex(kInvSqrt2, 0.0);
    s.amps_[1u + (static_cast<std::size_t>(1 - label.uj()) << 1)] =
        Complex(label.ui() ? -kInvSqrt2 : kInvSqrt2, 0.0);
    return s;
}

double StateVector::norm_sq() const {
    double t = 0.0;
    for (const Complex& a : amps_) t += std::norm(a);
    return t;
}

void StateVector::check_index(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("StateVector: qubit index out of range");
}

void StateVector::check_norm() const {
    if (std::abs(norm_sq() - 1.0) > kNormTolerance)
        throw internal_error("StateVector: norm drifted beyond tolerance");
}

void StateVector::apply_2x2(int q, Complex g00, Complex g01, Complex g10, Complex g11) {
    check_index(q);
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[j];
        amps_[i] = g00 * a0 + g01 * a1;
        amps_[j] = g10 * a0 + g11 * a1;
    }
    check_norm();
}

void StateVector::apply_hadamard(int q) {
    apply_2x2(q, Complex(kInvSqrt2, 0), Complex(kInvSqrt2, 0), Complex(kInvSqrt2, 0),
              Complex(-kInvSqrt2, 0));
}

void StateVector::apply_pauli(int q, PauliOp p) {
    switch (p) {
        case PauliOp::I:
            check_index(q);
            break;
        case PauliOp::X:
            apply_2x2(q, Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0));
            break;
        case PauliOp::Z:
            apply_2x2(q, Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0));
            break;
        case PauliOp::XZ:
            // X * Z (Z first, then X); phases differ from ZX only globally.
            apply_2x2(q, Complex(0, 0), Complex(-1, 0), Complex(1, 0), Complex(0, 0));
            break;
    }
}

void StateVector::apply_rotation(int q, RotationAngle angle) {
    const double c = std::cos(angle.radians);
    const double s = std::sin(angle.radians);
    apply_2x2(q, Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0));
}

void StateVector::swap_qubits(int a, int b) {
    check_index(a);
    check_index(b);
    if (a == b) return;
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const bool ba = (i & ma) != 0;
        const bool bb = (i & mb) != 0;
        if (ba == bb) continue;
        if (!ba) {
            const std::size_t j = (i & ~mb) | ma;
            std::swap(amps_[i], amps_[j]);
        }
    }
}

std::array<double, 2> StateVector::z_probabilities(int q) const {
    check_index(q);
    const std::size_t mask = std::size_t{1} << q;
    std::array<double, 2> p{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) p[(i & mask) ? 1 : 0] += std::norm(amps_[i]);
    return p;
}

int StateVector::measure_z(int q, Rng& rng) {
    const auto p = z_probabilities(q);
    const int bit = rng.pick(std::span<const double>(p.data(), 2));
    collapse_z(q, bit);
    return bit;
}

void StateVector::collapse_z(int q, int bit) {
    check_index(q);
    const std::size_t mask = std::size_t{1} << q;
    double w = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const bool match = ((i & mask) != 0) == (bit != 0);
        if (match)
            w += std::norm(amps_[i]);
        else
            amps_[i] = Complex(0, 0);
    }
    if (w <= 1e-12) throw internal_error("collapse_z: zero-probability branch");
    const double inv = 1.0 / std::sqrt(w);
    for (Complex& a : amps_) a *= inv;
    check_norm();
}

std::array<double, 4> StateVector::bsm_probabilities(int q1, int q2) const {
    check_index(q1);
    check_index(q2);
    if (q1 == q2) throw std::invalid_argument("bsm: qubit indices must differ");
    const std::size_t m1 = std::size_t{1} << q1;
    const std::size_t m2 = std::size_t{1} << q2;
    std::array<double, 4> w{0, 0, 0, 0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & (m1 | m2)) continue;
        const Complex a00 = amps_[i];
        const Complex a01 = amps_[i | m2];
        const Complex a10 = amps_[i | m1];
        const Complex a11 = amps_[i | m1 | m2];
        w[0] += std::norm((a00 + a11) * kInvSqrt2);
        w[1] += std::norm((a01 + a10) * kInvSqrt2);
        w[2] += std::norm((a00 - a11) * kInvSqrt2);
        w[3] += std::norm((a01 - a10) * kInvSqrt2);
    }
    return w;
}

BellLabel StateVector::bsm(int q1, int q2, Rng& rng) {
    const auto w = bsm_probabilities(q1, q2);
    const int k = rng.pick(std::span<const double>(w.data(), 4));
    const BellLabel outcome = BellLabel::from_code(k);
    collapse_bsm(q1, q2, outcome);
    return outcome;
}

void StateVector::collapse_bsm(int q1, int q2, BellLabel outcome) {
    check_index(q1);
    check_index(q2);
    if (q1 == q2) throw std::invalid_argument("bsm: qubit indices must differ");
    const std::size_t m1 = std::size_t{1} << q1;
    const std::size_t m2 = std::size_t{1} << q2;
    const int ui = outcome.ui();
    const int uj = outcome.uj();
    double w = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & (m1 | m2)) continue;
        // Overlap of the pair amplitudes with |b_outcome>.
        const std::size_t lo = uj ? (i | m2) : i;          // (0, uj)
        const std::size_t hi = uj ? (i | m1) : (i | m1 | m2); // (1, 1 xor uj)
        const Complex c = (amps_[lo] + (ui ? -amps_[hi] : amps_[hi])) * kInvSqrt2;
        w += std::norm(c);
        // Post-measurement pair state is |b_outcome> tensor the rest.
        amps_[lo] = c * kInvSqrt2;
        amps_[hi] = (ui ? -c : c) * kInvSqrt2;
        const std::size_t z0 = uj ? i : (i | m2);
        const std::size_t z1 = uj ? (i | m1 | m2) : (i | m1);
        amps_[z0] = Complex(0, 0);
        amps_[z1] = Complex(0, 0);
    }
    if (w <= 1e-12) throw internal_error("collapse_bsm: zero-probability branch");
    const double inv = 1.0 / std::sqrt(w);
    for (Complex& a : amps_) a *= inv;
    check_norm();
}

std::optional<BellLabel> StateVector::bell_label_of(int q1, int q2, double tol) const {
    const auto w = bsm_probabilities(q1, q2);
    for (int k = 0; k < 4; ++k) {
        if (1.0 - w[k] <= tol) return BellLabel::from_code(k);
    }
    return std::nullopt;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const int n = a.num_qubits() + b.num_qubits();
    if (n > kMaxQubits) throw std::length_error("tensor: register capacity (16 qubits) exceeded");
    StateVector out(n);
    for (std::size_t jb = 0; jb < b.dim(); ++jb) {
        for (std::size_t ia = 0; ia < a.dim(); ++ia) {
            out.amps_[ia | (jb << a.num_qubits())] = a.amps_[ia] * b.amps_[jb];
        }
    }
    out.check_norm();
    return out;
}

void dense_encode(StateVector& state, int q, TwoBits msg) {
    state.apply_pauli(q, pauli_for(msg));
}

std::array<std::array<std::complex<double>, 4>, 4>
bell_coefficients(const StateVector& state, std::pair<int, int> pair_a, std::pair<int, int> pair_b) {
    if (state.num_qubits() != 4)
        throw std::invalid_argument("bell_coefficients: requires a 4-qubit state");
    const int qs[4] = {pair_a.first, pair_a.second, pair_b.first, pair_b.second};
    bool seen[4] = {false, false, false, false};
    for (int q : qs) {
        if (q < 0 || q > 3 || seen[q])
            throw std::invalid_argument("bell_coefficients: pairs must cover all four qubits");
        seen[q] = true;
    }
    std::array<std::array<std::complex<double>, 4>, 4> c{};
    for (int m = 0; m < 4; ++m) {
        const BellLabel lm = BellLabel::from_code(m);
        for (int r = 0; r < 4; ++r) {
            const BellLabel lr = BellLabel::from_code(r);
            // <b_m (pair_a)| <b_r (pair_b)| psi>
            std::complex<double> acc(0, 0);
            for (int t1 = 0; t1 < 2; ++t1) {
                for (int t2 = 0; t2 < 2; ++t2) {
                    // term t1 of b_m: t1=0 -> (0, uj), t1=1 -> (1, 1^uj); same for b_r
                    const int a_first = t1;
                    const int a_second = t1 ? (1 - lm.uj()) : lm.uj();
                    const int b_first = t2;
                    const int b_second = t2 ? (1 - lr.uj()) : lr.uj();
                    double sign = 1.0;
                    if (t1 && lm.ui()) sign = -sign;
                    if (t2 && lr.ui()) sign = -sign;
                    std::size_t idx = 0;
                    idx |= static_cast<std::size_t>(a_first) << pair_a.first;
                    idx |= static_cast<std::size_t>(a_second) << pair_a.second;
                    idx |= static_cast<std::size_t>(b_first) << pair_b.first;
                    idx |= static_cast<std::size_t>(b_second) << pair_b.second;
                    acc += 0.5 * sign * state.amplitude(idx);
                }
            }
            c[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)] = acc;
        }
    }
    return c;
}

} // namespace qpv
