#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qpv/common.hpp"

namespace qpv {

/// Two-bit label (u_i, u_j) of a Bell state:
///
///   |b(ui,uj)> = (|0>|uj> + (-1)^ui |1>|1 xor uj>) / sqrt(2)
///
/// u_i is the phase bit, u_j the parity bit. Labels form a group under
/// bitwise XOR, which is what makes entanglement-swapping bookkeeping cheap.
/// Serializes as the two-character string "u_i u_j", e.g. "10".
class BellLabel {
public:
    constexpr BellLabel() = default;
    constexpr BellLabel(int ui, int uj) : code_(static_cast<std::uint8_t>(((ui & 1) << 1) | (uj & 1))) {}

    static constexpr BellLabel from_code(int code) {
        BellLabel l;
        l.code_ = static_cast<std::uint8_t>(code & 3);
        return l;
    }

    static std::optional<BellLabel> parse(std::string_view s) {
        if (s.size() != 2) return std::nullopt;
        if ((s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1')) return std::nullopt;
        return BellLabel(s[0] - '0', s[1] - '0');
    }

    constexpr int ui() const { return (code_ >> 1) & 1; }
    constexpr int uj() const { return code_ & 1; }
    constexpr int code() const { return code_; }

    std::string str() const {
        std::string s(2, '0');
        s[0] = static_cast<char>('0' + ui());
        s[1] = static_cast<char>('0' + uj());
        return s;
    }

    friend constexpr BellLabel operator^(BellLabel a, BellLabel b) {
        return from_code(a.code_ ^ b.code_);
    }
    BellLabel& operator^=(BellLabel o) {
        code_ ^= o.code_;
        return *this;
    }

    constexpr auto operator<=>(const BellLabel&) const = default;

private:
    std::uint8_t code_ = 0;
};

/// Protocol messages and round keys are plain 2-bit words that get XOR'ed
/// with Bell labels all over the place; they share the representation.
using TwoBits = BellLabel;

inline constexpr BellLabel kAllBellLabels[4] = {
    BellLabel::from_code(0), BellLabel::from_code(1),
    BellLabel::from_code(2), BellLabel::from_code(3)};

enum class PauliOp { I, X, Z, XZ };

constexpr const char* to_string(PauliOp p) {
    switch (p) {
        case PauliOp::I: return "I";
        case PauliOp::X: return "X";
        case PauliOp::Z: return "Z";
        case PauliOp::XZ: return "XZ";
    }
    return "?";
}

/// Label shift caused by applying a Pauli to either half of a Bell pair:
/// X flips the parity bit, Z flips the phase bit, XZ flips both.
constexpr BellLabel pauli_label(PauliOp p) {
    switch (p) {
        case PauliOp::I: return BellLabel(0, 0);
        case PauliOp::X: return BellLabel(0, 1);
        case PauliOp::Z: return BellLabel(1, 0);
        case PauliOp::XZ: return BellLabel(1, 1);
    }
    return BellLabel(0, 0);
}

/// Superdense-coding convention: the Pauli whose label shift equals `msg`.
/// Encoding msg on half of a pair labeled L moves the label to L xor msg,
/// so a Bell measurement of the pair reads the message back directly.
constexpr PauliOp pauli_for(TwoBits msg) {
    switch (msg.code()) {
        case 0: return PauliOp::I;
        case 1: return PauliOp::X;
        case 2: return PauliOp::Z;
        default: return PauliOp::XZ;
    }
}

} // namespace qpv
