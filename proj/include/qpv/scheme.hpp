#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace qpv {

/// The seven position-verification protocols the simulator implements.
enum class Scheme { pv_bb84, i, ii, iii, iv, a, b };

inline std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::pv_bb84: return "pv-bb84";
        case Scheme::i: return "i";
        case Scheme::ii: return "ii";
        case Scheme::iii: return "iii";
        case Scheme::iv: return "iv";
        case Scheme::a: return "a";
        case Scheme::b: return "b";
    }
    return "?";
}

inline std::optional<Scheme> scheme_from_string(std::string_view s) {
    if (s == "pv-bb84") return Scheme::pv_bb84;
    if (s == "i") return Scheme::i;
    if (s == "ii") return Scheme::ii;
    if (s == "iii") return Scheme::iii;
    if (s == "iv") return Scheme::iv;
    if (s == "a") return Scheme::a;
    if (s == "b") return Scheme::b;
    return std::nullopt;
}

} // namespace qpv
