#pragma once

#include <stdexcept>
#include <string>

namespace qpv {

/// Thrown when a simulation invariant is violated (norm drift, backend
/// disagreement, zero-probability branch). Indicates a bug, not bad input.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

constexpr int kMaxQubits = 16;

constexpr double kNormTolerance = 1e-9;

} // namespace qpv
