#pragma once

#include <cstdint>
#include <memory>

#include "qpv/adversaries.hpp"
#include "qpv/scheme.hpp"
#include "qpv/spacetime.hpp"
#include "qpv/transcript.hpp"

namespace qpv {

struct RunOptions {
    std::uint64_t seed = 1;
    double tolerance = 1e-6; // timing tolerance, light-seconds
    RecordLevel level = RecordLevel::full;
    ForcedOutcomes forced;
    std::shared_ptr<Strategy> adversary; // nullptr = honest run
    int challenges = 8;                  // scheme i: number of key challenges N
};

/// One protocol round, event by event, on the given geometry. Every runner
/// returns a Transcript whose outcome says whether the verifiers accepted,
/// whether an adversary was caught, and the verified round-trip time.
Transcript run_pv_bb84(const WorldLine& world, RunOptions opts);
Transcript run_scheme_i(const WorldLine& world, RunOptions opts);
Transcript run_scheme_ii(const WorldLine& world, RunOptions opts);
Transcript run_scheme_iii(const WorldLine& world, RunOptions opts);
Transcript run_scheme_iv(const WorldLine& world, RunOptions opts);
Transcript run_scheme_a(const WorldLine& world, RunOptions opts);
Transcript run_scheme_b(const WorldLine& world, RunOptions opts);

Transcript run_scheme(Scheme scheme, const WorldLine& world, RunOptions opts);

} // namespace qpv
