#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qpv/transcript.hpp"

namespace qpv {

/// Batch summary over a set of transcripts. Deterministic given its inputs.
struct BatchStats {
    std::size_t runs = 0;
    double acceptance_rate = 0.0;
    double detection_rate = 0.0;
    double mean_elapsed = 0.0;
    std::map<std::string, std::size_t> branch_counts;

    // adversary-side estimates, present when the data is
    std::optional<double> recovery_rate;     // messages recovered == sent
    std::optional<double> label_match_rate;  // adversary BSM == announced label
    std::optional<double> mutual_information_bits; // tap observations vs round key

    Json to_json() const;
};

BatchStats compute_stats(std::span<const Transcript> transcripts);

/// Plug-in estimate of I(X;Y) in bits from joint samples; nx, ny are the
/// alphabet sizes.
double mutual_information_bits(const std::vector<std::pair<int, int>>& samples, int nx, int ny);

} // namespace qpv
