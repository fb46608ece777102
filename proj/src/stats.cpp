#include "qpv/stats.hpp"

#include <cmath>

namespace qpv {

double mutual_information_bits(const std::vector<std::pair<int, int>>& samples, int nx, int ny) {
    if (samples.empty()) return 0.0;
    std::vector<double> joint(static_cast<std::size_t>(nx * ny), 0.0);
    std::vector<double> px(static_cast<std::size_t>(nx), 0.0);
    std::vector<double> py(static_cast<std::size_t>(ny), 0.0);
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (const auto& [x, y] : samples) {
        joint[static_cast<std::size_t>(x * ny + y)] += inv;
        px[static_cast<std::size_t>(x)] += inv;
        py[static_cast<std::size_t>(y)] += inv;
    }
    double mi = 0.0;
    for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < ny; ++y) {
            const double pxy = joint[static_cast<std::size_t>(x * ny + y)];
            if (pxy <= 0.0) continue;
            mi += pxy * std::log2(pxy / (px[static_cast<std::size_t>(x)] *
                                         py[static_cast<std::size_t>(y)]));
        }
    }
    return mi;
}

BatchStats compute_stats(std::span<const Transcript> transcripts) {
    BatchStats s;
    s.runs = transcripts.size();
    if (transcripts.empty()) return s;

    std::size_t accepted = 0, detected = 0;
    double elapsed_sum = 0.0;
    std::size_t recovery_n = 0, recovery_ok = 0;
    std::size_t label_n = 0, label_ok = 0;
    std::vector<std::pair<int, int>> mi_samples;

    for (const Transcript& t : transcripts) {
        accepted += t.outcome.accepted ? 1 : 0;
        detected += t.outcome.detected_adversary ? 1 : 0;
        elapsed_sum += t.outcome.elapsed;
        if (t.outcome.details.contains("branch"))
            s.branch_counts[t.outcome.details.at("branch").get<std::string>()] += 1;

        const Json& adv = t.outcome.adversary;
        if (adv.is_object()) {
            // message recovery vs. what the verifiers actually sent
            if (adv.contains("recovered") && adv.at("recovered").is_array() &&
                t.outcome.details.contains("messages")) {
                ++recovery_n;
                if (adv.at("recovered") == t.outcome.details.at("messages")) ++recovery_ok;
            }
            // adversary-side BSM vs the prover's announced label
            if (adv.contains("bsm_57") && t.outcome.details.contains("p_result") &&
                t.outcome.details.at("p_result").is_string()) {
                ++label_n;
                if (adv.at("bsm_57") == t.outcome.details.at("p_result")) ++label_ok;
            }
            // tap observations vs the V0 round key
            if (adv.contains("observed") && adv.at("observed").is_string() &&
                t.outcome.round_keys) {
                const std::string& obs = adv.at("observed").get_ref<const std::string&>();
                auto it = t.outcome.round_keys->find("V0");
                if (obs.size() == 2 && it != t.outcome.round_keys->end()) {
                    const int x = (obs[0] - '0') * 2 + (obs[1] - '0');
                    mi_samples.emplace_back(x, it->second.p.code());
                }
            }
        }
    }

    const double n = static_cast<double>(s.runs);
    s.acceptance_rate = static_cast<double>(accepted) / n;
    s.detection_rate = static_cast<double>(detected) / n;
    s.mean_elapsed = elapsed_sum / n;
    if (recovery_n > 0)
        s.recovery_rate = static_cast<double>(recovery_ok) / static_cast<double>(recovery_n);
    if (label_n > 0)
        s.label_match_rate = static_cast<double>(label_ok) / static_cast<double>(label_n);
    if (mi_samples.size() >= 16)
        s.mutual_information_bits = qpv::mutual_information_bits(mi_samples, 4, 4);
    return s;
}

Json BatchStats::to_json() const {
    Json j;
    j["runs"] = runs;
    j["acceptance_rate"] = acceptance_rate;
    j["detection_rate"] = detection_rate;
    j["mean_elapsed"] = mean_elapsed;
    Json b;
    for (const auto& [k, v] : branch_counts) b[k] = v;
    j["branch_counts"] = b;
    if (recovery_rate) j["recovery_rate"] = *recovery_rate;
    if (label_match_rate) j["label_match_rate"] = *label_match_rate;
    if (mutual_information_bits) j["mutual_information_bits"] = *mutual_information_bits;
    return j;
}

} // namespace qpv
