// Command-line front end: single runs, Monte-Carlo batches, golden-table
// emission, line-delimited JSON transcripts and a summary line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qpv/bell_algebra.hpp"
#include "qpv/config.hpp"
#include "qpv/keyauth.hpp"
#include "qpv/protocols.hpp"
#include "qpv/stats.hpp"

namespace {

qpv::WorldLine world_from_config(const qpv::ScenarioConfig& cfg) {
    qpv::WorldLine w = qpv::WorldLine::canonical(cfg.d);
    for (const auto& [party, x] : cfg.positions) w.positions[party] = x;
    return w;
}

struct ExpectVerdict {
    bool ok = true;
    std::string reason;
};

ExpectVerdict check_expectation(const qpv::ScenarioConfig& cfg, const qpv::BatchStats& stats) {
    std::string expect = cfg.expect;
    if (expect == "auto") {
        if (cfg.adversary == "none")
            expect = "accept";
        else if (cfg.adversary == "scheme-iii-attack" || cfg.adversary == "scheme-iv-attack")
            expect = "spoof";
        else
            expect = "none";
    }
    if (expect == "none") return {true, "none"};
    if (expect == "accept") {
        if (stats.acceptance_rate == 1.0) return {true, "accept"};
        return {false, "expected all rounds accepted"};
    }
    if (expect == "spoof") {
        bool ok = stats.acceptance_rate == 1.0 && stats.detection_rate == 0.0;
        if (stats.recovery_rate) ok = ok && *stats.recovery_rate == 1.0;
        if (stats.label_match_rate) ok = ok && *stats.label_match_rate == 1.0;
        if (ok) return {true, "spoof"};
        return {false, "expected an undetected, fully successful spoof"};
    }
    return {false, "unknown expectation '" + expect + "'"};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"position-verification protocol simulator"};

    std::string scheme_flag, adversary_flag, config_path, out_path, expect_flag;
    std::optional<int> rounds_flag, trials_flag, challenges_flag, auth_z_flag;
    std::optional<std::uint64_t> seed_flag;
    std::optional<double> d_flag, tolerance_flag;
    bool emit_table = false;

    app.add_option("--scheme", scheme_flag, "scheme: pv-bb84 | i | ii | iii | iv | a | b");
    app.add_option("--adversary", adversary_flag, "adversary strategy id or 'none'");
    app.add_option("--rounds", rounds_flag, "protocol rounds per trial");
    app.add_option("--trials", trials_flag, "independent Monte-Carlo trials");
    app.add_option("--seed", seed_flag, "master seed (env QPV_SEED used when absent)");
    app.add_option("--d", d_flag, "verifier-prover distance in light-seconds");
    app.add_option("--tolerance", tolerance_flag, "timing tolerance in seconds");
    app.add_option("--config", config_path, "JSON config file; flags override file values");
    app.add_option("--out", out_path, "write JSONL transcripts to this file");
    app.add_option("--auth-z", auth_z_flag,
                   "after the rounds, run rotation-cipher authentication with this z");
    app.add_option("--challenges", challenges_flag, "scheme i: challenge count N");
    app.add_option("--expect", expect_flag, "exit-code expectation: auto|accept|spoof|none");
    app.add_flag("--emit-table", emit_table, "print the entanglement-swapping table and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (emit_table) {
            const std::string table = qpv::emit_table();
            if (!out_path.empty()) {
                std::ofstream f(out_path, std::ios::binary);
                f << table;
            } else {
                std::cout << table;
            }
            return 0;
        }

        qpv::ScenarioConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::invalid_argument("cannot open config file " + config_path);
            qpv::Json j = qpv::Json::parse(f);
            cfg = qpv::config_from_json(j);
        }
        if (!scheme_flag.empty()) cfg.scheme = scheme_flag;
        if (!adversary_flag.empty()) cfg.adversary = adversary_flag;
        if (rounds_flag) cfg.rounds = *rounds_flag;
        if (trials_flag) cfg.trials = *trials_flag;
        if (seed_flag) {
            cfg.seed = *seed_flag;
        } else if (config_path.empty()) {
            if (const char* env = std::getenv("QPV_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
        }
        if (d_flag) cfg.d = *d_flag;
        if (tolerance_flag) cfg.tolerance = *tolerance_flag;
        if (challenges_flag) cfg.challenges = *challenges_flag;
        if (auth_z_flag) cfg.auth.z_p = *auth_z_flag;
        if (!expect_flag.empty()) cfg.expect = expect_flag;

        const auto scheme = qpv::scheme_from_string(cfg.scheme);
        if (!scheme)
            throw std::invalid_argument(cfg.scheme.empty() ? "--scheme is required"
                                                           : "unknown scheme '" + cfg.scheme + "'");
        const qpv::WorldLine world = world_from_config(cfg);
        const auto strategy = qpv::make_strategy(cfg.adversary);

        std::ofstream out_file;
        std::ostream* out = &std::cout;
        if (!out_path.empty()) {
            out_file.open(out_path, std::ios::binary);
            if (!out_file) throw std::invalid_argument("cannot open output file " + out_path);
            out = &out_file;
        }

        std::vector<qpv::Transcript> transcripts;
        transcripts.reserve(static_cast<std::size_t>(cfg.rounds) *
                            static_cast<std::size_t>(cfg.trials));
        const bool batch = cfg.rounds * cfg.trials > 32;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            const std::uint64_t trial_seed =
                qpv::derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
            for (int round = 0; round < cfg.rounds; ++round) {
                qpv::RunOptions opts;
                opts.seed = qpv::derive_seed(trial_seed, static_cast<std::uint64_t>(round));
                opts.tolerance = cfg.tolerance;
                opts.level = batch ? qpv::RecordLevel::outcome_only : qpv::RecordLevel::full;
                opts.adversary = strategy;
                opts.challenges = cfg.challenges;
                qpv::Transcript t = qpv::run_scheme(*scheme, world, std::move(opts));
                (*out) << t.to_json_line() << "\n";
                transcripts.push_back(std::move(t));
            }
        }

        const qpv::BatchStats stats = qpv::compute_stats(transcripts);
        qpv::Json summary;
        summary["summary"] = stats.to_json();

        if (auth_z_flag) {
            if (*scheme != qpv::Scheme::a && *scheme != qpv::Scheme::b)
                throw std::invalid_argument("--auth-z needs key material: use scheme a or b");
            if (stats.acceptance_rate != 1.0)
                throw std::invalid_argument("--auth-z requires all rounds accepted");
            // keys accumulate per trial; authenticate with the first trial's K_P
            std::vector<qpv::Transcript> first_trial(
                transcripts.begin(), transcripts.begin() + cfg.rounds);
            const auto keys = qpv::accumulate_keys(first_trial);
            const qpv::KeyPair& kp = keys.at("V0");
            int length = cfg.auth.length > 0 ? cfg.auth.length
                                             : static_cast<int>(kp.k_p.size());
            length = std::min(length, qpv::kMaxQubits);
            qpv::AuthExchangeOptions aopts;
            aopts.seed = qpv::derive_seed(cfg.seed, 0xA0A0A0A0ull);
            aopts.z_p = cfg.auth.z_p;
            aopts.z_v = cfg.auth.z_v > 0 && cfg.auth.z_v != cfg.auth.z_p ? cfg.auth.z_v
                                                                         : cfg.auth.z_p + 1;
            aopts.length = length;
            aopts.key = kp.k_p.substr(0, static_cast<std::size_t>(length));
            aopts.tolerance = cfg.tolerance;
            const auto res = qpv::run_auth_exchange(world, aopts);
            // key material exported as hex, 4 bits per digit
            std::string hex;
            for (std::size_t i = 0; i < kp.k_p.size(); i += 4) {
                int v = 0;
                for (std::size_t b = i; b < std::min(i + 4, kp.k_p.size()); ++b)
                    v = v * 2 + (kp.k_p[b] - '0');
                hex += "0123456789abcdef"[v];
            }
            summary["auth"] = qpv::Json{{"ok", res.decoded_ok},
                                        {"z_p", aopts.z_p},
                                        {"z_v", aopts.z_v},
                                        {"length", length},
                                        {"key_hex", hex}};
        }

        const ExpectVerdict verdict = check_expectation(cfg, stats);
        summary["expectation"] = qpv::Json{{"mode", cfg.expect}, {"ok", verdict.ok},
                                           {"note", verdict.reason}};
        std::cout << summary.dump() << "\n";
        return verdict.ok ? 0 : 1;
    } catch (const qpv::internal_error& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
