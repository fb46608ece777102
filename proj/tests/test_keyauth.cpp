#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle_helpers.hpp"
#include "qpv/keyauth.hpp"
#include "qpv/protocols.hpp"

using namespace qpv;

namespace {
const WorldLine kWorld = WorldLine::canonical(1.0);

std::vector<Transcript> accepted_rounds(Scheme scheme, int n, std::uint64_t seed) {
    std::vector<Transcript> out;
    for (int r = 0; r < n; ++r) {
        RunOptions o;
        o.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        o.level = RecordLevel::outcome_only;
        out.push_back(run_scheme(scheme, kWorld, std::move(o)));
    }
    return out;
}
} // namespace

// ------------------------------------------------------------ key accumulation

TEST_CASE("no rounds, no keys") {
    CHECK(accumulate_keys({}).empty());
}

TEST_CASE("scheme b rounds: prover-side and verifier-side strings agree bit for bit") {
    const auto rounds = accepted_rounds(Scheme::b, 6, 17);
    const auto keys = accumulate_keys(rounds);
    REQUIRE(keys.count("V0"));
    REQUIRE(keys.count("V1"));
    CHECK(keys.at("V0").k_p.size() == 12);
    CHECK(keys.at("V0").k_v.size() == 12);
    CHECK(keys.at("V0").rounds == 6);
    // the prover's inferred copy of each verifier's result matches the
    // verifier's own record, so both ends hold identical strings
    std::string prover_side_v0, prover_side_v1;
    for (const Transcript& t : rounds) {
        prover_side_v0 += t.outcome.details.at("inferred").at("P").at(0).get<std::string>();
        prover_side_v1 += t.outcome.details.at("inferred").at("P").at(1).get<std::string>();
    }
    CHECK(prover_side_v0 == keys.at("V0").k_v);
    CHECK(prover_side_v1 == keys.at("V1").k_v);
}

TEST_CASE("forced branches pin the accumulated key material") {
    std::vector<Transcript> rounds;
    const BellLabel forced_p[3] = {BellLabel(1, 1), BellLabel(0, 1), BellLabel(1, 0)};
    const BellLabel forced_v[3] = {BellLabel(0, 1), BellLabel(1, 0), BellLabel(0, 0)};
    for (int r = 0; r < 3; ++r) {
        RunOptions o;
        o.seed = derive_seed(23, static_cast<std::uint64_t>(r));
        o.forced.force_label("BSM(4,6)", forced_p[r]);
        o.forced.force_label("BSM(2,3)", forced_v[r]);
        rounds.push_back(run_scheme_b(kWorld, std::move(o)));
    }
    const auto keys = accumulate_keys(rounds);
    CHECK(keys.at("V0").k_p == "110110"); // concatenation of the forced labels
    CHECK(keys.at("V0").k_v == "011000");
}

TEST_CASE("rejected rounds are not key material") {
    auto rounds = accepted_rounds(Scheme::b, 2, 29);
    rounds[1].outcome.accepted = false;
    CHECK_THROWS_AS(accumulate_keys(rounds), std::invalid_argument);

    // schemes without round keys are rejected too
    const auto bb84 = accepted_rounds(Scheme::pv_bb84, 1, 31);
    CHECK_THROWS_AS(accumulate_keys(bb84), std::invalid_argument);
}

// --------------------------------------------------------------- rotation cipher

TEST_CASE("encoding the zero string is the identity") {
    Rng rng(1);
    AuthSession s = AuthSession::random(4, 2, 3, rng);
    std::fill(s.s.begin(), s.s.end(), 0);
    const StateVector state = auth_encode_s(s);
    CHECK(std::norm(state.amplitude(0)) == doctest::Approx(1.0).epsilon(1e-12));

    std::fill(s.t.begin(), s.t.end(), 0);
    StateVector st = auth_encode_s(s);
    auth_counter_encode(s, st);
    CHECK(std::norm(st.amplitude(0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single qubit, s=1, z=1: cos(pi/4)|0> + sin(pi/4)|1>") {
    Rng rng(2);
    AuthSession s = AuthSession::random(1, 1, 1, rng);
    s.s = {1};
    const StateVector state = auth_encode_s(s);
    CHECK(state.amplitude(0).real() == doctest::Approx(std::cos(std::numbers::pi / 4)));
    CHECK(state.amplitude(1).real() == doctest::Approx(std::sin(std::numbers::pi / 4)));
}

TEST_CASE("stripping the prover string undoes the encoding exactly") {
    Rng rng(3);
    const AuthSession s = AuthSession::random(6, 2, 4, rng);
    StateVector state = auth_encode_s(s);
    auth_strip_s(s, state);
    CHECK(std::norm(state.amplitude(0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("composite rotation angle adds per qubit, any application order") {
    Rng rng(4);
    const AuthSession s = AuthSession::random(3, 1, 2, rng);
    StateVector pipeline = auth_encode_s(s);
    auth_counter_encode(s, pipeline);

    StateVector direct(3);
    for (int i = 0; i < 3; ++i) {
        const double phi = s.s[static_cast<std::size_t>(i)] * s.theta_p().radians +
                           s.t[static_cast<std::size_t>(i)] * s.theta_v().radians;
        direct.apply_rotation(i, RotationAngle(phi));
    }
    for (std::size_t i = 0; i < pipeline.dim(); ++i)
        CHECK(std::abs(pipeline.amplitude(i) - direct.amplitude(i)) < 1e-12);

    // reversed order gives the same state
    StateVector reversed(3);
    auth_counter_encode(s, reversed);
    for (int i = 0; i < 3; ++i)
        reversed.apply_rotation(i, s.s[static_cast<std::size_t>(i)] * s.theta_p());
    for (std::size_t i = 0; i < pipeline.dim(); ++i)
        CHECK(std::abs(pipeline.amplitude(i) - reversed.amplitude(i)) < 1e-12);
}

TEST_CASE("encrypting with p = m applies no rotation") {
    Rng rng(5);
    AuthSession s = AuthSession::random(4, 2, 2, rng);
    const std::vector<int> key = s.m; // p_i == m_i
    StateVector state = auth_encode_s(s);
    auth_counter_encode(s, state);
    auth_strip_s(s, state);
    const StateVector before = state;
    auth_encrypt_message(s, state, key);
    for (std::size_t i = 0; i < state.dim(); ++i)
        CHECK(std::abs(state.amplitude(i) - before.amplitude(i)) < 1e-15);
}

TEST_CASE("a key/message mismatch on an unrotated qubit lands exactly on |1>") {
    Rng rng(6);
    AuthSession s = AuthSession::random(1, 1, 1, rng);
    s.t = {0};
    s.m = {1};
    const std::vector<int> key = {0}; // p xor m = 1
    StateVector state(1);
    auth_encrypt_message(s, state, key);
    CHECK(std::norm(state.amplitude(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the step-by-step pipeline matches the direct closed-form state") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int len = 1 + rng.uniform_int(6);
        const AuthSession s = AuthSession::random(len, 1 + rng.uniform_int(4),
                                                  1 + rng.uniform_int(4), rng);
        std::vector<int> key;
        for (int i = 0; i < len; ++i) key.push_back(rng.bit());

        StateVector pipeline = auth_encode_s(s);
        auth_counter_encode(s, pipeline);
        auth_strip_s(s, pipeline);
        auth_encrypt_message(s, pipeline, key);

        // the closed form: each qubit at angle t_i theta_v + (p_i xor m_i) pi/2
        StateVector direct(len);
        for (int i = 0; i < len; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            const double phi = s.t[ui] * s.theta_v().radians +
                               (key[ui] ^ s.m[ui]) * std::numbers::pi / 2.0;
            direct.apply_rotation(i, RotationAngle(phi));
        }
        for (std::size_t i = 0; i < pipeline.dim(); ++i)
            CHECK(std::abs(pipeline.amplitude(i) - direct.amplitude(i)) < 1e-12);
    }
}

TEST_CASE("round trip decodes the message exactly; wrong key bits flip the bits") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const int len = 1 + rng.uniform_int(8);
        const AuthSession s = AuthSession::random(len, 1 + rng.uniform_int(8),
                                                  1 + rng.uniform_int(8), rng);
        std::vector<int> key;
        for (int i = 0; i < len; ++i) key.push_back(rng.bit());
        CHECK(auth_roundtrip(s, key, rng) == s.m);

        // flipping one key bit flips exactly that message bit
        std::vector<int> wrong = key;
        const std::size_t flip = static_cast<std::size_t>(rng.uniform_int(len));
        wrong[flip] ^= 1;
        StateVector state = auth_encode_s(s);
        auth_counter_encode(s, state);
        auth_strip_s(s, state);
        auth_encrypt_message(s, state, key);
        const std::vector<int> decoded = auth_decode_verify(s, state, wrong, rng);
        for (std::size_t i = 0; i < static_cast<std::size_t>(len); ++i)
            CHECK(decoded[i] == (s.m[i] ^ (i == flip ? 1 : 0)));
    }
}

TEST_CASE("sending the key itself decodes to the key") {
    Rng rng(9);
    AuthSession s = AuthSession::random(6, 3, 2, rng);
    std::vector<int> key;
    for (int i = 0; i < 6; ++i) key.push_back(rng.bit());
    s.m = key; // M = K_P
    CHECK(auth_roundtrip(s, key, rng) == key);
}

// ------------------------------------------------- distinguishability metric

TEST_CASE("nearest-neighbor distance: values, monotonicity, closed form") {
    CHECK(nearest_neighbor_distance(1) ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
    CHECK(nearest_neighbor_distance(8) < 1e-4);
    for (int z = 1; z < 10; ++z)
        CHECK(nearest_neighbor_distance(z) > nearest_neighbor_distance(z + 1));
    // the explicit-state route loses precision to cancellation once the
    // angle is tiny; 1e-9 absolute is what the construction can promise
    for (int z = 1; z <= 10; ++z)
        CHECK(std::abs(nearest_neighbor_distance(z) -
                       std::abs(std::sin(std::numbers::pi / std::pow(4.0, z)))) < 1e-9);
}

TEST_CASE("pairwise fidelity of rotation-encoded states matches |cos((s-s')theta)|") {
    Rng rng(10);
    for (int trial = 0; trial < 40; ++trial) {
        const int z = 1 + rng.uniform_int(6);
        const RotationAngle theta = RotationAngle::auth_step(z);
        const int s1 = rng.uniform_int(1 << (2 * z));
        const int s2 = rng.uniform_int(1 << (2 * z));
        StateVector a(1), b(1);
        a.apply_rotation(0, s1 * theta);
        b.apply_rotation(0, s2 * theta);
        std::complex<double> overlap(0, 0);
        for (std::size_t i = 0; i < a.dim(); ++i)
            overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
        CHECK(std::abs(overlap) ==
              doctest::Approx(std::abs(std::cos((s1 - s2) * theta.radians))).epsilon(1e-12));
    }
}

// ------------------------------------------------------- networked exchange

TEST_CASE("the networked auth exchange decodes exactly when undisturbed") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        AuthExchangeOptions o;
        o.seed = seed;
        o.z_p = 1 + static_cast<int>(seed % 4);
        o.z_v = o.z_p + 1;
        o.length = 8;
        o.key = "01101001";
        const auto res = run_auth_exchange(kWorld, o);
        CHECK(res.decoded_ok);
        CHECK(res.transcript.outcome.accepted);
        CHECK(res.transcript.outcome.elapsed == doctest::Approx(3.0));
    }
}

TEST_CASE("a measuring tap on the exchange corrupts decodes at small z") {
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        AuthExchangeOptions o;
        o.seed = derive_seed(300, static_cast<std::uint64_t>(i));
        o.z_p = 1;
        o.z_v = 1;
        o.length = 8;
        o.key = "01101001";
        o.adversary = intercept_resend(BasisPolicy::fixed_z);
        const auto res = run_auth_exchange(kWorld, o);
        if (!res.decoded_ok) ++mismatches;
    }
    CHECK(mismatches > 0);
}

TEST_CASE("accumulated scheme-b keys drive a working authentication session") {
    const auto rounds = accepted_rounds(Scheme::b, 4, 93); // 8 key bits
    const auto keys = accumulate_keys(rounds);
    AuthExchangeOptions o;
    o.seed = 12345;
    o.z_p = 3;
    o.z_v = 5;
    o.length = 8;
    o.key = keys.at("V0").k_p;
    const auto res = run_auth_exchange(kWorld, o);
    CHECK(res.decoded_ok);
}
