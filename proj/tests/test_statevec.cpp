#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"

#include "qss/rng.hpp"
#include "qss/statevec.hpp"

using namespace qss;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Random normalized complex amplitudes over `n` qubits.
PureState random_state(std::vector<Qubit> labels, RandomStream& rng) {
    std::vector<Amp> amps(std::size_t{1} << labels.size());
    double norm_sq = 0.0;
    for (Amp& a : amps) {
        a = Amp{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
        norm_sq += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (Amp& a : amps) a *= scale;
    return PureState::from_amplitudes(std::move(labels), std::move(amps));
}

double norm_sq(const PureState& state) {
    double total = 0.0;
    for (const Amp& a : state.amplitudes()) total += std::norm(a);
    return total;
}

}  // namespace

TEST_CASE("basis states use big-endian indexing: first label owns the top bit") {
    const PureState s = PureState::basis_state({Qubit::A, Qubit::B}, {1, 0});
    CHECK(s.amplitudes()[0b10] == Amp{1.0, 0.0});
    CHECK(s.amplitude({1, 0}) == Amp{1.0, 0.0});
    CHECK(s.amplitude({0, 1}) == Amp{0.0, 0.0});
}

TEST_CASE("state construction rejects malformed input") {
    CHECK_THROWS_AS(PureState::basis_state({Qubit::A, Qubit::A}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(PureState::basis_state({Qubit::A}, {2}), std::invalid_argument);
    CHECK_THROWS_AS(PureState::from_amplitudes({Qubit::A}, {Amp{1.0, 0.0}}), std::invalid_argument);
    // Unnormalized amplitudes are an engine-level violation, not rescaled away.
    CHECK_THROWS_AS(PureState::from_amplitudes({Qubit::A}, {Amp{0.5, 0.0}, Amp{0.5, 0.0}}),
                    EngineBugError);
}

TEST_CASE("hadamard maps |0> to |+> and is an involution") {
    const PureState plus = PureState::basis_state({Qubit::A}, {0}).apply_hadamard(Qubit::A);
    CHECK(std::abs(plus.amplitudes()[0] - Amp{kInvSqrt2, 0.0}) < kTol);
    CHECK(std::abs(plus.amplitudes()[1] - Amp{kInvSqrt2, 0.0}) < kTol);

    RandomStream rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const PureState s = random_state({Qubit::A, Qubit::B, Qubit::C}, rng);
        const PureState twice = s.apply_hadamard(Qubit::B).apply_hadamard(Qubit::B);
        CHECK(direct_distance(s, twice) < kTol);
    }
}

TEST_CASE("cnot implements the full two-qubit truth table") {
    for (int control_bit : {0, 1}) {
        for (int target_bit : {0, 1}) {
            const PureState in =
                PureState::basis_state({Qubit::A, Qubit::B}, {control_bit, target_bit});
            const PureState out = in.apply_cnot(Qubit::A, Qubit::B);
            const int expected = control_bit ? 1 - target_bit : target_bit;
            CHECK(std::abs(out.amplitude({control_bit, expected}) - Amp{1.0, 0.0}) < kTol);
        }
    }
    const PureState s = PureState::basis_state({Qubit::A, Qubit::B}, {0, 0});
    CHECK_THROWS_AS(s.apply_cnot(Qubit::A, Qubit::A), std::invalid_argument);
    CHECK_THROWS_AS(s.apply_cnot(Qubit::A, Qubit::C), std::invalid_argument);
}

TEST_CASE("unitary construction validates shape and unitarity") {
    CHECK_THROWS_AS(UnitaryMatrix(3, std::vector<Amp>(9, Amp{0.0, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(UnitaryMatrix(2, std::vector<Amp>(4, Amp{1.0, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(UnitaryMatrix::from_permutation({0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(UnitaryMatrix::from_permutation({0, 2}), std::invalid_argument);

    const UnitaryMatrix swap = UnitaryMatrix::from_permutation({0, 2, 1, 3});
    CHECK(swap.at(2, 1) == Amp{1.0, 0.0});
    CHECK(swap.at(1, 1) == Amp{0.0, 0.0});
}

TEST_CASE("apply_unitary matches the permutation image on every basis state") {
    const UnitaryMatrix cycle = UnitaryMatrix::from_permutation({1, 2, 3, 0});
    for (int b0 : {0, 1}) {
        for (int b1 : {0, 1}) {
            const PureState in = PureState::basis_state({Qubit::A, Qubit::B, Qubit::C},
                                                        {b0, b1, 1});
            const PureState out = in.apply_unitary({Qubit::A, Qubit::B}, cycle);
            const std::size_t image = (static_cast<std::size_t>(b0 * 2 + b1) + 1) % 4;
            const PureState expected = PureState::basis_state(
                {Qubit::A, Qubit::B, Qubit::C},
                {static_cast<int>(image >> 1), static_cast<int>(image & 1), 1});
            CHECK(direct_distance(out, expected) < kTol);
        }
    }
    const PureState s = PureState::basis_state({Qubit::A, Qubit::B}, {0, 0});
    CHECK_THROWS_AS(s.apply_unitary({Qubit::A}, cycle), std::invalid_argument);
    CHECK_THROWS_AS(s.apply_unitary({Qubit::A, Qubit::A}, cycle), std::invalid_argument);
}

TEST_CASE("outcome probabilities follow the Born rule and sum to one") {
    RandomStream rng(11);
    const PureState s = random_state({Qubit::A, Qubit::B, Qubit::C}, rng);
    const std::vector<Qubit> targets{Qubit::B};
    const std::vector<double> probs = s.outcome_probabilities(targets);
    REQUIRE(probs.size() == 2);
    CHECK(probs[0] + probs[1] == doctest::Approx(1.0).epsilon(1e-12));

    double expect_one = 0.0;
    for (std::size_t i = 0; i < s.amplitudes().size(); ++i) {
        if (i & 0b010) expect_one += std::norm(s.amplitudes()[i]);
    }
    CHECK(probs[1] == doctest::Approx(expect_one).epsilon(1e-12));
}

TEST_CASE("measurement collapses and keeps the measured qubit in the register") {
    // Measuring one GHZ qubit collapses the other two to the same bit.
    std::vector<Amp> amps(8, Amp{0.0, 0.0});
    amps[0b000] = Amp{kInvSqrt2, 0.0};
    amps[0b111] = Amp{kInvSqrt2, 0.0};
    const PureState ghz =
        PureState::from_amplitudes({Qubit::A, Qubit::B, Qubit::C}, std::move(amps));

    int saw_zero = 0;
    int saw_one = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        RandomStream rng(seed);
        auto [bits, collapsed] = ghz.measure_computational({Qubit::A}, rng);
        REQUIRE(bits.size() == 1);
        (bits[0] == 0 ? saw_zero : saw_one)++;
        const PureState expected = PureState::basis_state({Qubit::A, Qubit::B, Qubit::C},
                                                          {bits[0], bits[0], bits[0]});
        CHECK(direct_distance(collapsed, expected) < kTol);
        CHECK(collapsed.num_qubits() == 3);
    }
    CHECK(saw_zero > 0);
    CHECK(saw_one > 0);
}

TEST_CASE("bell measurement identifies all four bell states and round-trips") {
    const std::vector<std::pair<BellOutcome, std::vector<Amp>>> cases = {
        {BellOutcome::PhiPlus, {Amp{kInvSqrt2, 0.0}, {}, {}, Amp{kInvSqrt2, 0.0}}},
        {BellOutcome::PsiPlus, {{}, Amp{kInvSqrt2, 0.0}, Amp{kInvSqrt2, 0.0}, {}}},
        {BellOutcome::PhiMinus, {Amp{kInvSqrt2, 0.0}, {}, {}, Amp{-kInvSqrt2, 0.0}}},
        {BellOutcome::PsiMinus, {{}, Amp{kInvSqrt2, 0.0}, Amp{-kInvSqrt2, 0.0}, {}}},
    };
    for (const auto& [expected, amps] : cases) {
        const PureState bell = PureState::from_amplitudes({Qubit::A, Qubit::B},
                                                          std::vector<Amp>(amps));
        RandomStream rng(3);
        auto [outcome, post] = bell.measure_bell(Qubit::A, Qubit::B, rng);
        CHECK(outcome == expected);
        // Measuring an eigenstate is deterministic and leaves it untouched.
        CHECK(direct_distance(post, bell) < kTol);
    }
}

TEST_CASE("repeated bell measurement of the same pair is reproducible") {
    RandomStream state_rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const PureState s = random_state({Qubit::A, Qubit::B, Qubit::C}, state_rng);
        RandomStream first_rng(100 + static_cast<std::uint64_t>(trial));
        auto [outcome, post] = s.measure_bell(Qubit::A, Qubit::B, first_rng);
        RandomStream second_rng(999 - static_cast<std::uint64_t>(trial));
        auto [again, post2] = post.measure_bell(Qubit::A, Qubit::B, second_rng);
        CHECK(again == outcome);
        CHECK(direct_distance(post2, post) < kTol);
    }
}

TEST_CASE("discard removes a product qubit exactly, complex factors included") {
    RandomStream rng(5);
    const PureState rest = random_state({Qubit::A, Qubit::C}, rng);

    // A complex single-qubit factor: (|0> + i|1>)/sqrt(2).
    const PureState factor = PureState::from_amplitudes(
        {Qubit::B}, {Amp{kInvSqrt2, 0.0}, Amp{0.0, kInvSqrt2}});
    const PureState product = tensor(rest, factor);
    const PureState recovered = product.discard(Qubit::B);
    CHECK(direct_distance(recovered, rest) < kTol);
}

TEST_CASE("discarding an entangled qubit trips the separability error") {
    std::vector<Amp> amps(4, Amp{0.0, 0.0});
    amps[0b00] = Amp{0.6, 0.0};
    amps[0b11] = Amp{0.0, 0.8};
    const PureState pair = PureState::from_amplitudes({Qubit::A, Qubit::B}, std::move(amps));
    CHECK_THROWS_AS(pair.discard(Qubit::A), NotSeparableError);
    CHECK_THROWS_AS(pair.discard(Qubit::B), NotSeparableError);

    const PureState lone = PureState::basis_state({Qubit::A}, {0});
    CHECK_THROWS_AS(lone.discard(Qubit::A), std::invalid_argument);
}

TEST_CASE("relabel, reorder and canonical preserve the physical state") {
    RandomStream rng(13);
    const PureState s = random_state({Qubit::Q2, Qubit::A, Qubit::C}, rng);

    const PureState renamed = s.relabeled(Qubit::Q2, Qubit::BBar);
    CHECK(renamed.has(Qubit::BBar));
    CHECK(!renamed.has(Qubit::Q2));
    CHECK(renamed.amplitudes() == s.amplitudes());
    CHECK_THROWS_AS(s.relabeled(Qubit::Q2, Qubit::A), std::invalid_argument);

    const std::vector<Qubit> order{Qubit::C, Qubit::Q2, Qubit::A};
    const PureState reordered = s.reordered(order);
    CHECK(reordered.labels() == order);
    CHECK(direct_distance(reordered, s) < kTol);  // canonicalized internally

    const PureState canon = s.canonical();
    CHECK(canon.labels() == std::vector<Qubit>{Qubit::A, Qubit::C, Qubit::Q2});
    for (int a : {0, 1}) {
        for (int c : {0, 1}) {
            for (int q2 : {0, 1}) {
                CHECK(canon.amplitude({a, c, q2}) == s.amplitude({q2, a, c}));
            }
        }
    }
}

TEST_CASE("tensor requires disjoint labels and multiplies amplitudes") {
    const PureState a = PureState::basis_state({Qubit::A}, {1});
    const PureState b = PureState::from_amplitudes(
        {Qubit::B}, {Amp{kInvSqrt2, 0.0}, Amp{0.0, -kInvSqrt2}});
    const PureState ab = tensor(a, b);
    CHECK(std::abs(ab.amplitude({1, 0}) - Amp{kInvSqrt2, 0.0}) < kTol);
    CHECK(std::abs(ab.amplitude({1, 1}) - Amp{0.0, -kInvSqrt2}) < kTol);
    CHECK_THROWS_AS(tensor(a, a), std::invalid_argument);
}

TEST_CASE("phase-aligned comparison ignores exactly the global phase") {
    RandomStream rng(17);
    const PureState s = random_state({Qubit::A, Qubit::B}, rng);

    std::vector<Amp> rotated(s.amplitudes());
    const Amp phase{0.0, 1.0};  // i
    for (Amp& amp : rotated) amp *= phase;
    const PureState t = PureState::from_amplitudes({Qubit::A, Qubit::B}, std::move(rotated));

    CHECK(phase_aligned_distance(s, t) < kTol);
    CHECK(equal_up_to_global_phase(s, t, kTol));
    CHECK(direct_distance(s, t) > 0.1);  // the raw amplitudes differ

    const PureState zero = PureState::basis_state({Qubit::A, Qubit::B}, {0, 0});
    const PureState one = PureState::basis_state({Qubit::A, Qubit::B}, {1, 1});
    CHECK(phase_aligned_distance(zero, one) > 0.9);
    CHECK_THROWS_AS(phase_aligned_distance(zero, PureState::basis_state({Qubit::A}, {0})),
                    std::invalid_argument);
}

TEST_CASE("every operation preserves the norm") {
    RandomStream rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        PureState s = random_state({Qubit::A, Qubit::B, Qubit::C, Qubit::Q1}, rng);
        s = s.apply_hadamard(Qubit::Q1)
                .apply_cnot(Qubit::A, Qubit::B)
                .apply_unitary({Qubit::B, Qubit::C}, UnitaryMatrix::from_permutation({3, 1, 0, 2}));
        CHECK(norm_sq(s) == doctest::Approx(1.0).epsilon(1e-12));
        auto [bits, collapsed] = s.measure_computational({Qubit::C}, rng);
        (void)bits;
        CHECK(norm_sq(collapsed) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
