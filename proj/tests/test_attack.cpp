#include <set>
#include <vector>

#include "doctest.h"

#include "qss/attack.hpp"
#include "qss/protocol.hpp"
#include "qss/statevec.hpp"

using namespace qss;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

PureState bell_pair(Qubit x, Qubit y, double second_sign, bool flipped) {
    std::vector<Amp> amps(4, Amp{0.0, 0.0});
    if (flipped) {
        amps[0b01] = Amp{kInvSqrt2, 0.0};
        amps[0b10] = Amp{second_sign * kInvSqrt2, 0.0};
    } else {
        amps[0b00] = Amp{kInvSqrt2, 0.0};
        amps[0b11] = Amp{second_sign * kInvSqrt2, 0.0};
    }
    return PureState::from_amplitudes({x, y}, std::move(amps));
}

PureState phi_plus(Qubit x, Qubit y) { return bell_pair(x, y, +1.0, false); }
PureState phi_minus(Qubit x, Qubit y) { return bell_pair(x, y, -1.0, false); }
PureState psi_plus(Qubit x, Qubit y) { return bell_pair(x, y, +1.0, true); }

/// Split carrier pairs on (a, bbar) x (b, c), both of the same family.
PureState carriers_phi_plus() {
    return tensor(phi_plus(Qubit::A, Qubit::BBar), phi_plus(Qubit::B, Qubit::C));
}
PureState carriers_phi_minus() {
    return tensor(phi_minus(Qubit::A, Qubit::BBar), phi_minus(Qubit::B, Qubit::C));
}
PureState carriers_psi_plus() {
    return tensor(psi_plus(Qubit::A, Qubit::BBar), psi_plus(Qubit::B, Qubit::C));
}

CheatRecords records_after(int completed_rounds) {
    CheatRecords records;
    for (int i = 1; i <= completed_rounds; ++i) records.append(0, 0, 0);
    return records;
}

}  // namespace

TEST_CASE("cheat record invariants are enforced") {
    CheatRecords good;
    good.append(1, 1, 1);  // round 1 (honest, all equal)
    good.append(0, 0, 0);  // round 2 placeholder
    good.append(0, 0, 0);  // round 3 odd
    good.append(1, 0, 1);  // round 4 even: e ^ psi == d
    CHECK_NOTHROW(good.validate());

    CheatRecords bad_round2;
    bad_round2.append(0, 0, 0);
    bad_round2.append(1, 0, 0);
    CHECK_THROWS_AS(bad_round2.validate(), EngineBugError);

    CheatRecords bad_odd;
    bad_odd.append(0, 0, 0);
    bad_odd.append(0, 0, 0);
    bad_odd.append(1, 0, 1);
    CHECK_THROWS_AS(bad_odd.validate(), EngineBugError);

    CheatRecords bad_even;
    bad_even.append(0, 0, 0);
    bad_even.append(0, 0, 0);
    bad_even.append(1, 1, 1);
    bad_even.append(1, 1, 1);  // e ^ psi = 0 != d = 1
    CHECK_THROWS_AS(bad_even.validate(), EngineBugError);

    CHECK_THROWS_AS(good.append(2, 0, 0), std::invalid_argument);
}

TEST_CASE("the split unitary is the documented permutation") {
    const UnitaryMatrix u = split_unitary();
    REQUIRE(u.dim() == 8);
    const std::vector<std::size_t> image{0b000, 0b110, 0b111, 0b001, 0b100, 0b010, 0b011, 0b101};
    for (std::size_t in = 0; in < 8; ++in) {
        for (std::size_t out = 0; out < 8; ++out) {
            const Amp expected = (out == image[in]) ? Amp{1.0, 0.0} : Amp{0.0, 0.0};
            CHECK(u.at(out, in) == expected);
        }
    }
}

TEST_CASE("executing the split detaches a data qubit into a second carrier pair") {
    for (int q2 : {0, 1}) {
        CheatRecords records = records_after(1);
        const PureState round2 = alice_encode_even(make_even_carrier(), q2);
        const PureState after = execute_split(round2, records);

        CHECK(after.has(Qubit::BBar));
        CHECK(!after.has(Qubit::Q1));
        CHECK(!after.has(Qubit::Q2));
        const PureState expected = (q2 == 0) ? carriers_phi_plus() : carriers_psi_plus();
        CHECK(phase_aligned_distance(after, expected) < kTol);

        CHECK(records.round_count() == 2);
        CHECK(records.eavesdropped[1] == 0);
        CHECK(records.announced[1] == 0);
        CHECK(records.resent[1] == 0);
    }

    CheatRecords wrong_position = records_after(2);
    const PureState round2 = alice_encode_even(make_even_carrier(), 0);
    CHECK_THROWS_AS(execute_split(round2, wrong_position), EngineBugError);
}

TEST_CASE("carrier maintenance cycles the split pair families") {
    CHECK(phase_aligned_distance(maintain_split_carriers(carriers_phi_plus()),
                                 carriers_phi_plus()) < kTol);
    CHECK(phase_aligned_distance(maintain_split_carriers(carriers_psi_plus()),
                                 carriers_phi_minus()) < kTol);
    CHECK(phase_aligned_distance(maintain_split_carriers(carriers_phi_minus()),
                                 carriers_psi_plus()) < kTol);
    CHECK_THROWS_AS(maintain_split_carriers(make_ghz_carrier()), std::invalid_argument);
}

TEST_CASE("the counterfeit resend reproduces the honest channel statistics") {
    struct Case {
        PureState pair;
        int sent;
        int received;
    };
    const std::vector<Case> cases = {
        {phi_plus(Qubit::B, Qubit::C), 0, 0},   {phi_plus(Qubit::B, Qubit::C), 1, 1},
        {phi_minus(Qubit::B, Qubit::C), 0, 0},  {phi_minus(Qubit::B, Qubit::C), 1, 1},
        {psi_plus(Qubit::B, Qubit::C), 0, 1},   {psi_plus(Qubit::B, Qubit::C), 1, 0},
    };
    for (const Case& c : cases) {
        RandomStream rng(17);
        const PureState sent_state = resend_bit(c.pair, c.sent);
        const DecodeResult charlie = charlie_decode_honest(sent_state, rng);
        CHECK(charlie.bit == c.received);
        // The carrier pair comes back unharmed.
        CHECK(phase_aligned_distance(charlie.state, c.pair) < kTol);
    }
    CHECK_THROWS_AS(resend_bit(phi_plus(Qubit::B, Qubit::C), 2), std::invalid_argument);
    CHECK_THROWS_AS(resend_bit(phi_plus(Qubit::A, Qubit::C), 0), std::invalid_argument);
}

TEST_CASE("odd intercepts read the bit deterministically and keep the carriers") {
    for (int q2 : {0, 1}) {
        const PureState carriers = (q2 == 0) ? carriers_phi_plus() : carriers_phi_minus();
        for (int q : {0, 1}) {
            CheatRecords records = records_after(2);
            RandomStream rng(31);
            const PureState encoded = alice_encode_odd(carriers, q);
            const InterceptResult got = intercept_odd(encoded, records, 3, rng);
            CHECK(got.bit == q);
            CHECK(phase_aligned_distance(got.state, carriers) < kTol);
            CHECK(records.eavesdropped[2] == q);
            CHECK(records.announced[2] == q);
            CHECK(records.resent[2] == q);
        }
    }
    CheatRecords records = records_after(2);
    RandomStream rng(1);
    const PureState encoded = alice_encode_odd(carriers_phi_plus(), 0);
    CHECK_THROWS_AS(intercept_odd(encoded, records, 4, rng), std::invalid_argument);
    CHECK_THROWS_AS(intercept_odd(encoded, records, 5, rng), EngineBugError);
}

TEST_CASE("even intercepts read the offset bit and split it at random") {
    for (int q2 : {0, 1}) {
        const PureState carriers = (q2 == 0) ? carriers_phi_plus() : carriers_psi_plus();
        for (int q : {0, 1}) {
            std::set<int> announced_values;
            for (std::uint64_t record_seed = 0; record_seed < 8; ++record_seed) {
                CheatRecords records = records_after(3);
                RandomStream measure_rng(41);
                RandomStream record_rng(record_seed);
                const PureState encoded = alice_encode_even(carriers, q);
                const InterceptResult got =
                    intercept_even(encoded, records, 4, measure_rng, record_rng);
                CHECK(got.bit == (q ^ q2));
                CHECK(phase_aligned_distance(got.state, carriers) < kTol);
                const int d = records.eavesdropped[3];
                const int e = records.announced[3];
                const int psi = records.resent[3];
                CHECK(d == (q ^ q2));
                CHECK((e ^ psi) == d);
                announced_values.insert(e);
            }
            // The announced half is drawn uniformly; both values show up.
            CHECK(announced_values.size() == 2);
        }
    }
    CheatRecords records = records_after(3);
    RandomStream rng(1);
    const PureState encoded = alice_encode_even(carriers_phi_plus(), 0);
    CHECK_THROWS_AS(intercept_even(encoded, records, 3, rng, rng), std::invalid_argument);
}

TEST_CASE("post-correction infers the carrier family and repairs the string") {
    // Records of an n = 8 attacked session with q2 = 1 and true bits
    // 1,1,0,1,0,0,1,1: odd-round d's equal the bits, even-round d's (>= 4)
    // are offset by q2, round 2 is the zero placeholder.
    CheatRecords records;
    records.append(1, 1, 1);  // round 1
    records.append(0, 0, 0);  // round 2 (true bit 1)
    records.append(0, 0, 0);  // round 3
    records.append(0, 1, 1);  // round 4: d = 1 ^ 1 = 0
    records.append(0, 0, 0);  // round 5
    records.append(1, 0, 1);  // round 6: d = 0 ^ 1 = 1
    records.append(1, 1, 1);  // round 7
    records.append(0, 0, 0);  // round 8: d = 1 ^ 1 = 0

    SUBCASE("an announced even round reveals the offset") {
        const std::vector<Announcement> announced{{4, 1}};
        const RecoveryResult got = post_correction(records, announced);
        CHECK(got.q2_knowledge == Q2Knowledge::One);
        // Even rounds >= 4 flipped; round 2 stays at its placeholder.
        CHECK(got.bits == std::vector<int>{1, 0, 0, 1, 0, 0, 1, 1});
    }

    SUBCASE("announcing round 2 as well recovers the full string") {
        const std::vector<Announcement> announced{{2, 1}, {6, 0}};
        const RecoveryResult got = post_correction(records, announced);
        CHECK(got.q2_knowledge == Q2Knowledge::One);
        CHECK(got.bits == std::vector<int>{1, 1, 0, 1, 0, 0, 1, 1});
    }

    SUBCASE("without an even announcement the family stays unknown") {
        const std::vector<Announcement> announced{{1, 1}, {3, 0}, {7, 1}};
        const RecoveryResult got = post_correction(records, announced);
        CHECK(got.q2_knowledge == Q2Knowledge::Unknown);
        CHECK(got.bits == records.eavesdropped);
    }

    SUBCASE("contradictory even announcements trip the invariant") {
        // Rounds 4 and 6 imply different offsets for these alice bits.
        const std::vector<Announcement> announced{{4, 1}, {6, 1}};
        CHECK_THROWS_AS(post_correction(records, announced), EngineBugError);
    }

    SUBCASE("announcements are validated") {
        CHECK_THROWS_AS(post_correction(records, std::vector<Announcement>{{9, 0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(post_correction(records, std::vector<Announcement>{{1, 2}}),
                        std::invalid_argument);
    }
}

TEST_CASE("an attacked session passes every public check and obeys the offset law") {
    const std::vector<int> bits{1, 1, 0, 1, 0, 0, 1, 1};
    AttackedSession session(777);
    for (int bit : bits) {
        const RoundRecord r = session.run_round(bit);
        if (r.kind == RoundKind::Odd) {
            CHECK(r.bob_bit == r.alice_bit);
            CHECK(r.charlie_bit == r.alice_bit);
        } else {
            CHECK((r.alice_bit ^ r.bob_bit ^ r.charlie_bit) == 0);
        }
    }
    const CheatRecords& records = session.records();
    CHECK_NOTHROW(records.validate());
    for (int i = 3; i <= 8; i += 2) {
        CHECK(records.eavesdropped[i - 1] == bits[i - 1]);  // odd rounds: exact
    }
    for (int i = 4; i <= 8; i += 2) {
        CHECK(records.eavesdropped[i - 1] == (bits[i - 1] ^ bits[1]));  // even: offset
    }
}

TEST_CASE("split carriers alternate families according to the second-round bit") {
    const std::vector<int> bits{0, 1, 1, 0, 1, 1, 0, 0, 1, 0};
    AttackedSession session(4242);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        session.run_round(bits[i]);
        const int next_round = static_cast<int>(i) + 2;
        if (next_round < 3 || next_round > static_cast<int>(bits.size())) continue;
        const PureState expected =
            (next_round % 2 == 1) ? carriers_phi_minus() : carriers_psi_plus();
        CHECK(phase_aligned_distance(session.carrier(), expected) < kTol);
    }
}

TEST_CASE("full attacked sessions are reproducible and recover the secret") {
    const std::vector<int> bits{0, 1, 1, 0, 0, 1, 1, 0, 1, 1};
    const AttackedSessionResult first = run_attacked_session(10, bits, 0.5, 2024);
    const AttackedSessionResult second = run_attacked_session(10, bits, 0.5, 2024);
    CHECK(first.transcript.to_json() == second.transcript.to_json());
    CHECK(first.records.to_json() == second.records.to_json());
    CHECK(first.recovered_bits == second.recovered_bits);
    CHECK(first.compared_indices == second.compared_indices);

    bool even_late_announced = false;
    bool round2_announced = false;
    for (int index : first.compared_indices) {
        if (index >= 4 && index % 2 == 0) even_late_announced = true;
        if (index == 2) round2_announced = true;
    }
    if (even_late_announced) {
        CHECK(first.records.q2_knowledge != Q2Knowledge::Unknown);
        for (int i = 1; i <= 10; ++i) {
            if (i == 2 && !round2_announced) continue;  // only unresolved position
            CHECK(first.recovered_bits[i - 1] == bits[i - 1]);
        }
    } else {
        CHECK(first.records.q2_knowledge == Q2Knowledge::Unknown);
    }
}

TEST_CASE("cheat records serialize with the fixed wire keys") {
    CheatRecords records;
    records.append(1, 1, 1);
    records.append(0, 0, 0);
    records.q2_knowledge = Q2Knowledge::One;
    const nlohmann::ordered_json j = records.to_json();
    CHECK(j["d"] == std::vector<int>{1, 0});
    CHECK(j["e"] == std::vector<int>{1, 0});
    CHECK(j["psi"] == std::vector<int>{1, 0});
    CHECK(j["q2"] == 1);

    records.q2_knowledge = Q2Knowledge::Unknown;
    CHECK(records.to_json()["q2"] == "unknown");
}
