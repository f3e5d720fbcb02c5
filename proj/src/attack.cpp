#include "qss/attack.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qss/detection.hpp"

namespace qss {

namespace {

void require_bit(int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
}

void require_round_position(const CheatRecords& records, int round_index) {
    if (records.round_count() != round_index - 1) {
        std::ostringstream msg;
        msg << "records hold " << records.round_count() << " rounds but round " << round_index
            << " is being played";
        throw EngineBugError(msg.str());
    }
}

}  // namespace

std::string_view q2_knowledge_name(Q2Knowledge k) {
    switch (k) {
        case Q2Knowledge::Unknown: return "unknown";
        case Q2Knowledge::Zero: return "0";
        case Q2Knowledge::One: return "1";
    }
    throw std::invalid_argument("unknown q2-knowledge value");
}

void CheatRecords::append(int d, int e, int psi) {
    require_bit(d);
    require_bit(e);
    require_bit(psi);
    eavesdropped.push_back(d);
    announced.push_back(e);
    resent.push_back(psi);
}

void CheatRecords::validate() const {
    if (announced.size() != eavesdropped.size() || resent.size() != eavesdropped.size()) {
        throw EngineBugError("cheat record strings have diverging lengths");
    }
    for (int round = 1; round <= round_count(); ++round) {
        const int d = eavesdropped[round - 1];
        const int e = announced[round - 1];
        const int psi = resent[round - 1];
        if (round == 2 && (d != 0 || e != 0 || psi != 0)) {
            throw EngineBugError("round-2 records must be all zero");
        }
        if (round >= 3 && round % 2 == 1 && (d != e || d != psi)) {
            throw EngineBugError("odd-round records must agree");
        }
        if (round >= 4 && round % 2 == 0 && ((e ^ psi) != d)) {
            throw EngineBugError("even-round records must split the eavesdropped bit");
        }
    }
}

nlohmann::ordered_json CheatRecords::to_json() const {
    nlohmann::ordered_json j;
    j["d"] = eavesdropped;
    j["e"] = announced;
    j["psi"] = resent;
    if (q2_knowledge == Q2Knowledge::Unknown) {
        j["q2"] = "unknown";
    } else {
        j["q2"] = (q2_knowledge == Q2Knowledge::One) ? 1 : 0;
    }
    return j;
}

UnitaryMatrix split_unitary() {
    // Basis order (b, q1, q2), big-endian. Images of |000>..|111>:
    return UnitaryMatrix::from_permutation({0b000, 0b110, 0b111, 0b001, 0b100, 0b010, 0b011, 0b101});
}

PureState execute_split(const PureState& round2_state, CheatRecords& records) {
    require_round_position(records, 2);
    for (Qubit q : {Qubit::A, Qubit::B, Qubit::C, Qubit::Q1, Qubit::Q2}) {
        if (!round2_state.has(q)) {
            throw std::invalid_argument("round-2 state is missing a required qubit");
        }
    }
    PureState state = round2_state.apply_unitary({Qubit::B, Qubit::Q1, Qubit::Q2}, split_unitary());
    state = state.discard(Qubit::Q2);  // separable by construction of the split
    state = state.relabeled(Qubit::Q1, Qubit::BBar);
    records.append(0, 0, 0);
    return state;
}

PureState maintain_split_carriers(const PureState& state) {
    std::vector<Qubit> labels(state.labels());
    std::sort(labels.begin(), labels.end());
    if (labels != std::vector<Qubit>{Qubit::A, Qubit::B, Qubit::C, Qubit::BBar}) {
        throw std::invalid_argument("split carrier maintenance expects exactly a, b, c, bbar");
    }
    return state.apply_hadamard(Qubit::A)
        .apply_hadamard(Qubit::BBar)
        .apply_hadamard(Qubit::B)
        .apply_hadamard(Qubit::C);
}

PureState resend_bit(const PureState& state, int bit) {
    require_bit(bit);
    if (state.has(Qubit::Cf)) throw std::invalid_argument("counterfeit qubit already in flight");
    if (!state.has(Qubit::B)) throw std::invalid_argument("resend needs carrier qubit b");
    PureState with_cf = tensor(state, PureState::basis_state({Qubit::Cf}, {bit}));
    return with_cf.apply_cnot(Qubit::B, Qubit::Cf);
}

InterceptResult intercept_odd(const PureState& state, CheatRecords& records, int round_index,
                              RandomStream& measure_rng) {
    if (round_index < 3 || round_index % 2 == 0) {
        throw std::invalid_argument("odd intercept applies to odd rounds from 3 on");
    }
    require_round_position(records, round_index);
    PureState decoded =
        state.apply_cnot(Qubit::BBar, Qubit::Q1).apply_cnot(Qubit::BBar, Qubit::Q2);
    auto [bits, collapsed] = decoded.measure_computational({Qubit::Q1, Qubit::Q2}, measure_rng);
    if (bits[0] != bits[1]) {
        throw EngineBugError("odd intercept read different bits from the two data qubits");
    }
    PureState remainder = collapsed.discard(Qubit::Q1).discard(Qubit::Q2);
    records.append(bits[0], bits[0], bits[0]);
    return {bits[0], std::move(remainder)};
}

InterceptResult intercept_even(const PureState& state, CheatRecords& records, int round_index,
                               RandomStream& measure_rng, RandomStream& record_rng) {
    if (round_index < 4 || round_index % 2 == 1) {
        throw std::invalid_argument("even intercept applies to even rounds from 4 on");
    }
    require_round_position(records, round_index);
    PureState decoded = state.apply_cnot(Qubit::BBar, Qubit::Q1);
    auto [outcome, collapsed] = decoded.measure_bell(Qubit::Q1, Qubit::Q2, measure_rng);
    int d;
    switch (outcome) {
        case BellOutcome::PhiPlus: d = 0; break;
        case BellOutcome::PsiPlus: d = 1; break;
        default:
            throw EngineBugError(std::string("even intercept measured ") +
                                 std::string(bell_outcome_name(outcome)) +
                                 ", which the carrier algebra rules out");
    }
    // The measured pair is a Bell state separable from the rest; rotate it to
    // a computational product so both qubits can be dropped individually.
    PureState remainder = collapsed.apply_cnot(Qubit::Q1, Qubit::Q2)
                              .apply_hadamard(Qubit::Q1)
                              .discard(Qubit::Q1)
                              .discard(Qubit::Q2);
    const int e = record_rng.bit();  // uniform over the two consistent splittings
    const int psi = e ^ d;
    records.append(d, e, psi);
    return {d, std::move(remainder)};
}

RecoveryResult post_correction(const CheatRecords& records, std::span<const Announcement> announced) {
    const int n = records.round_count();
    for (const Announcement& a : announced) {
        if (a.index < 1 || a.index > n) throw std::invalid_argument("announced index out of range");
        require_bit(a.alice_bit);
    }
    std::vector<Announcement> sorted(announced.begin(), announced.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Announcement& x, const Announcement& y) { return x.index < y.index; });

    RecoveryResult result{records.eavesdropped, Q2Knowledge::Unknown};

    int q2_bit = -1;
    for (const Announcement& a : sorted) {
        if (a.index < 4 || a.index % 2 != 0) continue;
        const int inferred = records.eavesdropped[a.index - 1] ^ a.alice_bit;
        if (q2_bit == -1) {
            q2_bit = inferred;
        } else if (q2_bit != inferred) {
            throw EngineBugError("announced even rounds imply contradictory carrier kinds");
        }
    }
    if (q2_bit != -1) {
        result.q2_knowledge = (q2_bit == 1) ? Q2Knowledge::One : Q2Knowledge::Zero;
        if (q2_bit == 1) {
            for (int round = 4; round <= n; round += 2) {
                result.bits[round - 1] ^= 1;
            }
        }
    }
    for (const Announcement& a : sorted) {
        if (a.index == 2) result.bits[1] = a.alice_bit;
    }
    return result;
}

AttackedSession::AttackedSession(std::uint64_t session_seed)
    : carrier_(make_ghz_carrier()),
      measure_rng_(derive_seed(session_seed, StreamRole::Measurement)),
      record_rng_(derive_seed(session_seed, StreamRole::RecordSplit)) {}

RoundRecord AttackedSession::run_round(int data_bit) {
    require_bit(data_bit);
    const int index = next_round_++;
    const RoundKind kind = round_kind_for(index);
    int charlie_bit;

    if (index == 1) {
        PureState state = alice_encode_odd(carrier_, data_bit);
        DecodeResult bob = bob_decode_honest(state, measure_rng_);
        DecodeResult charlie = charlie_decode_honest(bob.state, measure_rng_);
        records_.append(bob.bit, bob.bit, bob.bit);
        charlie_bit = charlie.bit;
        carrier_ = end_of_round_toggle(charlie.state);
    } else if (index == 2) {
        PureState state = alice_encode_even(carrier_, data_bit);
        state = execute_split(state, records_);
        state = resend_bit(state, records_.resent[index - 1]);
        DecodeResult charlie = charlie_decode_honest(state, measure_rng_);
        charlie_bit = charlie.bit;
        carrier_ = maintain_split_carriers(charlie.state);
    } else if (kind == RoundKind::Odd) {
        PureState state = alice_encode_odd(carrier_, data_bit);
        InterceptResult intercept = intercept_odd(state, records_, index, measure_rng_);
        PureState resent = resend_bit(intercept.state, records_.resent[index - 1]);
        DecodeResult charlie = charlie_decode_honest(resent, measure_rng_);
        charlie_bit = charlie.bit;
        carrier_ = maintain_split_carriers(charlie.state);
    } else {
        PureState state = alice_encode_even(carrier_, data_bit);
        InterceptResult intercept =
            intercept_even(state, records_, index, measure_rng_, record_rng_);
        PureState resent = resend_bit(intercept.state, records_.resent[index - 1]);
        DecodeResult charlie = charlie_decode_honest(resent, measure_rng_);
        charlie_bit = charlie.bit;
        carrier_ = maintain_split_carriers(charlie.state);
    }

    RoundRecord record{index, kind, data_bit, records_.announced[index - 1], charlie_bit};
    transcript_.rounds.push_back(record);
    return record;
}

AttackedSessionResult run_attacked_session(int rounds, std::span<const int> bits,
                                           double compare_fraction, std::uint64_t seed) {
    if (rounds < 2) throw std::invalid_argument("an attacked session needs at least two rounds");
    if (static_cast<int>(bits.size()) != rounds) {
        throw std::invalid_argument("bit count does not match round count");
    }
    AttackedSession session(seed);
    for (int bit : bits) session.run_round(bit);

    RandomStream compare_rng(derive_seed(seed, StreamRole::Comparison));
    std::vector<int> compared = select_comparison(rounds, compare_fraction, compare_rng);
    std::vector<Announcement> announcements;
    announcements.reserve(compared.size());
    for (int index : compared) {
        announcements.push_back({index, bits[index - 1]});
    }

    AttackedSessionResult result{session.transcript(), session.records(), {}, std::move(compared)};
    RecoveryResult recovery = post_correction(result.records, announcements);
    result.recovered_bits = std::move(recovery.bits);
    result.records.q2_knowledge = recovery.q2_knowledge;
    return result;
}

}  // namespace qss
