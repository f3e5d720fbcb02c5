#include "qss/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace qss {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_bit(int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("data bit must be 0 or 1");
}

void require_labels_exactly(const PureState& state, std::vector<Qubit> expected,
                            const char* context) {
    std::vector<Qubit> got(state.labels());
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    if (got != expected) {
        throw std::invalid_argument(std::string(context) + ": unexpected qubit set in state");
    }
}

void require_data_slots_free(const PureState& carrier) {
    if (carrier.has(Qubit::Q1) || carrier.has(Qubit::Q2)) {
        throw std::invalid_argument("carrier still holds data qubits from a previous round");
    }
    for (Qubit q : {Qubit::A, Qubit::B, Qubit::C}) {
        if (!carrier.has(q)) {
            throw std::invalid_argument("carrier is missing one of qubits a, b, c");
        }
    }
}

/// The two-qubit data superposition (|0,q> + |1,1+q>)/sqrt(2) on (q1, q2).
PureState data_pair_superposition(int data_bit) {
    std::vector<Amp> amps(4, Amp{0.0, 0.0});
    amps[static_cast<std::size_t>(data_bit)] = Amp{kInvSqrt2, 0.0};          // |0, q>
    amps[static_cast<std::size_t>(2 + (1 - data_bit))] = Amp{kInvSqrt2, 0.0};  // |1, 1+q>
    return PureState::from_amplitudes({Qubit::Q1, Qubit::Q2}, std::move(amps));
}

}  // namespace

RoundKind round_kind_for(int round_index) {
    if (round_index < 1) throw std::invalid_argument("round indices start at 1");
    return (round_index % 2 == 1) ? RoundKind::Odd : RoundKind::Even;
}

std::string_view round_kind_name(RoundKind kind) {
    return kind == RoundKind::Odd ? "odd" : "even";
}

nlohmann::ordered_json Transcript::to_json() const {
    nlohmann::ordered_json j;
    auto& arr = j["rounds"] = nlohmann::ordered_json::array();
    for (const RoundRecord& r : rounds) {
        nlohmann::ordered_json entry;
        entry["i"] = r.index;
        entry["kind"] = std::string(round_kind_name(r.kind));
        entry["q"] = r.alice_bit;
        entry["bob"] = r.bob_bit;
        entry["charlie"] = r.charlie_bit;
        arr.push_back(std::move(entry));
    }
    return j;
}

PureState make_ghz_carrier() {
    std::vector<Amp> amps(8, Amp{0.0, 0.0});
    amps[0b000] = Amp{kInvSqrt2, 0.0};
    amps[0b111] = Amp{kInvSqrt2, 0.0};
    return PureState::from_amplitudes({Qubit::A, Qubit::B, Qubit::C}, std::move(amps));
}

PureState make_even_carrier() {
    std::vector<Amp> amps(8, Amp{0.0, 0.0});
    for (std::size_t index : {0b000u, 0b011u, 0b101u, 0b110u}) {
        amps[index] = Amp{0.5, 0.0};
    }
    return PureState::from_amplitudes({Qubit::A, Qubit::B, Qubit::C}, std::move(amps));
}

PureState alice_encode_odd(const PureState& carrier, int data_bit) {
    require_bit(data_bit);
    require_data_slots_free(carrier);
    PureState state = tensor(carrier, PureState::basis_state({Qubit::Q1, Qubit::Q2},
                                                             {data_bit, data_bit}));
    return state.apply_cnot(Qubit::A, Qubit::Q1).apply_cnot(Qubit::A, Qubit::Q2);
}

PureState alice_encode_even(const PureState& carrier, int data_bit) {
    require_bit(data_bit);
    require_data_slots_free(carrier);
    PureState state = tensor(carrier, data_pair_superposition(data_bit));
    return state.apply_cnot(Qubit::A, Qubit::Q1);
}

DecodeResult bob_decode_honest(const PureState& state, RandomStream& rng) {
    PureState decoded = state.apply_cnot(Qubit::B, Qubit::Q1);
    auto [bits, collapsed] = decoded.measure_computational({Qubit::Q1}, rng);
    return {bits[0], collapsed.discard(Qubit::Q1)};
}

DecodeResult charlie_decode_honest(const PureState& state, RandomStream& rng) {
    const Qubit target = state.has(Qubit::Q2) ? Qubit::Q2 : Qubit::Cf;
    if (!state.has(target)) {
        throw std::invalid_argument("no data qubit addressed to charlie in state");
    }
    PureState decoded = state.apply_cnot(Qubit::C, target);
    auto [bits, collapsed] = decoded.measure_computational({target}, rng);
    return {bits[0], collapsed.discard(target)};
}

PureState end_of_round_toggle(const PureState& carrier) {
    require_labels_exactly(carrier, {Qubit::A, Qubit::B, Qubit::C}, "end_of_round_toggle");
    return carrier.apply_hadamard(Qubit::A).apply_hadamard(Qubit::B).apply_hadamard(Qubit::C);
}

HonestSession::HonestSession(std::uint64_t session_seed)
    : carrier_(make_ghz_carrier()),
      measure_rng_(derive_seed(session_seed, StreamRole::Measurement)) {}

RoundRecord HonestSession::run_round(int data_bit) {
    require_bit(data_bit);
    const int index = next_round_++;
    const RoundKind kind = round_kind_for(index);

    PureState state = (kind == RoundKind::Odd) ? alice_encode_odd(carrier_, data_bit)
                                               : alice_encode_even(carrier_, data_bit);
    DecodeResult bob = bob_decode_honest(state, measure_rng_);
    DecodeResult charlie = charlie_decode_honest(bob.state, measure_rng_);
    carrier_ = end_of_round_toggle(charlie.state);

    RoundRecord record{index, kind, data_bit, bob.bit, charlie.bit};
    transcript_.rounds.push_back(record);
    return record;
}

Transcript run_honest_session(int rounds, std::span<const int> bits, std::uint64_t seed) {
    if (rounds < 1) throw std::invalid_argument("need at least one round");
    if (static_cast<int>(bits.size()) != rounds) {
        throw std::invalid_argument("bit count does not match round count");
    }
    HonestSession session(seed);
    for (int bit : bits) session.run_round(bit);
    return session.transcript();
}

}  // namespace qss
