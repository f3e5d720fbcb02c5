#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qss/statevec.hpp"

namespace qss {

/// Rounds are numbered from 1; odd and even rounds use different encodings.
enum class RoundKind { Odd, Even };

RoundKind round_kind_for(int round_index);
std::string_view round_kind_name(RoundKind kind);

struct RoundRecord {
    int index;
    RoundKind kind;
    int alice_bit;
    int bob_bit;
    int charlie_bit;
};

struct Transcript {
    std::vector<RoundRecord> rounds;

    /// {"rounds": [{"i":..., "kind":..., "q":..., "bob":..., "charlie":...}]}
    nlohmann::ordered_json to_json() const;
};

/// GHZ carrier (|000> + |111>)/sqrt(2) on qubits a, b, c.
PureState make_ghz_carrier();

/// Even-parity carrier (|000> + |110> + |101> + |011>)/2, the Hadamard image
/// of the GHZ carrier; in force during even rounds.
PureState make_even_carrier();

/// Odd-round encoding: appends data qubits q1, q2 prepared as |q>|q>, then
/// entangles both with carrier qubit a via CNOTs.
PureState alice_encode_odd(const PureState& carrier, int data_bit);

/// Even-round encoding: appends q1, q2 prepared in the two-qubit
/// superposition (|0,q> + |1,1+q>)/sqrt(2), then applies CNOT a->q1.
PureState alice_encode_even(const PureState& carrier, int data_bit);

struct DecodeResult {
    int bit;
    PureState state;
};

/// Bob's receive step: CNOT b->q1, measure q1, drop it. The same decode is
/// applied in odd and even rounds; in odd rounds it reproduces the data bit
/// deterministically, in even rounds it yields Bob's share of the bit.
DecodeResult bob_decode_honest(const PureState& state, RandomStream& rng);

/// Charlie's receive step: CNOT from carrier qubit c onto his data qubit
/// (q2, or the counterfeit when an attacker substituted one), measure, drop.
DecodeResult charlie_decode_honest(const PureState& state, RandomStream& rng);

/// End-of-round Hadamards on a, b, c, toggling the carrier between its GHZ
/// and even-parity forms. Requires the data qubits to be consumed already.
PureState end_of_round_toggle(const PureState& carrier);

/// One honest three-party session, stepped a round at a time so callers can
/// inspect the carrier between rounds.
class HonestSession {
  public:
    explicit HonestSession(std::uint64_t session_seed);

    RoundRecord run_round(int data_bit);

    /// Carrier entering the next round.
    const PureState& carrier() const { return carrier_; }
    const Transcript& transcript() const { return transcript_; }
    int rounds_completed() const { return next_round_ - 1; }

  private:
    PureState carrier_;
    Transcript transcript_;
    RandomStream measure_rng_;
    int next_round_ = 1;
};

/// Runs `rounds` honest rounds carrying `bits` and returns the transcript.
/// Identical (rounds, bits, seed) always produce identical transcripts.
Transcript run_honest_session(int rounds, std::span<const int> bits, std::uint64_t seed);

}  // namespace qss
