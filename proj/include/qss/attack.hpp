#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qss/protocol.hpp"
#include "qss/statevec.hpp"

namespace qss {

/// What the cheat knows about the second-round data bit, which doubles as
/// the label of the carrier family in force for the rest of the session.
enum class Q2Knowledge { Unknown, Zero, One };

std::string_view q2_knowledge_name(Q2Knowledge k);

/// Bob's private bookkeeping, one entry per completed round:
///   eavesdropped  - the bit he read off the channel (d),
///   announced     - the bit he will announce if the round is compared (e),
///   resent        - the bit he forwarded to Charlie (psi).
/// Invariants: round 2 records all zeros; odd rounds >= 3 have all three
/// equal; even rounds >= 4 have announced XOR resent == eavesdropped.
struct CheatRecords {
    std::vector<int> eavesdropped;
    std::vector<int> announced;
    std::vector<int> resent;
    Q2Knowledge q2_knowledge = Q2Knowledge::Unknown;

    int round_count() const { return static_cast<int>(eavesdropped.size()); }
    void append(int d, int e, int psi);

    /// Throws EngineBugError if any of the per-round invariants is violated.
    void validate() const;

    /// {"d": [...], "e": [...], "psi": [...], "q2": "unknown" | 0 | 1}
    nlohmann::ordered_json to_json() const;
};

/// The 8x8 split permutation applied to (b, q1, q2) in round 2. It maps the
/// five-qubit round-2 state to a product of two shared pairs - (a, q1) and
/// (b, c) - times a lone q2 in (|0> + |1>)/sqrt(2), detaching Alice's data
/// qubit from the legitimate carrier so Bob can keep it.
UnitaryMatrix split_unitary();

/// Round 2 of the cheat: applies split_unitary on (b, q1, q2), discards the
/// now-separable q2, and keeps q1 as carrier qubit bbar. Records zeros for
/// the round (the true round-2 bit is unknown until the public comparison).
/// A NotSeparableError here means the split logic itself is broken.
PureState execute_split(const PureState& round2_state, CheatRecords& records);

/// End-of-round Hadamards on a, bbar, b, c once the carriers are split.
/// Fixes the (|00>+|11>) pair family and alternates the other family between
/// (|00>-|11>) entering odd rounds and (|01>+|10>) entering even rounds.
PureState maintain_split_carriers(const PureState& state);

/// Forwards one bit to Charlie: prepares counterfeit qubit cf as |bit> and
/// entangles it with carrier qubit b via CNOT, mimicking the honest channel.
PureState resend_bit(const PureState& state, int bit);

struct InterceptResult {
    int bit;
    PureState state;
};

/// Odd-round intercept (rounds >= 3): CNOTs bbar->q1 and bbar->q2 disentangle
/// the data pair, a computational measurement then reads the data bit from
/// both qubits. The two results are equal by construction; a mismatch trips
/// EngineBugError. Records d = e = psi = bit.
InterceptResult intercept_odd(const PureState& state, CheatRecords& records, int round_index,
                              RandomStream& measure_rng);

/// Even-round intercept (rounds >= 4): CNOT bbar->q1 leaves (q1, q2) in one
/// of the two plus-sign Bell states, which a Bell measurement reads as the
/// eavesdropped bit (PhiPlus -> 0, PsiPlus -> 1; a minus outcome trips
/// EngineBugError). The (announced, resent) pair is then drawn uniformly
/// from the two splittings with announced XOR resent == eavesdropped.
InterceptResult intercept_even(const PureState& state, CheatRecords& records, int round_index,
                               RandomStream& measure_rng, RandomStream& record_rng);

/// One publicly compared round: its index and the bit the sender announced.
struct Announcement {
    int index;
    int alice_bit;
};

struct RecoveryResult {
    std::vector<int> bits;
    Q2Knowledge q2_knowledge;
};

/// Bob's read of the public comparison. Any announced even index >= 4
/// reveals the second-round bit (announced bit XOR his eavesdropped bit);
/// if it is 1 every even-round eavesdropped bit from round 4 on gets
/// flipped. All such announcements must agree or EngineBugError is thrown.
/// An announced index 2 directly corrects his round-2 placeholder.
RecoveryResult post_correction(const CheatRecords& records, std::span<const Announcement> announced);

/// A session in which Bob runs the entanglement split: round 1 honest,
/// round 2 the split, later rounds intercept-and-resend.
class AttackedSession {
  public:
    explicit AttackedSession(std::uint64_t session_seed);

    RoundRecord run_round(int data_bit);

    /// Carrier entering the next round (the split pairs from round 3 on).
    const PureState& carrier() const { return carrier_; }
    const CheatRecords& records() const { return records_; }
    const Transcript& transcript() const { return transcript_; }
    int rounds_completed() const { return next_round_ - 1; }

  private:
    PureState carrier_;
    Transcript transcript_;
    CheatRecords records_;
    RandomStream measure_rng_;
    RandomStream record_rng_;
    int next_round_ = 1;
};

struct AttackedSessionResult {
    Transcript transcript;
    CheatRecords records;  // q2_knowledge reflects the post-comparison state
    std::vector<int> recovered_bits;
    std::vector<int> compared_indices;
};

/// Runs a full attacked session of `rounds` rounds carrying `bits`, selects
/// the publicly compared subsequence with the given per-round probability,
/// and applies post_correction. Deterministic in (rounds, bits, fraction,
/// seed).
AttackedSessionResult run_attacked_session(int rounds, std::span<const int> bits,
                                           double compare_fraction, std::uint64_t seed);

}  // namespace qss
