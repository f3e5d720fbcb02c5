#include "qss/equations.hpp"

#include <cstddef>
#include <sstream>
#include <vector>

#include "qss/attack.hpp"
#include "qss/protocol.hpp"
#include "qss/statevec.hpp"

namespace qss {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kEighth = 0.35355339059327376220;  // 1 / (2 sqrt(2))

enum class PairKind { PhiPlus, PhiMinus, PsiPlus };

const char* pair_kind_name(PairKind k) {
    switch (k) {
        case PairKind::PhiPlus: return "phi+";
        case PairKind::PhiMinus: return "phi-";
        case PairKind::PsiPlus: return "psi+";
    }
    return "?";
}

PureState make_pair(PairKind kind, Qubit x, Qubit y) {
    std::vector<Amp> amps(4, Amp{0.0, 0.0});
    switch (kind) {
        case PairKind::PhiPlus:
            amps[0b00] = Amp{kInvSqrt2, 0.0};
            amps[0b11] = Amp{kInvSqrt2, 0.0};
            break;
        case PairKind::PhiMinus:
            amps[0b00] = Amp{kInvSqrt2, 0.0};
            amps[0b11] = Amp{-kInvSqrt2, 0.0};
            break;
        case PairKind::PsiPlus:
            amps[0b01] = Amp{kInvSqrt2, 0.0};
            amps[0b10] = Amp{kInvSqrt2, 0.0};
            break;
    }
    return PureState::from_amplitudes({x, y}, std::move(amps));
}

PureState plus_state(Qubit q) {
    return PureState::from_amplitudes({q}, {Amp{kInvSqrt2, 0.0}, Amp{kInvSqrt2, 0.0}});
}

PureState uniform_support(std::vector<Qubit> labels, const std::vector<std::size_t>& indices,
                          double amplitude) {
    std::vector<Amp> amps(std::size_t{1} << labels.size(), Amp{0.0, 0.0});
    for (std::size_t index : indices) amps[index] = Amp{amplitude, 0.0};
    return PureState::from_amplitudes(std::move(labels), std::move(amps));
}

/// The split-round state over (a, b, c, q1, q2) right after the sender's
/// even-round encoding, written out amplitude by amplitude.
PureState literal_round2_state(int q2) {
    static const std::vector<std::size_t> kSupport0 = {0b00000, 0b00011, 0b01100, 0b01111,
                                                       0b10101, 0b10110, 0b11001, 0b11010};
    static const std::vector<std::size_t> kSupport1 = {0b00001, 0b00010, 0b01101, 0b01110,
                                                       0b10100, 0b10111, 0b11000, 0b11011};
    return uniform_support({Qubit::A, Qubit::B, Qubit::C, Qubit::Q1, Qubit::Q2},
                           q2 == 0 ? kSupport0 : kSupport1, kEighth);
}

/// The same state after the split permutation on (b, q1, q2).
PureState literal_split_image(int q2) {
    static const std::vector<std::size_t> kSupport0 = {0b00000, 0b00001, 0b01100, 0b01101,
                                                       0b11110, 0b11111, 0b10010, 0b10011};
    static const std::vector<std::size_t> kSupport1 = {0b01010, 0b01011, 0b00110, 0b00111,
                                                       0b10100, 0b10101, 0b11000, 0b11001};
    return uniform_support({Qubit::A, Qubit::B, Qubit::C, Qubit::Q1, Qubit::Q2},
                           q2 == 0 ? kSupport0 : kSupport1, kEighth);
}

/// The split image rewritten as (a,q1) pair x (b,c) pair x lone q2.
PureState literal_split_product(int q2) {
    const PairKind kind = (q2 == 0) ? PairKind::PhiPlus : PairKind::PsiPlus;
    return tensor(tensor(make_pair(kind, Qubit::A, Qubit::Q1), make_pair(kind, Qubit::B, Qubit::C)),
                  plus_state(Qubit::Q2));
}

/// Split carrier pairs on (a,bbar) x (b,c) for a given family.
PureState split_carriers(PairKind kind) {
    return tensor(make_pair(kind, Qubit::A, Qubit::BBar), make_pair(kind, Qubit::B, Qubit::C));
}

/// The (b, c) carrier pair alone, as held between Bob and Charlie.
PureState bc_pair(PairKind kind) { return make_pair(kind, Qubit::B, Qubit::C); }

/// Carrier pair with a fresh counterfeit appended, before Bob's CNOT: the
/// pair's amplitudes shifted onto the cf = bit slice of (b, c, cf).
PureState literal_pre_resend(PairKind kind, int bit) {
    std::vector<Amp> amps(8, Amp{0.0, 0.0});
    const std::size_t lo = static_cast<std::size_t>(bit);
    switch (kind) {
        case PairKind::PhiPlus:
            amps[0b000 | lo] = Amp{kInvSqrt2, 0.0};
            amps[0b110 | lo] = Amp{kInvSqrt2, 0.0};
            break;
        case PairKind::PhiMinus:
            amps[0b000 | lo] = Amp{kInvSqrt2, 0.0};
            amps[0b110 | lo] = Amp{-kInvSqrt2, 0.0};
            break;
        case PairKind::PsiPlus:
            amps[0b010 | lo] = Amp{kInvSqrt2, 0.0};
            amps[0b100 | lo] = Amp{kInvSqrt2, 0.0};
            break;
    }
    return PureState::from_amplitudes({Qubit::B, Qubit::C, Qubit::Cf}, std::move(amps));
}

/// Carrier pair with the counterfeit entangled in: the resend image on
/// (b, c, cf) for each carrier family and forwarded bit.
PureState literal_resend_image(PairKind kind, int bit) {
    std::vector<Amp> amps(8, Amp{0.0, 0.0});
    const std::size_t lo = static_cast<std::size_t>(bit);
    const std::size_t hi = static_cast<std::size_t>(1 - bit);
    switch (kind) {
        case PairKind::PhiPlus:
            amps[0b000 | lo] = Amp{kInvSqrt2, 0.0};  // |0,0,bit>
            amps[0b110 | hi] = Amp{kInvSqrt2, 0.0};  // |1,1,1+bit>
            break;
        case PairKind::PhiMinus:
            amps[0b000 | lo] = Amp{kInvSqrt2, 0.0};
            amps[0b110 | hi] = Amp{-kInvSqrt2, 0.0};
            break;
        case PairKind::PsiPlus:
            amps[0b010 | lo] = Amp{kInvSqrt2, 0.0};  // |0,1,bit>
            amps[0b100 | hi] = Amp{kInvSqrt2, 0.0};  // |1,0,1+bit>
            break;
    }
    return PureState::from_amplitudes({Qubit::B, Qubit::C, Qubit::Cf}, std::move(amps));
}

/// What Charlie's CNOT turns the resend image into: the carrier pair
/// restored, with the counterfeit carrying `bit` (or its flip for psi+).
PureState literal_charlie_image(PairKind kind, int bit) {
    const int received = (kind == PairKind::PsiPlus) ? 1 - bit : bit;
    return tensor(bc_pair(kind), PureState::basis_state({Qubit::Cf}, {received}));
}

/// Post-split odd-round encoding on (a, bbar, q1, q2) x (b, c).
PureState literal_odd_encode(int q2, int q) {
    std::vector<Amp> amps(16, Amp{0.0, 0.0});
    const std::size_t qq = static_cast<std::size_t>(q);
    const std::size_t nq = 1 - qq;
    amps[(0b00u << 2) | (qq << 1) | qq] = Amp{kInvSqrt2, 0.0};  // |0,0>|q,q>
    amps[(0b11u << 2) | (nq << 1) | nq] =
        Amp{(q2 == 0) ? kInvSqrt2 : -kInvSqrt2, 0.0};           // +-|1,1>|1+q,1+q>
    PureState front = PureState::from_amplitudes({Qubit::A, Qubit::BBar, Qubit::Q1, Qubit::Q2},
                                                 std::move(amps));
    return tensor(front, bc_pair(q2 == 0 ? PairKind::PhiPlus : PairKind::PhiMinus));
}

/// The odd intercept's pre-measurement form: carriers restored, data qubits
/// disentangled into |q,q>.
PureState literal_odd_decoded(int q2, int q) {
    const PairKind kind = (q2 == 0) ? PairKind::PhiPlus : PairKind::PhiMinus;
    return tensor(tensor(make_pair(kind, Qubit::A, Qubit::BBar),
                         PureState::basis_state({Qubit::Q1, Qubit::Q2}, {q, q})),
                  bc_pair(kind));
}

/// Post-split even-round encoding on (a, bbar, q1, q2) x (b, c).
PureState literal_even_encode(int q2, int q) {
    std::vector<Amp> amps(16, Amp{0.0, 0.0});
    const std::size_t qq = static_cast<std::size_t>(q);
    const std::size_t nq = 1 - qq;
    const std::size_t ab0 = (q2 == 0) ? 0b00u : 0b01u;  // pairs with |q-bar>
    const std::size_t ab1 = (q2 == 0) ? 0b11u : 0b10u;  // pairs with |(1+q)-bar>
    amps[(ab0 << 2) | (0u << 1) | qq] = Amp{0.5, 0.0};
    amps[(ab0 << 2) | (1u << 1) | nq] = Amp{0.5, 0.0};
    amps[(ab1 << 2) | (0u << 1) | nq] = Amp{0.5, 0.0};
    amps[(ab1 << 2) | (1u << 1) | qq] = Amp{0.5, 0.0};
    PureState front = PureState::from_amplitudes({Qubit::A, Qubit::BBar, Qubit::Q1, Qubit::Q2},
                                                 std::move(amps));
    return tensor(front, bc_pair(q2 == 0 ? PairKind::PhiPlus : PairKind::PsiPlus));
}

/// The even intercept's pre-measurement form: carriers restored, data pair
/// left in the Bell state encoding q (q2 = 0) or 1+q (q2 = 1).
PureState literal_even_decoded(int q2, int q) {
    const PairKind kind = (q2 == 0) ? PairKind::PhiPlus : PairKind::PsiPlus;
    const int data = (q2 == 0) ? q : 1 - q;
    std::vector<Amp> pair(4, Amp{0.0, 0.0});
    pair[static_cast<std::size_t>(data)] = Amp{kInvSqrt2, 0.0};      // |0, data>
    pair[static_cast<std::size_t>(3 - data)] = Amp{kInvSqrt2, 0.0};  // |1, 1+data>
    PureState data_state = PureState::from_amplitudes({Qubit::Q1, Qubit::Q2}, std::move(pair));
    return tensor(tensor(make_pair(kind, Qubit::A, Qubit::BBar), data_state), bc_pair(kind));
}

class Ledger {
  public:
    void check(std::string id, std::string label, const PureState& built,
               const PureState& expected) {
        EquationCheck row;
        row.id = std::move(id);
        row.label = std::move(label);
        row.deviation = phase_aligned_distance(built, expected);
        row.pass = row.deviation <= kTol;
        if (!row.pass) {
            std::ostringstream diag;
            diag << "built: " << built.to_json().dump() << "\nexpected: " << expected.to_json().dump();
            row.diagnostic = diag.str();
        }
        rows_.push_back(std::move(row));
    }

    std::vector<EquationCheck> take() { return std::move(rows_); }

  private:
    std::vector<EquationCheck> rows_;
};

std::string branch_tag(int q2) { return std::string("q2=") + std::to_string(q2); }

std::string branch_tag(int q2, int q) {
    return branch_tag(q2) + ",q=" + std::to_string(q);
}

}  // namespace

std::vector<EquationCheck> verify_equations() {
    Ledger ledger;

    // eq1: the round-2 state, built by the even-round encoding on the
    // even-parity carrier (in round 2 the data bit is the bit later called q2).
    for (int q2 : {0, 1}) {
        ledger.check("eq1." + branch_tag(q2), "round-2 encoding on the even-parity carrier",
                     alice_encode_even(make_even_carrier(), q2), literal_round2_state(q2));
    }

    // eq2: the split permutation applied to the round-2 state.
    for (int q2 : {0, 1}) {
        ledger.check("eq2." + branch_tag(q2), "split permutation image of the round-2 state",
                     alice_encode_even(make_even_carrier(), q2)
                         .apply_unitary({Qubit::B, Qubit::Q1, Qubit::Q2}, split_unitary()),
                     literal_split_image(q2));
    }

    // eq3: the same state in product form - two shared pairs and a lone q2.
    for (int q2 : {0, 1}) {
        ledger.check("eq3." + branch_tag(q2), "split image as pair(a,q1) x pair(b,c) x q2",
                     alice_encode_even(make_even_carrier(), q2)
                         .apply_unitary({Qubit::B, Qubit::Q1, Qubit::Q2}, split_unitary()),
                     literal_split_product(q2));
    }

    // eq4: the end-of-round Hadamards on the three split-carrier families.
    struct MaintainCase {
        const char* id;
        const char* label;
        PairKind in;
        PairKind out;
    };
    const MaintainCase maintain_cases[] = {
        {"eq4.1", "carrier maintenance fixes the phi+ x phi+ pairs", PairKind::PhiPlus,
         PairKind::PhiPlus},
        {"eq4.2", "carrier maintenance sends psi+ x psi+ to phi- x phi-", PairKind::PsiPlus,
         PairKind::PhiMinus},
        {"eq4.3", "carrier maintenance sends phi- x phi- to psi+ x psi+", PairKind::PhiMinus,
         PairKind::PsiPlus},
    };
    for (const MaintainCase& mc : maintain_cases) {
        ledger.check(mc.id, mc.label, maintain_split_carriers(split_carriers(mc.in)),
                     split_carriers(mc.out));
    }

    // eq5..eq7: the counterfeit resend, per carrier family and forwarded bit.
    const PairKind families[] = {PairKind::PhiPlus, PairKind::PhiMinus, PairKind::PsiPlus};
    for (PairKind kind : families) {
        for (int bit : {0, 1}) {
            const std::string tag = std::string(pair_kind_name(kind)) + ",bit=" + std::to_string(bit);
            // eq5: carrier pair with the counterfeit appended, before Bob's CNOT.
            ledger.check("eq5." + tag, "carrier pair with fresh counterfeit",
                         tensor(bc_pair(kind), PureState::basis_state({Qubit::Cf}, {bit})),
                         literal_pre_resend(kind, bit));
            // eq6: after Bob entangles the counterfeit.
            ledger.check("eq6." + tag, "resend image after CNOT b->cf", resend_bit(bc_pair(kind), bit),
                         literal_resend_image(kind, bit));
            // eq7: after Charlie's decode CNOT.
            ledger.check("eq7." + tag, "Charlie's decode of the counterfeit",
                         resend_bit(bc_pair(kind), bit).apply_cnot(Qubit::C, Qubit::Cf),
                         literal_charlie_image(kind, bit));
        }
    }

    // eq8/eq9: post-split odd rounds - encoding, then Bob's disentangling CNOTs.
    for (int q2 : {0, 1}) {
        const PairKind kind = (q2 == 0) ? PairKind::PhiPlus : PairKind::PhiMinus;
        for (int q : {0, 1}) {
            ledger.check("eq8." + branch_tag(q2, q), "odd-round encoding on split carriers",
                         alice_encode_odd(split_carriers(kind), q), literal_odd_encode(q2, q));
            ledger.check("eq9." + branch_tag(q2, q), "odd intercept pre-measurement form",
                         alice_encode_odd(split_carriers(kind), q)
                             .apply_cnot(Qubit::BBar, Qubit::Q1)
                             .apply_cnot(Qubit::BBar, Qubit::Q2),
                         literal_odd_decoded(q2, q));
        }
    }

    // eq10/eq11: post-split even rounds - encoding, then Bob's CNOT, leaving
    // the data pair in a plus-sign Bell state ready for his Bell measurement.
    for (int q2 : {0, 1}) {
        const PairKind kind = (q2 == 0) ? PairKind::PhiPlus : PairKind::PsiPlus;
        for (int q : {0, 1}) {
            ledger.check("eq10." + branch_tag(q2, q), "even-round encoding on split carriers",
                         alice_encode_even(split_carriers(kind), q), literal_even_encode(q2, q));
            ledger.check("eq11." + branch_tag(q2, q), "even intercept pre-measurement form",
                         alice_encode_even(split_carriers(kind), q).apply_cnot(Qubit::BBar, Qubit::Q1),
                         literal_even_decoded(q2, q));
        }
    }

    // The honest carrier toggle, for completeness of the ledger.
    ledger.check("toggle.ghz-even", "end-of-round Hadamards send GHZ to even-parity",
                 end_of_round_toggle(make_ghz_carrier()), make_even_carrier());
    ledger.check("toggle.even-ghz", "end-of-round Hadamards send even-parity to GHZ",
                 end_of_round_toggle(make_even_carrier()), make_ghz_carrier());

    return ledger.take();
}

bool all_pass(const std::vector<EquationCheck>& checks) {
    for (const EquationCheck& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

}  // namespace qss
