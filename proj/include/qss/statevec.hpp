#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qss/rng.hpp"

namespace qss {

using Amp = std::complex<double>;

/// Shared tolerance for normalization, unitarity, separability and
/// state-equality checks.
inline constexpr double kTol = 1e-10;

/// The fixed roster of qubit roles a register can hold. `Q1` and `Q2` are the
/// per-round data qubits, `Cf` is the counterfeit particle a cheating receiver
/// fabricates, and `BBar` is the data qubit he keeps as a carrier half after
/// splitting the entanglement.
enum class Qubit : std::uint8_t { A = 0, B, C, Q1, Q2, BBar, Cf };

std::string_view qubit_name(Qubit q);

/// Thrown by PureState::discard when the target qubit is still entangled with
/// the rest of the register. In the protocol harness this always means the
/// calling logic dropped a qubit at the wrong moment.
struct NotSeparableError : std::runtime_error {
    explicit NotSeparableError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Invariant tripwire: thrown when a should-be-impossible outcome occurs
/// (broken normalization, a measurement result ruled out by the analysis, or
/// inconsistent cheat bookkeeping).
struct EngineBugError : std::logic_error {
    explicit EngineBugError(const std::string& what_arg) : std::logic_error(what_arg) {}
};

enum class BellOutcome { PhiPlus, PsiPlus, PhiMinus, PsiMinus };

std::string_view bell_outcome_name(BellOutcome o);

/// Dense square matrix, validated unitary (U†U = I within kTol) on
/// construction so downstream code never has to re-check.
class UnitaryMatrix {
  public:
    /// Row-major entries; `dim` must be a power of two.
    UnitaryMatrix(std::size_t dim, std::vector<Amp> entries);

    /// Permutation matrix mapping basis state `i` to basis state `image[i]`.
    static UnitaryMatrix from_permutation(const std::vector<std::size_t>& image);

    std::size_t dim() const { return dim_; }
    const Amp& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

  private:
    std::size_t dim_;
    std::vector<Amp> entries_;
};

/// Dense amplitude vector over an ordered set of labeled qubits.
///
/// The first label owns the most significant bit of the amplitude index, so
/// basis_state({A, B}, {1, 0}) puts amplitude 1 at index 0b10. Operations
/// return a new state rather than mutating; every state that comes out of the
/// class is checked to be normalized and finite.
class PureState {
  public:
    static PureState basis_state(std::vector<Qubit> labels, const std::vector<int>& bits);

    /// Builds a state from explicit amplitudes (2^labels of them). The vector
    /// must already be normalized within kTol; nothing is silently rescaled.
    static PureState from_amplitudes(std::vector<Qubit> labels, std::vector<Amp> amps);

    const std::vector<Qubit>& labels() const { return labels_; }
    const std::vector<Amp>& amplitudes() const { return amps_; }
    std::size_t num_qubits() const { return labels_.size(); }
    bool has(Qubit q) const;

    /// The amplitude of one basis state, bits given in label order.
    Amp amplitude(const std::vector<int>& bits) const;

    PureState apply_hadamard(Qubit target) const;
    PureState apply_cnot(Qubit control, Qubit target) const;
    PureState apply_unitary(std::span<const Qubit> targets, const UnitaryMatrix& u) const;
    PureState apply_unitary(std::initializer_list<Qubit> targets, const UnitaryMatrix& u) const;

    /// Born probabilities of the 2^k joint outcomes of the targets, outcome
    /// index big-endian in target order. Always sums to 1 within kTol.
    std::vector<double> outcome_probabilities(std::span<const Qubit> targets) const;

    /// Samples a joint computational-basis measurement of the targets and
    /// returns the outcome bits plus the collapsed (renormalized) state. The
    /// measured qubits stay in the register; use discard to drop them.
    std::pair<std::vector<int>, PureState> measure_computational(std::span<const Qubit> targets,
                                                                 RandomStream& rng) const;
    std::pair<std::vector<int>, PureState> measure_computational(std::initializer_list<Qubit> targets,
                                                                 RandomStream& rng) const;

    /// Bell-basis measurement of a qubit pair, realized as a basis change
    /// (CNOT first->second, then Hadamard on first), a computational
    /// measurement, and the inverse basis change on the collapsed state, so
    /// the returned register still holds the pair in the measured Bell state.
    std::pair<BellOutcome, PureState> measure_bell(Qubit first, Qubit second, RandomStream& rng) const;

    /// Removes a qubit that is in a product with the rest of the register.
    /// There is deliberately no partial trace: if the factorization residual
    /// exceeds kTol this throws NotSeparableError instead of approximating.
    PureState discard(Qubit target) const;

    PureState relabeled(Qubit from, Qubit to) const;
    PureState reordered(std::span<const Qubit> new_labels) const;

    /// Same state with labels sorted into a fixed canonical order.
    PureState canonical() const;

    /// Debug dump: {"labels": [...], "amps": [[re, im], ...]}.
    nlohmann::ordered_json to_json() const;

  private:
    PureState(std::vector<Qubit> labels, std::vector<Amp> amps);

    std::size_t position_of(Qubit q) const;
    std::size_t shift_of(Qubit q) const { return labels_.size() - 1 - position_of(q); }
    void check_state() const;

    std::vector<Qubit> labels_;
    std::vector<Amp> amps_;
};

/// Kronecker product; label sets must be disjoint. lhs supplies the high bits.
PureState tensor(const PureState& lhs, const PureState& rhs);

/// Largest elementwise deviation after canonicalizing labels and aligning
/// `rhs` to `lhs` with the best unit phase.
double phase_aligned_distance(const PureState& lhs, const PureState& rhs);

/// Largest elementwise deviation after canonicalizing labels; no phase
/// freedom. Suitable when even the global phase is pinned by construction.
double direct_distance(const PureState& lhs, const PureState& rhs);

bool equal_up_to_global_phase(const PureState& lhs, const PureState& rhs, double tol);

}  // namespace qss
