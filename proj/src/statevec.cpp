#include "qss/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qss {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::string label_list(const std::vector<Qubit>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i != 0) out += ",";
        out += qubit_name(labels[i]);
    }
    return out;
}

}  // namespace

std::string_view qubit_name(Qubit q) {
    switch (q) {
        case Qubit::A: return "a";
        case Qubit::B: return "b";
        case Qubit::C: return "c";
        case Qubit::Q1: return "q1";
        case Qubit::Q2: return "q2";
        case Qubit::BBar: return "bbar";
        case Qubit::Cf: return "cf";
    }
    throw std::invalid_argument("unknown qubit label value");
}

std::string_view bell_outcome_name(BellOutcome o) {
    switch (o) {
        case BellOutcome::PhiPlus: return "phi+";
        case BellOutcome::PsiPlus: return "psi+";
        case BellOutcome::PhiMinus: return "phi-";
        case BellOutcome::PsiMinus: return "psi-";
    }
    throw std::invalid_argument("unknown bell outcome value");
}

UnitaryMatrix::UnitaryMatrix(std::size_t dim, std::vector<Amp> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0 || (dim_ & (dim_ - 1)) != 0) {
        throw std::invalid_argument("unitary dimension must be a power of two");
    }
    if (entries_.size() != dim_ * dim_) {
        throw std::invalid_argument("unitary entry count does not match dimension");
    }
    // U†U = I within kTol.
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            Amp acc{0.0, 0.0};
            for (std::size_t k = 0; k < dim_; ++k) {
                acc += std::conj(at(k, r)) * at(k, c);
            }
            const Amp expected = (r == c) ? Amp{1.0, 0.0} : Amp{0.0, 0.0};
            if (std::abs(acc - expected) > kTol) {
                throw std::invalid_argument("matrix is not unitary");
            }
        }
    }
}

UnitaryMatrix UnitaryMatrix::from_permutation(const std::vector<std::size_t>& image) {
    const std::size_t dim = image.size();
    std::vector<bool> seen(dim, false);
    for (std::size_t target : image) {
        if (target >= dim || seen[target]) {
            throw std::invalid_argument("permutation image is not a bijection");
        }
        seen[target] = true;
    }
    std::vector<Amp> entries(dim * dim, Amp{0.0, 0.0});
    for (std::size_t in = 0; in < dim; ++in) {
        entries[image[in] * dim + in] = Amp{1.0, 0.0};
    }
    return UnitaryMatrix(dim, std::move(entries));
}

PureState::PureState(std::vector<Qubit> labels, std::vector<Amp> amps)
    : labels_(std::move(labels)), amps_(std::move(amps)) {
    check_state();
}

void PureState::check_state() const {
    if (labels_.empty()) {
        throw std::invalid_argument("state needs at least one qubit");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        for (std::size_t j = i + 1; j < labels_.size(); ++j) {
            if (labels_[i] == labels_[j]) {
                throw std::invalid_argument(std::string("duplicate qubit label '") +
                                            std::string(qubit_name(labels_[i])) + "'");
            }
        }
    }
    if (amps_.size() != (std::size_t{1} << labels_.size())) {
        throw std::invalid_argument("amplitude count does not match qubit count");
    }
    double norm_sq = 0.0;
    for (const Amp& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw EngineBugError("non-finite amplitude");
        }
        norm_sq += std::norm(a);
    }
    if (std::abs(norm_sq - 1.0) > kTol) {
        std::ostringstream msg;
        msg << "state norm^2 drifted to " << norm_sq;
        throw EngineBugError(msg.str());
    }
}

PureState PureState::basis_state(std::vector<Qubit> labels, const std::vector<int>& bits) {
    if (labels.size() != bits.size()) {
        throw std::invalid_argument("label and bit counts differ");
    }
    std::size_t index = 0;
    for (int bit : bits) {
        if (bit != 0 && bit != 1) throw std::invalid_argument("basis bits must be 0 or 1");
        index = (index << 1) | static_cast<std::size_t>(bit);
    }
    std::vector<Amp> amps(std::size_t{1} << labels.size(), Amp{0.0, 0.0});
    amps[index] = Amp{1.0, 0.0};
    return PureState(std::move(labels), std::move(amps));
}

PureState PureState::from_amplitudes(std::vector<Qubit> labels, std::vector<Amp> amps) {
    return PureState(std::move(labels), std::move(amps));
}

bool PureState::has(Qubit q) const {
    return std::find(labels_.begin(), labels_.end(), q) != labels_.end();
}

std::size_t PureState::position_of(Qubit q) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == q) return i;
    }
    throw std::invalid_argument(std::string("no qubit '") + std::string(qubit_name(q)) +
                                "' in state [" + label_list(labels_) + "]");
}

Amp PureState::amplitude(const std::vector<int>& bits) const {
    if (bits.size() != labels_.size()) {
        throw std::invalid_argument("bit count does not match qubit count");
    }
    std::size_t index = 0;
    for (int bit : bits) {
        if (bit != 0 && bit != 1) throw std::invalid_argument("basis bits must be 0 or 1");
        index = (index << 1) | static_cast<std::size_t>(bit);
    }
    return amps_[index];
}

PureState PureState::apply_hadamard(Qubit target) const {
    const std::size_t mask = std::size_t{1} << shift_of(target);
    std::vector<Amp> out(amps_);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i & mask) continue;
        const Amp a0 = out[i];
        const Amp a1 = out[i | mask];
        out[i] = (a0 + a1) * kInvSqrt2;
        out[i | mask] = (a0 - a1) * kInvSqrt2;
    }
    return PureState(labels_, std::move(out));
}

PureState PureState::apply_cnot(Qubit control, Qubit target) const {
    if (control == target) {
        throw std::invalid_argument("cnot control and target must differ");
    }
    const std::size_t cmask = std::size_t{1} << shift_of(control);
    const std::size_t tmask = std::size_t{1} << shift_of(target);
    std::vector<Amp> out(amps_);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(out[i], out[i | tmask]);
        }
    }
    return PureState(labels_, std::move(out));
}

PureState PureState::apply_unitary(std::span<const Qubit> targets, const UnitaryMatrix& u) const {
    const std::size_t k = targets.size();
    if (u.dim() != (std::size_t{1} << k)) {
        throw std::invalid_argument("unitary dimension does not match target count");
    }
    std::vector<std::size_t> shifts(k);
    for (std::size_t j = 0; j < k; ++j) {
        shifts[j] = shift_of(targets[j]);
        for (std::size_t i = 0; i < j; ++i) {
            if (targets[i] == targets[j]) throw std::invalid_argument("duplicate unitary target");
        }
    }
    std::size_t target_mask = 0;
    for (std::size_t s : shifts) target_mask |= std::size_t{1} << s;

    std::vector<Amp> out(amps_.size(), Amp{0.0, 0.0});
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (std::norm(amps_[i]) == 0.0) continue;
        std::size_t sub_in = 0;
        for (std::size_t j = 0; j < k; ++j) {
            sub_in = (sub_in << 1) | ((i >> shifts[j]) & 1u);
        }
        const std::size_t base = i & ~target_mask;
        for (std::size_t sub_out = 0; sub_out < u.dim(); ++sub_out) {
            const Amp coeff = u.at(sub_out, sub_in);
            if (std::norm(coeff) == 0.0) continue;
            std::size_t out_index = base;
            for (std::size_t j = 0; j < k; ++j) {
                if ((sub_out >> (k - 1 - j)) & 1u) out_index |= std::size_t{1} << shifts[j];
            }
            out[out_index] += coeff * amps_[i];
        }
    }
    return PureState(labels_, std::move(out));
}

PureState PureState::apply_unitary(std::initializer_list<Qubit> targets, const UnitaryMatrix& u) const {
    return apply_unitary(std::span<const Qubit>(targets.begin(), targets.size()), u);
}

std::vector<double> PureState::outcome_probabilities(std::span<const Qubit> targets) const {
    const std::size_t k = targets.size();
    if (k == 0) throw std::invalid_argument("measurement needs at least one target");
    std::vector<std::size_t> shifts(k);
    for (std::size_t j = 0; j < k; ++j) {
        shifts[j] = shift_of(targets[j]);
        for (std::size_t i = 0; i < j; ++i) {
            if (targets[i] == targets[j]) throw std::invalid_argument("duplicate measurement target");
        }
    }
    std::vector<double> probs(std::size_t{1} << k, 0.0);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        std::size_t outcome = 0;
        for (std::size_t j = 0; j < k; ++j) {
            outcome = (outcome << 1) | ((i >> shifts[j]) & 1u);
        }
        probs[outcome] += std::norm(amps_[i]);
    }
    double total = 0.0;
    for (double p : probs) total += p;
    if (std::abs(total - 1.0) > kTol) {
        throw EngineBugError("measurement probabilities do not sum to 1");
    }
    return probs;
}

std::pair<std::vector<int>, PureState> PureState::measure_computational(std::span<const Qubit> targets,
                                                                        RandomStream& rng) const {
    const std::vector<double> probs = outcome_probabilities(targets);
    const double u = rng.uniform01();
    std::size_t outcome = probs.size() - 1;
    double cumulative = 0.0;
    for (std::size_t o = 0; o < probs.size(); ++o) {
        cumulative += probs[o];
        if (u < cumulative) {
            outcome = o;
            break;
        }
    }

    const std::size_t k = targets.size();
    std::vector<std::size_t> shifts(k);
    for (std::size_t j = 0; j < k; ++j) shifts[j] = shift_of(targets[j]);

    const double scale = 1.0 / std::sqrt(probs[outcome]);
    std::vector<Amp> out(amps_.size(), Amp{0.0, 0.0});
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        std::size_t o = 0;
        for (std::size_t j = 0; j < k; ++j) {
            o = (o << 1) | ((i >> shifts[j]) & 1u);
        }
        if (o == outcome) out[i] = amps_[i] * scale;
    }

    std::vector<int> bits(k);
    for (std::size_t j = 0; j < k; ++j) {
        bits[j] = static_cast<int>((outcome >> (k - 1 - j)) & 1u);
    }
    return {std::move(bits), PureState(labels_, std::move(out))};
}

std::pair<std::vector<int>, PureState> PureState::measure_computational(
    std::initializer_list<Qubit> targets, RandomStream& rng) const {
    return measure_computational(std::span<const Qubit>(targets.begin(), targets.size()), rng);
}

std::pair<BellOutcome, PureState> PureState::measure_bell(Qubit first, Qubit second,
                                                          RandomStream& rng) const {
    if (first == second) throw std::invalid_argument("bell measurement needs two distinct qubits");
    const PureState rotated = apply_cnot(first, second).apply_hadamard(first);
    auto [bits, collapsed] = rotated.measure_computational({first, second}, rng);
    // bits[0] is the phase bit, bits[1] the parity bit.
    BellOutcome outcome;
    if (bits[0] == 0) {
        outcome = (bits[1] == 0) ? BellOutcome::PhiPlus : BellOutcome::PsiPlus;
    } else {
        outcome = (bits[1] == 0) ? BellOutcome::PhiMinus : BellOutcome::PsiMinus;
    }
    PureState restored = collapsed.apply_hadamard(first).apply_cnot(first, second);
    return {outcome, std::move(restored)};
}

PureState PureState::discard(Qubit target) const {
    if (labels_.size() == 1) {
        throw std::invalid_argument("cannot discard the only qubit in a state");
    }
    const std::size_t shift = shift_of(target);
    const std::size_t low_mask = (std::size_t{1} << shift) - 1;
    const std::size_t half = amps_.size() >> 1;

    // Slice into the two columns of the (rest x target) coefficient matrix.
    std::vector<Amp> col0(half), col1(half);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const std::size_t rest = ((i >> (shift + 1)) << shift) | (i & low_mask);
        if ((i >> shift) & 1u) {
            col1[rest] = amps_[i];
        } else {
            col0[rest] = amps_[i];
        }
    }

    // Dominant eigenvector of the 2x2 Gram matrix gives the target's factor.
    double g00 = 0.0, g11 = 0.0;
    Amp g01{0.0, 0.0};
    for (std::size_t r = 0; r < half; ++r) {
        g00 += std::norm(col0[r]);
        g11 += std::norm(col1[r]);
        g01 += std::conj(col0[r]) * col1[r];
    }
    const double mean = 0.5 * (g00 + g11);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (g00 - g11) * (g00 - g11) + std::norm(g01)));
    const double lambda = mean + disc;

    Amp v0, v1;
    const double n_a = std::norm(g01) + (lambda - g00) * (lambda - g00);
    const double n_b = (lambda - g11) * (lambda - g11) + std::norm(g01);
    if (n_a >= n_b && n_a > 0.0) {
        v0 = g01;
        v1 = Amp{lambda - g00, 0.0};
    } else if (n_b > 0.0) {
        v0 = Amp{lambda - g11, 0.0};
        v1 = std::conj(g01);
    } else {
        v0 = Amp{1.0, 0.0};
        v1 = Amp{0.0, 0.0};
    }
    // The Gram matrix is S * conj(w) w^T for a separable factor w, so its
    // dominant eigenvector is conj(w); conjugate to get the factor itself.
    v0 = std::conj(v0);
    v1 = std::conj(v1);
    const double vnorm = std::sqrt(std::norm(v0) + std::norm(v1));
    v0 /= vnorm;
    v1 /= vnorm;
    // Phase convention: the dominant component of the discarded factor is
    // real positive, so the retained factor keeps the state's overall phase.
    const Amp pivot = (std::abs(v0) >= std::abs(v1)) ? v0 : v1;
    if (std::abs(pivot) > 0.0) {
        const Amp phase = std::conj(pivot) / std::abs(pivot);
        v0 *= phase;
        v1 *= phase;
    }

    std::vector<Amp> rest(half);
    for (std::size_t r = 0; r < half; ++r) {
        rest[r] = col0[r] * std::conj(v0) + col1[r] * std::conj(v1);
    }
    double residual = 0.0;
    for (std::size_t r = 0; r < half; ++r) {
        residual = std::max(residual, std::abs(col0[r] - rest[r] * v0));
        residual = std::max(residual, std::abs(col1[r] - rest[r] * v1));
    }
    if (residual > kTol) {
        std::ostringstream msg;
        msg << "qubit '" << qubit_name(target) << "' is entangled with the rest of the state"
            << " (factorization residual " << residual << ")";
        throw NotSeparableError(msg.str());
    }

    std::vector<Qubit> rest_labels;
    rest_labels.reserve(labels_.size() - 1);
    for (Qubit q : labels_) {
        if (q != target) rest_labels.push_back(q);
    }
    return PureState(std::move(rest_labels), std::move(rest));
}

PureState PureState::relabeled(Qubit from, Qubit to) const {
    if (from == to) return *this;
    if (has(to)) {
        throw std::invalid_argument(std::string("label '") + std::string(qubit_name(to)) +
                                    "' already present");
    }
    std::vector<Qubit> labels(labels_);
    labels[position_of(from)] = to;
    return PureState(std::move(labels), amps_);
}

PureState PureState::reordered(std::span<const Qubit> new_labels) const {
    if (new_labels.size() != labels_.size()) {
        throw std::invalid_argument("reorder must keep the same qubit count");
    }
    const std::size_t n = labels_.size();
    std::vector<std::size_t> old_shift(n);
    for (std::size_t j = 0; j < n; ++j) {
        old_shift[j] = shift_of(new_labels[j]);  // throws if a label is missing
    }
    std::vector<Amp> out(amps_.size());
    for (std::size_t ni = 0; ni < out.size(); ++ni) {
        std::size_t oi = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if ((ni >> (n - 1 - j)) & 1u) oi |= std::size_t{1} << old_shift[j];
        }
        out[ni] = amps_[oi];
    }
    return PureState(std::vector<Qubit>(new_labels.begin(), new_labels.end()), std::move(out));
}

PureState PureState::canonical() const {
    std::vector<Qubit> sorted(labels_);
    std::sort(sorted.begin(), sorted.end());
    return reordered(sorted);
}

nlohmann::ordered_json PureState::to_json() const {
    nlohmann::ordered_json j;
    auto& labels = j["labels"] = nlohmann::ordered_json::array();
    for (Qubit q : labels_) labels.push_back(std::string(qubit_name(q)));
    auto& amps = j["amps"] = nlohmann::ordered_json::array();
    for (const Amp& a : amps_) amps.push_back({a.real(), a.imag()});
    return j;
}

PureState tensor(const PureState& lhs, const PureState& rhs) {
    for (Qubit q : rhs.labels()) {
        if (lhs.has(q)) {
            throw std::invalid_argument(std::string("tensor operands share label '") +
                                        std::string(qubit_name(q)) + "'");
        }
    }
    std::vector<Qubit> labels(lhs.labels());
    labels.insert(labels.end(), rhs.labels().begin(), rhs.labels().end());
    const std::size_t rdim = rhs.amplitudes().size();
    std::vector<Amp> amps;
    amps.reserve(lhs.amplitudes().size() * rdim);
    for (const Amp& l : lhs.amplitudes()) {
        for (const Amp& r : rhs.amplitudes()) {
            amps.push_back(l * r);
        }
    }
    return PureState::from_amplitudes(std::move(labels), std::move(amps));
}

namespace {

std::pair<PureState, PureState> canonical_pair(const PureState& lhs, const PureState& rhs) {
    PureState a = lhs.canonical();
    PureState b = rhs.canonical();
    if (a.labels() != b.labels()) {
        throw std::invalid_argument("states cover different qubit sets");
    }
    return {std::move(a), std::move(b)};
}

}  // namespace

double phase_aligned_distance(const PureState& lhs, const PureState& rhs) {
    auto [a, b] = canonical_pair(lhs, rhs);
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        const double mag = std::abs(a.amplitudes()[i]);
        if (mag > best) {
            best = mag;
            pivot = i;
        }
    }
    const Amp ref = b.amplitudes()[pivot];
    if (std::abs(ref) < 1e-12) {
        // No phase can align states that disagree at the dominant amplitude.
        return best;
    }
    Amp phase = a.amplitudes()[pivot] / ref;
    phase /= std::abs(phase);
    double dist = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        dist = std::max(dist, std::abs(a.amplitudes()[i] - phase * b.amplitudes()[i]));
    }
    return dist;
}

double direct_distance(const PureState& lhs, const PureState& rhs) {
    auto [a, b] = canonical_pair(lhs, rhs);
    double dist = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        dist = std::max(dist, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
    }
    return dist;
}

bool equal_up_to_global_phase(const PureState& lhs, const PureState& rhs, double tol) {
    return phase_aligned_distance(lhs, rhs) <= tol;
}

}  // namespace qss
