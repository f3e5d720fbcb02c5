#pragma once

#include <string>
#include <vector>

namespace qss {

/// One row of the closed-form verification ledger: a state the protocol or
/// cheat analysis predicts in closed form, rebuilt two ways - operationally
/// (gates applied to prepared inputs) and literally (hand-entered
/// amplitudes) - with the largest deviation between the two.
struct EquationCheck {
    std::string id;          // stable key, e.g. "eq2.q2=0"
    std::string label;       // human-readable description of what is checked
    bool pass = false;
    double deviation = 0.0;  // phase-aligned max-abs amplitude difference
    std::string diagnostic;  // state dumps, populated only on failure
};

/// Rebuilds and cross-checks every closed-form state of the protocol and the
/// entanglement-split analysis: the round-2 encoding, the split image and its
/// product form, carrier maintenance under the end-of-round Hadamards, the
/// counterfeit resend and Charlie's decode of it, the post-split odd- and
/// even-round encodings and intercepts, and the GHZ/even-parity toggle.
std::vector<EquationCheck> verify_equations();

bool all_pass(const std::vector<EquationCheck>& checks);

}  // namespace qss
