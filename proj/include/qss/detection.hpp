#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qss/attack.hpp"
#include "qss/protocol.hpp"

namespace qss {

/// Draws the publicly compared round indices: each index 1..rounds is chosen
/// independently with probability `fraction` (which must be in (0, 1]).
std::vector<int> select_comparison(int rounds, double fraction, RandomStream& rng);

/// Per-round verification rule. Odd rounds require all three bits equal;
/// even rounds require alice XOR bob XOR charlie == 0.
bool verify_round(RoundKind kind, int alice_bit, int bob_bit, int charlie_bit);

struct ComparisonEntry {
    int index;
    RoundKind kind;
    int alice_bit;
    int bob_bit;
    int charlie_bit;
    bool pass;
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    bool detected = false;  // any compared round failed verification

    nlohmann::ordered_json to_json() const;
};

ComparisonReport build_comparison_report(const Transcript& transcript,
                                         std::span<const int> compared_indices);

enum class RunMode { Honest, Attack };

std::string_view run_mode_name(RunMode mode);

struct TrialReport {
    std::uint64_t seed = 0;
    bool detected = false;
    int non_round2_failures = 0;      // failed compared rounds other than round 2
    bool round2_compared = false;
    bool round2_pass = false;         // meaningful only when round2_compared
    bool failure_event = false;       // no compared index was even and >= 4
    bool q2_resolved = false;         // attack mode only
    std::vector<int> recovery_error_indices;  // attack mode only
};

struct AggregateStats {
    RunMode mode = RunMode::Honest;
    int rounds = 0;
    int trials = 0;
    double fraction = 0.0;
    std::uint64_t seed = 0;

    double detection_rate = 0.0;
    int round2_compared_trials = 0;
    std::optional<double> round2_check_pass_rate;  // empty if round 2 never compared
    double failure_event_rate = 0.0;

    // Attack mode only. The histogram counts recovery errors over the trials
    // in which the comparison resolved the second-round bit; trials where it
    // stayed unresolved are the failure events counted above, and their
    // recovery is reported per-trial rather than folded into the histogram.
    std::optional<double> q2_resolution_rate;
    std::map<int, int> recovery_error_histogram;
    int resolved_trials = 0;

    nlohmann::ordered_json to_json() const;
};

struct RunResult {
    AggregateStats aggregate;
    std::vector<TrialReport> trials;
};

/// Monte Carlo driver: `trials` independent sessions of `rounds` rounds with
/// per-trial random data bits, each followed by the public comparison. Every
/// trial derives its own streams from (master_seed, trial index), so results
/// are reproducible and identical configs yield identical reports.
RunResult run_trials(RunMode mode, int rounds, int trials, double fraction,
                     std::uint64_t master_seed);

}  // namespace qss
