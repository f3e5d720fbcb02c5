#include "qss/detection.hpp"

#include <algorithm>
#include <stdexcept>

namespace qss {

std::vector<int> select_comparison(int rounds, double fraction, RandomStream& rng) {
    if (rounds < 1) throw std::invalid_argument("need at least one round");
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw std::invalid_argument("compare fraction must be in (0, 1]");
    }
    std::vector<int> indices;
    for (int i = 1; i <= rounds; ++i) {
        if (rng.bernoulli(fraction)) indices.push_back(i);
    }
    return indices;
}

bool verify_round(RoundKind kind, int alice_bit, int bob_bit, int charlie_bit) {
    for (int bit : {alice_bit, bob_bit, charlie_bit}) {
        if (bit != 0 && bit != 1) throw std::invalid_argument("bits must be 0 or 1");
    }
    if (kind == RoundKind::Odd) {
        return alice_bit == bob_bit && alice_bit == charlie_bit;
    }
    return (alice_bit ^ bob_bit ^ charlie_bit) == 0;
}

nlohmann::ordered_json ComparisonReport::to_json() const {
    nlohmann::ordered_json j;
    auto& arr = j["compared"] = nlohmann::ordered_json::array();
    for (const ComparisonEntry& e : entries) {
        nlohmann::ordered_json entry;
        entry["i"] = e.index;
        entry["kind"] = std::string(round_kind_name(e.kind));
        entry["q"] = e.alice_bit;
        entry["bob"] = e.bob_bit;
        entry["charlie"] = e.charlie_bit;
        entry["pass"] = e.pass;
        arr.push_back(std::move(entry));
    }
    j["detected"] = detected;
    return j;
}

ComparisonReport build_comparison_report(const Transcript& transcript,
                                         std::span<const int> compared_indices) {
    const int n = static_cast<int>(transcript.rounds.size());
    ComparisonReport report;
    for (int index : compared_indices) {
        if (index < 1 || index > n) throw std::invalid_argument("compared index out of range");
        const RoundRecord& r = transcript.rounds[index - 1];
        const bool pass = verify_round(r.kind, r.alice_bit, r.bob_bit, r.charlie_bit);
        report.entries.push_back({r.index, r.kind, r.alice_bit, r.bob_bit, r.charlie_bit, pass});
        if (!pass) report.detected = true;
    }
    return report;
}

std::string_view run_mode_name(RunMode mode) {
    return mode == RunMode::Honest ? "honest" : "attack";
}

nlohmann::ordered_json AggregateStats::to_json() const {
    nlohmann::ordered_json j;
    j["mode"] = std::string(run_mode_name(mode));
    j["n"] = rounds;
    j["trials"] = trials;
    j["fraction"] = fraction;
    j["detection_rate"] = detection_rate;
    if (round2_check_pass_rate) {
        j["round2_check_pass_rate"] = *round2_check_pass_rate;
    } else {
        j["round2_check_pass_rate"] = nullptr;
    }
    auto& hist = j["recovery_error_histogram"] = nlohmann::ordered_json::object();
    for (const auto& [errors, count] : recovery_error_histogram) {
        hist[std::to_string(errors)] = count;
    }
    if (q2_resolution_rate) {
        j["q2_resolution_rate"] = *q2_resolution_rate;
    } else {
        j["q2_resolution_rate"] = nullptr;
    }
    j["failure_event_rate"] = failure_event_rate;
    return j;
}

RunResult run_trials(RunMode mode, int rounds, int trials, double fraction,
                     std::uint64_t master_seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    const int min_rounds = (mode == RunMode::Attack) ? 2 : 1;
    if (rounds < min_rounds) throw std::invalid_argument("too few rounds for the selected mode");
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw std::invalid_argument("compare fraction must be in (0, 1]");
    }

    RunResult result;
    result.aggregate.mode = mode;
    result.aggregate.rounds = rounds;
    result.aggregate.trials = trials;
    result.aggregate.fraction = fraction;
    result.aggregate.seed = master_seed;
    result.trials.reserve(static_cast<std::size_t>(trials));

    int detected_count = 0;
    int round2_compared = 0;
    int round2_passed = 0;
    int failure_events = 0;
    int resolved = 0;

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(master_seed, static_cast<std::uint64_t>(t));
        RandomStream bits_rng(derive_seed(trial_seed, StreamRole::SecretBits));
        std::vector<int> bits(static_cast<std::size_t>(rounds));
        for (int& bit : bits) bit = bits_rng.bit();

        TrialReport trial;
        trial.seed = trial_seed;

        Transcript transcript;
        std::vector<int> compared;
        if (mode == RunMode::Honest) {
            transcript = run_honest_session(rounds, bits, trial_seed);
            RandomStream compare_rng(derive_seed(trial_seed, StreamRole::Comparison));
            compared = select_comparison(rounds, fraction, compare_rng);
        } else {
            AttackedSessionResult session = run_attacked_session(rounds, bits, fraction, trial_seed);
            transcript = std::move(session.transcript);
            compared = std::move(session.compared_indices);
            trial.q2_resolved = session.records.q2_knowledge != Q2Knowledge::Unknown;
            for (int i = 1; i <= rounds; ++i) {
                if (session.recovered_bits[i - 1] != bits[i - 1]) {
                    trial.recovery_error_indices.push_back(i);
                }
            }
        }

        const ComparisonReport report = build_comparison_report(transcript, compared);
        trial.detected = report.detected;
        trial.failure_event = true;
        for (const ComparisonEntry& entry : report.entries) {
            if (entry.index == 2) {
                trial.round2_compared = true;
                trial.round2_pass = entry.pass;
            } else if (!entry.pass) {
                ++trial.non_round2_failures;
            }
            if (entry.index >= 4 && entry.index % 2 == 0) trial.failure_event = false;
        }

        if (trial.detected) ++detected_count;
        if (trial.round2_compared) {
            ++round2_compared;
            if (trial.round2_pass) ++round2_passed;
        }
        if (trial.failure_event) ++failure_events;
        if (mode == RunMode::Attack && trial.q2_resolved) {
            ++resolved;
            const int errors = static_cast<int>(trial.recovery_error_indices.size());
            ++result.aggregate.recovery_error_histogram[errors];
        }
        result.trials.push_back(std::move(trial));
    }

    AggregateStats& agg = result.aggregate;
    agg.detection_rate = static_cast<double>(detected_count) / trials;
    agg.round2_compared_trials = round2_compared;
    if (round2_compared > 0) {
        agg.round2_check_pass_rate = static_cast<double>(round2_passed) / round2_compared;
    }
    agg.failure_event_rate = static_cast<double>(failure_events) / trials;
    if (mode == RunMode::Attack) {
        agg.q2_resolution_rate = static_cast<double>(resolved) / trials;
        agg.resolved_trials = resolved;
    }
    return result;
}

}  // namespace qss
