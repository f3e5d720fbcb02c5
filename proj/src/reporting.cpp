#include "qss/reporting.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace qss {

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string joined_indices(const std::vector<int>& indices) {
    std::string out;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0) out += ';';
        out += std::to_string(indices[i]);
    }
    return out;
}

std::string rate_string(double rate) {
    // Shortest round-trip representation, matching the JSON rendering.
    return nlohmann::ordered_json(rate).dump();
}

std::string optional_rate_string(const std::optional<double>& rate) {
    return rate ? rate_string(*rate) : std::string("n/a");
}

std::string render_run_csv(const RunResult& result) {
    std::ostringstream out;
    out << "trial,seed,detected,non_round2_failures,round2_compared,round2_pass,"
           "q2_resolved,failure_event,recovery_error_count,recovery_error_indices\n";
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        const TrialReport& trial = result.trials[t];
        out << t << ',' << trial.seed << ',' << (trial.detected ? 1 : 0) << ','
            << trial.non_round2_failures << ',' << (trial.round2_compared ? 1 : 0) << ',';
        if (trial.round2_compared) out << (trial.round2_pass ? 1 : 0);
        out << ',' << (trial.q2_resolved ? 1 : 0) << ',' << (trial.failure_event ? 1 : 0) << ','
            << trial.recovery_error_indices.size() << ','
            << joined_indices(trial.recovery_error_indices) << '\n';
    }
    return out.str();
}

std::string render_run_text(const RunResult& result) {
    const AggregateStats& agg = result.aggregate;
    std::ostringstream out;
    out << "mode:                  " << run_mode_name(agg.mode) << '\n';
    out << "rounds per session:    " << agg.rounds << '\n';
    out << "trials:                " << agg.trials << '\n';
    out << "compare fraction:      " << rate_string(agg.fraction) << '\n';
    out << "master seed:           " << agg.seed << '\n';
    out << "detection rate:        " << rate_string(agg.detection_rate) << '\n';
    out << "round-2 compared in:   " << agg.round2_compared_trials << " trials\n";
    out << "round-2 pass rate:     " << optional_rate_string(agg.round2_check_pass_rate) << '\n';
    out << "failure event rate:    " << rate_string(agg.failure_event_rate) << '\n';
    if (agg.mode == RunMode::Attack) {
        out << "q2 resolution rate:    " << optional_rate_string(agg.q2_resolution_rate) << '\n';
        out << "recovery errors over " << agg.resolved_trials << " resolved trials:\n";
        if (agg.recovery_error_histogram.empty()) {
            out << "  (none resolved)\n";
        } else {
            for (const auto& [errors, count] : agg.recovery_error_histogram) {
                out << "  " << errors << " wrong bit(s): " << count << " trials\n";
            }
        }
    }
    return out.str();
}

nlohmann::ordered_json equation_row_json(const EquationCheck& check) {
    nlohmann::ordered_json row;
    row["id"] = check.id;
    row["label"] = check.label;
    row["pass"] = check.pass;
    row["deviation"] = check.deviation;
    if (!check.pass) row["diagnostic"] = check.diagnostic;
    return row;
}

std::string render_equations_json(const std::vector<EquationCheck>& checks) {
    nlohmann::ordered_json j;
    auto& rows = j["checks"] = nlohmann::ordered_json::array();
    for (const EquationCheck& check : checks) rows.push_back(equation_row_json(check));
    j["all_pass"] = all_pass(checks);
    return j.dump(2) + "\n";
}

std::string render_equations_csv(const std::vector<EquationCheck>& checks) {
    std::ostringstream out;
    out << "id,label,pass,deviation\n";
    for (const EquationCheck& check : checks) {
        out << csv_escape(check.id) << ',' << csv_escape(check.label) << ','
            << (check.pass ? 1 : 0) << ',' << rate_string(check.deviation) << '\n';
    }
    return out.str();
}

std::string render_equations_text(const std::vector<EquationCheck>& checks) {
    std::size_t id_width = 0;
    for (const EquationCheck& check : checks) id_width = std::max(id_width, check.id.size());
    std::ostringstream out;
    int failures = 0;
    for (const EquationCheck& check : checks) {
        out << (check.pass ? "PASS" : "FAIL") << "  " << std::left
            << std::setw(static_cast<int>(id_width)) << check.id << "  deviation "
            << std::scientific << std::setprecision(3) << check.deviation << std::defaultfloat
            << "  " << check.label << '\n';
        if (!check.pass) {
            ++failures;
            out << check.diagnostic << '\n';
        }
    }
    out << checks.size() - static_cast<std::size_t>(failures) << '/' << checks.size()
        << " checks passed\n";
    return out.str();
}

}  // namespace

std::string render_report(const RunResult& result, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json:
            return result.aggregate.to_json().dump(2) + "\n";
        case ReportFormat::Csv:
            return render_run_csv(result);
        case ReportFormat::Text:
            return render_run_text(result);
    }
    return {};
}

std::string render_equation_report(const std::vector<EquationCheck>& checks, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json:
            return render_equations_json(checks);
        case ReportFormat::Csv:
            return render_equations_csv(checks);
        case ReportFormat::Text:
            return render_equations_text(checks);
    }
    return {};
}

}  // namespace qss
