#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "qss/detection.hpp"
#include "qss/equations.hpp"
#include "qss/reporting.hpp"
#include "qss/statevec.hpp"

namespace {

enum class CliMode { Honest, Attack, VerifyEquations };

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

/// Stderr logger gated by the QSS_LOG environment variable.
class Logger {
  public:
    enum Level { Error = 0, Info = 1, Debug = 2 };

    explicit Logger(Level level) : level_(level) {}

    bool debug_enabled() const { return level_ >= Debug; }

    void info(const std::string& message) const { emit(Info, message); }
    void debug(const std::string& message) const { emit(Debug, message); }

  private:
    void emit(Level at, const std::string& message) const {
        if (level_ >= at) std::cerr << "qss: " << message << "\n";
    }

    Level level_;
};

std::optional<Logger::Level> parse_log_level(const char* value) {
    if (value == nullptr || std::string_view(value).empty()) return Logger::Error;
    const std::string v(value);
    if (v == "error") return Logger::Error;
    if (v == "info") return Logger::Info;
    if (v == "debug") return Logger::Debug;
    return std::nullopt;
}

int write_output(const std::string& rendered, const std::string& out_path, const Logger& log) {
    if (out_path.empty()) {
        std::cout << rendered;
        return kExitOk;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "qss: cannot open output path: " << out_path << "\n";
        return kExitConfig;
    }
    out << rendered;
    out.flush();
    if (!out) {
        std::cerr << "qss: failed while writing output path: " << out_path << "\n";
        return kExitConfig;
    }
    log.info("report written to " + out_path);
    return kExitOk;
}

int run_verify_equations(qss::ReportFormat format, const std::string& out_path, const Logger& log) {
    const auto started = std::chrono::steady_clock::now();
    const std::vector<qss::EquationCheck> checks = qss::verify_equations();
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    if (log.debug_enabled()) {
        for (const qss::EquationCheck& check : checks) {
            std::ostringstream line;
            line << (check.pass ? "pass " : "FAIL ") << check.id << " deviation " << check.deviation;
            log.debug(line.str());
        }
    }
    log.info("verified " + std::to_string(checks.size()) + " closed-form identities in " +
             std::to_string(elapsed) + " ms");

    const int write_rc = write_output(qss::render_equation_report(checks, format), out_path, log);
    if (write_rc != kExitOk) return write_rc;
    if (!qss::all_pass(checks)) {
        std::cerr << "qss: closed-form verification failed; see the report rows\n";
        return kExitInvariant;
    }
    return kExitOk;
}

int run_monte_carlo(qss::RunMode mode, int rounds, int trials, double fraction, std::uint64_t seed,
                    qss::ReportFormat format, const std::string& out_path, const Logger& log) {
    {
        std::ostringstream line;
        line << "mode " << qss::run_mode_name(mode) << ", rounds " << rounds << ", trials " << trials
             << ", compare fraction " << fraction << ", seed " << seed;
        log.info(line.str());
    }
    const auto started = std::chrono::steady_clock::now();
    const qss::RunResult result = qss::run_trials(mode, rounds, trials, fraction, seed);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    if (log.debug_enabled()) {
        for (std::size_t t = 0; t < result.trials.size(); ++t) {
            const qss::TrialReport& trial = result.trials[t];
            std::ostringstream line;
            line << "trial " << t << " seed " << trial.seed << " detected " << trial.detected
                 << " q2_resolved " << trial.q2_resolved << " recovery_errors "
                 << trial.recovery_error_indices.size();
            log.debug(line.str());
        }
    }
    log.info("completed " + std::to_string(trials) + " trials in " + std::to_string(elapsed) + " ms");
    return write_output(qss::render_report(result, format), out_path, log);
}

}  // namespace

int main(int argc, char** argv) {
    const std::optional<Logger::Level> log_level = parse_log_level(std::getenv("QSS_LOG"));
    if (!log_level) {
        std::cerr << "qss: QSS_LOG must be one of error, info, debug\n";
        return kExitConfig;
    }
    const Logger log(*log_level);

    CLI::App app{
        "Exact simulator for a three-party, two-carrier quantum secret sharing protocol,\n"
        "with a Monte Carlo harness for the receiver-side entanglement-split cheat and a\n"
        "closed-form verification suite for every state the analysis predicts."};

    CliMode mode{};
    int rounds = 20;
    int trials = 1000;
    double fraction = 0.25;
    std::uint64_t seed = 42;
    std::string out_path;
    qss::ReportFormat format = qss::ReportFormat::Json;

    const std::map<std::string, CliMode> mode_names{{"honest", CliMode::Honest},
                                                    {"attack", CliMode::Attack},
                                                    {"verify-equations", CliMode::VerifyEquations}};
    const std::map<std::string, qss::ReportFormat> format_names{{"json", qss::ReportFormat::Json},
                                                                {"csv", qss::ReportFormat::Csv},
                                                                {"text", qss::ReportFormat::Text}};

    app.add_option("--mode", mode, "What to run: honest | attack | verify-equations")
        ->required()
        ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
    app.add_option("--rounds", rounds, "Rounds per session (>= 1; >= 2 for attack)")
        ->capture_default_str();
    app.add_option("--trials", trials, "Monte Carlo trials (>= 1)")->capture_default_str();
    app.add_option("--compare-fraction", fraction,
                   "Per-round probability of public comparison, in (0, 1]")
        ->capture_default_str();
    app.add_option("--seed", seed, "Master seed; reports are a pure function of the full config")
        ->capture_default_str();
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.add_option("--format", format, "Report format: json | csv | text")
        ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return kExitConfig;
    }

    try {
        if (mode == CliMode::VerifyEquations) {
            return run_verify_equations(format, out_path, log);
        }
        const qss::RunMode run_mode =
            (mode == CliMode::Honest) ? qss::RunMode::Honest : qss::RunMode::Attack;
        return run_monte_carlo(run_mode, rounds, trials, fraction, seed, format, out_path, log);
    } catch (const qss::EngineBugError& e) {
        std::cerr << "qss: internal invariant breach: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const qss::NotSeparableError& e) {
        std::cerr << "qss: internal invariant breach: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qss: configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "qss: unexpected failure: " << e.what() << "\n";
        return kExitInvariant;
    }
}
