#pragma once

#include <string>
#include <vector>

#include "qss/detection.hpp"
#include "qss/equations.hpp"

namespace qss {

enum class ReportFormat { Json, Csv, Text };

/// Renders a Monte Carlo run. JSON is the canonical aggregate schema and is
/// byte-identical for identical configurations; CSV flattens one trial per
/// row; text is a human-readable summary.
std::string render_report(const RunResult& result, ReportFormat format);

/// Renders the closed-form verification ledger in the same three formats.
std::string render_equation_report(const std::vector<EquationCheck>& checks, ReportFormat format);

}  // namespace qss
