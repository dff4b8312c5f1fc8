#pragma once

#include "ar/scenario_json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ar {

enum class Outcome { Pass, Fail, Error };
std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct CheckResult {
    std::string name;
    std::string kind;
    Outcome outcome = Outcome::Error;
    std::string message;
    /// Check-specific evidence: distances, success fractions, witnesses, coverage.
    Json details = Json::object();

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::optional<std::string> filter;
    std::vector<CheckResult> results;  // declaration order

    std::size_t count(Outcome o) const;
    /// True iff every reported check passed.
    bool passed() const { return count(Outcome::Pass) == results.size(); }
    /// 0 all pass, 1 some check failed, 2 some check errored.
    int exit_code() const;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Command-line overrides applied to every selected check.
struct RunOverrides {
    std::optional<double> epsilon;
    std::optional<std::size_t> trials;
};

/// Shell-style pattern: '*' any run, '?' one character.
bool matches_filter(std::string_view pattern, std::string_view name);

/// Runs the selected checks in declaration order. Errors raised by one check
/// are recorded against it; the remaining checks still run.
RunReport run_checks(const ScenarioBundle& bundle, TrialSeed seed, const std::optional<std::string>& filter = {},
                     const RunOverrides& overrides = {});

CheckResult run_check(const ScenarioBundle& bundle, const CheckDecl& check, TrialSeed seed);

Json report_to_json(const RunReport& report);
/// SyntaxError on malformed input.
RunReport report_from_json(const Json& j);

std::string render_json(const RunReport& report);
std::string render_text(const RunReport& report);

}  // namespace ar
