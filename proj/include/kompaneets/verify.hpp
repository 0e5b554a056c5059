#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace kompaneets {

/// One quantitative check. `margin` is positive when the check passes by
/// that amount and negative when it fails.
struct CheckResult {
    int criterion = 0;
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;
    double margin = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    [[nodiscard]] bool passed() const noexcept;
};

/// ledger, contraction, comparison, equilibria, condensate, lipschitz,
/// supersolution, support, viscous, entropy.
[[nodiscard]] const std::vector<std::string>& suite_names();

[[nodiscard]] bool is_suite(std::string_view name);

/// Runs one named suite. Throws std::invalid_argument for an unknown name.
[[nodiscard]] SuiteReport run_suite(std::string_view name);

/// Runs the named suite, or every suite for "all", on up to `jobs` threads.
[[nodiscard]] std::vector<SuiteReport> run_suites(std::string_view name, unsigned jobs = 1);

[[nodiscard]] nlohmann::json to_json(const std::vector<SuiteReport>& reports);

/// Short label of an acceptance criterion number (1..13).
[[nodiscard]] std::string criterion_title(int criterion);

}  // namespace kompaneets
