#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kompaneets/diagnostics.hpp"
#include "kompaneets/godunov.hpp"
#include "kompaneets/initial_data.hpp"

namespace kompaneets {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct ScenarioConfig {
    Preset preset = EquilibriumPreset{};
    double x_max = 4.0;
    std::size_t cells = 2000;
    double cfl = kDefaultCfl;
    double t_end = 1.0;
    std::vector<double> snapshots;
    /// Selects the viscous reference solver when set.
    std::optional<double> epsilon;
    std::filesystem::path output_dir = ".";
    std::string snapshots_file = "snapshots.csv";
    std::string series_file = "series.csv";
    std::uint64_t seed = 0;

    [[nodiscard]] GridSpec grid() const { return {0.0, x_max, cells}; }
};

/// Names accepted in the "preset" field.
[[nodiscard]] const std::vector<std::string>& preset_names();

[[nodiscard]] ScenarioConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ScenarioConfig parse_config_text(std::string_view text);

/// Applies a `key=value` override to a config document. The value is read as
/// JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

struct ScenarioResult {
    /// Half-line snapshots (restricted from the extended grid for viscous runs).
    std::vector<Snapshot> snapshots;
    std::vector<TimeSeriesRecord> series;
    ConservationLedger ledger;
    std::size_t steps = 0;
};

[[nodiscard]] ScenarioResult simulate(const ScenarioConfig& config);

void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots);
void write_series_csv(std::ostream& out, const std::vector<TimeSeriesRecord>& series);

/// Runs the scenario and writes both CSV files into config.output_dir.
/// Throws std::runtime_error on I/O failure.
ScenarioResult run_scenario(const ScenarioConfig& config);

struct ViscositySweepRow {
    double epsilon = 0.0;
    double l1_to_godunov = 0.0;
    double tail_mass = 0.0;
};

/// Solves the scenario with the hyperbolic solver and, for each ε, with the
/// viscous solver; compares the final half-line states in L1. Tail mass is
/// measured right of R + 0.5 on the extended grid. Runs up to `jobs` in parallel.
[[nodiscard]] std::vector<ViscositySweepRow> sweep_viscosity(const ScenarioConfig& config,
                                                             const std::vector<double>& epsilons,
                                                             unsigned jobs = 1);

}  // namespace kompaneets
