#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kompaneets/scenario.hpp"
#include "kompaneets/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
    }
    for (const auto& assignment : overrides) kompaneets::apply_override(doc, assignment);
    return doc;
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& overrides) {
    const auto config = kompaneets::parse_config(load_config(config_path, overrides));
    const auto result = kompaneets::run_scenario(config);
    const auto& ledger = result.ledger;
    std::printf("steps %zu  N %.10g  condensate %.10g  right inflow %.3g  ledger residual %.3g\n", result.steps,
                ledger.current_number, ledger.condensate_mass, ledger.right_flux_accum, ledger.relative_residual());
    std::printf("wrote %s and %s\n", (config.output_dir / config.snapshots_file).string().c_str(),
                (config.output_dir / config.series_file).string().c_str());
    return kExitPass;
}

int cmd_verify(const std::string& suite, const std::string& out_dir, unsigned jobs) {
    const auto reports = kompaneets::run_suites(suite, jobs);
    bool all = true;
    for (const auto& report : reports) {
        for (const auto& c : report.checks) {
            std::printf("%-4s C%-2d %-14s %s: %.6g %s %.6g (margin %.3g)%s%s\n", c.passed ? "PASS" : "FAIL",
                        c.criterion, report.suite.c_str(), c.name.c_str(), c.value, c.relation.c_str(), c.threshold,
                        c.margin, c.detail.empty() ? "" : "  ", c.detail.c_str());
        }
        std::printf("suite %s: %s (%.1f s)\n", report.suite.c_str(), report.passed() ? "pass" : "FAIL",
                    report.seconds);
        all = all && report.passed();
    }
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / "report.json";
    std::ofstream out(path);
    out << kompaneets::to_json(reports).dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return all ? kExitPass : kExitFail;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::vector<double>& eps, unsigned jobs) {
    const auto config = kompaneets::parse_config(load_config(config_path, overrides));
    for (double e : eps) {
        if (!(e > 0.0)) throw UsageError("--eps values must be positive");
    }
    const auto rows = kompaneets::sweep_viscosity(config, eps, jobs);
    std::filesystem::create_directories(config.output_dir);
    const auto path = config.output_dir / "sweep.csv";
    std::ofstream out(path);
    out << "epsilon,l1_to_godunov,tail_mass\n";
    char line[128];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r.epsilon, r.l1_to_godunov, r.tail_mass);
        out << line;
        std::printf("eps %-10g L1 %.6e  tail %.3e\n", r.epsilon, r.l1_to_godunov, r.tail_mass);
    }
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::printf("wrote %s\n", path.string().c_str());
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic Kompaneets solver and verification lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string suite;
    std::string out_dir = ".";
    std::vector<double> eps;
    unsigned jobs = default_jobs();

    auto* simulate = app.add_subcommand("simulate", "Run one scenario and write snapshots.csv and series.csv");
    simulate->add_option("--config", config_path, "JSON scenario file")->required();
    simulate->add_option("--set", overrides, "Override a config field, key=value")->allow_extra_args(false);

    std::vector<std::string> suites = kompaneets::suite_names();
    suites.emplace_back("all");
    auto* verify = app.add_subcommand("verify", "Run an acceptance suite and write report.json");
    verify->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(suites));
    verify->add_option("--out", out_dir, "Directory for report.json");
    verify->add_option("--jobs", jobs, "Suites run in parallel")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep-viscosity", "Compare viscous solutions with the hyperbolic one");
    sweep->add_option("--config", config_path, "JSON scenario file")->required();
    sweep->add_option("--eps", eps, "Comma-separated viscosities")->required()->delimiter(',');
    sweep->add_option("--set", overrides, "Override a config field, key=value")->allow_extra_args(false);
    sweep->add_option("--jobs", jobs, "Viscosities run in parallel")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(config_path, overrides);
        if (*verify) return cmd_verify(suite, out_dir, jobs);
        return cmd_sweep(config_path, overrides, eps, jobs);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const kompaneets::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
}
