#include "kompaneets/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "kompaneets/model.hpp"
#include "kompaneets/viscous.hpp"

namespace kompaneets {

namespace {

using nlohmann::json;

const std::set<std::string>& common_keys() {
    static const std::set<std::string> keys{"preset", "x_max",    "cells",          "cfl",
                                            "t_end",  "snapshots", "snapshot_interval", "epsilon",
                                            "output_dir", "snapshots_file", "series_file", "seed"};
    return keys;
}

const std::vector<std::string>& preset_keys(const std::string& preset) {
    static const std::vector<std::string> equilibrium{"alpha"};
    static const std::vector<std::string> scaled{"scale", "alpha"};
    static const std::vector<std::string> box{"left", "right", "height"};
    static const std::vector<std::string> bump{"center", "width", "height"};
    static const std::vector<std::string> bose{"mu", "cutoff"};
    if (preset == "equilibrium") return equilibrium;
    if (preset == "scaled_equilibrium") return scaled;
    if (preset == "box") return box;
    if (preset == "bump") return bump;
    return bose;
}

double number_field(const json& doc, const std::string& key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
    return x;
}

std::string string_field(const json& doc, const std::string& key, const std::string& fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
}

Preset parse_preset(const json& doc) {
    if (!doc.contains("preset")) throw ConfigError("preset", "missing");
    if (!doc.at("preset").is_string()) throw ConfigError("preset", "expected a string");
    const auto name = doc.at("preset").get<std::string>();
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw ConfigError("preset", "unknown preset '" + name + "'; valid presets: " + valid);
    }
    if (name == "equilibrium") return EquilibriumPreset{number_field(doc, "alpha", 0.0)};
    if (name == "scaled_equilibrium") {
        return ScaledEquilibriumPreset{number_field(doc, "scale", 1.0), number_field(doc, "alpha", 0.0)};
    }
    if (name == "box") {
        const BoxPreset d;
        return BoxPreset{number_field(doc, "left", d.left), number_field(doc, "right", d.right),
                         number_field(doc, "height", d.height)};
    }
    if (name == "bump") {
        const BumpPreset d;
        return BumpPreset{number_field(doc, "center", d.center), number_field(doc, "width", d.width),
                          number_field(doc, "height", d.height)};
    }
    const BoseEinsteinPreset d;
    return BoseEinsteinPreset{number_field(doc, "mu", d.mu), number_field(doc, "cutoff", d.cutoff)};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ViscousRun {
    Trajectory trajectory;
    GridSpec extended;
};

ViscousRun run_viscous_scenario(const ScenarioConfig& config, double epsilon, const CellField& initial) {
    const double radius = preset_support_radius(config.preset);
    const FluxModel model(radius);
    ViscousConfig vc;
    vc.epsilon = epsilon;
    vc.grid = extended_grid(config.grid(), radius);
    vc.cfl = config.cfl;
    const ViscousSolver solver(vc, model);
    RunOptions options;
    options.t_end = config.t_end;
    options.cfl = config.cfl;
    options.snapshot_times = config.snapshots;
    return {run_viscous(solver, extend(initial, vc.grid), options), vc.grid};
}

// Half-line view of an extended snapshot. Mass that left [0, x_max] through
// x = 0 (including through the far left end) counts as condensate; mass that
// left through x_max counts as negative right inflow, so the balance closes.
Snapshot half_line_snapshot(const Snapshot& ext, const GridSpec& half_line, double initial_number) {
    Snapshot out;
    out.t = ext.t;
    out.field = restrict(ext.field, half_line);
    double left_mass = 0.0;
    double right_mass = 0.0;
    for (std::size_t i = 0; i < ext.field.size(); ++i) {
        const double x = ext.field.grid.center(i);
        if (x < half_line.x_min) left_mass += ext.field[i];
        if (x > half_line.x_max) right_mass += ext.field[i];
    }
    const double dx = ext.field.dx();
    out.ledger.initial_number = initial_number;
    out.ledger.current_number = photon_number(out.field);
    out.ledger.condensate_mass = ext.ledger.condensate_mass + dx * left_mass;
    out.ledger.right_flux_accum = ext.ledger.right_flux_accum - dx * right_mass;
    return out;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"equilibrium", "scaled_equilibrium", "box", "bump",
                                                "bose_einstein"};
    return names;
}

ScenarioConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
    ScenarioConfig cfg;
    cfg.preset = parse_preset(doc);

    const auto& allowed = preset_keys(preset_name(cfg.preset));
    for (const auto& [key, value] : doc.items()) {
        if (common_keys().count(key) == 0 && std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(key, "unknown field for preset '" + preset_name(cfg.preset) + "'");
        }
    }

    cfg.x_max = number_field(doc, "x_max", cfg.x_max);
    if (!(cfg.x_max > 0.0)) throw ConfigError("x_max", "must be positive");
    if (doc.contains("cells")) {
        const auto& v = doc.at("cells");
        if (!v.is_number_integer()) throw ConfigError("cells", "expected an integer");
        const auto cells = v.get<long long>();
        if (cells < 8) throw ConfigError("cells", "must be at least 8");
        cfg.cells = static_cast<std::size_t>(cells);
    }
    cfg.cfl = number_field(doc, "cfl", cfg.cfl);
    if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) throw ConfigError("cfl", "must lie in (0, 1)");
    cfg.t_end = number_field(doc, "t_end", cfg.t_end);
    if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end", "must be >= 0");

    if (doc.contains("snapshots")) {
        const auto& arr = doc.at("snapshots");
        if (!arr.is_array()) throw ConfigError("snapshots", "expected an array of times");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "snapshots[" + std::to_string(i) + "]";
            if (!arr[i].is_number()) throw ConfigError(path, "expected a number");
            const double t = arr[i].get<double>();
            if (!(t >= 0.0 && t <= cfg.t_end)) throw ConfigError(path, "must lie in [0, t_end]");
            if (!cfg.snapshots.empty() && t < cfg.snapshots.back()) {
                throw ConfigError(path, "snapshot instants must be sorted");
            }
            cfg.snapshots.push_back(t);
        }
    }
    if (doc.contains("snapshot_interval")) {
        const double step = number_field(doc, "snapshot_interval", 0.0);
        if (!(step > 0.0)) throw ConfigError("snapshot_interval", "must be positive");
        for (long k = 1;; ++k) {
            const double t = static_cast<double>(k) * step;
            if (t > cfg.t_end * (1.0 + 1e-12)) break;
            cfg.snapshots.push_back(std::min(t, cfg.t_end));
        }
        std::sort(cfg.snapshots.begin(), cfg.snapshots.end());
    }

    if (doc.contains("epsilon")) {
        const double eps = number_field(doc, "epsilon", 0.0);
        if (!(eps > 0.0)) throw ConfigError("epsilon", "must be positive");
        cfg.epsilon = eps;
    }
    cfg.output_dir = string_field(doc, "output_dir", cfg.output_dir.string());
    cfg.snapshots_file = string_field(doc, "snapshots_file", cfg.snapshots_file);
    cfg.series_file = string_field(doc, "series_file", cfg.series_file);
    if (doc.contains("seed")) {
        const auto& v = doc.at("seed");
        if (!v.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
    }

    try {
        (void)sample_initial(cfg.preset, cfg.grid());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("preset", e.what());
    }
    return cfg;
}

ScenarioConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError(std::string(assignment), "override must have the form key=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value = json::parse(raw, nullptr, false);
    doc[key] = value.is_discarded() ? json(raw) : value;
}

ScenarioResult simulate(const ScenarioConfig& config) {
    const GridSpec grid = config.grid();
    const CellField initial = sample_initial(config.preset, grid);
    ScenarioResult result;
    if (!config.epsilon) {
        const GodunovSolver solver(grid);
        RunOptions options;
        options.t_end = config.t_end;
        options.cfl = config.cfl;
        options.snapshot_times = config.snapshots;
        Trajectory traj = run(solver, initial, options);
        result.snapshots = std::move(traj.snapshots);
        result.ledger = traj.ledger;
        result.steps = traj.step_count;
    } else {
        const ViscousRun vr = run_viscous_scenario(config, *config.epsilon, initial);
        const double n0 = photon_number(initial);
        for (const auto& snap : vr.trajectory.snapshots) {
            result.snapshots.push_back(half_line_snapshot(snap, grid, n0));
        }
        result.ledger = result.snapshots.back().ledger;
        result.steps = vr.trajectory.step_count;
    }
    result.series.reserve(result.snapshots.size());
    for (const auto& snap : result.snapshots) result.series.push_back(make_record(snap));
    return result;
}

void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots) {
    out << "t,x,n\n";
    for (const auto& snap : snapshots) {
        const auto& f = snap.field;
        const std::string t = format_double(snap.t);
        for (std::size_t i = 0; i < f.size(); ++i) {
            out << t << ',' << format_double(f.grid.center(i)) << ',' << format_double(f[i]) << '\n';
        }
    }
}

void write_series_csv(std::ostream& out, const std::vector<TimeSeriesRecord>& series) {
    out << "t,N,condensate_mass,tv,min_slope,alpha_fit,l1_to_fit,lower_bound\n";
    for (const auto& r : series) {
        out << format_double(r.t) << ',' << format_double(r.photon_number) << ','
            << format_double(r.condensate_mass) << ',' << format_double(r.total_variation) << ','
            << format_double(r.min_forward_slope) << ',' << format_double(r.alpha_fit) << ','
            << format_double(r.l1_to_alpha_fit) << ',' << format_double(r.lower_bound) << '\n';
    }
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    ScenarioResult result = simulate(config);
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + config.output_dir.string() + ": " + ec.message());

    auto write = [&](const std::string& name, auto&& writer) {
        const auto path = config.output_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        writer(out);
        if (!out) throw std::runtime_error("write to " + path.string() + " failed");
    };
    write(config.snapshots_file, [&](std::ostream& o) { write_snapshots_csv(o, result.snapshots); });
    write(config.series_file, [&](std::ostream& o) { write_series_csv(o, result.series); });
    return result;
}

std::vector<ViscositySweepRow> sweep_viscosity(const ScenarioConfig& config,
                                               const std::vector<double>& epsilons, unsigned jobs) {
    for (double eps : epsilons) {
        if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps", "every epsilon must be positive");
    }
    const GridSpec grid = config.grid();
    const CellField initial = sample_initial(config.preset, grid);
    RunOptions options;
    options.t_end = config.t_end;
    options.cfl = config.cfl;
    const CellField reference = run(GodunovSolver(grid), initial, options).snapshots.back().field;
    const double radius = preset_support_radius(config.preset);

    std::vector<ViscositySweepRow> rows(epsilons.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < epsilons.size(); i = next++) {
            ScenarioConfig single = config;
            single.snapshots.clear();
            const ViscousRun vr = run_viscous_scenario(single, epsilons[i], initial);
            const auto& final_state = vr.trajectory.snapshots.back().field;
            rows[i] = {epsilons[i], l1_distance(restrict(final_state, grid), reference),
                       mass_right_of(final_state, radius + 0.5)};
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(epsilons.size())));
    std::vector<std::future<void>> pool;
    for (unsigned w = 1; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool) f.get();
    return rows;
}

}  // namespace kompaneets
