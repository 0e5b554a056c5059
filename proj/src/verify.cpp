#include "kompaneets/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "kompaneets/diagnostics.hpp"
#include "kompaneets/godunov.hpp"
#include "kompaneets/initial_data.hpp"
#include "kompaneets/model.hpp"
#include "kompaneets/scenario.hpp"
#include "kompaneets/viscous.hpp"

namespace kompaneets {

namespace {

// Default fixture: x_max = 4, 2000 cells, cfl 0.45.
constexpr GridSpec kFixture{0.0, 4.0, 2000};
constexpr GridSpec kFineFixture{0.0, 4.0, 4000};

// The pinned slope constant 2 sup|g'| for data supported in [0, 2].
constexpr double kSlopeConstantR2 = 4.0;

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

CheckResult at_most(int criterion, std::string name, double value, double threshold, std::string detail = {}) {
    CheckResult c;
    c.criterion = criterion;
    c.name = std::move(name);
    c.value = value;
    c.threshold = threshold;
    c.relation = "<=";
    c.margin = threshold - value;
    c.passed = value <= threshold;
    c.detail = std::move(detail);
    return c;
}

CheckResult at_least(int criterion, std::string name, double value, double threshold, std::string detail = {}) {
    CheckResult c = at_most(criterion, std::move(name), value, threshold, std::move(detail));
    c.relation = ">=";
    c.margin = value - threshold;
    c.passed = value >= threshold;
    return c;
}

// Passes when `finer` < `coarser`; value is the ratio finer / coarser.
CheckResult decreases(int criterion, std::string name, double coarser, double finer) {
    CheckResult c;
    c.criterion = criterion;
    c.name = std::move(name);
    c.value = coarser > 0.0 ? finer / coarser : std::numeric_limits<double>::infinity();
    c.threshold = 1.0;
    c.relation = "<";
    c.margin = 1.0 - c.value;
    c.passed = finer < coarser;
    c.detail = fmt("dx -> dx/2: %.6e -> %.6e", coarser, finer);
    return c;
}

struct NamedPreset {
    const char* label;
    Preset preset;
};

// ledger
std::vector<CheckResult> ledger_suite() {
    const std::vector<NamedPreset> presets{
        {"equilibrium(0)", EquilibriumPreset{0.0}},
        {"scaled_equilibrium(3,0)", ScaledEquilibriumPreset{3.0, 0.0}},
        {"box(0.2,1.8,1.5)", BoxPreset{0.2, 1.8, 1.5}},
        {"bump(1,0.5,1)", BumpPreset{1.0, 0.5, 1.0}},
        {"bose_einstein(0,4)", BoseEinsteinPreset{0.0, 4.0}},
    };
    const GodunovSolver solver(kFixture);
    double worst_residual = 0.0;
    double worst_rise = -std::numeric_limits<double>::infinity();
    std::string residual_detail;
    std::string rise_detail;
    for (const auto& [label, preset] : presets) {
        RunOptions options;
        options.t_end = 20.0;
        for (int k = 1; k < 80; ++k) options.snapshot_times.push_back(0.25 * k);
        const Trajectory traj = run(solver, sample_initial(preset, kFixture), options);
        double residual = 0.0;
        double rise = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
            residual = std::max(residual, traj.snapshots[m].ledger.relative_residual());
            if (m > 0) {
                rise = std::max(rise, photon_number(traj.snapshots[m].field) -
                                          photon_number(traj.snapshots[m - 1].field));
            }
        }
        worst_residual = std::max(worst_residual, residual);
        worst_rise = std::max(worst_rise, rise);
        residual_detail += fmt("%s %.2e; ", label, residual);
        rise_detail += fmt("%s %.2e; ", label, rise);
    }
    return {at_most(1, "|N(T) + condensate - right inflow - N0| / max(1, N0)", worst_residual, 1e-10,
                    residual_detail),
            at_most(4, "max N(t_{m+1}) - N(t_m)", worst_rise, 1e-12, rise_detail)};
}

// equilibria
std::vector<CheckResult> equilibria_suite() {
    std::vector<CheckResult> out;

    double drift[2] = {0.0, 0.0};
    const GridSpec grids[2] = {kFixture, kFineFixture};
    for (int k = 0; k < 2; ++k) {
        const CellField init = sample_initial(EquilibriumPreset{0.0}, grids[k]);
        RunOptions options;
        options.t_end = 10.0;
        const Trajectory traj = run(GodunovSolver(grids[k]), init, options);
        drift[k] = l1_distance(traj.snapshots.back().field, init);
        out.push_back(at_most(2, fmt("L1 drift of n̂_0 at T=10, dx=%g", grids[k].dx()), drift[k],
                              10.0 * grids[k].dx()));
    }
    out.push_back(at_least(2, "empirical order of the drift under dx halving", std::log2(drift[0] / drift[1]),
                           0.8, fmt("drift %.4e -> %.4e", drift[0], drift[1])));

    // convergence from a box; snapshots every 0.5 feed the lower-bound check
    const GodunovSolver solver(kFixture);
    RunOptions options;
    options.t_end = 300.0;
    for (int k = 1; k < 600; ++k) options.snapshot_times.push_back(0.5 * k);
    const Trajectory traj = run(solver, sample_initial(BoxPreset{0.2, 1.8, 1.5}, kFixture), options);
    const CellField& last = traj.snapshots.back().field;
    const AlphaFit fit = best_fit_alpha(last);
    const double number = photon_number(last);
    const double dx = kFixture.dx();
    out.push_back(at_most(10, "l1_to_alpha_fit at T=300", fit.distance, 10.0 * dx,
                          fmt("alpha_fit = %.6f", fit.alpha)));
    if (number <= 4.0 / 3.0) {
        const double alpha_n = alpha_from_number(number);
        out.push_back(at_most(10, "|alpha_fit - alpha_from_number(N(T))|", std::abs(fit.alpha - alpha_n), 0.02,
                              fmt("alpha_fit %.6f, alpha(N) %.6f, N %.6f", fit.alpha, alpha_n, number)));
    } else {
        CheckResult c = at_most(10, "|alpha_fit - alpha_from_number(N(T))|",
                                std::numeric_limits<double>::infinity(), 0.02);
        c.detail = fmt("N(T) = %.6f exceeds 4/3, no equilibrium carries it", number);
        out.push_back(c);
    }

    double best_lower = 0.0;
    double best_at = 0.0;
    for (const auto& snap : traj.snapshots) {
        const double lb = lower_bound_functional(snap.field);
        if (lb > best_lower) {
            best_lower = lb;
            best_at = snap.t;
        }
    }
    out.push_back(at_least(13, "N[n̂_alpha_fit] - (max_t lower_bound - 10 dx)", equilibrium_number(fit.alpha),
                           best_lower - 10.0 * dx,
                           fmt("max lower bound %.6f at t = %g, alpha_fit %.6f", best_lower, best_at, fit.alpha)));
    return out;
}

// condensate
std::vector<CheckResult> condensate_suite() {
    const GodunovSolver solver(kFixture);
    const CellField init = sample_initial(ScaledEquilibriumPreset{3.0, 0.0}, kFixture);
    double first_time = std::numeric_limits<double>::infinity();
    double condensate = 0.0;
    RunOptions options;
    options.t_end = 200.0;
    options.on_step = [&](const StepView& v) {
        condensate += v.record.dt * -v.record.left_outflux;
        if (condensate >= 1e-3 && std::isinf(first_time)) first_time = v.t_before + v.record.dt;
    };
    const Trajectory traj = run(solver, init, options);
    const double n0 = photon_number(init);
    return {
        at_most(3, "first time condensate >= 1e-3", first_time, 5.0, fmt("N0 = %.6f", n0)),
        at_least(3, "condensate mass at T=200", traj.ledger.condensate_mass, 4.0 - 4.0 / 3.0 - 0.05),
        at_most(3, "N at T=200", traj.ledger.current_number, 4.0 / 3.0 + 0.05),
    };
}

// contraction, comparison
std::vector<CheckResult> contraction_suite() {
    const GodunovSolver solver(kFixture);
    std::vector<CheckResult> out;
    const std::vector<std::pair<NamedPreset, NamedPreset>> pairs{
        {{"box(0.2,1.8,1.5)", BoxPreset{0.2, 1.8, 1.5}}, {"bump(1,0.8,2)", BumpPreset{1.0, 0.8, 2.0}}},
        {{"equilibrium(1)", EquilibriumPreset{1.0}}, {"box(0.5,1.5,2)", BoxPreset{0.5, 1.5, 2.0}}},
    };
    for (const auto& [a, b] : pairs) {
        const PairReport r = check_contraction(solver, sample_initial(a.preset, kFixture),
                                               sample_initial(b.preset, kFixture), 10.0);
        out.push_back(at_most(5, fmt("max per-step growth of L1(%s, %s)", a.label, b.label), r.worst, kPairTolerance,
                              fmt("%zu steps to T=10", r.steps)));
    }
    return out;
}

std::vector<CheckResult> comparison_suite() {
    const GodunovSolver solver(kFixture);
    std::vector<CheckResult> out;
    const std::vector<std::pair<NamedPreset, NamedPreset>> pairs{
        {{"box(0.5,1.5,1)", BoxPreset{0.5, 1.5, 1.0}}, {"box(0.5,1.5,2)", BoxPreset{0.5, 1.5, 2.0}}},
        {{"equilibrium(1)", EquilibriumPreset{1.0}}, {"equilibrium(0)", EquilibriumPreset{0.0}}},
    };
    for (const auto& [lo, hi] : pairs) {
        const PairReport r = check_monotone_pair(solver, sample_initial(lo.preset, kFixture),
                                                 sample_initial(hi.preset, kFixture), 10.0);
        std::string detail = fmt("%zu steps to T=10", r.steps);
        if (r.first_violation_step) {
            detail += fmt(", first violation at step %zu cell %zu", *r.first_violation_step, *r.first_violation_cell);
        }
        out.push_back(at_most(6, fmt("max_i (%s - %s)", lo.label, hi.label), r.worst, kPairTolerance, detail));
    }
    return out;
}

// lipschitz, supersolution
const std::vector<NamedPreset>& bound_presets() {
    static const std::vector<NamedPreset> presets{
        {"box(0.2,1.8,1.5)", BoxPreset{0.2, 1.8, 1.5}},
        {"scaled_equilibrium(3,0)", ScaledEquilibriumPreset{3.0, 0.0}},
    };
    return presets;
}

std::vector<CheckResult> lipschitz_suite() {
    const GodunovSolver solver(kFixture);
    std::vector<CheckResult> out;
    for (const auto& [label, preset] : bound_presets()) {
        double worst = std::numeric_limits<double>::infinity();
        double worst_t = 0.0;
        double worst_slope = 0.0;
        double last_failure = -1.0;
        RunOptions options;
        options.t_end = 50.0;
        options.on_step = [&](const StepView& v) {
            const double t = v.t_before + v.record.dt;
            if (t < 0.1) return;
            const double slope = min_forward_slope(v.after);
            const double margin = slope - (slope_bound(t, kSlopeConstantR2) - 0.1);
            if (margin < 0.0) last_failure = t;
            if (margin < worst) {
                worst = margin;
                worst_t = t;
                worst_slope = slope;
            }
        };
        (void)run(solver, sample_initial(preset, kFixture), options);
        std::string detail = fmt("C' = %g, worst at t = %.4f: slope %.4f vs bound %.4f", kSlopeConstantR2, worst_t,
                                 worst_slope, slope_bound(worst_t, kSlopeConstantR2));
        if (last_failure > 0.0) detail += fmt("; violated up to t = %.4f", last_failure);
        out.push_back(at_least(7, fmt("min_t [min slope - (slope_bound - 0.1)] on %s", label), worst, 0.0, detail));
    }
    return out;
}

std::vector<CheckResult> supersolution_suite() {
    const GodunovSolver solver(kFixture);
    const double dx = kFixture.dx();
    std::vector<CheckResult> out;
    for (const auto& [label, preset] : bound_presets()) {
        const double radius = preset_support_radius(preset);
        double worst = -std::numeric_limits<double>::infinity();
        double worst_t = 0.0;
        double worst_x = 0.0;
        RunOptions options;
        options.t_end = 50.0;
        options.on_step = [&](const StepView& v) {
            const double t = v.t_before + v.record.dt;
            if (t < 0.1) return;
            for (std::size_t i = 0; i < v.after.size(); ++i) {
                const double x = kFixture.center(i);
                if (x > radius) break;
                const double excess = v.after[i] - (supersolution(t, x, radius) + 10.0 * dx);
                if (excess > worst) {
                    worst = excess;
                    worst_t = t;
                    worst_x = x;
                }
            }
        };
        (void)run(solver, sample_initial(preset, kFixture), options);
        out.push_back(at_most(8, fmt("max [n - (supersolution + 10 dx)] on %s", label), worst, 0.0,
                              fmt("R = %g, worst at t = %.4f, x = %.4f", radius, worst_t, worst_x)));
    }
    return out;
}

// support
std::vector<CheckResult> support_suite() {
    const GodunovSolver solver(kFixture);
    const double dx = kFixture.dx();
    constexpr double kRadius = 3.0;
    const CellField init = sample_initial(BoxPreset{1.0, kRadius, 1.0}, kFixture);
    double worst = mass_right_of(init, support_curve(0.0, kRadius) + 2.0 * dx);
    double worst_t = 0.0;
    RunOptions options;
    options.t_end = 50.0;
    options.on_step = [&](const StepView& v) {
        const double t = v.t_before + v.record.dt;
        const double tail = mass_right_of(v.after, support_curve(t, kRadius) + 2.0 * dx);
        if (tail > worst) {
            worst = tail;
            worst_t = t;
        }
    };
    const Trajectory traj = run(solver, init, options);
    return {
        at_most(9, "max_t mass right of s(t) + 2dx, box(1,3,1)", worst, 1e-10,
                fmt("worst at t = %.4f, s(t) = %.4f", worst_t, support_curve(worst_t, kRadius))),
        at_most(9, "mass right of 2 + 2dx at T=50, box(1,3,1)",
                mass_right_of(traj.snapshots.back().field, 2.0 + 2.0 * dx), 1e-6),
    };
}

// viscous
std::vector<CheckResult> viscous_suite() {
    ScenarioConfig config;
    config.preset = BoxPreset{0.2, 1.8, 1.5};
    config.x_max = kFixture.x_max;
    config.cells = kFixture.cells;
    config.t_end = 1.0;
    const std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
    const auto rows = sweep_viscosity(config, eps);
    std::string detail;
    bool strictly = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail += fmt("eps %g: %.4e; ", rows[i].epsilon, rows[i].l1_to_godunov);
        if (i > 0) {
            strictly = strictly && rows[i].l1_to_godunov < rows[i - 1].l1_to_godunov;
            worst_ratio = std::max(worst_ratio, rows[i].l1_to_godunov / rows[i - 1].l1_to_godunov);
        }
    }
    CheckResult mono;
    mono.criterion = 11;
    mono.name = "L1(viscous, Godunov) strictly decreasing over the eps sweep";
    mono.value = worst_ratio;
    mono.threshold = 1.0;
    mono.relation = "<";
    mono.margin = 1.0 - worst_ratio;
    mono.passed = strictly;
    mono.detail = detail;
    return {mono, at_most(11, "L1(viscous, Godunov) at eps = 2.5e-3", rows.back().l1_to_godunov, 0.05)};
}

// entropy
struct EntropyMeasure {
    double kruzkov_max[3] = {0.0, 0.0, 0.0};
    double kruzkov_mass[3] = {0.0, 0.0, 0.0};
    double weak = 0.0;
};

constexpr double kEntropyLevels[3] = {0.25, 0.5, 1.0};

EntropyMeasure entropy_measure(const GridSpec& grid) {
    const GodunovSolver solver(grid);
    const CellField init = sample_initial(BoxPreset{0.5, 1.5, 2.0}, grid);
    const BumpTestFunction phi{0.5, 0.4, 1.0, 0.8};
    constexpr double kEnd = 1.0;
    EntropyMeasure m;
    WeakFormAccumulator weak(phi, grid, kEnd);
    RunOptions options;
    options.t_end = kEnd;
    options.on_step = [&](const StepView& v) {
        const double dt = v.record.dt;
        weak.add_step(v.t_before, v.before, v.after, dt);
        for (int j = 0; j < 3; ++j) {
            m.kruzkov_max[j] = std::max(m.kruzkov_max[j], kruzkov_residual(v.before, v.after, dt, kEntropyLevels[j]));
            m.kruzkov_mass[j] += dt * kruzkov_positive_mass(v.before, v.after, dt, kEntropyLevels[j]);
        }
    };
    (void)run(solver, init, options);
    m.weak = weak.residual();
    return m;
}

std::vector<CheckResult> entropy_suite() {
    const EntropyMeasure coarse = entropy_measure(kFixture);
    const EntropyMeasure fine = entropy_measure(kFineFixture);
    std::vector<CheckResult> out;
    for (int j = 0; j < 3; ++j) {
        CheckResult c = decreases(12, fmt("max positive Kruzkov residual, k = %g", kEntropyLevels[j]),
                                  coarse.kruzkov_max[j], fine.kruzkov_max[j]);
        c.detail += fmt("; space-time mass of the positive part %.3e -> %.3e", coarse.kruzkov_mass[j],
                        fine.kruzkov_mass[j]);
        out.push_back(c);
    }
    out.push_back(decreases(12, "weak-form residual, smooth bump test function", coarse.weak, fine.weak));
    return out;
}

using SuiteFn = std::vector<CheckResult> (*)();

const std::map<std::string, SuiteFn, std::less<>>& registry() {
    static const std::map<std::string, SuiteFn, std::less<>> suites{
        {"ledger", ledger_suite},         {"contraction", contraction_suite},
        {"comparison", comparison_suite}, {"equilibria", equilibria_suite},
        {"condensate", condensate_suite}, {"lipschitz", lipschitz_suite},
        {"supersolution", supersolution_suite}, {"support", support_suite},
        {"viscous", viscous_suite},       {"entropy", entropy_suite},
    };
    return suites;
}

}  // namespace

bool SuiteReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"ledger",     "contraction", "comparison", "equilibria",
                                                "condensate", "lipschitz",   "supersolution", "support",
                                                "viscous",    "entropy"};
    return names;
}

bool is_suite(std::string_view name) { return registry().find(name) != registry().end(); }

SuiteReport run_suite(std::string_view name) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
    const auto start = std::chrono::steady_clock::now();
    SuiteReport report;
    report.suite = std::string(name);
    report.checks = it->second();
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<SuiteReport> run_suites(std::string_view name, unsigned jobs) {
    std::vector<std::string> names;
    if (name == "all") {
        names = suite_names();
    } else {
        if (!is_suite(name)) throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
        names.emplace_back(name);
    }
    std::vector<SuiteReport> reports(names.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < names.size(); i = next++) reports[i] = run_suite(names[i]);
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(names.size())));
    std::vector<std::future<void>> pool;
    for (unsigned w = 1; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool) f.get();
    return reports;
}

nlohmann::json to_json(const std::vector<SuiteReport>& reports) {
    using nlohmann::json;
    json suites = json::array();
    bool all = true;
    for (const auto& r : reports) {
        json checks = json::array();
        for (const auto& c : r.checks) {
            checks.push_back({{"criterion", c.criterion},
                              {"name", c.name},
                              {"passed", c.passed},
                              {"value", c.value},
                              {"relation", c.relation},
                              {"threshold", c.threshold},
                              {"margin", c.margin},
                              {"detail", c.detail}});
        }
        all = all && r.passed();
        suites.push_back({{"suite", r.suite}, {"passed", r.passed()}, {"seconds", r.seconds}, {"checks", checks}});
    }
    return {{"passed", all}, {"suites", suites}};
}

std::string criterion_title(int criterion) {
    static const std::map<int, std::string> titles{
        {1, "loss formula"},
        {2, "equilibria are stationary"},
        {3, "finite-time condensation"},
        {4, "photon number non-increasing"},
        {5, "L1 contraction"},
        {6, "comparison principle"},
        {7, "one-sided Lipschitz bound"},
        {8, "super-solution envelope"},
        {9, "support propagation"},
        {10, "convergence to an equilibrium"},
        {11, "vanishing viscosity"},
        {12, "entropy and weak-form residuals"},
        {13, "equilibrium lower bound"},
    };
    const auto it = titles.find(criterion);
    return it == titles.end() ? "criterion " + std::to_string(criterion) : it->second;
}

}  // namespace kompaneets
