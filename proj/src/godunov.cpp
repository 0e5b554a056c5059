#include "kompaneets/godunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kompaneets/model.hpp"
#include "kompaneets/time_loop.hpp"

namespace kompaneets {

namespace {

constexpr double kNegativityScale = 1e-12;

void check_cfl(double cfl) {
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("cfl must lie in (0, 1)");
}

}  // namespace

void require_physical_state(std::span<const double> values) {
    const double tol = negativity_tolerance(values);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || !(values[i] >= -tol)) {
            std::ostringstream msg;
            msg << "non-physical state: n[" << i << "] = " << values[i];
            throw std::invalid_argument(msg.str());
        }
    }
}

void check_step_result(std::span<const double> values, double dt) {
    const double tol = negativity_tolerance(values);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v) || v < -tol) {
            std::ostringstream msg;
            msg << "step with dt = " << dt << " broke positivity at cell " << i << " (n = " << v
                << "); time step exceeds the CFL restriction";
            throw StepError(msg.str(), i, v);
        }
    }
}

double negativity_tolerance(std::span<const double> values) noexcept {
    double scale = 1.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    return kNegativityScale * scale;
}

GodunovSolver::GodunovSolver(GridSpec grid) : grid_(grid) {
    grid_.validate();
    iface_g_.resize(grid_.cells + 1);
    center_g_.resize(grid_.cells);
    for (std::size_t i = 0; i <= grid_.cells; ++i) iface_g_[i] = FluxModel::g(grid_.interface(i));
    for (std::size_t i = 0; i < grid_.cells; ++i) center_g_[i] = FluxModel::g(grid_.center(i));
}

double GodunovSolver::max_wave_speed(const CellField& state) const {
    const auto& n = state.values;
    const std::size_t cells = n.size();
    double speed = kMinWaveSpeed;
    for (std::size_t i = 0; i < cells; ++i) {
        const double twice = 2.0 * n[i];
        const double s = std::max({std::abs(center_g_[i] - twice), std::abs(iface_g_[i] - twice),
                                   std::abs(iface_g_[i + 1] - twice)});
        speed = s > speed ? s : speed;
    }
    // right ghost state is zero
    return std::max(speed, std::abs(iface_g_[cells]));
}

double GodunovSolver::stable_dt(const CellField& state, double cfl, double remaining) const {
    check_cfl(cfl);
    if (state.grid != grid_) throw std::invalid_argument("state grid does not match solver grid");
    const auto& n = state.values;
    const std::size_t cells = n.size();
    double lowest = 0.0;
    double highest = 0.0;
    double total = 0.0;
    double speed = std::max(kMinWaveSpeed, std::abs(iface_g_[cells]));
    for (std::size_t i = 0; i < cells; ++i) {
        const double v = n[i];
        lowest = v < lowest ? v : lowest;
        highest = v > highest ? v : highest;
        total += v;
        const double twice = 2.0 * v;
        const double a = std::abs(center_g_[i] - twice);
        const double b = std::abs(iface_g_[i] - twice);
        const double c = std::abs(iface_g_[i + 1] - twice);
        const double s = a > b ? (a > c ? a : c) : (b > c ? b : c);
        speed = s > speed ? s : speed;
    }
    if (!std::isfinite(total) || lowest < -kNegativityScale * std::max(1.0, highest)) {
        require_physical_state(n);
    }
    if (!(remaining > 0.0)) return 0.0;
    return std::min(cfl * grid_.dx() / speed, remaining);
}

StepRecord GodunovSolver::advance(CellField& state, double dt) const {
    if (state.grid != grid_) throw std::invalid_argument("state grid does not match solver grid");
    auto& n = state.values;
    const std::size_t cells = n.size();
    const double lambda = dt / grid_.dx();

    thread_local std::vector<double> flux;
    flux.resize(cells + 1);
    flux[0] = godunov_flux(n[0], n[0], iface_g_[0]);
    for (std::size_t i = 0; i + 1 < cells; ++i) flux[i + 1] = godunov_flux(n[i], n[i + 1], iface_g_[i + 1]);
    flux[cells] = godunov_flux(n[cells - 1], 0.0, iface_g_[cells]);

    StepRecord record{dt, flux[0], -flux[cells]};
    double lowest = 0.0;
    double highest = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double updated = n[i] - lambda * (flux[i + 1] - flux[i]);
        n[i] = updated;
        lowest = updated < lowest ? updated : lowest;
        highest = updated > highest ? updated : highest;
        total += updated;
    }
    // NaN and inf propagate into the total
    if (!std::isfinite(total) ||
        lowest < -kNegativityScale * std::max(1.0, highest)) {
        check_step_result(n, dt);
    }
    return record;
}

std::pair<CellField, StepRecord> GodunovSolver::step(const CellField& state, double dt) const {
    CellField next = state;
    const StepRecord record = advance(next, dt);
    return {std::move(next), record};
}

std::vector<double> normalize_snapshot_times(std::vector<double> times, double t_end) {
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("t_end must be finite and non-negative");
    }
    for (double t : times) {
        if (!(t >= 0.0 && t <= t_end)) {
            throw std::invalid_argument("snapshot instants must lie in [0, t_end]");
        }
    }
    times.push_back(0.0);
    times.push_back(t_end);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

Trajectory run(const GodunovSolver& solver, const CellField& initial, const RunOptions& options) {
    return detail::run_scheme(solver, initial, options);
}

std::vector<CellField> run_lockstep(const GodunovSolver& solver, std::vector<CellField> states,
                                    double t_end, double cfl, const LockstepObserver& observer) {
    check_cfl(cfl);
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
    std::vector<CellField> before;
    double t = 0.0;
    while (t_end - t > 1e-14 * std::max(1.0, t_end)) {
        const double remaining = t_end - t;
        double dt = remaining;
        for (const auto& s : states) dt = std::min(dt, solver.stable_dt(s, cfl, remaining));
        if (observer) before = states;
        for (auto& s : states) solver.advance(s, dt);
        const double t_before = t;
        t = dt >= remaining ? t_end : t + dt;
        if (observer) observer(t_before, before, states);
    }
    return states;
}

}  // namespace kompaneets
