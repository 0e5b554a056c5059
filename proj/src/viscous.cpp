#include "kompaneets/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kompaneets/time_loop.hpp"

namespace kompaneets {

namespace {

// Index of the interface of `grid` at position x, or -1 if x is not an interface.
long interface_index(const GridSpec& grid, double x) {
    const double pos = (x - grid.x_min) / grid.dx();
    const double rounded = std::round(pos);
    if (std::abs(pos - rounded) > 1e-9) return -1;
    return static_cast<long>(rounded);
}

// Offset of half_line cell 0 inside `extended`; throws if incommensurate.
std::size_t subgrid_offset(const GridSpec& extended, const GridSpec& half_line) {
    if (std::abs(extended.dx() - half_line.dx()) > 1e-12 * half_line.dx()) {
        throw std::invalid_argument("grids have different spacing");
    }
    const long first = interface_index(extended, half_line.x_min);
    const long last = interface_index(extended, half_line.x_max);
    if (first < 0 || last < 0 || last > static_cast<long>(extended.cells) ||
        static_cast<std::size_t>(last - first) != half_line.cells) {
        throw std::invalid_argument("half-line grid is not a sub-grid of the extended grid");
    }
    return static_cast<std::size_t>(first);
}

}  // namespace

void ViscousConfig::validate(double support_radius) const {
    grid.validate();
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("cfl must lie in (0, 1)");
    if (!(grid.x_min < -1.0 && grid.x_max > 2.0 * support_radius)) {
        throw std::invalid_argument("extended grid must cover [-1, 2R] with margin");
    }
}

GridSpec extended_grid(const GridSpec& half_line, double support_radius, double margin) {
    half_line.validate();
    const double dx = half_line.dx();
    if (!(margin > 1.0)) throw std::invalid_argument("extended grid margin must exceed 1");
    const auto left_cells = static_cast<std::size_t>(std::ceil(margin / dx - 1e-9));
    const auto right_cells = static_cast<std::size_t>(
        std::ceil((std::max(2.0 * support_radius + margin, half_line.x_max) - half_line.x_min) / dx - 1e-9));
    GridSpec grid;
    grid.cells = left_cells + right_cells;
    grid.x_min = half_line.x_min - static_cast<double>(left_cells) * dx;
    grid.x_max = half_line.x_min + static_cast<double>(right_cells) * dx;
    return grid;
}

ViscousSolver::ViscousSolver(ViscousConfig config, const FluxModel& model) : config_(config) {
    config_.validate(model.support_radius());
    const auto& grid = config_.grid;
    iface_g_.resize(grid.cells + 1);
    center_g_.resize(grid.cells);
    for (std::size_t i = 0; i <= grid.cells; ++i) iface_g_[i] = model.extended_g(grid.interface(i));
    for (std::size_t i = 0; i < grid.cells; ++i) center_g_[i] = model.extended_g(grid.center(i));
}

double ViscousSolver::max_wave_speed(const CellField& state) const {
    const auto& n = state.values;
    const std::size_t cells = n.size();
    double speed = kMinWaveSpeed;
    for (std::size_t i = 0; i < cells; ++i) {
        speed = std::max(speed, std::abs(center_g_[i] - 2.0 * n[i]));
        speed = std::max(speed, std::abs(iface_g_[i] - 2.0 * n[i]));
        speed = std::max(speed, std::abs(iface_g_[i + 1] - 2.0 * n[i]));
    }
    speed = std::max(speed, std::abs(iface_g_[0]));
    return std::max(speed, std::abs(iface_g_[cells]));
}

double ViscousSolver::stable_dt(const CellField& state, double cfl, double remaining) const {
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("cfl must lie in (0, 1)");
    if (state.grid != config_.grid) throw std::invalid_argument("state grid does not match solver grid");
    require_physical_state(state.values);
    if (!(remaining > 0.0)) return 0.0;
    const double dx = config_.grid.dx();
    const double dt = cfl * std::min(dx / max_wave_speed(state), dx * dx / (2.0 * config_.epsilon));
    return std::min(dt, remaining);
}

StepRecord ViscousSolver::advance(CellField& state, double dt) const {
    if (state.grid != config_.grid) throw std::invalid_argument("state grid does not match solver grid");
    auto& n = state.values;
    const std::size_t cells = n.size();
    const double dx = config_.grid.dx();
    const double lambda = dt / dx;
    const double diffusivity = config_.epsilon / dx;

    // total flux through interface: Godunov part minus ε n_x
    double flux_left = godunov_flux(0.0, n[0], iface_g_[0]) - diffusivity * (n[0] - 0.0);
    StepRecord record{dt, flux_left, 0.0};
    for (std::size_t i = 0; i < cells; ++i) {
        const double right_state = i + 1 < cells ? n[i + 1] : 0.0;
        const double flux_right =
            godunov_flux(n[i], right_state, iface_g_[i + 1]) - diffusivity * (right_state - n[i]);
        n[i] -= lambda * (flux_right - flux_left);
        flux_left = flux_right;
    }
    record.right_influx = -flux_left;
    check_step_result(n, dt);
    return record;
}

CellField ViscousSolver::step(const CellField& state, double dt) const {
    CellField next = state;
    advance(next, dt);
    return next;
}

CellField extend(const CellField& half_line, const GridSpec& extended) {
    const std::size_t offset = subgrid_offset(extended, half_line.grid);
    CellField out(extended);
    std::copy(half_line.values.begin(), half_line.values.end(),
              out.values.begin() + static_cast<std::ptrdiff_t>(offset));
    return out;
}

CellField restrict(const CellField& extended, const GridSpec& half_line) {
    const std::size_t offset = subgrid_offset(extended.grid, half_line);
    CellField out(half_line);
    std::copy_n(extended.values.begin() + static_cast<std::ptrdiff_t>(offset), half_line.cells,
                out.values.begin());
    return out;
}

double mass_right_of(const CellField& field, double x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (field.grid.center(i) > x) sum += field[i];
    }
    return field.dx() * sum;
}

Trajectory run_viscous(const ViscousSolver& solver, const CellField& initial, const RunOptions& options) {
    return detail::run_scheme(solver, initial, options);
}

}  // namespace kompaneets
