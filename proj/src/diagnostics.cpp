#include "kompaneets/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kompaneets/model.hpp"

namespace kompaneets {

namespace {

void require_same_grid(const CellField& a, const CellField& b) {
    if (a.grid != b.grid || a.size() != b.size()) throw std::invalid_argument("fields live on different grids");
}

double bump(double s) noexcept {
    if (!(std::abs(s) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

double bump_slope(double s) noexcept {
    if (!(std::abs(s) < 1.0)) return 0.0;
    const double q = 1.0 - s * s;
    return bump(s) * (-2.0 * s / (q * q));
}

double sign(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double fit_distance(const CellField& field, double alpha) {
    const auto& grid = field.grid;
    const double dx = grid.dx();
    double sum = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double eq = equilibrium_integral(alpha, grid.interface(i), grid.interface(i + 1)) / dx;
        sum += std::abs(field[i] - eq);
    }
    return dx * sum;
}

}  // namespace

double photon_number(const CellField& field) noexcept {
    double sum = 0.0;
    for (double v : field.values) sum += v;
    return field.dx() * sum;
}

double l1_distance(const CellField& a, const CellField& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return a.dx() * sum;
}

double total_variation(const CellField& field) noexcept {
    const auto& n = field.values;
    if (n.empty()) return 0.0;
    double tv = std::abs(n.front()) + std::abs(n.back());
    for (std::size_t i = 0; i + 1 < n.size(); ++i) tv += std::abs(n[i + 1] - n[i]);
    return tv;
}

double min_forward_slope(const CellField& field) {
    const auto& n = field.values;
    if (n.size() < 2) throw std::invalid_argument("slope needs at least two cells");
    double slope = n[1] - n[0];
    for (std::size_t i = 1; i + 1 < n.size(); ++i) slope = std::min(slope, n[i + 1] - n[i]);
    return slope / field.dx();
}

CellField equilibrium_field(double alpha, const GridSpec& grid) {
    CellField field(grid);
    const double dx = grid.dx();
    for (std::size_t i = 0; i < grid.cells; ++i) {
        field[i] = equilibrium_integral(alpha, grid.interface(i), grid.interface(i + 1)) / dx;
    }
    return field;
}

AlphaFit best_fit_alpha(const CellField& field) {
    constexpr int kScanSteps = 2000;
    constexpr double kScanStep = 2.0 / kScanSteps;
    AlphaFit best{0.0, fit_distance(field, 0.0)};
    for (int k = 1; k <= kScanSteps; ++k) {
        const double alpha = k * kScanStep;
        const double d = fit_distance(field, alpha);
        if (d < best.distance) best = {alpha, d};
    }

    // golden section on the bracket around the scan minimum
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(0.0, best.alpha - kScanStep);
    double hi = std::min(2.0, best.alpha + kScanStep);
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = fit_distance(field, x1);
    double f2 = fit_distance(field, x2);
    while (hi - lo > 1e-6) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = fit_distance(field, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = fit_distance(field, x2);
        }
    }
    const double refined = 0.5 * (lo + hi);
    const double refined_distance = fit_distance(field, refined);
    if (refined_distance < best.distance) best = {refined, refined_distance};
    return best;
}

double lower_bound_functional(const CellField& field) {
    const auto& grid = field.grid;
    double sum = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double x = grid.center(i);
        if (x > 0.0 && x < 2.0) sum += std::min(field[i], FluxModel::g(x));
    }
    return grid.dx() * sum;
}

namespace {

template <class Reduce>
void kruzkov_cells(const CellField& before, const CellField& after, double dt, double k, Reduce&& reduce) {
    require_same_grid(before, after);
    if (!(dt > 0.0)) throw std::invalid_argument("kruzkov residual needs dt > 0");
    const auto& grid = before.grid;
    const std::size_t cells = before.size();
    const double dx = grid.dx();
    auto entropy_flux = [&](std::size_t iface) {
        const double left = before[iface - 1];
        const double right = before[iface];
        const double g = FluxModel::g(grid.interface(iface));
        return godunov_flux(std::max(left, k), std::max(right, k), g) -
               godunov_flux(std::min(left, k), std::min(right, k), g);
    };
    for (std::size_t i = 1; i + 1 < cells; ++i) {
        const double g_left = FluxModel::g(grid.interface(i));
        const double g_right = FluxModel::g(grid.interface(i + 1));
        reduce((std::abs(after[i] - k) - std::abs(before[i] - k)) / dt +
               (entropy_flux(i + 1) - entropy_flux(i)) / dx + sign(before[i] - k) * k * (g_right - g_left) / dx);
    }
}

}  // namespace

double kruzkov_residual(const CellField& before, const CellField& after, double dt, double k) {
    double worst = 0.0;
    kruzkov_cells(before, after, dt, k, [&](double r) { worst = std::max(worst, r); });
    return worst;
}

double kruzkov_positive_mass(const CellField& before, const CellField& after, double dt, double k) {
    double mass = 0.0;
    kruzkov_cells(before, after, dt, k, [&](double r) { mass += std::max(r, 0.0); });
    return mass * before.dx();
}

double BumpTestFunction::value(double t, double x) const noexcept {
    return bump((t - t_center) / t_half_width) * bump((x - x_center) / x_half_width);
}

double BumpTestFunction::dt(double t, double x) const noexcept {
    return bump_slope((t - t_center) / t_half_width) / t_half_width * bump((x - x_center) / x_half_width);
}

double BumpTestFunction::dx(double t, double x) const noexcept {
    return bump((t - t_center) / t_half_width) * bump_slope((x - x_center) / x_half_width) / x_half_width;
}

WeakFormAccumulator::WeakFormAccumulator(BumpTestFunction phi, const GridSpec& grid, double t_end)
    : phi_(phi), grid_(grid) {
    if (!(phi.t_half_width > 0.0 && phi.x_half_width > 0.0)) {
        throw std::invalid_argument("test function widths must be positive");
    }
    if (!(phi.t_center - phi.t_half_width > 0.0 && phi.t_center + phi.t_half_width < t_end)) {
        throw std::invalid_argument("test function must be supported inside (0, t_end)");
    }
    if (!(phi.x_center - phi.x_half_width > grid.x_min && phi.x_center + phi.x_half_width < grid.x_max)) {
        throw std::invalid_argument("test function must be supported inside (x_min, x_max)");
    }
}

double WeakFormAccumulator::integrand(double t, const CellField& field) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double x = grid_.center(i);
        const double n = field[i];
        sum += n * phi_.dt(t, x) + (FluxModel::g(x) * n - n * n) * phi_.dx(t, x);
    }
    return grid_.dx() * sum;
}

void WeakFormAccumulator::add_step(double t_before, const CellField& before, const CellField& after,
                                   double dt) {
    if (before.grid != grid_ || after.grid != grid_) throw std::invalid_argument("field grid mismatch");
    sum_ += 0.5 * dt * (integrand(t_before, before) + integrand(t_before + dt, after));
}

double WeakFormAccumulator::residual() const noexcept { return std::abs(sum_); }

double weak_form_residual(const GodunovSolver& solver, const CellField& initial, double t_end,
                          const BumpTestFunction& phi, double cfl) {
    WeakFormAccumulator acc(phi, solver.grid(), t_end);
    RunOptions options;
    options.t_end = t_end;
    options.cfl = cfl;
    options.on_step = [&](const StepView& v) { acc.add_step(v.t_before, v.before, v.after, v.record.dt); };
    (void)run(solver, initial, options);
    return acc.residual();
}

PairReport check_monotone_pair(const GodunovSolver& solver, const CellField& lower, const CellField& upper,
                               double t_end, double cfl) {
    require_same_grid(lower, upper);
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] > upper[i]) throw std::invalid_argument("initial data are not ordered");
    }
    PairReport report;
    (void)run_lockstep(solver, {lower, upper}, t_end, cfl,
                       [&](double, std::span<const CellField>, std::span<const CellField> after) {
                           const auto& a = after[0];
                           const auto& b = after[1];
                           for (std::size_t i = 0; i < a.size(); ++i) {
                               const double excess = a[i] - b[i];
                               report.worst = std::max(report.worst, excess);
                               if (excess > kPairTolerance && report.holds) {
                                   report.holds = false;
                                   report.first_violation_step = report.steps;
                                   report.first_violation_cell = i;
                               }
                           }
                           ++report.steps;
                       });
    return report;
}

PairReport check_contraction(const GodunovSolver& solver, const CellField& a, const CellField& b,
                             double t_end, double cfl) {
    require_same_grid(a, b);
    PairReport report;
    double previous = l1_distance(a, b);
    (void)run_lockstep(solver, {a, b}, t_end, cfl,
                       [&](double, std::span<const CellField>, std::span<const CellField> after) {
                           const double current = l1_distance(after[0], after[1]);
                           const double growth = current - previous;
                           report.worst = std::max(report.worst, growth);
                           if (growth > kPairTolerance && report.holds) {
                               report.holds = false;
                               report.first_violation_step = report.steps;
                           }
                           previous = current;
                           ++report.steps;
                       });
    return report;
}

TimeSeriesRecord make_record(const Snapshot& snapshot) {
    const auto& field = snapshot.field;
    const AlphaFit fit = best_fit_alpha(field);
    TimeSeriesRecord rec;
    rec.t = snapshot.t;
    rec.photon_number = photon_number(field);
    rec.condensate_mass = snapshot.ledger.condensate_mass;
    rec.total_variation = total_variation(field);
    rec.min_forward_slope = min_forward_slope(field);
    rec.alpha_fit = fit.alpha;
    rec.l1_to_alpha_fit = fit.distance;
    rec.lower_bound = lower_bound_functional(field);
    return rec;
}

std::vector<TimeSeriesRecord> time_series(const Trajectory& trajectory) {
    std::vector<TimeSeriesRecord> out;
    out.reserve(trajectory.snapshots.size());
    for (const auto& snap : trajectory.snapshots) out.push_back(make_record(snap));
    return out;
}

}  // namespace kompaneets
