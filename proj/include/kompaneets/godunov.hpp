#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kompaneets/grid.hpp"
#include "kompaneets/ledger.hpp"

namespace kompaneets {

inline constexpr double kDefaultCfl = 0.45;
inline constexpr double kMinWaveSpeed = 1e-12;

/// Godunov flux for f(n) = g n - n^2 (concave in n, sonic point g/2).
[[nodiscard]] inline double godunov_flux(double left, double right, double g) noexcept {
    const double fl = g * left - left * left;
    const double fr = g * right - right * right;
    const double rising = fl < fr ? fl : fr;
    double sonic = 0.5 * g;
    sonic = sonic < right ? right : sonic;
    sonic = sonic > left ? left : sonic;
    const double falling = g * sonic - sonic * sonic;
    return left <= right ? rising : falling;
}

/// Thrown when an update leaves the physical state space (negative or
/// non-finite density), which signals a violated time-step restriction.
class StepError : public std::runtime_error {
public:
    StepError(const std::string& what, std::size_t cell, double value)
        : std::runtime_error(what), cell_(cell), value_(value) {}
    [[nodiscard]] std::size_t cell() const noexcept { return cell_; }
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    std::size_t cell_;
    double value_;
};

/// Largest allowed negative excursion, relative to max(1, max |n|), before a
/// state counts as non-physical.
[[nodiscard]] double negativity_tolerance(std::span<const double> values) noexcept;

/// Throws std::invalid_argument if any value is below -negativity_tolerance.
void require_physical_state(std::span<const double> values);

/// Throws StepError if an updated state is non-finite or non-physical.
void check_step_result(std::span<const double> values, double dt);

/// First-order Godunov finite-volume scheme for n_t + (g(x) n - n^2)_x = 0 on
/// [x_min, x_max]. The coefficient is sampled at interfaces. The left ghost
/// cell copies the first cell (free outflow), the right ghost cell is zero.
class GodunovSolver {
public:
    /// Half-line solver with g(x) = 2x - x^2.
    explicit GodunovSolver(GridSpec grid);

    [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> interface_g() const noexcept { return iface_g_; }

    /// max over cells and interfaces of |g - 2n|, floored at kMinWaveSpeed.
    [[nodiscard]] double max_wave_speed(const CellField& state) const;

    /// cfl * dx / S, capped by `remaining`. Throws std::invalid_argument for a
    /// negative state or cfl outside (0, 1).
    [[nodiscard]] double stable_dt(const CellField& state, double cfl = kDefaultCfl,
                                   double remaining = std::numeric_limits<double>::infinity()) const;

    [[nodiscard]] std::pair<CellField, StepRecord> step(const CellField& state, double dt) const;

    /// Same update as step(), overwriting `state`.
    StepRecord advance(CellField& state, double dt) const;

private:
    GridSpec grid_;
    std::vector<double> iface_g_;
    std::vector<double> center_g_;
};

struct Snapshot {
    double t = 0.0;
    CellField field;
    /// Balance at time t.
    ConservationLedger ledger;
};

struct StepView {
    double t_before;
    const CellField& before;
    const CellField& after;
    const StepRecord& record;
};

using StepObserver = std::function<void(const StepView&)>;

struct RunOptions {
    double t_end = 0.0;
    double cfl = kDefaultCfl;
    /// Output instants in [0, t_end]; 0 and t_end are always added.
    std::vector<double> snapshot_times;
    bool record_steps = false;
    StepObserver on_step;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<StepRecord> steps;
    ConservationLedger ledger;
    std::size_t step_count = 0;
};

/// Raised when a run hits a non-physical state; carries the last snapshot
/// that was still valid.
class RunAborted : public std::runtime_error {
public:
    RunAborted(const std::string& what, Snapshot last_good)
        : std::runtime_error(what), last_good_(std::move(last_good)) {}
    [[nodiscard]] const Snapshot& last_good() const noexcept { return last_good_; }

private:
    Snapshot last_good_;
};

/// Sorted, de-duplicated output instants including 0 and t_end. Throws for
/// instants outside [0, t_end] or a negative t_end.
[[nodiscard]] std::vector<double> normalize_snapshot_times(std::vector<double> times, double t_end);

[[nodiscard]] Trajectory run(const GodunovSolver& solver, const CellField& initial,
                             const RunOptions& options);

using LockstepObserver = std::function<void(double t_before, std::span<const CellField> before,
                                            std::span<const CellField> after)>;

/// Advances several states with a common step schedule (dt is the minimum of
/// the individual stable steps). Returns the states at t_end.
std::vector<CellField> run_lockstep(const GodunovSolver& solver, std::vector<CellField> states,
                                    double t_end, double cfl, const LockstepObserver& observer);

}  // namespace kompaneets
