#pragma once

#include <algorithm>
#include <concepts>

#include "kompaneets/godunov.hpp"

namespace kompaneets::detail {

template <class Scheme>
concept ExplicitScheme = requires(const Scheme& s, CellField& state, double x) {
    { s.stable_dt(state, x, x) } -> std::convertible_to<double>;
    { s.advance(state, x) } -> std::same_as<StepRecord>;
};

/// Shared explicit time loop: steps with the scheme's stable dt, lands exactly
/// on every output instant, books the ledger after each step.
template <ExplicitScheme Scheme>
Trajectory run_scheme(const Scheme& scheme, const CellField& initial, const RunOptions& options) {
    if (!(options.cfl > 0.0 && options.cfl < 1.0)) throw std::invalid_argument("cfl must lie in (0, 1)");
    const auto instants = normalize_snapshot_times(options.snapshot_times, options.t_end);

    Trajectory traj;
    CellField state = initial;
    CellField before;
    double mass = 0.0;
    for (double v : state.values) mass += v;
    traj.ledger = ConservationLedger::start(state.dx() * mass);
    traj.snapshots.push_back({0.0, state, traj.ledger});

    double t = 0.0;
    for (std::size_t next = 1; next < instants.size(); ++next) {
        const double target = instants[next];
        while (true) {
            const double remaining = target - t;
            if (remaining <= 1e-14 * std::max(1.0, target)) break;
            const double dt = scheme.stable_dt(state, options.cfl, remaining);
            const bool hits = dt >= remaining;
            if (options.on_step) before = state;
            StepRecord record;
            try {
                record = scheme.advance(state, dt);
            } catch (const StepError& e) {
                throw RunAborted(e.what(), traj.snapshots.back());
            }
            const double t_before = t;
            t = hits ? target : t + dt;
            traj.ledger = ledger_update(traj.ledger, record, state);
            ++traj.step_count;
            if (options.record_steps) traj.steps.push_back(record);
            if (options.on_step) options.on_step(StepView{t_before, before, state, record});
        }
        t = target;
        traj.snapshots.push_back({t, state, traj.ledger});
    }
    return traj;
}

}  // namespace kompaneets::detail
