#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "kompaneets/diagnostics.hpp"
#include "kompaneets/godunov.hpp"
#include "kompaneets/initial_data.hpp"
#include "oracles.hpp"

using namespace kompaneets;

namespace {

CellField random_state(const GridSpec& grid, std::mt19937& rng, double x_cut, double height) {
    std::uniform_real_distribution<double> u(0.0, height);
    CellField f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = grid.center(i) < x_cut ? u(rng) : 0.0;
    return f;
}

double cell_sum(const CellField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s;
}

}  // namespace

TEST_CASE("numerical flux examples") {
    CHECK(godunov_flux(0.0, 0.0, 0.7) == 0.0);
    CHECK(godunov_flux(1.0, 0.0, 1.0) == doctest::Approx(0.25));
    CHECK(godunov_flux(0.0, 1.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("numerical flux matches the brute-force Riemann extremum") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> n(0.0, 3.0);
    std::uniform_real_distribution<double> g(-8.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const double left = n(rng);
        const double right = n(rng);
        const double coeff = g(rng);
        const double expected = left <= right
                                    ? oracle::sampled_extremum(left, right, coeff, false, 200000)
                                    : oracle::sampled_extremum(right, left, coeff, true, 200000);
        CAPTURE(left);
        CAPTURE(right);
        CAPTURE(coeff);
        CHECK(godunov_flux(left, right, coeff) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("numerical flux is monotone in its arguments") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> n(0.0, 3.0);
    std::uniform_real_distribution<double> g(-3.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = n(rng), b = n(rng), c = g(rng), d = std::abs(n(rng)) * 0.1;
        CHECK(godunov_flux(a + d, b, c) >= godunov_flux(a, b, c) - 1e-15);
        CHECK(godunov_flux(a, b + d, c) <= godunov_flux(a, b, c) + 1e-15);
    }
}

TEST_CASE("stable time step") {
    const GridSpec grid{0.0, 4.0, 400};
    const GodunovSolver solver(grid);
    CHECK(solver.stable_dt(CellField(grid), 0.45) == doctest::Approx(0.45 * 0.01 / 8.0));
    CHECK(solver.stable_dt(CellField(grid), 0.45, 0.0) == 0.0);
    CHECK(solver.stable_dt(CellField(grid), 0.45, 1e-6) == doctest::Approx(1e-6));

    const GridSpec half{0.0, 2.0, 200};
    const CellField eq = sample_initial(EquilibriumPreset{0.0}, half);
    CHECK(GodunovSolver(half).stable_dt(eq, 0.45) == doctest::Approx(0.45 * half.dx()).epsilon(1e-3));

    CellField bad(grid);
    bad[3] = -1.0;
    CHECK_THROWS_AS((void)solver.stable_dt(bad, 0.45), std::invalid_argument);
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)solver.stable_dt(bad, 0.45), std::invalid_argument);
    bad[3] = -std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)solver.stable_dt(bad, 0.45), std::invalid_argument);
}

TEST_CASE("zero state is a fixed point") {
    const GridSpec grid{0.0, 4.0, 64};
    const GodunovSolver solver(grid);
    const auto [after, record] = solver.step(CellField(grid), 0.01);
    CHECK(std::all_of(after.values.begin(), after.values.end(), [](double v) { return v == 0.0; }));
    CHECK(record.left_outflux == 0.0);
    CHECK(record.right_influx == 0.0);
}

TEST_CASE("one step from a boundary spike, computed by hand") {
    const GridSpec grid{0.0, 0.8, 8};
    const GodunovSolver solver(grid);
    CellField state(grid);
    state[0] = 0.5;
    const double dt = 0.01;
    const auto [after, record] = solver.step(state, dt);

    const double g1 = 0.1 * (2.0 - 0.1);                 // g at the first interior interface
    const double sonic = g1 / 2.0;                        // transonic fan: flux at n = g/2
    const double f1 = g1 * sonic - sonic * sonic;
    const double f0 = -0.25;                              // boundary flux -n_0^2
    CHECK(record.left_outflux == doctest::Approx(f0));
    CHECK(after[0] == doctest::Approx(0.5 - dt / 0.1 * (f1 - f0)));
    CHECK(after[1] == doctest::Approx(dt / 0.1 * f1));
    for (std::size_t i = 2; i < 8; ++i) CHECK(after[i] == 0.0);

    const ConservationLedger ledger = ledger_update(ConservationLedger::start(photon_number(state)), record, after);
    CHECK(ledger.condensate_mass == doctest::Approx(dt * 0.25));
    CHECK(std::abs(ledger.residual()) <= 1e-16);
}

TEST_CASE("conservation, positivity and boundary sign on random states") {
    const GridSpec grid{0.0, 4.0, 200};
    const GodunovSolver solver(grid);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const CellField state = random_state(grid, rng, 3.5, 3.0);
        const double dt = solver.stable_dt(state);
        const auto [after, record] = solver.step(state, dt);
        const double change = grid.dx() * (cell_sum(after) - cell_sum(state));
        CHECK(change == doctest::Approx(dt * (record.left_outflux + record.right_influx)).epsilon(1e-12));
        CHECK(record.left_outflux <= 0.0);
        CHECK(record.left_outflux == doctest::Approx(-state[0] * state[0]));
        CHECK(*std::min_element(after.values.begin(), after.values.end()) >= 0.0);
    }
}

TEST_CASE("one step preserves order and contracts L1") {
    const GridSpec grid{0.0, 4.0, 200};
    const GodunovSolver solver(grid);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const CellField lower = random_state(grid, rng, 3.0, 2.0);
        CellField upper = lower;
        for (auto& v : upper.values) v += bump(rng);
        const CellField other = random_state(grid, rng, 3.0, 2.0);
        const double dt = std::min({solver.stable_dt(lower), solver.stable_dt(upper), solver.stable_dt(other)});
        const CellField lo = solver.step(lower, dt).first;
        const CellField hi = solver.step(upper, dt).first;
        const CellField ot = solver.step(other, dt).first;
        for (std::size_t i = 0; i < grid.cells; ++i) CHECK(lo[i] <= hi[i] + 1e-12);
        CHECK(l1_distance(lo, ot) <= l1_distance(lower, other) + 1e-12);
    }
}

TEST_CASE("data vanishing right of x = 2 stays zero there") {
    const GridSpec grid{0.0, 4.0, 200};
    const GodunovSolver solver(grid);
    std::mt19937 rng(9);
    CellField state = random_state(grid, rng, 2.0, 2.0);
    for (int k = 0; k < 500; ++k) solver.advance(state, solver.stable_dt(state));
    for (std::size_t i = 0; i < grid.cells; ++i) {
        if (grid.center(i) > 2.0) CHECK(state[i] == 0.0);
    }
}

TEST_CASE("maximal equilibrium is nearly stationary") {
    for (std::size_t cells : {200u, 400u}) {
        const GridSpec grid{0.0, 4.0, cells};
        const GodunovSolver solver(grid);
        const CellField eq = sample_initial(EquilibriumPreset{0.0}, grid);
        const double dt = solver.stable_dt(eq);
        const auto after = solver.step(eq, dt).first;
        CHECK(l1_distance(after, eq) <= 10.0 * grid.dx() * dt);
    }
}

TEST_CASE("post-step checks report the offending cell") {
    std::vector<double> values{0.0, 1.0, -0.5, 0.0};
    try {
        check_step_result(values, 0.1);
        FAIL("expected StepError");
    } catch (const StepError& e) {
        CHECK(e.cell() == 2);
        CHECK(e.value() == -0.5);
    }
    values[2] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(check_step_result(values, 0.1), StepError);
    values[2] = -1e-14;
    CHECK_NOTHROW(check_step_result(values, 0.1));
}

TEST_CASE("a step far beyond the CFL limit is rejected") {
    const GridSpec grid{0.0, 4.0, 100};
    const GodunovSolver solver(grid);
    const CellField box = sample_initial(BoxPreset{0.5, 1.5, 2.0}, grid);
    CHECK_THROWS_AS((void)solver.step(box, 50.0 * solver.stable_dt(box)), StepError);
}

TEST_CASE("snapshot times are normalised") {
    CHECK(normalize_snapshot_times({0.5, 0.25, 0.5}, 1.0) == std::vector<double>{0.0, 0.25, 0.5, 1.0});
    CHECK(normalize_snapshot_times({}, 0.0) == std::vector<double>{0.0});
    CHECK_THROWS_AS((void)normalize_snapshot_times({2.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)normalize_snapshot_times({-0.1}, 1.0), std::invalid_argument);
}

TEST_CASE("run hits snapshot times exactly and closes the ledger") {
    const GridSpec grid{0.0, 4.0, 400};
    const GodunovSolver solver(grid);
    const CellField init = sample_initial(ScaledEquilibriumPreset{3.0, 0.0}, grid);

    RunOptions zero;
    zero.t_end = 0.0;
    const Trajectory still = run(solver, init, zero);
    REQUIRE(still.snapshots.size() == 1);
    CHECK(still.snapshots[0].t == 0.0);
    CHECK(still.step_count == 0);

    RunOptions options;
    options.t_end = 2.0;
    options.snapshot_times = {0.1, 0.7, 1.3};
    options.record_steps = true;
    const Trajectory traj = run(solver, init, options);
    REQUIRE(traj.snapshots.size() == 5);
    const double expected[] = {0.0, 0.1, 0.7, 1.3, 2.0};
    for (std::size_t m = 0; m < 5; ++m) CHECK(traj.snapshots[m].t == expected[m]);
    CHECK(traj.steps.size() == traj.step_count);
    CHECK(traj.ledger.relative_residual() <= 1e-12);
    CHECK(traj.ledger.condensate_mass > 0.0);

    double condensate = 0.0;
    for (const auto& s : traj.steps) condensate += s.dt * -s.left_outflux;
    CHECK(condensate == doctest::Approx(traj.ledger.condensate_mass).epsilon(1e-13));
    for (std::size_t m = 1; m < traj.snapshots.size(); ++m) {
        CHECK(traj.snapshots[m].ledger.condensate_mass >= traj.snapshots[m - 1].ledger.condensate_mass);
        CHECK(photon_number(traj.snapshots[m].field) <= photon_number(traj.snapshots[m - 1].field) + 1e-12);
    }
}

TEST_CASE("run rejects unphysical initial data") {
    const GridSpec grid{0.0, 4.0, 64};
    CellField init(grid);
    init[5] = std::numeric_limits<double>::quiet_NaN();
    RunOptions options;
    options.t_end = 1.0;
    CHECK_THROWS_AS((void)run(GodunovSolver(grid), init, options), std::invalid_argument);
}

TEST_CASE("maximal equilibrium drifts by O(dx) over T = 10") {
    const GridSpec grid{0.0, 4.0, 800};
    const CellField init = sample_initial(EquilibriumPreset{0.0}, grid);
    RunOptions options;
    options.t_end = 10.0;
    const Trajectory traj = run(GodunovSolver(grid), init, options);
    CHECK(l1_distance(traj.snapshots.back().field, init) <= 10.0 * grid.dx());
}

TEST_CASE("lockstep runs share one step schedule") {
    const GridSpec grid{0.0, 4.0, 200};
    const GodunovSolver solver(grid);
    std::vector<CellField> states{sample_initial(BoxPreset{0.5, 1.5, 1.0}, grid),
                                  sample_initial(BoxPreset{0.5, 1.5, 2.0}, grid)};
    std::size_t steps = 0;
    double t_last = 0.0;
    const auto finals = run_lockstep(solver, states, 1.0, kDefaultCfl,
                                     [&](double t, std::span<const CellField> before, std::span<const CellField> after) {
                                         CHECK(before.size() == 2);
                                         CHECK(after.size() == 2);
                                         CHECK(t >= t_last);
                                         t_last = t;
                                         ++steps;
                                     });
    CHECK(steps > 0);
    REQUIRE(finals.size() == 2);
    for (std::size_t i = 0; i < grid.cells; ++i) CHECK(finals[0][i] <= finals[1][i] + 1e-12);
}
