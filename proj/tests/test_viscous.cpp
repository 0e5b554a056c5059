#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "kompaneets/diagnostics.hpp"
#include "kompaneets/initial_data.hpp"
#include "kompaneets/viscous.hpp"

using namespace kompaneets;

namespace {

double cell_sum(const CellField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s;
}

}  // namespace

TEST_CASE("extended grid shares the half-line spacing") {
    const GridSpec half{0.0, 4.0, 400};
    const GridSpec ext = extended_grid(half, 4.0);
    CHECK(ext.dx() == doctest::Approx(half.dx()).epsilon(1e-12));
    CHECK(ext.x_min <= -2.0 + 1e-12);
    CHECK(ext.x_min > -2.0 - half.dx());
    CHECK(ext.x_max >= 10.0 - 1e-12);
    CHECK_NOTHROW(ViscousConfig{1e-2, ext, 0.45}.validate(4.0));
    CHECK_THROWS_AS((void)extended_grid(half, 4.0, 1.0), std::invalid_argument);
}

TEST_CASE("viscous configuration is validated") {
    CHECK_THROWS_AS(ViscousConfig({1e-2, {-0.5, 10.0, 1000}, 0.45}).validate(4.0), std::invalid_argument);
    CHECK_THROWS_AS(ViscousConfig({1e-2, {-2.0, 7.0, 1000}, 0.45}).validate(4.0), std::invalid_argument);
    CHECK_THROWS_AS(ViscousConfig({0.0, {-2.0, 10.0, 1000}, 0.45}).validate(4.0), std::invalid_argument);
    CHECK_THROWS_AS(ViscousConfig({1e-2, {-2.0, 10.0, 1000}, 1.5}).validate(4.0), std::invalid_argument);
}

TEST_CASE("viscous time step") {
    const FluxModel model(2.0);
    const GridSpec grid{-2.0, 6.0, 800};
    const ViscousSolver solver({0.01, grid, 0.45}, model);
    CHECK(solver.stable_dt(CellField(grid)) == doctest::Approx(0.45 * 0.01 * 0.01 / 0.02));

    const ViscousSolver nearly_inviscid({1e-12, grid, 0.45}, model);
    const CellField zero(grid);
    CHECK(nearly_inviscid.stable_dt(zero) ==
          doctest::Approx(0.45 * grid.dx() / nearly_inviscid.max_wave_speed(zero)));

    const ViscousSolver stiff({10.0, grid, 0.45}, model);
    const ViscousSolver stiffer({20.0, grid, 0.45}, model);
    CHECK(stiff.stable_dt(zero) == doctest::Approx(2.0 * stiffer.stable_dt(zero)));
    CHECK(solver.stable_dt(zero, 0.45, 0.0) == 0.0);
}

TEST_CASE("viscous step keeps zero and conserves interior mass") {
    const FluxModel model(4.0);
    const GridSpec grid{-2.0, 10.0, 1200};
    const ViscousSolver solver({0.05, grid, 0.45}, model);
    CHECK(cell_sum(solver.step(CellField(grid), 1e-3)) == 0.0);

    CellField spike(grid);
    const std::size_t far = 1100;  // x ≈ 9, where the extended g is constant
    spike[far] = 1.0;
    CellField after = spike;
    const double dt = solver.stable_dt(spike);
    const StepRecord record = solver.advance(after, dt);
    CHECK(std::abs(grid.dx() * (cell_sum(after) - cell_sum(spike))) <= 1e-12);
    CHECK(record.left_outflux == 0.0);
    CHECK(after[far - 1] > 0.0);
    CHECK(after[far + 1] > 0.0);
    CHECK(after[far] < 1.0);
    CHECK(after[far - 2] == 0.0);
    CHECK(after[far + 2] == 0.0);
}

TEST_CASE("viscous step preserves positivity") {
    const FluxModel model(4.0);
    const GridSpec grid{-2.0, 10.0, 600};
    const ViscousSolver solver({1e-2, grid, 0.45}, model);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        CellField state(grid);
        for (std::size_t i = 100; i < 500; ++i) state[i] = u(rng);
        for (int k = 0; k < 20; ++k) solver.advance(state, solver.stable_dt(state));
        CHECK(*std::min_element(state.values.begin(), state.values.end()) >= 0.0);
    }
}

TEST_CASE("extend and restrict round trip") {
    const GridSpec half{0.0, 4.0, 400};
    const GridSpec ext = extended_grid(half, 4.0);
    const CellField box = sample_initial(BoxPreset{0.5, 1.5, 2.0}, half);
    const CellField wide = extend(box, ext);
    CHECK(photon_number(wide) == doctest::Approx(photon_number(box)).epsilon(1e-14));
    CHECK(restrict(wide, half).values == box.values);
    CHECK(cell_sum(restrict(CellField(ext), half)) == 0.0);
    CHECK_THROWS_AS((void)restrict(wide, GridSpec{0.0, 4.0, 300}), std::invalid_argument);
    CHECK_THROWS_AS((void)restrict(wide, GridSpec{0.0025, 4.0025, 400}), std::invalid_argument);
}

TEST_CASE("mass right of a point") {
    const GridSpec grid{0.0, 4.0, 400};
    const CellField box = sample_initial(BoxPreset{0.5, 1.5, 2.0}, grid);
    CHECK(mass_right_of(box, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mass_right_of(box, 1.5) == 0.0);
}

TEST_CASE("zero data stay zero") {
    const FluxModel model(2.0);
    const GridSpec grid{-2.0, 6.0, 400};
    RunOptions options;
    options.t_end = 1.0;
    const Trajectory traj = run_viscous(ViscousSolver({1e-2, grid, 0.45}, model), CellField(grid), options);
    CHECK(cell_sum(traj.snapshots.back().field) == 0.0);
}

TEST_CASE("maximal equilibrium is close to stationary under small viscosity") {
    const GridSpec half{0.0, 4.0, 400};
    const GridSpec ext = extended_grid(half, 4.0);
    const double eps = 1e-3;
    const ViscousSolver solver({eps, ext, 0.45}, FluxModel(4.0));
    const CellField eq = sample_initial(EquilibriumPreset{0.0}, half);
    RunOptions options;
    options.t_end = 1.0;
    const Trajectory traj = run_viscous(solver, extend(eq, ext), options);
    CHECK(l1_distance(restrict(traj.snapshots.back().field, half), eq) <= 10.0 * (eps + half.dx()));
    CHECK(traj.ledger.relative_residual() <= 1e-12);
}

TEST_CASE("right tail shrinks away from the support") {
    const GridSpec half{0.0, 4.0, 400};
    const GridSpec ext = extended_grid(half, 2.0);
    const ViscousSolver solver({1e-2, ext, 0.45}, FluxModel(2.0));
    RunOptions options;
    options.t_end = 1.0;
    const Trajectory traj = run_viscous(solver, extend(sample_initial(BoxPreset{0.2, 1.8, 1.5}, half), ext), options);
    const CellField& last = traj.snapshots.back().field;
    double previous = mass_right_of(last, 2.0);
    for (double delta : {0.1, 0.2, 0.4}) {
        const double tail = mass_right_of(last, 2.0 + delta);
        CHECK(tail < previous);
        previous = tail;
    }
    CHECK(previous < 1e-8);
}

TEST_CASE("viscous solution approaches the Godunov solution as viscosity drops") {
    const GridSpec half{0.0, 4.0, 400};
    const GridSpec ext = extended_grid(half, 2.0);
    const CellField init = sample_initial(BoxPreset{0.2, 1.8, 1.5}, half);
    RunOptions options;
    options.t_end = 1.0;
    const CellField reference = run(GodunovSolver(half), init, options).snapshots.back().field;
    double previous = 1e9;
    for (double eps : {4e-2, 2e-2, 1e-2}) {
        const ViscousSolver solver({eps, ext, 0.45}, FluxModel(2.0));
        const auto traj = run_viscous(solver, extend(init, ext), options);
        const double d = l1_distance(restrict(traj.snapshots.back().field, half), reference);
        CHECK(d < previous);
        previous = d;
    }
}
