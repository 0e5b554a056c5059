#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kompaneets/diagnostics.hpp"
#include "kompaneets/initial_data.hpp"
#include "kompaneets/ledger.hpp"
#include "kompaneets/model.hpp"

using namespace kompaneets;

namespace {
const GridSpec kGrid{0.0, 4.0, 400};
}

TEST_CASE("photon number") {
    CHECK(photon_number(CellField(kGrid)) == 0.0);
    CHECK(photon_number(sample_initial(EquilibriumPreset{0.0}, kGrid)) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(photon_number(sample_initial(BoxPreset{0.5, 1.5, 2.0}, kGrid)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("L1 distance") {
    const CellField eq0 = equilibrium_field(0.0, kGrid);
    const CellField eq1 = equilibrium_field(1.0, kGrid);
    CHECK(l1_distance(eq0, eq0) == 0.0);
    CHECK(l1_distance(eq0, CellField(kGrid)) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(l1_distance(eq0, eq1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)l1_distance(eq0, CellField(GridSpec{0.0, 4.0, 200})), std::invalid_argument);
}

TEST_CASE("total variation includes the jumps to the zero exterior") {
    CHECK(total_variation(CellField(kGrid)) == 0.0);
    CHECK(total_variation(sample_initial(BoxPreset{0.5, 1.5, 2.0}, kGrid)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(total_variation(equilibrium_field(0.0, kGrid)) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(total_variation(equilibrium_field(0.0, kGrid)) <= 2.0 + 1e-12);
}

TEST_CASE("minimum forward slope") {
    CellField ramp(kGrid);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.1 * static_cast<double>(i);
    CHECK(min_forward_slope(ramp) >= 0.0);
    CHECK(min_forward_slope(sample_initial(BoxPreset{0.5, 1.5, 2.0}, kGrid)) ==
          doctest::Approx(-2.0 / kGrid.dx()));
    const GridSpec fine{0.0, 4.0, 4000};
    CHECK(min_forward_slope(equilibrium_field(0.0, fine)) == doctest::Approx(-2.0).epsilon(1e-2));
}

TEST_CASE("ledger update") {
    const GridSpec grid{0.0, 1.0, 10};
    CellField field(grid);
    field[0] = 1.0;
    ConservationLedger ledger = ConservationLedger::start(0.1);
    ledger = ledger_update(ledger, {0.01, 0.0, 0.0}, field);
    CHECK(ledger.condensate_mass == 0.0);
    ledger = ledger_update(ledger, {0.01, -0.25, 0.0}, field);
    CHECK(ledger.condensate_mass == doctest::Approx(0.0025));
    ledger = ledger_update(ledger, {0.5, 0.0, 0.2}, field);
    CHECK(ledger.right_flux_accum == doctest::Approx(0.1));
    CHECK(ledger.current_number == doctest::Approx(0.1));
}

TEST_CASE("equilibrium fit") {
    const AlphaFit exact = best_fit_alpha(equilibrium_field(0.5, kGrid));
    CHECK(exact.alpha == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(exact.distance <= 1e-6);

    CHECK(best_fit_alpha(CellField(kGrid)).alpha == 2.0);

    CellField with_tail = equilibrium_field(0.0, kGrid);
    for (std::size_t i = 0; i < with_tail.size(); ++i) {
        const double x = kGrid.center(i);
        if (x > 2.5 && x < 3.0) with_tail[i] += 0.01 / 0.5;
    }
    const AlphaFit fit = best_fit_alpha(with_tail);
    CHECK(fit.alpha <= 1e-3);
    CHECK(fit.distance == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("lower bound functional") {
    CHECK(lower_bound_functional(CellField(kGrid)) == 0.0);
    const CellField eq = equilibrium_field(0.0, kGrid);
    CHECK(std::abs(lower_bound_functional(eq) - 4.0 / 3.0) <= 2.0 * kGrid.dx());
    CellField pointwise(kGrid), tall(kGrid);
    for (std::size_t i = 0; i < kGrid.cells; ++i) {
        pointwise[i] = equilibrium_value(0.0, kGrid.center(i));
        tall[i] = 10.0 * pointwise[i];
    }
    CHECK(lower_bound_functional(tall) == lower_bound_functional(pointwise));
    CHECK(std::abs(lower_bound_functional(pointwise) - 4.0 / 3.0) <= 2.0 * kGrid.dx());
}

TEST_CASE("Kruzkov residual vanishes at the trivial levels") {
    const GodunovSolver solver(kGrid);
    const CellField box = sample_initial(BoxPreset{0.5, 1.5, 2.0}, kGrid);
    const double dt = solver.stable_dt(box);
    const CellField after = solver.step(box, dt).first;
    CHECK(kruzkov_residual(box, after, dt, 0.0) <= 1e-9);
    CHECK(kruzkov_residual(box, after, dt, 10.0) <= 1e-9);
    CHECK(kruzkov_positive_mass(box, after, dt, 0.0) <= 1e-9);
    CHECK_THROWS_AS((void)kruzkov_residual(box, after, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("space-time positive Kruzkov mass shrinks under refinement") {
    double previous[3] = {1e9, 1e9, 1e9};
    const double levels[3] = {0.25, 0.5, 1.0};
    for (std::size_t cells : {400u, 800u}) {
        const GridSpec grid{0.0, 4.0, cells};
        const GodunovSolver solver(grid);
        double mass[3] = {0.0, 0.0, 0.0};
        RunOptions options;
        options.t_end = 1.0;
        options.on_step = [&](const StepView& v) {
            for (int j = 0; j < 3; ++j) mass[j] += v.record.dt * kruzkov_positive_mass(v.before, v.after, v.record.dt, levels[j]);
        };
        (void)run(solver, sample_initial(BoxPreset{0.5, 1.5, 2.0}, grid), options);
        for (int j = 0; j < 3; ++j) {
            CHECK(mass[j] < previous[j]);
            previous[j] = mass[j];
        }
    }
}

TEST_CASE("bump test function") {
    const BumpTestFunction phi{0.5, 0.4, 1.0, 0.8};
    CHECK(phi.value(0.5, 1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(phi.value(0.95, 1.0) == 0.0);
    CHECK(phi.value(0.5, 1.9) == 0.0);
    const double h = 1e-6;
    for (double t : {0.3, 0.55, 0.8}) {
        for (double x : {0.4, 1.1, 1.6}) {
            CHECK(phi.dt(t, x) == doctest::Approx((phi.value(t + h, x) - phi.value(t - h, x)) / (2 * h)).epsilon(1e-5));
            CHECK(phi.dx(t, x) == doctest::Approx((phi.value(t, x + h) - phi.value(t, x - h)) / (2 * h)).epsilon(1e-5));
        }
    }
}

TEST_CASE("weak-form residual") {
    const BumpTestFunction phi{0.5, 0.4, 1.0, 0.8};
    CHECK_THROWS_AS(WeakFormAccumulator(phi, kGrid, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(WeakFormAccumulator({0.5, 0.4, 0.5, 0.8}, kGrid, 1.0), std::invalid_argument);

    const GodunovSolver solver(kGrid);
    CHECK(weak_form_residual(solver, CellField(kGrid), 1.0, phi) == 0.0);
    CHECK(weak_form_residual(solver, equilibrium_field(0.0, kGrid), 1.0, phi) <= kGrid.dx());

    double previous = 1e9;
    for (std::size_t cells : {400u, 800u}) {
        const GridSpec grid{0.0, 4.0, cells};
        const double r = weak_form_residual(GodunovSolver(grid), sample_initial(BoxPreset{0.5, 1.5, 2.0}, grid), 1.0, phi);
        CHECK(r < previous);
        previous = r;
    }
}

TEST_CASE("monotone pairs and contraction") {
    const GodunovSolver solver(kGrid);
    const CellField low = sample_initial(BoxPreset{0.5, 1.5, 1.0}, kGrid);
    const CellField high = sample_initial(BoxPreset{0.5, 1.5, 2.0}, kGrid);
    const PairReport same = check_monotone_pair(solver, low, low, 2.0);
    CHECK(same.holds);
    CHECK(same.worst == 0.0);
    const PairReport nested = check_monotone_pair(solver, low, high, 2.0);
    CHECK(nested.holds);
    CHECK(nested.steps > 0);
    CHECK_FALSE(nested.first_violation_step.has_value());
    CHECK(check_monotone_pair(solver, equilibrium_field(1.0, kGrid), equilibrium_field(0.0, kGrid), 2.0).holds);
    CHECK_THROWS_AS((void)check_monotone_pair(solver, high, low, 1.0), std::invalid_argument);

    const PairReport contraction =
        check_contraction(solver, sample_initial(BumpPreset{1.0, 0.8, 2.0}, kGrid), low, 2.0);
    CHECK(contraction.holds);
    CHECK(contraction.worst <= kPairTolerance);
}

TEST_CASE("time series records follow the ledger") {
    const GodunovSolver solver(kGrid);
    RunOptions options;
    options.t_end = 3.0;
    options.snapshot_times = {0.5, 1.0, 1.5, 2.0, 2.5};
    const Trajectory traj = run(solver, sample_initial(ScaledEquilibriumPreset{3.0, 0.0}, kGrid), options);
    const auto series = time_series(traj);
    REQUIRE(series.size() == traj.snapshots.size());
    for (std::size_t m = 0; m < series.size(); ++m) {
        const auto& r = series[m];
        CHECK(r.t == traj.snapshots[m].t);
        CHECK(r.photon_number + r.condensate_mass == doctest::Approx(4.0).epsilon(1e-12));
        if (m > 0) CHECK(r.condensate_mass >= series[m - 1].condensate_mass);
        CHECK(r.lower_bound <= r.photon_number + 1e-12);
    }
}
