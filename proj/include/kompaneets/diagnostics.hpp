#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kompaneets/godunov.hpp"
#include "kompaneets/grid.hpp"
#include "kompaneets/ledger.hpp"

namespace kompaneets {

/// N[n] = dx * Σ n_i.
[[nodiscard]] double photon_number(const CellField& field) noexcept;

/// dx * Σ |a_i - b_i|. Throws std::invalid_argument on grid mismatch.
[[nodiscard]] double l1_distance(const CellField& a, const CellField& b);

/// Variation on the closed half-line with zero exterior:
/// |n_0| + Σ |n_{i+1} - n_i| + |n_last|.
[[nodiscard]] double total_variation(const CellField& field) noexcept;

/// min_i (n_{i+1} - n_i) / dx. Throws for fewer than two cells.
[[nodiscard]] double min_forward_slope(const CellField& field);

/// Exact cell averages of n̂_α on a half-line grid.
[[nodiscard]] CellField equilibrium_field(double alpha, const GridSpec& grid);

struct AlphaFit {
    double alpha = 2.0;
    double distance = 0.0;
};

/// Best L1 approximation of `field` within the equilibrium family: scan of α
/// on a 1e-3 grid, refined by golden section to 1e-6. Ties go to smaller α.
[[nodiscard]] AlphaFit best_fit_alpha(const CellField& field);

/// dx * Σ min(n_i, n̂_0(x_i)) over cells with centre in (0, 2).
[[nodiscard]] double lower_bound_functional(const CellField& field);

/// Largest positive part, over interior cells, of the discrete Kruzkov
/// entropy residual for constant k across one Godunov step:
///
///   (|n'_i - k| - |n_i - k|)/dt + (Q_{i+1/2} - Q_{i-1/2})/dx
///     + sgn(n_i - k) k (g_{i+1/2} - g_{i-1/2})/dx,
///
/// with Q_{i+1/2} = F̂(n_i ∨ k, n_{i+1} ∨ k) - F̂(n_i ∧ k, n_{i+1} ∧ k).
[[nodiscard]] double kruzkov_residual(const CellField& before, const CellField& after, double dt,
                                      double k);

/// Σ_i Δx max(r_i, 0) of the same residual over interior cells.
[[nodiscard]] double kruzkov_positive_mass(const CellField& before, const CellField& after, double dt,
                                           double k);

/// Smooth test function φ(t, x) = ψ((t - t_c)/t_h) ψ((x - x_c)/x_h) with
/// ψ(s) = exp(-1 / (1 - s^2)) on (-1, 1).
struct BumpTestFunction {
    double t_center = 0.5;
    double t_half_width = 0.4;
    double x_center = 1.0;
    double x_half_width = 0.8;

    [[nodiscard]] double value(double t, double x) const noexcept;
    [[nodiscard]] double dt(double t, double x) const noexcept;
    [[nodiscard]] double dx(double t, double x) const noexcept;
};

/// Accumulates ∫∫ (n φ_t + F(x, n) φ_x) dx dt over the steps of a run, using
/// the exact flux at cell centres and the trapezoidal rule in time.
class WeakFormAccumulator {
public:
    /// Throws std::invalid_argument unless supp φ ⊂ (0, t_end) × (x_min, x_max).
    WeakFormAccumulator(BumpTestFunction phi, const GridSpec& grid, double t_end);

    void add_step(double t_before, const CellField& before, const CellField& after, double dt);
    /// |accumulated integral|.
    [[nodiscard]] double residual() const noexcept;

private:
    [[nodiscard]] double integrand(double t, const CellField& field) const;

    BumpTestFunction phi_;
    GridSpec grid_;
    double sum_ = 0.0;
};

/// Runs `initial` to t_end and returns the weak-form residual for φ.
[[nodiscard]] double weak_form_residual(const GodunovSolver& solver, const CellField& initial,
                                        double t_end, const BumpTestFunction& phi,
                                        double cfl = kDefaultCfl);

struct PairReport {
    bool holds = true;
    std::size_t steps = 0;
    /// Largest violation margin seen (≤ tolerance when the check holds).
    double worst = 0.0;
    std::optional<std::size_t> first_violation_step;
    std::optional<std::size_t> first_violation_cell;
};

inline constexpr double kPairTolerance = 1e-12;

/// Evolves a ≤ b on a common schedule and checks a_i ≤ b_i + 1e-12 after
/// every step. Throws std::invalid_argument if the initial data are not ordered.
[[nodiscard]] PairReport check_monotone_pair(const GodunovSolver& solver, const CellField& lower,
                                             const CellField& upper, double t_end,
                                             double cfl = kDefaultCfl);

/// Evolves two states on a common schedule and checks that dx * Σ |a - b|
/// never grows by more than 1e-12 in one step.
[[nodiscard]] PairReport check_contraction(const GodunovSolver& solver, const CellField& a,
                                           const CellField& b, double t_end,
                                           double cfl = kDefaultCfl);

struct TimeSeriesRecord {
    double t = 0.0;
    double photon_number = 0.0;
    double condensate_mass = 0.0;
    double total_variation = 0.0;
    double min_forward_slope = 0.0;
    double alpha_fit = 2.0;
    double l1_to_alpha_fit = 0.0;
    double lower_bound = 0.0;
};

[[nodiscard]] TimeSeriesRecord make_record(const Snapshot& snapshot);

/// One record per snapshot.
[[nodiscard]] std::vector<TimeSeriesRecord> time_series(const Trajectory& trajectory);

}  // namespace kompaneets
