#pragma once

#include <limits>
#include <span>
#include <vector>

#include "kompaneets/godunov.hpp"
#include "kompaneets/grid.hpp"
#include "kompaneets/model.hpp"

namespace kompaneets {

/// Regularized problem n_t + (ḡ(x) n - n^2)_x = ε n_xx on an extended grid
/// covering [-1, 2R] with margin.
struct ViscousConfig {
    double epsilon = 1e-2;
    GridSpec grid{-2.0, 10.0, 6000};
    double cfl = kDefaultCfl;

    /// Throws std::invalid_argument for ε <= 0, a grid that misses [-1, 2R],
    /// or cfl outside (0, 1).
    void validate(double support_radius) const;
};

/// Extended grid with the same spacing as `half_line`, running from about
/// -margin to 2R + margin (margin > 1), with 0 and half_line.x_max on interfaces.
[[nodiscard]] GridSpec extended_grid(const GridSpec& half_line, double support_radius,
                                     double margin = 2.0);

/// Reference solver: Godunov convection with the extended coefficient ḡ plus
/// a centred diffusion term. Both far ends carry homogeneous Dirichlet data.
class ViscousSolver {
public:
    ViscousSolver(ViscousConfig config, const FluxModel& model);

    [[nodiscard]] const GridSpec& grid() const noexcept { return config_.grid; }
    [[nodiscard]] double epsilon() const noexcept { return config_.epsilon; }
    [[nodiscard]] double cfl() const noexcept { return config_.cfl; }

    [[nodiscard]] double max_wave_speed(const CellField& state) const;

    /// cfl * min(dx / S, dx^2 / (2ε)), capped by `remaining`.
    [[nodiscard]] double stable_dt(const CellField& state, double cfl,
                                   double remaining = std::numeric_limits<double>::infinity()) const;
    [[nodiscard]] double stable_dt(const CellField& state) const { return stable_dt(state, config_.cfl); }

    /// One explicit step. The record holds the total (convective + diffusive)
    /// flux through each far end.
    StepRecord advance(CellField& state, double dt) const;
    [[nodiscard]] CellField step(const CellField& state, double dt) const;

private:
    ViscousConfig config_;
    std::vector<double> iface_g_;
    std::vector<double> center_g_;
};

/// Zero-extension of half-line data onto the extended grid.
[[nodiscard]] CellField extend(const CellField& half_line, const GridSpec& extended);

/// Copies the cells of `extended` that overlap `half_line`. Throws
/// std::invalid_argument when the half-line grid is not a sub-grid.
[[nodiscard]] CellField restrict(const CellField& extended, const GridSpec& half_line);

/// dx * Σ n over cells whose centre lies right of x.
[[nodiscard]] double mass_right_of(const CellField& field, double x);

[[nodiscard]] Trajectory run_viscous(const ViscousSolver& solver, const CellField& initial,
                                     const RunOptions& options);

}  // namespace kompaneets
