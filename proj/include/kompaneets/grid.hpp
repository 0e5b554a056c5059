#pragma once

#include <cstddef>
#include <vector>

namespace kompaneets {

/// Uniform grid of `cells` cells on [x_min, x_max].
struct GridSpec {
    double x_min = 0.0;
    double x_max = 4.0;
    std::size_t cells = 2000;

    /// Throws std::invalid_argument unless x_max > x_min and cells >= 8.
    void validate() const;

    [[nodiscard]] double dx() const noexcept { return (x_max - x_min) / static_cast<double>(cells); }
    [[nodiscard]] double center(std::size_t i) const noexcept {
        return x_min + (static_cast<double>(i) + 0.5) * dx();
    }
    /// Position of interface i, i = 0..cells (interface i is the left edge of cell i).
    [[nodiscard]] double interface(std::size_t i) const noexcept {
        return x_min + static_cast<double>(i) * dx();
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Cell averages of the photon number density on a grid.
struct CellField {
    GridSpec grid;
    std::vector<double> values;

    CellField() = default;
    explicit CellField(GridSpec g) : grid(g), values(g.cells, 0.0) {}
    CellField(GridSpec g, std::vector<double> v);

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double dx() const noexcept { return grid.dx(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Boundary bookkeeping of one time step. `left_outflux` is the numerical
/// flux through the left end (<= 0 for non-negative states, i.e. mass
/// leaving); `right_influx` is the flux entering through the right end.
struct StepRecord {
    double dt = 0.0;
    double left_outflux = 0.0;
    double right_influx = 0.0;
};

}  // namespace kompaneets
