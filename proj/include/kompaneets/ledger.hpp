#pragma once

#include <algorithm>
#include <cmath>

#include "kompaneets/grid.hpp"

namespace kompaneets {

/// Running photon balance: initial = current + condensate - right inflow.
struct ConservationLedger {
    double initial_number = 0.0;
    double current_number = 0.0;
    /// Accumulated ∫ -F(0) dt = ∫ n(t,0)^2 dt.
    double condensate_mass = 0.0;
    double right_flux_accum = 0.0;

    [[nodiscard]] static ConservationLedger start(double number) noexcept {
        return {number, number, 0.0, 0.0};
    }

    [[nodiscard]] double residual() const noexcept {
        return current_number + condensate_mass - right_flux_accum - initial_number;
    }

    [[nodiscard]] double relative_residual() const noexcept {
        return std::abs(residual()) / std::max(1.0, initial_number);
    }
};

/// Books one step: condensate += dt * (-left_outflux), right accumulator +=
/// dt * right_influx, current number re-read from `after`.
[[nodiscard]] ConservationLedger ledger_update(const ConservationLedger& ledger,
                                               const StepRecord& record, const CellField& after);

}  // namespace kompaneets
