#pragma once

#include <string>
#include <variant>

#include "kompaneets/grid.hpp"

namespace kompaneets {

struct EquilibriumPreset {
    double alpha = 0.0;
};

/// scale * n̂_α.
struct ScaledEquilibriumPreset {
    double scale = 1.0;
    double alpha = 0.0;
};

/// height on [left, right], zero elsewhere.
struct BoxPreset {
    double left = 0.5;
    double right = 1.5;
    double height = 1.0;
};

/// Parabolic bump height * (1 - ((x - center) / width)^2)_+.
struct BumpPreset {
    double center = 1.0;
    double width = 0.5;
    double height = 1.0;
};

/// Bose-Einstein photon number density x^2 / (e^(x + mu) - 1), truncated at
/// x = cutoff.
struct BoseEinsteinPreset {
    double mu = 0.0;
    double cutoff = 4.0;
};

using Preset = std::variant<EquilibriumPreset, ScaledEquilibriumPreset, BoxPreset, BumpPreset,
                            BoseEinsteinPreset>;

[[nodiscard]] std::string preset_name(const Preset& preset);

/// Right end of the preset's support (the R of the support lemma, at least 2).
[[nodiscard]] double preset_support_radius(const Preset& preset);

/// Cell averages of the preset on `grid`: exact for the piecewise polynomial
/// presets, 4-point Gauss-Legendre per cell for Bose-Einstein. Throws
/// std::invalid_argument when the preset does not fit on [0, x_max].
[[nodiscard]] CellField sample_initial(const Preset& preset, const GridSpec& grid);

}  // namespace kompaneets
