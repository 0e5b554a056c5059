#include "kompaneets/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "kompaneets/model.hpp"

namespace kompaneets {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

void require_alpha(double alpha) {
    require(alpha >= 0.0 && alpha <= 2.0, "equilibrium alpha must lie in [0, 2]");
}

// Fills each cell with (1/dx) ∫_cell f, given a primitive-difference functor.
template <class Integral>
CellField average_cells(const GridSpec& grid, Integral&& integral) {
    CellField field(grid);
    const double dx = grid.dx();
    for (std::size_t i = 0; i < grid.cells; ++i) {
        field[i] = integral(grid.interface(i), grid.interface(i + 1)) / dx;
    }
    return field;
}

double bose_einstein_density(double x, double mu) {
    return x * x / std::expm1(x + mu);
}

}  // namespace

std::string preset_name(const Preset& preset) {
    return std::visit(Overloaded{
                          [](const EquilibriumPreset&) { return std::string("equilibrium"); },
                          [](const ScaledEquilibriumPreset&) { return std::string("scaled_equilibrium"); },
                          [](const BoxPreset&) { return std::string("box"); },
                          [](const BumpPreset&) { return std::string("bump"); },
                          [](const BoseEinsteinPreset&) { return std::string("bose_einstein"); },
                      },
                      preset);
}

double preset_support_radius(const Preset& preset) {
    const double right = std::visit(Overloaded{
                                        [](const EquilibriumPreset&) { return 2.0; },
                                        [](const ScaledEquilibriumPreset&) { return 2.0; },
                                        [](const BoxPreset& p) { return p.right; },
                                        [](const BumpPreset& p) { return p.center + p.width; },
                                        [](const BoseEinsteinPreset& p) { return p.cutoff; },
                                    },
                                    preset);
    return std::max(2.0, right);
}

CellField sample_initial(const Preset& preset, const GridSpec& grid) {
    grid.validate();
    require(grid.x_min == 0.0, "initial data are sampled on the half-line grid (x_min = 0)");
    const double x_max = grid.x_max;

    return std::visit(
        Overloaded{
            [&](const EquilibriumPreset& p) {
                require_alpha(p.alpha);
                require(x_max >= 2.0, "equilibrium presets need x_max >= 2");
                return average_cells(grid, [&](double a, double b) {
                    return equilibrium_integral(p.alpha, a, b);
                });
            },
            [&](const ScaledEquilibriumPreset& p) {
                require_alpha(p.alpha);
                require(p.scale >= 0.0 && std::isfinite(p.scale), "scale must be finite and >= 0");
                require(x_max >= 2.0, "equilibrium presets need x_max >= 2");
                return average_cells(grid, [&](double a, double b) {
                    return p.scale * equilibrium_integral(p.alpha, a, b);
                });
            },
            [&](const BoxPreset& p) {
                require(p.left >= 0.0 && p.left < p.right && p.right <= x_max,
                        "box needs 0 <= left < right <= x_max");
                require(p.height >= 0.0 && std::isfinite(p.height), "box height must be finite and >= 0");
                return average_cells(grid, [&](double a, double b) {
                    const double overlap = std::min(b, p.right) - std::max(a, p.left);
                    return overlap > 0.0 ? p.height * overlap : 0.0;
                });
            },
            [&](const BumpPreset& p) {
                require(p.width > 0.0 && p.center - p.width >= 0.0 && p.center + p.width <= x_max,
                        "bump support [center - width, center + width] must lie in [0, x_max]");
                require(p.height >= 0.0 && std::isfinite(p.height), "bump height must be finite and >= 0");
                auto primitive = [&](double x) {
                    const double u = std::clamp((x - p.center) / p.width, -1.0, 1.0);
                    return p.height * p.width * (u - u * u * u / 3.0);
                };
                return average_cells(grid, [&](double a, double b) { return primitive(b) - primitive(a); });
            },
            [&](const BoseEinsteinPreset& p) {
                require(p.mu >= 0.0 && std::isfinite(p.mu), "Bose-Einstein mu must be finite and >= 0");
                require(p.cutoff > 0.0 && p.cutoff <= x_max, "Bose-Einstein cutoff must lie in (0, x_max]");
                // 4-point Gauss-Legendre nodes and weights on [-1, 1]
                constexpr std::array<double, 4> nodes{-0.8611363115940526, -0.3399810435848563,
                                                      0.3399810435848563, 0.8611363115940526};
                constexpr std::array<double, 4> weights{0.3478548451374538, 0.6521451548625461,
                                                        0.6521451548625461, 0.3478548451374538};
                return average_cells(grid, [&](double a, double b) {
                    const double hi = std::min(b, p.cutoff);
                    if (!(hi > a)) return 0.0;
                    const double mid = 0.5 * (a + hi);
                    const double half = 0.5 * (hi - a);
                    double sum = 0.0;
                    for (std::size_t k = 0; k < nodes.size(); ++k) {
                        sum += weights[k] * bose_einstein_density(mid + half * nodes[k], p.mu);
                    }
                    return half * sum;
                });
            },
        },
        preset);
}

}  // namespace kompaneets
