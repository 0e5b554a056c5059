#pragma once

#include <limits>
#include <utility>

namespace kompaneets {

/// Flux of the hyperbolic Kompaneets model,
///
///   F(x, n) = g(x) n - n^2,   g(x) = 2x - x^2   on the half-line,
///
/// together with a C1 extension of g to the whole real line used by the
/// viscous reference solver. The extension equals 2x - x^2 on [0, R], the
/// constant 2R - R^2 - 1 to the right of R + w and the constant -1 to the
/// left of -w, where w is the blend width. The two transition intervals are
/// cubic Hermite segments matching value and slope at both joints.
class FluxModel {
public:
    explicit FluxModel(double support_radius = 4.0, double blend_width = 0.5);

    [[nodiscard]] double support_radius() const noexcept { return radius_; }
    [[nodiscard]] double blend_width() const noexcept { return blend_; }

    /// Interior coefficient 2x - x^2.
    [[nodiscard]] static double g(double x) noexcept { return x * (2.0 - x); }
    [[nodiscard]] static double g_prime(double x) noexcept { return 2.0 - 2.0 * x; }

    /// Interior flux (2x - x^2) n - n^2. Throws std::domain_error for x < 0 or
    /// non-finite arguments.
    [[nodiscard]] double flux(double x, double n) const;
    /// dF/dn = g(x) - 2n.
    [[nodiscard]] double wave_speed(double x, double n) const;

    [[nodiscard]] double extended_g(double x) const noexcept;
    [[nodiscard]] double extended_g_prime(double x) const noexcept;
    [[nodiscard]] double extended_flux(double x, double n) const noexcept;
    [[nodiscard]] double extended_wave_speed(double x, double n) const noexcept;

    /// C' = 2 sup |g'| over [-1, 2R] for the extended coefficient, sampled on a
    /// uniform grid of `samples` points.
    [[nodiscard]] double slope_constant(int samples = 200001) const;

private:
    double radius_;
    double blend_;
    double left_len_;
    double right_len_;
};

/// n̂_α(x): 2x - x^2 on (α, 2), zero elsewhere. Throws for α outside [0, 2].
[[nodiscard]] double equilibrium_value(double alpha, double x);

/// ∫ n̂_α dx = 4/3 - α^2 + α^3/3.
[[nodiscard]] double equilibrium_number(double alpha);

/// Exact integral of n̂_α over [a, b].
[[nodiscard]] double equilibrium_integral(double alpha, double a, double b);

/// Inverse of equilibrium_number by bisection. Throws for N outside [0, 4/3].
[[nodiscard]] double alpha_from_number(double number);

inline constexpr double kUnboundedTime = std::numeric_limits<double>::infinity();

/// Explicit super-solution ½(g + sqrt(g² + 4 K_M(t) G(x))) with
/// K_M(t) = (3t + 1/M)^-2 and G(x) = (3R - x)^2. Pass M = +inf for
/// K(t) = (3t)^-2 and t = +inf for the large-time limit g₊.
[[nodiscard]] double supersolution(double t, double x, double radius,
                                   double cap = std::numeric_limits<double>::infinity());

/// Lower bound on forward difference quotients at time t,
///   -C'/4 - sqrt(1 + C'^2) / (2 (1 - exp(-t sqrt(1 + C'^2)))).
/// Returns -inf as t -> 0+; throws for t <= 0.
[[nodiscard]] double slope_bound(double t, double slope_constant);

/// Solution of s' = 2s - s^2, s(0) = R: the right edge of the support.
[[nodiscard]] double support_curve(double t, double radius);

struct CharacteristicRate {
    double speed;
    double density_rate;
};

/// Right-hand side of the characteristic system x' = g - 2n, n' = -g'(x) n.
[[nodiscard]] CharacteristicRate characteristic_rhs(double x, double n) noexcept;

}  // namespace kompaneets
