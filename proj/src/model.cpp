#include "kompaneets/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kompaneets {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be finite");
    }
}

// Cubic Hermite on [x0, x0 + len] with end values p0, p1 and end slopes m0, m1.
struct Hermite {
    double x0, len, p0, m0, p1, m1;

    [[nodiscard]] double value(double x) const noexcept {
        const double s = (x - x0) / len;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * len * m0 +
               (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * len * m1;
    }

    [[nodiscard]] double slope(double x) const noexcept {
        const double s = (x - x0) / len;
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * len * m0 +
                (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * len * m1) /
               len;
    }
};

Hermite left_blend(double len) { return {-len, len, -1.0, 0.0, 0.0, 2.0}; }

Hermite right_blend(double radius, double len) {
    return {radius, len, FluxModel::g(radius), FluxModel::g_prime(radius),
            FluxModel::g(radius) - 1.0, 0.0};
}

void require_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 2.0)) {
        throw std::domain_error("alpha must lie in [0, 2]");
    }
}

}  // namespace

FluxModel::FluxModel(double support_radius, double blend_width)
    : radius_(support_radius), blend_(blend_width) {
    if (!(support_radius >= 2.0) || !std::isfinite(support_radius)) {
        throw std::invalid_argument("support radius must be finite and >= 2");
    }
    if (!(blend_width > 0.0) || !std::isfinite(blend_width)) {
        throw std::invalid_argument("blend width must be positive");
    }
    left_len_ = std::min(blend_width, 1.0);
    right_len_ = std::min(blend_width, support_radius);
}

double FluxModel::flux(double x, double n) const {
    require_finite(x, "position");
    require_finite(n, "density");
    if (x < 0.0) throw std::domain_error("flux is defined for x >= 0");
    return g(x) * n - n * n;
}

double FluxModel::wave_speed(double x, double n) const {
    require_finite(x, "position");
    require_finite(n, "density");
    return g(x) - 2.0 * n;
}

double FluxModel::extended_g(double x) const noexcept {
    if (x >= 0.0 && x <= radius_) return g(x);
    if (x < 0.0) {
        return x <= -left_len_ ? -1.0 : left_blend(left_len_).value(x);
    }
    if (x >= radius_ + right_len_) return g(radius_) - 1.0;
    return right_blend(radius_, right_len_).value(x);
}

double FluxModel::extended_g_prime(double x) const noexcept {
    if (x >= 0.0 && x <= radius_) return g_prime(x);
    if (x < 0.0) {
        return x <= -left_len_ ? 0.0 : left_blend(left_len_).slope(x);
    }
    if (x >= radius_ + right_len_) return 0.0;
    return right_blend(radius_, right_len_).slope(x);
}

double FluxModel::extended_flux(double x, double n) const noexcept {
    return extended_g(x) * n - n * n;
}

double FluxModel::extended_wave_speed(double x, double n) const noexcept {
    return extended_g(x) - 2.0 * n;
}

double FluxModel::slope_constant(int samples) const {
    if (samples < 2) throw std::invalid_argument("need at least two samples");
    const double lo = -1.0;
    const double hi = 2.0 * radius_;
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * i / (samples - 1);
        sup = std::max(sup, std::abs(extended_g_prime(x)));
    }
    return 2.0 * sup;
}

double equilibrium_value(double alpha, double x) {
    require_alpha(alpha);
    return (x > alpha && x < 2.0) ? FluxModel::g(x) : 0.0;
}

double equilibrium_number(double alpha) {
    require_alpha(alpha);
    // 4/3 - α² + α³/3 in factored form, non-negative in floating point
    return (2.0 - alpha) * (2.0 - alpha) * (1.0 + alpha) / 3.0;
}

double equilibrium_integral(double alpha, double a, double b) {
    require_alpha(alpha);
    const double lo = std::max(a, alpha);
    const double hi = std::min(b, 2.0);
    if (!(hi > lo)) return 0.0;
    auto primitive = [](double x) { return x * x - x * x * x / 3.0; };
    return primitive(hi) - primitive(lo);
}

double alpha_from_number(double number) {
    if (!(number >= 0.0 && number <= 4.0 / 3.0)) {
        throw std::domain_error("photon number must lie in [0, 4/3]");
    }
    // equilibrium_number is strictly decreasing on [0, 2]
    double lo = 0.0;
    double hi = 2.0;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (equilibrium_number(mid) > number) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double supersolution(double t, double x, double radius, double cap) {
    if (std::isnan(t) || std::isnan(x) || std::isnan(radius) || std::isnan(cap)) {
        throw std::domain_error("supersolution arguments must not be NaN");
    }
    if (!(cap > 0.0)) throw std::domain_error("cap M must be positive");
    if (x < 0.0 || x > radius) throw std::domain_error("supersolution needs 0 <= x <= R");
    const double shift = std::isinf(cap) ? 0.0 : 1.0 / cap;
    const double denom = 3.0 * t + shift;
    if (!(denom > 0.0)) {
        throw std::domain_error("supersolution is unbounded for t <= 0 with M = inf");
    }
    const double k = std::isinf(denom) ? 0.0 : 1.0 / (denom * denom);
    const double gx = FluxModel::g(x);
    const double spread = 3.0 * radius - x;
    return 0.5 * (gx + std::sqrt(gx * gx + 4.0 * k * spread * spread));
}

double slope_bound(double t, double slope_constant) {
    if (!(t > 0.0)) throw std::domain_error("slope bound needs t > 0");
    if (!(slope_constant >= 0.0)) throw std::domain_error("C' must be non-negative");
    const double root = std::sqrt(1.0 + slope_constant * slope_constant);
    const double gap = -std::expm1(-t * root);
    if (gap <= 0.0) return -std::numeric_limits<double>::infinity();
    return -slope_constant / 4.0 - root / (2.0 * gap);
}

double support_curve(double t, double radius) {
    if (!(t >= 0.0)) throw std::domain_error("support curve needs t >= 0");
    if (!(radius >= 2.0)) throw std::domain_error("support curve needs R >= 2");
    return 2.0 / (1.0 + ((2.0 - radius) / radius) * std::exp(-2.0 * t));
}

CharacteristicRate characteristic_rhs(double x, double n) noexcept {
    return {2.0 * x - x * x - 2.0 * n, 2.0 * x * n - 2.0 * n};
}

}  // namespace kompaneets
