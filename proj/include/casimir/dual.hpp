#pragma once

#include <cmath>

namespace casimir {

// Minimal forward-mode dual number: value plus one directional derivative.
// Used to differentiate log Delta with respect to a plate position inside
// the pressure integrand, so the derivative is analytic rather than a
// finite difference.
struct Dual {
    double v = 0.0;
    double d = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value) {}
    constexpr Dual(double value, double deriv) : v(value), d(deriv) {}
};

constexpr Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
constexpr Dual operator-(Dual a) { return {-a.v, -a.d}; }
constexpr Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }

inline Dual operator/(Dual a, Dual b) {
    const double inv = 1.0 / b.v;
    const double q = a.v * inv;
    return {q, (a.d - q * b.d) * inv};
}

inline Dual exp(Dual a) {
    const double e = std::exp(a.v);
    return {e, e * a.d};
}

inline Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }

inline Dual log1p(Dual a) { return {std::log1p(a.v), a.d / (1.0 + a.v)}; }

} // namespace casimir
