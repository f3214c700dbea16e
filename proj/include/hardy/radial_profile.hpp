#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace hardy {

// A point of the radial coordinate d in (0, pi), carried together with
// sin(d) and cos(d). Quadrature rules that substitute u = log(e/sin d)
// near the endpoints construct sin(d) = e^(1-u) directly; recomputing it
// from the double d would lose all relative accuracy once pi - d (or d)
// drops below ~1e-10, so evaluators must use the supplied s and c.
struct RadialPoint {
    double d;
    double s;  // sin d
    double c;  // cos d
};

inline RadialPoint radial_point(double d) {
    return {d, std::sin(d), std::cos(d)};
}

enum class EndpointBehavior {
    finite,          // bounded value and derivatives up to the endpoints
    power_singular,  // value ~ d^a near an endpoint
    log_singular,    // value or derivatives carry powers of log(e/sin d)
};

// A 1-D profile g(d) on (0, pi) with analytic first and second derivative
// oracles. Composed with the geodesic distance from a fixed point it
// becomes a radial function on the sphere.
struct RadialProfile {
    std::function<double(const RadialPoint&)> value;
    std::function<double(const RadialPoint&)> deriv;
    std::function<double(const RadialPoint&)> deriv2;
    EndpointBehavior behavior = EndpointBehavior::finite;
    double power_exponent = 0.0;  // meaningful for power_singular only

    double value_at(double d) const { return value(radial_point(d)); }
    double deriv_at(double d) const { return deriv(radial_point(d)); }
    double deriv2_at(double d) const { return deriv2(radial_point(d)); }
};

// |grad (g o d)| = |g'(d)| since the geodesic distance has unit gradient.
inline double radial_gradient_norm(const RadialProfile& g, double d) {
    if (!(d > 0.0) || !(d < M_PI))
        throw std::domain_error("radial_gradient_norm: d must lie in (0, pi)");
    return std::abs(g.deriv_at(d));
}

// Laplace-Beltrami of g o d on S^n: g''(d) + (n-1) cot(d) g'(d).
inline double radial_laplacian(const RadialProfile& g, int n, double d) {
    if (!(d > 0.0) || !(d < M_PI))
        throw std::domain_error("radial_laplacian: d must lie in (0, pi)");
    const RadialPoint r = radial_point(d);
    return g.deriv2(r) + (n - 1) * (r.c / r.s) * g.deriv(r);
}

}  // namespace hardy
