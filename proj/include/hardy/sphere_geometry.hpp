#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/radial_profile.hpp"

namespace hardy {

// ---------------------------------------------------------------------------
// Points and frames
// ---------------------------------------------------------------------------

// A point on S^n given by n spherical angles: theta_1..theta_{n-1} in [0, pi],
// theta_n in [0, 2 pi).
struct AngularPoint {
    int n = 2;
    std::vector<double> theta;

    void validate() const {
        if (n < 2) throw std::invalid_argument("AngularPoint: dimension must be >= 2");
        if (static_cast<int>(theta.size()) != n)
            throw std::invalid_argument("AngularPoint: expected " + std::to_string(n) + " angles");
        for (int j = 0; j + 1 < n; ++j)
            if (!(theta[j] >= 0.0 && theta[j] <= M_PI))
                throw std::invalid_argument("AngularPoint: polar angle out of [0, pi]");
        if (!(theta[n - 1] >= 0.0 && theta[n - 1] < 2.0 * M_PI))
            throw std::invalid_argument("AngularPoint: azimuthal angle out of [0, 2 pi)");
    }
};

struct EmbeddedPoint {
    std::vector<double> x;  // n+1 Cartesian coordinates, unit norm
};

// Components of a tangent vector in the orthonormal frame {theta_hat_j}.
struct TangentVector {
    std::vector<double> components;

    double norm() const {
        double s = 0.0;
        for (double v : components) s += v * v;
        return std::sqrt(s);
    }
};

// x_1 = cos t1, x_m = sin t1 ... sin t_{m-1} cos t_m, x_{n+1} = sin t1 ... sin tn.
inline EmbeddedPoint embed(const AngularPoint& p) {
    const int n = p.n;
    EmbeddedPoint e;
    e.x.resize(n + 1);
    double prefix = 1.0;
    for (int m = 0; m < n; ++m) {
        e.x[m] = prefix * std::cos(p.theta[m]);
        prefix *= std::sin(p.theta[m]);
    }
    e.x[n] = prefix;
    return e;
}

// Inverse of embed. theta_m = atan2(|tail|, x_m) for m < n keeps each polar
// angle in [0, pi]; the azimuth comes from the last two coordinates.
inline AngularPoint angles_from_embedding(std::span<const double> x) {
    const int n = static_cast<int>(x.size()) - 1;
    if (n < 2) throw std::invalid_argument("angles_from_embedding: need at least 3 coordinates");
    AngularPoint p;
    p.n = n;
    p.theta.resize(n);
    std::vector<double> tail(n + 1);
    double acc = 0.0;
    for (int m = n; m >= 1; --m) {
        acc += x[m] * x[m];
        tail[m] = std::sqrt(acc);
    }
    for (int m = 0; m + 1 < n; ++m) p.theta[m] = std::atan2(tail[m + 1], x[m]);
    double az = std::atan2(x[n], x[n - 1]);
    if (az < 0.0) az += 2.0 * M_PI;
    if (az >= 2.0 * M_PI) az = 0.0;
    p.theta[n - 1] = az;
    return p;
}

inline double dot(const EmbeddedPoint& a, const EmbeddedPoint& b) {
    return std::inner_product(a.x.begin(), a.x.end(), b.x.begin(), 0.0);
}

// Great-circle distance; the inner product is clamped to [-1, 1] to absorb
// the ~1e-16 overshoot of rounded sums.
inline double geodesic_distance(const AngularPoint& p, const AngularPoint& q) {
    if (p.n != q.n) throw std::invalid_argument("geodesic_distance: dimension mismatch");
    const double ip = std::clamp(dot(embed(p), embed(q)), -1.0, 1.0);
    return std::acos(ip);
}

// ---------------------------------------------------------------------------
// Chart metric
// ---------------------------------------------------------------------------

inline constexpr double kDegenerateScale = 1e-12;

// h_k = prod_{j<k} sin theta_j; the surface-gradient component along
// theta_hat_k of f is (1/h_k) df/dtheta_k.
inline std::vector<double> metric_scale_factors(const AngularPoint& p) {
    std::vector<double> h(p.n);
    double prefix = 1.0;
    for (int k = 0; k < p.n; ++k) {
        h[k] = prefix;
        prefix *= std::sin(p.theta[k]);
    }
    return h;
}

// True when the chart degenerates at p (some scale factor below tol);
// quadrature nodes and finite-difference stencils must avoid such points.
inline bool chart_degenerate(const AngularPoint& p, double tol = kDegenerateScale) {
    const auto h = metric_scale_factors(p);
    return std::any_of(h.begin(), h.end(), [tol](double v) { return v < tol; });
}

// ---------------------------------------------------------------------------
// Finite-difference operators
// ---------------------------------------------------------------------------

namespace detail {
inline void require_interior(const AngularPoint& p, double h) {
    AngularPoint q = p;
    for (int k = 0; k < p.n; ++k) {
        q.theta[k] = p.theta[k] - h;
        if (chart_degenerate(q)) throw std::domain_error("finite difference stencil hits a chart singularity");
        q.theta[k] = p.theta[k] + h;
        if (chart_degenerate(q)) throw std::domain_error("finite difference stencil hits a chart singularity");
        q.theta[k] = p.theta[k];
    }
    if (chart_degenerate(p)) throw std::domain_error("finite difference stencil hits a chart singularity");
}
}  // namespace detail

// Central differences in each angle divided by the scale factors; O(h^2).
template <class F>
TangentVector surface_gradient_fd(F&& f, const AngularPoint& p, double h = 1e-4) {
    detail::require_interior(p, h);
    const auto scale = metric_scale_factors(p);
    TangentVector g;
    g.components.resize(p.n);
    AngularPoint q = p;
    for (int k = 0; k < p.n; ++k) {
        q.theta[k] = p.theta[k] + h;
        const double fp = f(q);
        q.theta[k] = p.theta[k] - h;
        const double fm = f(q);
        q.theta[k] = p.theta[k];
        g.components[k] = (fp - fm) / (2.0 * h * scale[k]);
    }
    return g;
}

// Laplace-Beltrami on S^n in spherical coordinates, the nested divergence
// form expanded by the product rule:
//   sum_k (1 / prod_{j<k} sin^2 tj) [ d^2f/dtk^2 + (n-k) cot(tk) df/dtk ].
template <class F>
double laplace_beltrami_fd(F&& f, const AngularPoint& p, double h = 1e-4) {
    detail::require_interior(p, h);
    const int n = p.n;
    const double f0 = f(p);
    double lap = 0.0;
    double pref = 1.0;  // 1 / prod_{j<k} sin^2 theta_j
    AngularPoint q = p;
    for (int k = 0; k < n; ++k) {
        q.theta[k] = p.theta[k] + h;
        const double fp = f(q);
        q.theta[k] = p.theta[k] - h;
        const double fm = f(q);
        q.theta[k] = p.theta[k];
        const double d1 = (fp - fm) / (2.0 * h);
        const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
        const double cot = std::cos(p.theta[k]) / std::sin(p.theta[k]);
        lap += pref * (d2 + (n - 1 - k) * cot * d1);
        const double s = std::sin(p.theta[k]);
        pref /= s * s;
    }
    return lap;
}

// ---------------------------------------------------------------------------
// Rotations
// ---------------------------------------------------------------------------

// An orthogonal transform of R^{n+1}, stored row-major.
struct Rotation {
    int dim = 0;  // n+1
    std::vector<double> m;

    EmbeddedPoint apply(const EmbeddedPoint& p) const {
        EmbeddedPoint out;
        out.x.assign(dim, 0.0);
        for (int i = 0; i < dim; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim; ++j) s += m[i * dim + j] * p.x[j];
            out.x[i] = s;
        }
        return out;
    }

    AngularPoint apply(const AngularPoint& p) const { return angles_from_embedding(apply(embed(p)).x); }
};

// Householder reflection mapping embed(phi) to the north pole (1, 0, ..., 0).
inline Rotation rotate_to_pole(const AngularPoint& phi) {
    const EmbeddedPoint xp = embed(phi);
    const int dim = phi.n + 1;
    Rotation r;
    r.dim = dim;
    r.m.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) r.m[i * dim + i] = 1.0;

    std::vector<double> v(dim);
    for (int i = 0; i < dim; ++i) v[i] = xp.x[i];
    v[0] -= 1.0;
    const double vv = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    if (vv < 1e-28) return r;  // phi already at the pole
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) r.m[i * dim + j] -= 2.0 * v[i] * v[j] / vv;
    return r;
}

// ---------------------------------------------------------------------------
// Basic vector inequality |x+y|^p >= |x|^p + p |x|^{p-2} <x, y>
// ---------------------------------------------------------------------------

inline bool lindqvist_check(std::span<const double> x, std::span<const double> y, double p,
                            double rel_slack = 1e-12) {
    if (x.size() != y.size()) throw std::invalid_argument("lindqvist_check: length mismatch");
    if (!(p > 1.0)) throw std::invalid_argument("lindqvist_check: need p > 1");
    double xx = 0.0, xy = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx += x[i] * x[i];
        xy += x[i] * y[i];
        const double s = x[i] + y[i];
        ss += s * s;
    }
    const double nx = std::sqrt(xx);
    const double lhs = std::pow(std::sqrt(ss), p);
    const double xp = std::pow(nx, p);
    const double mid = nx == 0.0 ? 0.0 : p * std::pow(nx, p - 2.0) * xy;
    const double scale = lhs + xp + std::abs(mid);
    return lhs - (xp + mid) >= -rel_slack * scale;
}

}  // namespace hardy
