#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/parallel_sum.hpp"
#include "hardy/radial_profile.hpp"
#include "hardy/sphere_geometry.hpp"

namespace hardy {

// ---------------------------------------------------------------------------
// 1-D Gauss-Legendre
// ---------------------------------------------------------------------------

struct Grid1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = -1.0;
    double b = 1.0;
};

// Nodes by Newton iteration on P_N (the classic gauleg recurrence),
// then mapped to (a, b). Exact for polynomials of degree <= 2N-1.
inline Grid1D gauss_legendre(int N, double a, double b) {
    if (N < 1) throw std::invalid_argument("gauss_legendre: N must be >= 1");
    if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
    Grid1D g;
    g.a = a;
    g.b = b;
    g.nodes.resize(N);
    g.weights.resize(N);
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    const int m = (N + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(M_PI * (i - 0.25) / (N + 0.5));
        double z1 = 0.0, pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= N; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = N * (z * p1 - p2) / (z * z - 1.0);
            z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        g.nodes[i - 1] = xm - xl * z;
        g.nodes[N - i] = xm + xl * z;
        g.weights[i - 1] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        g.weights[N - i] = g.weights[i - 1];
    }
    return g;
}

// ---------------------------------------------------------------------------
// Areas
// ---------------------------------------------------------------------------

// Area of S^n in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("sphere_area: n must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

// omega_{n-1}, the area of the unit S^{n-1}: the geodesic sphere of radius d
// about any point of S^n has area omega_{n-1} sin^{n-1}(d).
inline double reduced_sphere_area(int n) { return sphere_area(n - 1); }

// ---------------------------------------------------------------------------
// Tensor-product grid on S^n
// ---------------------------------------------------------------------------

// Gauss-Legendre per angle; the surface-measure density
// prod_{j=1}^{n-1} sin^{n-j}(theta_j) is folded into the per-angle weights.
// Open Gauss rules keep every node strictly inside the chart, away from the
// coordinate singularities.
class SphereGrid {
  public:
    SphereGrid(int n, int nodes_per_angle) : n_(n), resolution_(nodes_per_angle) {
        if (n < 2 || n > 7) throw std::invalid_argument("SphereGrid: supported dimensions are 2..7");
        per_angle_.reserve(n);
        sin_.resize(n);
        cos_.resize(n);
        for (int j = 0; j < n; ++j) {
            const double hi = j + 1 < n ? M_PI : 2.0 * M_PI;
            Grid1D g = gauss_legendre(nodes_per_angle, 0.0, hi);
            sin_[j].resize(g.nodes.size());
            cos_[j].resize(g.nodes.size());
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                sin_[j][i] = std::sin(g.nodes[i]);
                cos_[j][i] = std::cos(g.nodes[i]);
                if (j + 1 < n) g.weights[i] *= std::pow(sin_[j][i], n - 1 - j);
            }
            per_angle_.push_back(std::move(g));
        }
    }

    int dimension() const { return n_; }
    int resolution() const { return resolution_; }
    const Grid1D& angle_grid(int j) const { return per_angle_[j]; }

    std::size_t node_count() const {
        std::size_t c = 1;
        for (const auto& g : per_angle_) c *= g.nodes.size();
        return c;
    }

    // Decode a flat node index into per-angle indices (last angle fastest).
    void decode(std::size_t flat, int* idx) const {
        for (int j = n_ - 1; j >= 0; --j) {
            const std::size_t sz = per_angle_[j].nodes.size();
            idx[j] = static_cast<int>(flat % sz);
            flat /= sz;
        }
    }

    double node_weight(const int* idx) const {
        double w = 1.0;
        for (int j = 0; j < n_; ++j) w *= per_angle_[j].weights[idx[j]];
        return w;
    }

    double sin_at(int j, int i) const { return sin_[j][i]; }
    double cos_at(int j, int i) const { return cos_[j][i]; }
    double theta_at(int j, int i) const { return per_angle_[j].nodes[i]; }

  private:
    int n_;
    int resolution_;
    std::vector<Grid1D> per_angle_;
    std::vector<std::vector<double>> sin_, cos_;
};

// Per-node context handed to sphere integrands. Angles and index digits
// refer to the grid; the embedding is filled in lazily by helpers below.
struct SphereNode {
    const SphereGrid* grid;
    std::array<int, 8> idx;
    std::array<double, 8> theta;

    int dimension() const { return grid->dimension(); }

    // Embedding coordinates x_1..x_{n+1}.
    void embedding(double* x) const {
        const int n = grid->dimension();
        double prefix = 1.0;
        for (int m = 0; m < n; ++m) {
            x[m] = prefix * grid->cos_at(m, idx[m]);
            prefix *= grid->sin_at(m, idx[m]);
        }
        x[n] = prefix;
    }
};

inline constexpr std::size_t kSphereBlock = 2048;

// Evaluate K coupled integrands in one sweep over the grid. f receives the
// node context and writes K values; the reduction is a deterministic blocked
// pairwise sum, so results are independent of the thread count.
template <std::size_t K, class F>
std::array<double, K> integrate_sphere_multi(F&& f, const SphereGrid& grid,
                                             unsigned threads = std::thread::hardware_concurrency()) {
    const std::size_t count = grid.node_count();
    auto block = [&](std::size_t lo, std::size_t hi) {
        detail::Terms<K> acc{};
        SphereNode node;
        node.grid = &grid;
        std::array<double, K> vals{};
        for (std::size_t flat = lo; flat < hi; ++flat) {
            grid.decode(flat, node.idx.data());
            for (int j = 0; j < grid.dimension(); ++j) node.theta[j] = grid.theta_at(j, node.idx[j]);
            f(node, vals.data());
            const double w = grid.node_weight(node.idx.data());
            for (std::size_t k = 0; k < K; ++k) {
                const double term = vals[k] * w;
                if (!std::isfinite(term)) {
                    std::ostringstream oss;
                    oss << "integrate_sphere: non-finite integrand at node (";
                    for (int j = 0; j < grid.dimension(); ++j)
                        oss << node.theta[j] << (j + 1 < grid.dimension() ? ", " : ")");
                    throw std::runtime_error(oss.str());
                }
                acc[k] += term;
            }
        }
        return acc;
    };
    const auto total = detail::blocked_pairwise_sum<detail::Terms<K>>(count, kSphereBlock, block, threads);
    std::array<double, K> out{};
    for (std::size_t k = 0; k < K; ++k) out[k] = total[k];
    return out;
}

// Scalar integral of f(node) over S^n.
template <class F>
double integrate_sphere(F&& f, const SphereGrid& grid,
                        unsigned threads = std::thread::hardware_concurrency()) {
    auto wrap = [&f](const SphereNode& node, double* out) { out[0] = f(node); };
    return integrate_sphere_multi<1>(wrap, grid, threads)[0];
}

// Convenience: integrate a plain function of the angles.
template <class F>
double integrate_sphere_angles(F&& f, const SphereGrid& grid,
                               unsigned threads = std::thread::hardware_concurrency()) {
    auto wrap = [&f](const SphereNode& node, double* out) {
        AngularPoint p;
        p.n = node.grid->dimension();
        p.theta.assign(node.theta.begin(), node.theta.begin() + p.n);
        out[0] = f(p);
    };
    return integrate_sphere_multi<1>(wrap, grid, threads)[0];
}

// ---------------------------------------------------------------------------
// Reduced radial rule on (0, pi)
// ---------------------------------------------------------------------------
//
// For radial integrands, int_{S^n} g(d(., Phi)) dsigma_n
//   = omega_{n-1} int_0^pi g(t) sin^{n-1}(t) dt.
//
// The plain rule is Gauss-Legendre split at pi/2 (factors |cos|^q with odd q
// are analytic on each half but kinked at the equator). The graded rule
// additionally substitutes u = log(e/sin t) near both endpoints and lays
// geometric Gauss panels in u, which resolves integrands whose mass extends
// to t ~ e^{-100}; beyond the last panel the remaining tail is estimated by
// fitting a power law in u to two probe values. For integrands of the kind
// used here the transformed tail is an exact power law to machine precision,
// so the estimate is sharp; profiles that decay at the endpoints produce
// zero-probe tails and the estimate vanishes.

namespace radial_detail {
inline constexpr double kU0 = 1.5;
inline constexpr double kUCap = 120.0;
inline constexpr int kPanelNodes = 16;
inline const std::vector<double>& u_breaks() {
    static const std::vector<double> b = {1.5, 3.0, 6.0, 12.0, 24.0, 48.0, 120.0};
    return b;
}

inline RadialPoint point_from_u(double u, bool right) {
    const double s = std::exp(1.0 - u);
    const double c = std::sqrt(1.0 - s * s);
    const double tau = std::asin(s);
    if (right) return {M_PI - tau, s, -c};
    return {tau, s, c};
}
}  // namespace radial_detail

struct RadialGrid {
    int n = 2;
    bool graded = false;
    int resolution = 0;  // mid-rule nodes per half interval

    struct Node {
        RadialPoint r;
        double w;  // full weight: omega_{n-1} * sin^{n-1} * (rule weight)
    };
    std::vector<Node> nodes;

    // Probe pair for the power-law tail beyond the last u panel.
    struct Tail {
        RadialPoint lo, hi;
        double w_lo, w_hi;  // omega * s^{n-1} * tan(t) at the probes
    };
    std::vector<Tail> tails;

    double weight_sum() const {
        double s = 0.0;
        for (const auto& nd : nodes) s += nd.w;
        return s;
    }
};

// Plain rule: N Gauss-Legendre nodes on each half (0, pi/2), (pi/2, pi).
inline RadialGrid radial_grid(int n, int N) {
    if (n < 2) throw std::invalid_argument("radial_grid: n must be >= 2");
    RadialGrid g;
    g.n = n;
    g.graded = false;
    g.resolution = N;
    const double om = reduced_sphere_area(n);
    for (const auto& [a, b] : {std::pair{0.0, M_PI / 2}, std::pair{M_PI / 2, M_PI}}) {
        const Grid1D q = gauss_legendre(N, a, b);
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            const RadialPoint r = radial_point(q.nodes[i]);
            g.nodes.push_back({r, om * std::pow(r.s, n - 1) * q.weights[i]});
        }
    }
    return g;
}

// Graded rule: mid Gauss pieces on (t0, pi/2) and (pi/2, pi - t0) with
// t0 = asin(e^{1-u0}), plus u-substituted panels at both endpoints and the
// tail probes. Handles power, peaked, and logarithmic endpoint behavior.
inline RadialGrid radial_grid_graded(int n, int N_mid) {
    if (n < 2) throw std::invalid_argument("radial_grid_graded: n must be >= 2");
    using namespace radial_detail;
    RadialGrid g;
    g.n = n;
    g.graded = true;
    g.resolution = N_mid;
    const double om = reduced_sphere_area(n);
    const double t0 = std::asin(std::exp(1.0 - kU0));
    for (const auto& [a, b] : {std::pair{t0, M_PI / 2}, std::pair{M_PI / 2, M_PI - t0}}) {
        const Grid1D q = gauss_legendre(N_mid, a, b);
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            const RadialPoint r = radial_point(q.nodes[i]);
            g.nodes.push_back({r, om * std::pow(r.s, n - 1) * q.weights[i]});
        }
    }
    const auto& breaks = u_breaks();
    for (bool right : {false, true}) {
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
            const Grid1D q = gauss_legendre(kPanelNodes, breaks[k], breaks[k + 1]);
            for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                const RadialPoint r = point_from_u(q.nodes[i], right);
                const double jac = r.s / std::abs(r.c);  // tan(tau)
                g.nodes.push_back({r, om * std::pow(r.s, n - 1) * jac * q.weights[i]});
            }
        }
        RadialGrid::Tail t;
        t.lo = point_from_u(kUCap / 2, right);
        t.hi = point_from_u(kUCap, right);
        t.w_lo = om * std::pow(t.lo.s, n - 1) * (t.lo.s / std::abs(t.lo.c));
        t.w_hi = om * std::pow(t.hi.s, n - 1) * (t.hi.s / std::abs(t.hi.c));
        g.tails.push_back(t);
    }
    return g;
}

// int_{S^n} h(d) dsigma_n for a radial integrand h given at RadialPoints.
template <class H>
double integrate_radial(H&& h, const RadialGrid& grid) {
    double total = 0.0;
    for (const auto& nd : grid.nodes) {
        const double term = h(nd.r) * nd.w;
        if (!std::isfinite(term))
            throw std::runtime_error("integrate_radial: non-finite integrand at d = " + std::to_string(nd.r.d));
        total += term;
    }
    for (const auto& t : grid.tails) {
        const double h_lo = h(t.lo) * t.w_lo;
        const double h_hi = h(t.hi) * t.w_hi;
        if (h_lo == 0.0 || h_hi == 0.0) continue;
        if (!std::isfinite(h_lo) || !std::isfinite(h_hi))
            throw std::runtime_error("integrate_radial: non-finite integrand in the endpoint tail");
        const double ratio = h_lo / h_hi;
        if (!(ratio > 1.0)) continue;  // not a decaying power tail
        const double sigma = std::log(ratio) / std::log(2.0);
        if (!(sigma > 1.0)) continue;
        total += h_hi * radial_detail::kUCap / (sigma - 1.0);
    }
    return total;
}

// Convenience overload for integrands written as g(d) alone.
inline double integrate_radial_fn(const std::function<double(double)>& g, const RadialGrid& grid) {
    return integrate_radial([&g](const RadialPoint& r) { return g(r.d); }, grid);
}

}  // namespace hardy
