#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/quadrature.hpp"
#include "hardy/radial_profile.hpp"
#include "hardy/sphere_geometry.hpp"
#include "hardy/test_functions.hpp"

namespace hardy {

// ---------------------------------------------------------------------------
// Inequality kinds
// ---------------------------------------------------------------------------
//
//   subcritical (n >= 3, 2 <= p < n, lambda = (n-p)/p):
//     int |grad u|^p + (p-1) lambda^{p-1} int |u|^p / |tan d|^{p-2}
//       >= lambda^p int |u|^p / |tan d|^p
//   critical (p = n >= 2, mu = (n-1)/n, L = log(e/sin d)):
//     int |grad u|^n + (n-1) mu^{n-1} int |u|^n / (|tan d|^{n-2} L^{n-1})
//       >= mu^n int |u|^n / (|tan d|^n L^n)
//   claimed (n >= 3, 1 < p < n): the disputed variant with middle weight
//     sin^{2-p} d and middle coefficient lambda^{p-1}; evaluated but only
//     reported, never asserted.

enum class InequalityKind { subcritical, critical, claimed };

inline std::string kind_name(InequalityKind k) {
    switch (k) {
        case InequalityKind::subcritical: return "subcritical";
        case InequalityKind::critical: return "critical";
        case InequalityKind::claimed: return "claimed";
    }
    return "?";
}

struct InequalityParams {
    InequalityKind kind = InequalityKind::subcritical;
    int n = 3;
    double p = 2.0;  // for critical, p is forced to n

    void validate() const {
        switch (kind) {
            case InequalityKind::subcritical:
                if (n < 3 || !(p >= 2.0) || !(p < n))
                    throw std::invalid_argument("subcritical inequality needs n >= 3, 2 <= p < n");
                break;
            case InequalityKind::critical:
                if (n < 2) throw std::invalid_argument("critical inequality needs n >= 2");
                break;
            case InequalityKind::claimed:
                if (n < 3 || !(p > 1.0) || !(p < n))
                    throw std::invalid_argument("claimed inequality needs n >= 3, 1 < p < n");
                break;
        }
    }

    double exponent() const { return kind == InequalityKind::critical ? double(n) : p; }

    double lambda() const { return (n - p) / p; }
    double mu() const { return (n - 1.0) / n; }

    // Coefficient of the middle term on the left-hand side.
    double middle_coefficient() const {
        switch (kind) {
            case InequalityKind::subcritical: return (p - 1.0) * std::pow(lambda(), p - 1.0);
            case InequalityKind::critical: return (n - 1.0) * std::pow(mu(), n - 1.0);
            case InequalityKind::claimed: return std::pow(lambda(), p - 1.0);
        }
        return 0.0;
    }

    // The sharp constant multiplying the singular term.
    double sharp_constant() const {
        if (kind == InequalityKind::critical) return std::pow(mu(), double(n));
        return std::pow(lambda(), p);
    }
};

namespace detail {
// pow with fast paths for the small integer exponents that dominate here.
inline double rpow(double base, double e) {
    if (e == 2.0) return base * base;
    if (e == 3.0) return base * base * base;
    if (e == 1.0) return base;
    if (e == 4.0) {
        const double b2 = base * base;
        return b2 * b2;
    }
    if (e == 0.0) return 1.0;
    return std::pow(base, e);
}
}  // namespace detail

// Middle and singular weights at a radial point.
struct KindWeights {
    double middle;
    double singular;
};

inline KindWeights kind_weights(const InequalityParams& params, const RadialPoint& r) {
    const double cot = std::abs(r.c) / r.s;
    switch (params.kind) {
        case InequalityKind::subcritical:
            return {detail::rpow(cot, params.p - 2.0), detail::rpow(cot, params.p)};
        case InequalityKind::critical: {
            const double L = 1.0 - std::log(r.s);
            return {detail::rpow(cot, params.n - 2.0) / detail::rpow(L, params.n - 1.0),
                    detail::rpow(cot, double(params.n)) / detail::rpow(L, double(params.n))};
        }
        case InequalityKind::claimed:
            return {detail::rpow(r.s, 2.0 - params.p), detail::rpow(cot, params.p)};
    }
    return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct GridMeta {
    int resolution = 0;
    bool graded = false;
    std::string scheme;  // "radial" or "sphere"
};

struct InequalityReport {
    InequalityParams params;
    double grad_term = 0.0;      // A = int |grad u|^p
    double middle_term = 0.0;    // B, kind-dependent weight
    double singular_term = 0.0;  // C, kind-dependent weight
    double lhs = 0.0;
    double rhs = 0.0;
    double deficit = 0.0;
    double quotient = 0.0;
    bool quotient_defined = false;
    GridMeta grid;
    std::string u_spec;

    double scale() const { return grad_term + middle_term + singular_term; }
};

namespace detail {
inline InequalityReport finish_report(const InequalityParams& params, double A, double B, double C,
                                      GridMeta grid, std::string u_spec) {
    InequalityReport rep;
    rep.params = params;
    rep.grad_term = A;
    rep.middle_term = B;
    rep.singular_term = C;
    rep.lhs = A + params.middle_coefficient() * B;
    rep.rhs = params.sharp_constant() * C;
    rep.deficit = rep.lhs - rep.rhs;
    rep.quotient_defined = C > 0.0;
    rep.quotient = rep.quotient_defined ? rep.lhs / C : 0.0;
    rep.grid = std::move(grid);
    rep.u_spec = std::move(u_spec);
    return rep;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Evaluation: radial route (1-D reduction, Phi-free by construction)
// ---------------------------------------------------------------------------

inline InequalityReport evaluate(const InequalityParams& params, const RadialProfile& u,
                                 const RadialGrid& grid, std::string u_spec = {}) {
    params.validate();
    const double pw = params.exponent();
    const double A = integrate_radial(
        [&](const RadialPoint& r) { return detail::rpow(std::abs(u.deriv(r)), pw); }, grid);
    const double B = integrate_radial(
        [&](const RadialPoint& r) {
            return detail::rpow(std::abs(u.value(r)), pw) * kind_weights(params, r).middle;
        },
        grid);
    const double C = integrate_radial(
        [&](const RadialPoint& r) {
            return detail::rpow(std::abs(u.value(r)), pw) * kind_weights(params, r).singular;
        },
        grid);
    return detail::finish_report(params, A, B, C,
                                 {grid.resolution, grid.graded, "radial"}, std::move(u_spec));
}

// ---------------------------------------------------------------------------
// Evaluation: full sphere grid
// ---------------------------------------------------------------------------
//
// The evaluator is any type with
//   void eval(const SphereNode&, const double* x, const RadialPoint& d_geom,
//             double& value, double& grad_norm) const;
// d_geom carries d(node, phi) with its sine and cosine.

// Compact monomial form for the integration hot path: only the variables
// actually present in each term are visited.
struct CompiledMonomial {
    double coef = 0.0;
    int nv = 0;
    std::array<std::uint8_t, 4> var{};
    std::array<std::uint8_t, 4> exp{};
};

class CompiledPoly {
  public:
    CompiledPoly() = default;
    explicit CompiledPoly(const SmoothTestFunction& f) : n_(f.dimension()) {
        for (const auto& t : f.terms()) {
            CompiledMonomial m;
            m.coef = t.coef;
            for (int v = 0; v <= n_; ++v) {
                if (t.exp[v] == 0) continue;
                if (m.nv == 4) throw std::invalid_argument("CompiledPoly: monomial degree too high");
                m.var[m.nv] = static_cast<std::uint8_t>(v);
                m.exp[m.nv] = t.exp[v];
                ++m.nv;
            }
            terms_.push_back(m);
        }
    }

    double value_and_gradient(const double* x, double* grad) const {
        for (int v = 0; v <= n_; ++v) grad[v] = 0.0;
        double total = 0.0;
        for (const auto& t : terms_) {
            double pw[4];
            double prod = t.coef;
            for (int i = 0; i < t.nv; ++i) {
                pw[i] = ipow(x[t.var[i]], t.exp[i]);
                prod *= pw[i];
            }
            total += prod;
            for (int i = 0; i < t.nv; ++i) {
                double partial = t.coef * t.exp[i] * ipow(x[t.var[i]], t.exp[i] - 1);
                for (int j = 0; j < t.nv; ++j)
                    if (j != i) partial *= pw[j];
                grad[t.var[i]] += partial;
            }
        }
        return total;
    }

    double value_and_surface_gradient_norm(const EmbeddingFrame& f, double& grad_norm) const {
        std::array<double, kMaxVars> grad{};
        const double val = value_and_gradient(f.x.data(), grad.data());
        double s2 = 0.0;
        for (int k = 0; k < f.n; ++k) {
            double part = 0.0;
            for (int m = 0; m <= f.n; ++m) part += grad[m] * f.dx[k][m];
            const double comp = part / f.scale[k];
            s2 += comp * comp;
        }
        grad_norm = std::sqrt(s2);
        return val;
    }

  private:
    static double ipow(double x, int e) {
        switch (e) {
            case 0: return 1.0;
            case 1: return x;
            case 2: return x * x;
            case 3: return x * x * x;
            default: return x * x * x * x;
        }
    }

    int n_ = 2;
    std::vector<CompiledMonomial> terms_;
};

class SmoothOnSphere {
  public:
    explicit SmoothOnSphere(SmoothTestFunction f) : f_(std::move(f)), compiled_(f_) {}

    void eval(const SphereNode& node, const double* /*x*/, const RadialPoint& /*d*/, double& value,
              double& grad_norm) const {
        EmbeddingFrame frame;
        std::array<double, kMaxVars> st{}, ct{};
        const int n = node.dimension();
        for (int j = 0; j < n; ++j) {
            st[j] = node.grid->sin_at(j, node.idx[j]);
            ct[j] = node.grid->cos_at(j, node.idx[j]);
        }
        frame.build(n, st.data(), ct.data());
        value = compiled_.value_and_surface_gradient_norm(frame, grad_norm);
    }

    const SmoothTestFunction& function() const { return f_; }

  private:
    SmoothTestFunction f_;
    CompiledPoly compiled_;
};

class RadialOnSphere {
  public:
    explicit RadialOnSphere(RadialProfile g) : g_(std::move(g)) {}

    void eval(const SphereNode& /*node*/, const double* /*x*/, const RadialPoint& d_geom, double& value,
              double& grad_norm) const {
        value = g_.value(d_geom);
        grad_norm = std::abs(g_.deriv(d_geom));
    }

  private:
    RadialProfile g_;
};

template <class Evaluator>
InequalityReport evaluate_on_sphere(const InequalityParams& params, const Evaluator& u,
                                    const SphereGrid& grid, const AngularPoint& phi,
                                    std::string u_spec = {},
                                    unsigned threads = std::thread::hardware_concurrency()) {
    params.validate();
    if (grid.dimension() != params.n) throw std::invalid_argument("evaluate_on_sphere: grid dimension mismatch");
    const double pw = params.exponent();
    const EmbeddedPoint pole = embed(phi);
    // Aligned pole: d(node, phi) = theta_1, read from the grid tables.
    bool at_pole = true;
    for (std::size_t m = 1; m < pole.x.size(); ++m)
        if (std::abs(pole.x[m]) > 1e-15) at_pole = false;
    if (std::abs(pole.x[0] - 1.0) > 1e-15) at_pole = false;

    auto body = [&](const SphereNode& node, double* out) {
        std::array<double, kMaxVars + 1> x{};
        node.embedding(x.data());
        RadialPoint dg;
        if (at_pole) {
            dg = {node.theta[0], node.grid->sin_at(0, node.idx[0]), node.grid->cos_at(0, node.idx[0])};
        } else {
            double ip = 0.0;
            for (std::size_t m = 0; m < pole.x.size(); ++m) ip += x[m] * pole.x[m];
            ip = std::clamp(ip, -1.0, 1.0);
            dg = {std::acos(ip), std::sqrt(std::max(0.0, 1.0 - ip * ip)), ip};
        }
        double val = 0.0, gn = 0.0;
        u.eval(node, x.data(), dg, val, gn);
        const KindWeights w = kind_weights(params, dg);
        const double up = detail::rpow(std::abs(val), pw);
        out[0] = detail::rpow(gn, pw);
        out[1] = up * w.middle;
        out[2] = up * w.singular;
    };
    const auto terms = integrate_sphere_multi<3>(body, grid, threads);
    return detail::finish_report(params, terms[0], terms[1], terms[2],
                                 {grid.resolution(), false, "sphere"}, std::move(u_spec));
}

namespace detail {
struct VecAcc {
    std::vector<double> v;
    VecAcc& operator+=(const VecAcc& o) {
        if (v.empty()) {
            v = o.v;
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
        }
        return *this;
    }
};
}  // namespace detail

// Batched corpus evaluation: one sweep over the grid computes the three
// integral terms for every (parameter set, corpus function) pair. The node
// geometry (embedding frame, distance, kind weights) is shared across the
// corpus, which is what makes the 50-function runs affordable. All parameter
// sets must share the grid dimension; the base point is phi for all of them.
// Reports are indexed [param_index * corpus.size() + function_index].
inline std::vector<InequalityReport> evaluate_corpus_on_sphere(
    const std::vector<InequalityParams>& plist, const std::vector<SmoothTestFunction>& corpus,
    const SphereGrid& grid, const AngularPoint& phi,
    unsigned threads = std::thread::hardware_concurrency()) {
    if (plist.empty() || corpus.empty()) return {};
    for (const auto& params : plist) {
        params.validate();
        if (params.n != grid.dimension())
            throw std::invalid_argument("evaluate_corpus_on_sphere: grid dimension mismatch");
    }
    const int n = grid.dimension();
    const std::size_t F = corpus.size();
    const std::size_t P = plist.size();
    std::vector<CompiledPoly> compiled;
    compiled.reserve(F);
    for (const auto& f : corpus) compiled.emplace_back(f);

    const EmbeddedPoint pole = embed(phi);
    bool at_pole = std::abs(pole.x[0] - 1.0) <= 1e-15;
    for (std::size_t m = 1; m < pole.x.size() && at_pole; ++m)
        if (std::abs(pole.x[m]) > 1e-15) at_pole = false;

    auto block = [&](std::size_t lo, std::size_t hi) {
        detail::VecAcc acc;
        acc.v.assign(P * F * 3, 0.0);
        std::array<int, 8> idx{};
        std::array<double, kMaxVars> st{}, ct{};
        EmbeddingFrame frame;
        std::vector<KindWeights> w(P);
        for (std::size_t flat = lo; flat < hi; ++flat) {
            grid.decode(flat, idx.data());
            for (int j = 0; j < n; ++j) {
                st[j] = grid.sin_at(j, idx[j]);
                ct[j] = grid.cos_at(j, idx[j]);
            }
            frame.build(n, st.data(), ct.data());
            RadialPoint dg;
            if (at_pole) {
                dg = {grid.theta_at(0, idx[0]), st[0], ct[0]};
            } else {
                double ip = 0.0;
                for (int m = 0; m <= n; ++m) ip += frame.x[m] * pole.x[m];
                ip = std::clamp(ip, -1.0, 1.0);
                dg = {std::acos(ip), std::sqrt(std::max(0.0, 1.0 - ip * ip)), ip};
            }
            const double weight = grid.node_weight(idx.data());
            for (std::size_t pi = 0; pi < P; ++pi) w[pi] = kind_weights(plist[pi], dg);
            for (std::size_t fi = 0; fi < F; ++fi) {
                double gn = 0.0;
                const double val = compiled[fi].value_and_surface_gradient_norm(frame, gn);
                const double av = std::abs(val);
                double* out = acc.v.data() + fi * P * 3;
                for (std::size_t pi = 0; pi < P; ++pi) {
                    const double pw = plist[pi].exponent();
                    const double up = detail::rpow(av, pw);
                    const double ag = detail::rpow(gn, pw);
                    if (!std::isfinite(up) || !std::isfinite(ag))
                        throw std::runtime_error("evaluate_corpus_on_sphere: non-finite integrand");
                    out[pi * 3 + 0] += ag * weight;
                    out[pi * 3 + 1] += up * w[pi].middle * weight;
                    out[pi * 3 + 2] += up * w[pi].singular * weight;
                }
            }
        }
        return acc;
    };
    const auto total =
        detail::blocked_pairwise_sum<detail::VecAcc>(grid.node_count(), kSphereBlock, block, threads);

    std::vector<InequalityReport> reports(P * F);
    for (std::size_t pi = 0; pi < P; ++pi)
        for (std::size_t fi = 0; fi < F; ++fi) {
            const double* t = total.v.data() + fi * P * 3 + pi * 3;
            reports[pi * F + fi] = detail::finish_report(
                plist[pi], t[0], t[1], t[2], {grid.resolution(), false, "sphere"}, {});
        }
    return reports;
}

// ---------------------------------------------------------------------------
// Integration-by-parts identities
// ---------------------------------------------------------------------------

struct IdentityPair {
    double direct = 0.0;
    double closed_form = 0.0;

    double relative_gap() const {
        const double scale = std::max({std::abs(direct), std::abs(closed_form), 1e-12});
        return std::abs(direct - closed_form) / scale;
    }
};

// Subcritical identity: with w = |u|^p sin^{n-p} d,
//   direct = int |cos|^{p-2} < grad sin^{2-n} d, grad w > dsigma
//   closed = -(n-2)(p-1) int |u|^p / |tan d|^{p-2} dsigma.
// The boundary flux over shrinking geodesic spheres vanishes because
// w -> 0 at the poles (p < n), so the two sides agree for bounded profiles.
inline IdentityPair ibp_identity_I(const RadialProfile& u, int n, double p, const RadialGrid& grid) {
    if (n < 3 || !(p >= 2.0) || !(p < n)) throw std::invalid_argument("ibp_identity_I: need n >= 3, 2 <= p < n");
    IdentityPair out;
    out.direct = integrate_radial(
        [&](const RadialPoint& r) {
            const double uv = u.value(r);
            const double du = u.deriv(r);
            const double au = std::abs(uv);
            const double wprime = p * detail::rpow(au, p - 2.0) * uv * du * detail::rpow(r.s, n - p) +
                                  (n - p) * detail::rpow(au, p) * detail::rpow(r.s, n - p - 1.0) * r.c;
            return detail::rpow(std::abs(r.c), p - 2.0) * (2.0 - n) * detail::rpow(r.s, 1.0 - n) * r.c * wprime;
        },
        grid);
    out.closed_form = integrate_radial(
        [&](const RadialPoint& r) {
            return -(n - 2.0) * (p - 1.0) * detail::rpow(std::abs(u.value(r)), p) *
                   detail::rpow(std::abs(r.c) / r.s, p - 2.0);
        },
        grid);
    return out;
}

// Critical identity: with psi = u / L^{(n-1)/n},
//   direct = int (|cos|^{n-2} cos / sin^{n-1}) < grad d, grad |psi|^n > dsigma
//   closed = (n-1) int |u|^n / (L^{n-1} |tan d|^{n-2}) dsigma.
// Valid when psi vanishes at the poles; u bounded (or milder) suffices since
// psi = u / L^{(n-1)/n} decays logarithmically there.
inline IdentityPair ibp_identity_J(const RadialProfile& u, int n, const RadialGrid& grid) {
    if (n < 2) throw std::invalid_argument("ibp_identity_J: need n >= 2");
    const double mu = (n - 1.0) / n;
    IdentityPair out;
    out.direct = integrate_radial(
        [&](const RadialPoint& r) {
            const double L = 1.0 - std::log(r.s);
            const double psi = u.value(r) * std::pow(L, -mu);
            const double dpsi = u.deriv(r) * std::pow(L, -mu) +
                                u.value(r) * mu * std::pow(L, -mu - 1.0) * (r.c / r.s);
            const double dpsin = n * detail::rpow(std::abs(psi), n - 2.0) * psi * dpsi;
            return detail::rpow(std::abs(r.c), n - 2.0) * r.c * detail::rpow(r.s, 1.0 - n) * dpsin;
        },
        grid);
    out.closed_form = integrate_radial(
        [&](const RadialPoint& r) {
            const double L = 1.0 - std::log(r.s);
            return (n - 1.0) * detail::rpow(std::abs(u.value(r)), double(n)) /
                   detail::rpow(L, n - 1.0) * detail::rpow(std::abs(r.c) / r.s, n - 2.0);
        },
        grid);
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise lower bound for |grad u|^p, u = phi^alpha psi, phi = sin d
// ---------------------------------------------------------------------------
//
// lhs  = |u'(d)|^p
// rhs  = |a|^p sin^{-n} d |psi|^p |cos d|^p
//      + a |a|^{p-2} |cos d|^{p-2} cos d sin^{1-n} d * p |psi|^{p-2} psi psi'
// with a = -(n-p)/p. Returns the number of sample points violating
// lhs >= rhs - slack * scale. The bound is a pointwise consequence of the
// basic vector inequality, so the expected count is zero.

struct PointwiseCheckResult {
    int violations = 0;
    double worst_margin = 0.0;  // min over samples of (lhs - rhs) / scale
};

inline PointwiseCheckResult pointwise_gradf1_check(int n, double p, const RadialProfile& psi,
                                                   const std::vector<AngularPoint>& samples,
                                                   const AngularPoint& phi, double slack = 1e-10) {
    if (n < 3 || !(p >= 2.0) || !(p < n))
        throw std::invalid_argument("pointwise_gradf1_check: need n >= 3, 2 <= p < n");
    const double a = -(n - p) / p;
    const EmbeddedPoint pole = embed(phi);
    PointwiseCheckResult res;
    res.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& pt : samples) {
        const EmbeddedPoint x = embed(pt);
        double ip = std::clamp(dot(x, pole), -1.0, 1.0);
        const RadialPoint r{std::acos(ip), std::sqrt(std::max(0.0, 1.0 - ip * ip)), ip};
        if (r.s < 1e-12) continue;  // skip points at +-phi
        const double ps = psi.value(r);
        const double dps = psi.deriv(r);
        const double uprime = a * std::pow(r.s, a - 1.0) * r.c * ps + std::pow(r.s, a) * dps;
        const double lhs = detail::rpow(std::abs(uprime), p);
        const double t1 = detail::rpow(std::abs(a), p) * std::pow(r.s, -double(n)) *
                          detail::rpow(std::abs(ps), p) * detail::rpow(std::abs(r.c), p);
        const double t2 = a * detail::rpow(std::abs(a), p - 2.0) * detail::rpow(std::abs(r.c), p - 2.0) *
                          r.c * std::pow(r.s, 1.0 - n) * p * detail::rpow(std::abs(ps), p - 2.0) * ps * dps;
        const double scale = std::abs(lhs) + std::abs(t1) + std::abs(t2);
        const double margin = scale > 0.0 ? (lhs - (t1 + t2)) / scale : 0.0;
        if (margin < res.worst_margin) res.worst_margin = margin;
        if (lhs < t1 + t2 - slack * scale) ++res.violations;
    }
    return res;
}

}  // namespace hardy
