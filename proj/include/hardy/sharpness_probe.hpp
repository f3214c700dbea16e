#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/hardy_functionals.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/test_functions.hpp"

namespace hardy {

// ---------------------------------------------------------------------------
// Family sweeps
// ---------------------------------------------------------------------------

struct SweepResult {
    InequalityParams params;
    std::vector<double> eps;
    std::vector<double> quotient;
    double target = 0.0;  // lambda^p or mu^n
    double best = 0.0;
    bool monotone = true;  // nonincreasing as eps decreases

    bool within_band(double factor = 1.3) const {
        return !quotient.empty() && quotient.back() <= factor * target;
    }
};

inline OptimizingFamily make_family(const InequalityParams& params, double eps) {
    if (params.kind == InequalityKind::subcritical) return make_subcritical_family(params.n, params.p, eps);
    if (params.kind == InequalityKind::critical) return make_critical_family(params.n, eps);
    throw std::invalid_argument("make_family: sweeps cover the subcritical and critical kinds only");
}

inline RadialProfile family_profile(const InequalityParams& params, double eps) {
    return make_family(params, eps).profile;
}

// Evaluate Q(u_eps) along a decreasing eps list.
inline SweepResult sweep(const InequalityParams& params, const std::vector<double>& eps_list,
                         const RadialGrid& grid) {
    params.validate();
    if (eps_list.empty()) throw std::invalid_argument("sweep: empty eps list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) throw std::invalid_argument("sweep: eps values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("sweep: eps values must be strictly decreasing");
    }
    SweepResult out;
    out.params = params;
    out.eps = eps_list;
    out.target = params.sharp_constant();
    out.best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const OptimizingFamily fam = make_family(params, eps_list[i]);
        const InequalityReport rep = evaluate(params, fam.profile, grid);
        if (!rep.quotient_defined) throw std::runtime_error("sweep: undefined quotient (singular term is zero)");
        out.quotient.push_back(rep.quotient);
        out.best = std::min(out.best, rep.quotient);
        if (i > 0 && rep.quotient > out.quotient[i - 1] + 1e-12) out.monotone = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quotient minimization over the family parameter
// ---------------------------------------------------------------------------

// Golden-section search on log(eps); the family quotients vary on a log
// scale and are empirically unimodal, so this finds the best probe point.
// The bracket ends are included among the candidates, so the result never
// loses to either end. Deterministic; 1e-3 relative bracket tolerance.
inline std::pair<double, double> minimize_quotient(const InequalityParams& params, double eps_lo,
                                                   double eps_hi, const RadialGrid& grid,
                                                   double bracket_tol = 1e-3) {
    params.validate();
    if (!(eps_lo > 0.0) || !(eps_lo < eps_hi)) throw std::invalid_argument("minimize_quotient: need 0 < eps_lo < eps_hi");
    double best_log = std::log(eps_lo);
    double best_q = std::numeric_limits<double>::infinity();
    auto Q = [&](double log_eps) {
        const RadialProfile u = family_profile(params, std::exp(log_eps));
        const double q = evaluate(params, u, grid).quotient;
        if (q < best_q) {
            best_q = q;
            best_log = log_eps;
        }
        return q;
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(eps_lo), b = std::log(eps_hi);
    Q(a);
    Q(b);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = Q(c), fd = Q(d);
    while (std::abs(b - a) > bracket_tol * (std::abs(a) + std::abs(b) + 1.0)) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = Q(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = Q(d);
        }
    }
    return {std::exp(best_log), best_q};
}

// ---------------------------------------------------------------------------
// Randomized counterexample search for the claimed inequality
// ---------------------------------------------------------------------------

struct SearchTraceEntry {
    int restart = 0;
    std::uint64_t restart_seed = 0;
    double initial_deficit = 0.0;
    double initial_scale = 0.0;
    double best_deficit = 0.0;
    double best_scale = 0.0;
    double best_objective = 0.0;  // deficit / (A+B+C), scale invariant
    int accepted_steps = 0;
};

struct SearchResult {
    int iterations = 0;
    std::uint64_t seed = 0;
    InequalityParams params;
    double min_deficit = 0.0;
    double min_objective = 0.0;
    int argmin_restart = 0;
    SmoothTestFunction argmin;
    std::vector<SearchTraceEntry> trace;
    bool counterexample_candidate = false;  // objective < -1e-5
};

namespace detail {
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic Box-Muller on the pinned mt19937_64 stream.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = unit_from_bits(rng());
    while (u1 <= 0.0) u1 = unit_from_bits(rng());
    const double u2 = unit_from_bits(rng());
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}
}  // namespace detail

// Random-restart hill descent over smooth-corpus coefficient tables,
// minimizing the normalized deficit of the claimed inequality. Restart 0
// starts from the constant function as a fixed baseline; each further
// restart draws a fresh random polynomial from a per-restart derived seed.
// Descent: Gaussian coefficient perturbations, step halved on failure,
// kDescentSteps proposals per restart. The deficit is p-homogeneous, so the
// objective is deficit / (A+B+C); raw deficits are recorded alongside.
inline constexpr int kDescentSteps = 50;
inline constexpr int kSearchDegree = 3;

inline SearchResult counterexample_search(int n, double p, int iterations, std::uint64_t seed,
                                          const SphereGrid& grid,
                                          unsigned threads = std::thread::hardware_concurrency()) {
    InequalityParams params{InequalityKind::claimed, n, p};
    params.validate();
    if (iterations < 1) throw std::invalid_argument("counterexample_search: iterations must be >= 1");

    AngularPoint pole;
    pole.n = n;
    pole.theta.assign(n, 0.0);

    auto report_of = [&](const SmoothTestFunction& f) {
        return evaluate_on_sphere(params, SmoothOnSphere(f), grid, pole, {}, threads);
    };

    SearchResult res;
    res.iterations = iterations;
    res.seed = seed;
    res.params = params;
    res.min_objective = std::numeric_limits<double>::infinity();

    for (int r = 0; r < iterations; ++r) {
        const std::uint64_t rseed = detail::mix_seed(seed, static_cast<std::uint64_t>(r));
        SmoothTestFunction current =
            r == 0 ? constant_function(n, 1.0) : random_smooth(n, kSearchDegree, rseed);
        InequalityReport rep = report_of(current);
        double cur_obj = rep.scale() > 0.0 ? rep.deficit / rep.scale() : 0.0;

        SearchTraceEntry entry;
        entry.restart = r;
        entry.restart_seed = r == 0 ? 0 : rseed;
        entry.initial_deficit = rep.deficit;
        entry.initial_scale = rep.scale();
        double best_obj = cur_obj;
        double best_deficit = rep.deficit;
        double best_scale = rep.scale();
        SmoothTestFunction best = current;

        std::mt19937_64 rng(detail::mix_seed(rseed, 0x5eedull));
        double step = 0.5;
        for (int it = 0; it < kDescentSteps; ++it) {
            SmoothTestFunction proposal = current;
            for (auto& t : proposal.terms()) t.coef += step * detail::gaussian(rng);
            const InequalityReport prep = report_of(proposal);
            const double pobj = prep.scale() > 0.0 ? prep.deficit / prep.scale() : 0.0;
            if (prep.scale() > 0.0 && pobj < cur_obj) {
                current = std::move(proposal);
                cur_obj = pobj;
                ++entry.accepted_steps;
                if (pobj < best_obj) {
                    best_obj = pobj;
                    best_deficit = prep.deficit;
                    best_scale = prep.scale();
                    best = current;
                }
            } else {
                step *= 0.5;
            }
        }

        entry.best_deficit = best_deficit;
        entry.best_scale = best_scale;
        entry.best_objective = best_obj;
        res.trace.push_back(entry);
        if (best_obj < res.min_objective) {
            res.min_objective = best_obj;
            res.min_deficit = best_deficit;
            res.argmin_restart = r;
            res.argmin = best;
        }
    }
    res.counterexample_candidate = res.min_objective < -1e-5;
    return res;
}

}  // namespace hardy
