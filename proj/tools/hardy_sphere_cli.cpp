// Command-line front end: identity verification, inequality evaluation over
// random smooth corpora, sharpness sweeps, and the randomized search on the
// disputed inequality. All runs are deterministic for a fixed seed.
//
// Exit codes: 0 all checks passed (or reporting-only command), 1 a numeric
// check failed, 2 configuration error.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hardy/hardy_functionals.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/serialization.hpp"
#include "hardy/sharpness_probe.hpp"
#include "hardy/sphere_geometry.hpp"
#include "hardy/test_functions.hpp"

using namespace hardy;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

int default_sphere_resolution(int n) {
    if (n <= 3) return 64;
    if (n == 4) return 32;
    return 24;
}

InequalityKind parse_kind(const std::string& k) {
    if (k == "subcritical") return InequalityKind::subcritical;
    if (k == "critical") return InequalityKind::critical;
    if (k == "claimed") return InequalityKind::claimed;
    throw CLI::ValidationError("--kind", "must be subcritical, critical or claimed");
}

AngularPoint pole(int n) {
    AngularPoint p;
    p.n = n;
    p.theta.assign(n, 0.0);
    return p;
}

struct CheckRow {
    std::string name;
    double worst;
    double tol;
    bool pass;
};

void print_rows(const std::vector<CheckRow>& rows) {
    std::printf("%-42s %12s %10s  %s\n", "check", "worst", "tol", "status");
    for (const auto& r : rows)
        std::printf("%-42s %12.3e %10.1e  %s\n", r.name.c_str(), r.worst, r.tol,
                    r.pass ? "PASS" : "FAIL");
}

// --------------------------------------------------------------------------

int cmd_verify_identities(int n_arg, int grid_n, std::uint64_t seed, const std::string& out,
                          const std::string& format) {
    std::vector<int> ns;
    if (n_arg == 0)
        ns = {2, 3, 4, 5};
    else
        ns = {n_arg};
    const double h = 1e-4;
    std::vector<CheckRow> rows;
    std::mt19937_64 rng(seed);

    for (int n : ns) {
        double worst_grad = 0.0, worst_lap = 0.0, worst_pair = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const AngularPoint phi = random_interior_point(n, rng);
            auto dist = [&](const AngularPoint& a) { return geodesic_distance(a, phi); };
            int done = 0;
            while (done < 100) {
                const AngularPoint pt = random_interior_point(n, rng);
                const double d = dist(pt);
                if (d < 0.1 || d > M_PI - 0.1) continue;
                ++done;
                worst_grad = std::max(worst_grad, std::abs(surface_gradient_fd(dist, pt, h).norm() - 1.0));
                const double cot = std::cos(d) / std::sin(d);
                const double lap = laplace_beltrami_fd(dist, pt, h);
                worst_lap = std::max(worst_lap,
                                     std::abs(lap - (n - 1) * cot) / (1.0 + std::abs(cot)));
                // <grad sin^{1-n} d, grad d> = -(lap d) / sin^{n-1} d
                auto weight = [&](const AngularPoint& a) { return std::pow(std::sin(dist(a)), 1 - n); };
                const TangentVector gw = surface_gradient_fd(weight, pt, h);
                const TangentVector gd = surface_gradient_fd(dist, pt, h);
                double ip = 0.0;
                for (int k = 0; k < n; ++k) ip += gw.components[k] * gd.components[k];
                const double rhs = -lap / std::pow(std::sin(d), n - 1);
                worst_pair = std::max(worst_pair, std::abs(ip - rhs) / (1.0 + std::abs(rhs)));
            }
        }
        rows.push_back({"|grad d| = 1 (n=" + std::to_string(n) + ")", worst_grad, 1e-6, worst_grad < 1e-6});
        rows.push_back({"lap d = (n-1) cot d (n=" + std::to_string(n) + ")", worst_lap, 1e-5, worst_lap < 1e-5});
        rows.push_back({"<grad sin^{1-n}d, grad d> identity (n=" + std::to_string(n) + ")", worst_pair, 1e-5,
                        worst_pair < 1e-5});
    }

    // vector inequality, 1e5 randomized instances
    {
        int violations = 0;
        for (int i = 0; i < 100000; ++i) {
            const int dim = 1 + int(rng() % 5);
            std::vector<double> x(dim), y(dim);
            const double sx = std::pow(10.0, 3.0 * (2.0 * detail::unit_from_bits(rng()) - 1.0));
            const double sy = std::pow(10.0, 3.0 * (2.0 * detail::unit_from_bits(rng()) - 1.0));
            for (int k = 0; k < dim; ++k) {
                x[k] = sx * (2.0 * detail::unit_from_bits(rng()) - 1.0);
                y[k] = sy * (2.0 * detail::unit_from_bits(rng()) - 1.0);
            }
            const double p = 1.0 + 5.0 * detail::unit_from_bits(rng()) + 1e-6;
            if (!lindqvist_check(x, y, p)) ++violations;
        }
        rows.push_back({"|x+y|^p >= |x|^p + p|x|^{p-2}<x,y> (1e5)", double(violations), 0.5, violations == 0});
    }

    // integration-by-parts identities on the vanishing corpus
    {
        const int N = grid_n > 0 ? grid_n : 256;
        const auto corpus = vanishing_corpus();
        for (const auto& [n, p] : std::vector<std::pair<int, double>>{{3, 2}, {4, 2}, {4, 3}, {5, 2}}) {
            const RadialGrid grid = radial_grid_graded(n, N);
            double worst = 0.0;
            for (const auto& np : corpus)
                worst = std::max(worst, ibp_identity_I(np.profile, n, p, grid).relative_gap());
            rows.push_back({"IBP subcritical (n=" + std::to_string(n) + ", p=" + std::to_string(int(p)) + ")",
                            worst, 1e-6, worst < 1e-6});
        }
        for (int n : {2, 3}) {
            const RadialGrid grid = radial_grid_graded(n, N);
            double worst = 0.0;
            for (const auto& np : corpus)
                worst = std::max(worst, ibp_identity_J(np.profile, n, grid).relative_gap());
            rows.push_back({"IBP critical (n=" + std::to_string(n) + ")", worst, 1e-6, worst < 1e-6});
        }
    }

    print_rows(rows);
    const bool all_pass = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
    if (!out.empty()) {
        if (format == "csv") {
            std::vector<std::pair<double, double>> data;
            for (std::size_t i = 0; i < rows.size(); ++i) data.push_back({double(i), rows[i].worst});
            write_csv(out, "parameter,value", data);
        } else {
            json j;
            j["command"] = "verify-identities";
            j["seed"] = seed;
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"check", r.name}, {"worst", r.worst}, {"tol", r.tol}, {"pass", r.pass}});
            j["checks"] = arr;
            j["all_pass"] = all_pass;
            write_json(out, j);
        }
    }
    return all_pass ? kExitPass : kExitFail;
}

// --------------------------------------------------------------------------

int cmd_verify_inequality(const std::string& kind_s, int n, double p, int corpus_size, int grid_n,
                          std::uint64_t seed, double constant_scale, double family_eps,
                          const std::string& out, const std::string& format) {
    const InequalityKind kind = parse_kind(kind_s);
    InequalityParams params{kind, n, kind == InequalityKind::critical ? double(n) : p};
    params.validate();
    const int N = grid_n > 0 ? grid_n : default_sphere_resolution(n);
    const SphereGrid grid(n, N);
    const AngularPoint phi = pole(n);
    const auto corpus = smooth_corpus(n, seed, corpus_size);
    const bool exploratory = kind == InequalityKind::claimed;

    std::vector<InequalityReport> reports;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        reports.push_back(
            evaluate_on_sphere(params, SmoothOnSphere(corpus[i]), grid, phi, smooth_spec(corpus[i])));
    if (family_eps > 0.0) {
        if (exploratory) throw CLI::ValidationError("--include-family", "no family for the claimed kind");
        const RadialGrid rgrid = radial_grid_graded(n, 256);
        reports.push_back(evaluate(params, family_profile(params, family_eps), rgrid,
                                   profile_spec(kind_s + "_family", n, params.exponent(), family_eps)));
    }

    json records = json::array();
    std::vector<std::pair<double, double>> csv_rows;
    bool all_ok = true;
    double min_norm_deficit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const InequalityReport& rep = reports[i];
        const double checked_deficit = rep.lhs - constant_scale * rep.rhs;
        const double nd = rep.scale() > 0.0 ? checked_deficit / rep.scale() : 0.0;
        min_norm_deficit = std::min(min_norm_deficit, nd);
        if (!exploratory && nd < -1e-7) all_ok = false;
        json jr = to_json(rep);
        if (exploratory) jr["exploratory"] = true;
        if (constant_scale != 1.0) jr["checked_deficit"] = checked_deficit;
        records.push_back(jr);
        csv_rows.push_back({double(i), nd});
    }
    std::printf("%s n=%d p=%g: %zu records, min normalized deficit = %.6e%s\n", kind_s.c_str(), n,
                params.exponent(), reports.size(), min_norm_deficit,
                exploratory ? " (exploratory)" : "");
    if (!out.empty()) {
        if (format == "csv") {
            write_csv(out, "parameter,value", csv_rows);
        } else {
            json j;
            j["command"] = "verify-inequality";
            j["seed"] = seed;
            j["records"] = records;
            write_json(out, j);
        }
    }
    if (exploratory) return kExitPass;
    return all_ok ? kExitPass : kExitFail;
}

// --------------------------------------------------------------------------

int cmd_sharpness(const std::string& kind_s, int n, double p, std::vector<double> eps_list,
                  double eps_min, double eps_max, int eps_steps, int grid_n, bool graded,
                  const std::string& out, const std::string& format) {
    const InequalityKind kind = parse_kind(kind_s);
    if (kind == InequalityKind::claimed)
        throw CLI::ValidationError("--kind", "sharpness sweeps cover subcritical and critical only");
    InequalityParams params{kind, n, kind == InequalityKind::critical ? double(n) : p};
    params.validate();
    if (eps_list.empty() && eps_steps > 0) {
        for (int i = 0; i < eps_steps; ++i)
            eps_list.push_back(eps_max * std::pow(eps_min / eps_max, double(i) / (eps_steps - 1)));
    }
    if (eps_list.empty()) {
        eps_list = kind == InequalityKind::critical ? std::vector<double>{0.4, 0.2, 0.1, 0.05}
                                                    : std::vector<double>{1.0, 0.3, 0.1, 0.03, 0.01};
    }
    const int N = grid_n > 0 ? grid_n : 256;
    const RadialGrid grid = graded ? radial_grid_graded(n, N) : radial_grid(n, N);
    const SweepResult sw = sweep(params, eps_list, grid);

    std::printf("# %s n=%d p=%g target=%.12g\n", kind_s.c_str(), n, params.exponent(), sw.target);
    for (std::size_t i = 0; i < sw.eps.size(); ++i)
        std::printf("eps=%-10g Q=%.12g\n", sw.eps[i], sw.quotient[i]);
    std::printf("monotone=%s final/target=%.4f\n", sw.monotone ? "yes" : "no",
                sw.quotient.back() / sw.target);

    if (!out.empty()) {
        if (format == "csv") {
            std::vector<std::pair<double, double>> rows;
            for (std::size_t i = 0; i < sw.eps.size(); ++i) rows.push_back({sw.eps[i], sw.quotient[i]});
            write_csv(out, "parameter,value", rows);
        } else {
            write_json(out, to_json(sw));
        }
    }
    const bool lower_ok =
        std::all_of(sw.quotient.begin(), sw.quotient.end(), [&](double q) { return q >= sw.target - 1e-7; });
    return (sw.monotone && sw.within_band() && lower_ok) ? kExitPass : kExitFail;
}

// --------------------------------------------------------------------------

int cmd_search(int n, double p, int iters, std::uint64_t seed, int grid_n, const std::string& out,
               const std::string& format) {
    InequalityParams params{InequalityKind::claimed, n, p};
    params.validate();
    const SphereGrid grid(n, grid_n > 0 ? grid_n : 16);
    const SearchResult res = counterexample_search(n, p, iters, seed, grid);
    std::printf("search n=%d p=%g iters=%d seed=%llu: min deficit %.6e (normalized %.6e)%s\n", n, p,
                iters, static_cast<unsigned long long>(seed), res.min_deficit, res.min_objective,
                res.counterexample_candidate ? "  ** CANDIDATE COUNTEREXAMPLE **" : "");
    for (const auto& e : res.trace)
        if (e.best_objective < -1e-5)
            std::printf("  candidate at restart %d (seed %llu): normalized deficit %.6e\n", e.restart,
                        static_cast<unsigned long long>(e.restart_seed), e.best_objective);
    if (!out.empty()) {
        if (format == "csv") {
            std::vector<std::pair<double, double>> rows;
            for (const auto& e : res.trace) rows.push_back({double(e.restart), e.best_deficit});
            write_csv(out, "parameter,value", rows);
        } else {
            write_json(out, to_json(res));
        }
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of Hardy-type inequalities on the unit sphere"};
    app.require_subcommand(1);

    std::string kind = "subcritical", out, format = "json";
    int n = 3, grid_n = 0, corpus_size = 50, iters = 200, eps_steps = 0, n_arg = 0;
    double p = 2.0, eps_min = 0.0, eps_max = 0.0, constant_scale = 1.0, family_eps = 0.0;
    bool graded = true;
    std::uint64_t seed = 0;
    std::vector<double> eps_list;

    auto* vid = app.add_subcommand("verify-identities", "differential-geometry and IBP identity suite");
    vid->add_option("--n", n_arg, "sphere dimension (0 = all of 2..5)");
    vid->add_option("--grid-n", grid_n, "radial rule resolution");
    vid->add_option("--seed", seed, "random seed");
    vid->add_option("--out", out, "output file");
    vid->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* vin = app.add_subcommand("verify-inequality", "evaluate one inequality over a random smooth corpus");
    vin->add_option("--kind", kind, "subcritical | critical | claimed")->required();
    vin->add_option("--n", n, "sphere dimension")->required();
    vin->add_option("--p", p, "exponent (ignored for critical)");
    vin->add_option("--corpus", corpus_size, "corpus size");
    vin->add_option("--grid-n", grid_n, "nodes per angle (0 = auto)");
    vin->add_option("--seed", seed, "random seed");
    vin->add_option("--constant-scale", constant_scale,
                    "multiply the sharp constant before the deficit check (testing hook)");
    vin->add_option("--include-family", family_eps,
                    "also evaluate the optimizing-family member at this eps (radial route)");
    vin->add_option("--out", out, "output file");
    vin->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* sh = app.add_subcommand("sharpness", "family sweep of the quotient toward the sharp constant");
    sh->add_option("--kind", kind, "subcritical | critical")->required();
    sh->add_option("--n", n, "sphere dimension")->required();
    sh->add_option("--p", p, "exponent (ignored for critical)");
    sh->add_option("--eps", eps_list, "explicit decreasing eps list")->delimiter(',');
    sh->add_option("--eps-min", eps_min, "smallest eps of a log-spaced sweep");
    sh->add_option("--eps-max", eps_max, "largest eps of a log-spaced sweep");
    sh->add_option("--eps-steps", eps_steps, "number of log-spaced sweep points");
    sh->add_option("--grid-n", grid_n, "radial rule resolution");
    sh->add_flag("--graded,!--no-graded", graded, "use the endpoint-graded radial rule (default on)");
    sh->add_option("--out", out, "output file");
    sh->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* sc = app.add_subcommand("search-counterexample", "randomized search on the disputed inequality");
    sc->add_option("--n", n, "sphere dimension")->required();
    sc->add_option("--p", p, "exponent, 1 < p < n")->required();
    sc->add_option("--iters", iters, "number of restarts");
    sc->add_option("--seed", seed, "random seed");
    sc->add_option("--grid-n", grid_n, "nodes per angle (0 = auto)");
    sc->add_option("--out", out, "output file");
    sc->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (vid->parsed()) return cmd_verify_identities(n_arg, grid_n, seed, out, format);
        if (vin->parsed())
            return cmd_verify_inequality(kind, n, p, corpus_size, grid_n, seed, constant_scale,
                                         family_eps, out, format);
        if (sh->parsed())
            return cmd_sharpness(kind, n, p, eps_list, eps_min, eps_max, eps_steps, grid_n, graded,
                                 out, format);
        if (sc->parsed()) return cmd_search(n, p, iters, seed, grid_n, out, format);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitConfig;
}
