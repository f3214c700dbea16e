#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hardy/sphere_geometry.hpp"
#include "hardy/test_functions.hpp"
#include "test_support.hpp"

using namespace hardy;
using hardy::testing::north_pole;

TEST_CASE("embedding matches the spherical parametrization", "[sphere_geometry]") {
    {
        const EmbeddedPoint e = embed({2, {0.0, 0.0}});
        CHECK(e.x[0] == Catch::Approx(1.0).margin(1e-15));
        CHECK(e.x[1] == Catch::Approx(0.0).margin(1e-15));
        CHECK(e.x[2] == Catch::Approx(0.0).margin(1e-15));
    }
    {
        const EmbeddedPoint e = embed({2, {M_PI / 2, 0.0}});
        CHECK(e.x[0] == Catch::Approx(0.0).margin(1e-15));
        CHECK(e.x[1] == Catch::Approx(1.0).margin(1e-15));
        CHECK(e.x[2] == Catch::Approx(0.0).margin(1e-15));
    }
    {
        const EmbeddedPoint e = embed({3, {M_PI / 2, M_PI / 2, M_PI / 2}});
        for (int m = 0; m < 3; ++m) CHECK(std::abs(e.x[m]) < 1e-15);
        CHECK(e.x[3] == Catch::Approx(1.0).margin(1e-15));
    }
    // unit norm at random points
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 5; ++n) {
        for (int i = 0; i < 20; ++i) {
            const AngularPoint p = random_interior_point(n, rng, 0.05);
            const EmbeddedPoint e = embed(p);
            double norm2 = 0.0;
            for (double x : e.x) norm2 += x * x;
            CHECK(std::abs(norm2 - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("angles_from_embedding inverts embed", "[sphere_geometry]") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 5; ++n) {
        for (int i = 0; i < 20; ++i) {
            const AngularPoint p = random_interior_point(n, rng, 0.05);
            const AngularPoint q = angles_from_embedding(embed(p).x);
            const EmbeddedPoint ep = embed(p), eq = embed(q);
            for (int m = 0; m <= n; ++m) CHECK(std::abs(ep.x[m] - eq.x[m]) < 1e-12);
        }
    }
}

TEST_CASE("geodesic distance basics", "[sphere_geometry]") {
    const AngularPoint phi{2, {0.7, 1.3}};
    CHECK(geodesic_distance(phi, phi) == Catch::Approx(0.0).margin(1e-12));
    CHECK(geodesic_distance({2, {0.0, 0.0}}, {2, {M_PI, 0.0}}) == Catch::Approx(M_PI).margin(1e-12));
    CHECK(geodesic_distance({2, {0.0, 0.0}}, {2, {M_PI / 2, 1.3}}) == Catch::Approx(M_PI / 2).margin(1e-12));
    // symmetry + isometric embedding: cos d = <x, y>
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const AngularPoint a = random_interior_point(3, rng, 0.05);
        const AngularPoint b = random_interior_point(3, rng, 0.05);
        const double d = geodesic_distance(a, b);
        CHECK(d == Catch::Approx(geodesic_distance(b, a)).margin(1e-15));
        CHECK(std::cos(d) == Catch::Approx(dot(embed(a), embed(b))).margin(1e-12));
    }
}

TEST_CASE("metric scale factors and degeneracy flag", "[sphere_geometry]") {
    {
        const auto h = metric_scale_factors({2, {M_PI / 2, 0.3}});
        CHECK(h[0] == 1.0);
        CHECK(h[1] == Catch::Approx(1.0).margin(1e-15));
    }
    {
        const auto h = metric_scale_factors({3, {M_PI / 2, M_PI / 6, 0.4}});
        CHECK(h[0] == 1.0);
        CHECK(h[1] == Catch::Approx(1.0).margin(1e-15));
        CHECK(h[2] == Catch::Approx(0.5).margin(1e-15));
    }
    CHECK(chart_degenerate({2, {0.0, 0.1}}));
    CHECK_FALSE(chart_degenerate({2, {0.5, 0.1}}));
}

TEST_CASE("surface gradient by finite differences", "[sphere_geometry]") {
    // f = x_1 = cos(theta_1): gradient components (-sin theta_1, 0, ...)
    auto f = [](const AngularPoint& p) { return std::cos(p.theta[0]); };
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        const AngularPoint p = random_interior_point(3, rng);
        const TangentVector g = surface_gradient_fd(f, p);
        CHECK(g.components[0] == Catch::Approx(-std::sin(p.theta[0])).margin(1e-8));
        CHECK(std::abs(g.components[1]) < 1e-8);
        CHECK(std::abs(g.components[2]) < 1e-8);
    }

    // |grad d(., phi)| = 1
    for (int n : {2, 3, 4}) {
        const AngularPoint phi = random_interior_point(n, rng);
        auto dist = [&](const AngularPoint& a) { return geodesic_distance(a, phi); };
        int done = 0;
        while (done < 20) {
            const AngularPoint p = random_interior_point(n, rng);
            const double d = dist(p);
            if (d < 0.1 || d > M_PI - 0.1) continue;
            ++done;
            CHECK(std::abs(surface_gradient_fd(dist, p, 1e-4).norm() - 1.0) < 1e-6);
        }
    }

    // constants have zero gradient
    const TangentVector z = surface_gradient_fd([](const AngularPoint&) { return 3.25; },
                                                AngularPoint{2, {1.0, 2.0}});
    CHECK(z.norm() < 1e-12);

    CHECK_THROWS_AS(surface_gradient_fd(f, AngularPoint{2, {1e-9, 0.3}}), std::domain_error);
}

TEST_CASE("Laplace-Beltrami by finite differences", "[sphere_geometry]") {
    // degree-1 spherical harmonic on S^2: eigenvalue n = 2
    auto f = [](const AngularPoint& p) { return std::cos(p.theta[0]); };
    std::mt19937_64 rng(9);
    for (int i = 0; i < 10; ++i) {
        const AngularPoint p = random_interior_point(2, rng);
        CHECK(laplace_beltrami_fd(f, p) == Catch::Approx(-2.0 * std::cos(p.theta[0])).margin(1e-5));
    }

    // lap d = (n-1) cos d / sin d
    for (int n : {2, 3, 4}) {
        const AngularPoint phi = random_interior_point(n, rng);
        auto dist = [&](const AngularPoint& a) { return geodesic_distance(a, phi); };
        int done = 0;
        while (done < 20) {
            const AngularPoint p = random_interior_point(n, rng);
            const double d = dist(p);
            if (d < 0.15 || d > M_PI - 0.15) continue;
            ++done;
            const double cot = std::cos(d) / std::sin(d);
            CHECK(std::abs(laplace_beltrami_fd(dist, p) - (n - 1) * cot) < 1e-5 * (1.0 + std::abs(cot)));
        }
    }

    CHECK(std::abs(laplace_beltrami_fd([](const AngularPoint&) { return -1.5; },
                                       AngularPoint{3, {1.1, 0.9, 2.0}})) < 1e-8);
}

TEST_CASE("pairing of grad sin^{1-n} d with grad d", "[sphere_geometry]") {
    // <grad sin^{1-n} d, grad d> = -(lap d) / sin^{n-1} d away from +-phi
    std::mt19937_64 rng(23);
    for (int n : {2, 3}) {
        const AngularPoint phi = random_interior_point(n, rng);
        auto dist = [&](const AngularPoint& a) { return geodesic_distance(a, phi); };
        auto weight = [&](const AngularPoint& a) { return std::pow(std::sin(dist(a)), 1 - n); };
        int done = 0;
        while (done < 25) {
            const AngularPoint p = random_interior_point(n, rng);
            const double d = dist(p);
            if (d < 0.3 || d > M_PI - 0.3) continue;
            ++done;
            const TangentVector gw = surface_gradient_fd(weight, p);
            const TangentVector gd = surface_gradient_fd(dist, p);
            double ip = 0.0;
            for (int k = 0; k < n; ++k) ip += gw.components[k] * gd.components[k];
            const double rhs = -laplace_beltrami_fd(dist, p) / std::pow(std::sin(d), n - 1);
            CHECK(std::abs(ip - rhs) < 1e-5 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("radial gradient norm and radial Laplacian", "[sphere_geometry]") {
    CHECK(radial_gradient_norm(hardy::testing::sin_profile(), M_PI / 3) == Catch::Approx(0.5).margin(1e-15));

    // g = log(e / sin d): |g'| = 1/|tan d|
    RadialProfile logp;
    logp.value = [](const RadialPoint& r) { return 1.0 - std::log(r.s); };
    logp.deriv = [](const RadialPoint& r) { return -r.c / r.s; };
    logp.deriv2 = [](const RadialPoint& r) { return 1.0 / (r.s * r.s); };
    for (double d : {0.4, 1.0, 2.0, 2.8})
        CHECK(radial_gradient_norm(logp, d) == Catch::Approx(1.0 / std::abs(std::tan(d))).margin(1e-13));

    CHECK(radial_gradient_norm(hardy::testing::constant_profile(2.0), 1.0) == 0.0);
    CHECK_THROWS_AS(radial_gradient_norm(logp, 0.0), std::domain_error);
    CHECK_THROWS_AS(radial_laplacian(logp, 2, M_PI), std::domain_error);

    // cos is an eigenfunction: g'' + (n-1) cot g' = -n cos for n = 2
    for (double d : {0.5, 1.3, 2.2})
        CHECK(radial_laplacian(hardy::testing::cos_profile(), 2, d) ==
              Catch::Approx(-2.0 * std::cos(d)).margin(1e-13));
    CHECK(radial_laplacian(hardy::testing::cos_profile(), 3, M_PI / 2) == Catch::Approx(0.0).margin(1e-13));

    // random smooth profile: matches the FD Laplace-Beltrami of g(d(., phi))
    std::mt19937_64 rng(31);
    const auto corpus = smooth_cos_corpus();
    const AngularPoint phi = random_interior_point(3, rng);
    auto dist = [&](const AngularPoint& a) { return geodesic_distance(a, phi); };
    int done = 0;
    while (done < 10) {
        const AngularPoint p = random_interior_point(3, rng);
        const double d = dist(p);
        if (d < 0.3 || d > M_PI - 0.3) continue;
        ++done;
        const auto& g = corpus[done % corpus.size()].profile;
        auto composed = [&](const AngularPoint& a) { return g.value_at(dist(a)); };
        CHECK(std::abs(laplace_beltrami_fd(composed, p) - radial_laplacian(g, 3, d)) < 1e-5);
    }
}

TEST_CASE("rotate_to_pole", "[sphere_geometry]") {
    {
        const Rotation r = rotate_to_pole(north_pole(3));
        const EmbeddedPoint e = r.apply(embed(north_pole(3)));
        CHECK(e.x[0] == Catch::Approx(1.0).margin(1e-15));
    }
    std::mt19937_64 rng(17);
    for (int n : {2, 3, 4}) {
        const AngularPoint phi = random_interior_point(n, rng, 0.05);
        const Rotation r = rotate_to_pole(phi);
        // maps phi to the pole
        const EmbeddedPoint e = r.apply(embed(phi));
        CHECK(std::abs(e.x[0] - 1.0) < 1e-12);
        for (int m = 1; m <= n; ++m) CHECK(std::abs(e.x[m]) < 1e-12);
        // orthogonality
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                double s = 0.0;
                for (int k = 0; k <= n; ++k) s += r.m[k * r.dim + i] * r.m[k * r.dim + j];
                CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        // isometry
        for (int i = 0; i < 5; ++i) {
            const AngularPoint a = random_interior_point(n, rng, 0.05);
            const AngularPoint b = random_interior_point(n, rng, 0.05);
            CHECK(geodesic_distance(r.apply(a), r.apply(b)) ==
                  Catch::Approx(geodesic_distance(a, b)).margin(1e-12));
        }
    }
}

TEST_CASE("basic vector inequality", "[sphere_geometry]") {
    const std::vector<double> x{1.0, 0.0}, y{-1.0, 0.0}, zero{0.0, 0.0};
    CHECK(lindqvist_check(x, zero, 2.0));   // equality
    CHECK(lindqvist_check(x, y, 2.0));      // 0 >= -1
    CHECK(lindqvist_check(zero, y, 1.5));   // |x| = 0 branch
    CHECK_THROWS_AS(lindqvist_check(x, y, 1.0), std::invalid_argument);

    std::mt19937_64 rng(41);
    int violations = 0;
    for (int i = 0; i < 20000; ++i) {
        const int dim = 1 + int(rng() % 4);
        std::vector<double> a(dim), b(dim);
        const double sa = std::pow(10.0, 4.0 * detail::unit_from_bits(rng()) - 2.0);
        const double sb = std::pow(10.0, 4.0 * detail::unit_from_bits(rng()) - 2.0);
        for (int k = 0; k < dim; ++k) {
            a[k] = sa * (2.0 * detail::unit_from_bits(rng()) - 1.0);
            b[k] = sb * (2.0 * detail::unit_from_bits(rng()) - 1.0);
        }
        const double p = 1.0 + 1e-6 + 5.0 * detail::unit_from_bits(rng());
        if (!lindqvist_check(a, b, p)) ++violations;
    }
    CHECK(violations == 0);
}
