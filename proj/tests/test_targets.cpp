#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "mixbound/linalg.hpp"
#include "mixbound/targets.hpp"

using namespace mixbound;

namespace {

// Central-difference gradient check at x.
void check_gradient(const TargetSpec& t, const Vec& x, double tol) {
    Vec g = t.gradient(x);
    for (int i = 0; i < t.d; ++i) {
        Vec lo = x, hi = x;
        double h = 1e-6;
        lo[i] -= h;
        hi[i] += h;
        double fd = (t.potential(hi) - t.potential(lo)) / (2.0 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(tol).scale(1.0));
    }
}

}  // namespace

TEST_CASE("isotropic gaussian target") {
    TargetSpec t = gaussian_target(3, 2.0);
    CHECK(t.d == 3);
    CHECK(t.m == doctest::Approx(0.5));
    CHECK(t.L == doctest::Approx(0.5));
    CHECK(t.kappa() == doctest::Approx(1.0));
    Vec x{1.0, -2.0, 0.5};
    CHECK(t.potential(x) == doctest::Approx(0.25 * (1.0 + 4.0 + 0.25)));
    check_gradient(t, x, 1e-6);
    CHECK(t.potential(t.mode) == 0.0);

    RngStream rng(5);
    double s2 = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) s2 += norm_sq(t.exact_sampler(rng));
    CHECK(s2 / n / 3.0 == doctest::Approx(2.0).epsilon(0.03));

    CHECK_THROWS_AS(gaussian_target(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_target(2, 0.0), std::invalid_argument);
}

TEST_CASE("diagonal gaussian target") {
    TargetSpec t = diagonal_gaussian_target({0.5, 2.0});
    CHECK(t.m == doctest::Approx(0.5));
    CHECK(t.L == doctest::Approx(2.0));
    CHECK(t.kappa() == doctest::Approx(4.0));
    Vec x{1.0, 1.0};
    CHECK(t.potential(x) == doctest::Approx(0.5 * (2.0 + 0.5)));
    check_gradient(t, x, 1e-6);
    CHECK(check_smooth_convex(t, 500, 3.0, 11).pass);
    CHECK_THROWS_AS(diagonal_gaussian_target({1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(diagonal_gaussian_target({}), std::invalid_argument);
}

TEST_CASE("power iteration largest eigenvalue") {
    CHECK(lambda_max_aat({{1.0, 0.0}, {0.0, 2.0}}, 2) == doctest::Approx(4.0).epsilon(1e-9));
    // Rank-one rows: A = [1 1; 1 1], A A^T has eigenvalue 4.
    CHECK(lambda_max_aat({{1.0, 1.0}, {1.0, 1.0}}, 2) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(lambda_max_aat({}, 3) == 0.0);
}

TEST_CASE("logistic posterior target") {
    std::vector<Vec> a{{1.0, 0.5}, {-0.3, 1.2}, {0.8, -0.7}, {-1.1, -0.2}};
    std::vector<int> y{1, 0, 1, 0};
    TargetSpec t = logistic_posterior_target(a, y, 4.0);
    CHECK(t.d == 2);
    CHECK(t.m == doctest::Approx(0.25));
    CHECK(t.L == doctest::Approx(0.25 + 0.25 * lambda_max_aat(a, 2)));
    CHECK(t.L > t.m);
    Vec x{0.3, -0.4};
    check_gradient(t, x, 1e-5);
    // Mode is a stationary point with lower potential than nearby points.
    CHECK(norm(t.gradient(t.mode)) <= 1e-9);
    Vec off = t.mode;
    off[0] += 0.1;
    CHECK(t.potential(t.mode) < t.potential(off));
    CHECK(check_smooth_convex(t, 500, 2.0, 77).pass);

    CHECK_THROWS_AS(logistic_posterior_target(a, {1, 0, 2, 0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(logistic_posterior_target({}, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(logistic_posterior_target(a, {1, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("smoothness check flags a non-smooth potential") {
    TargetSpec t = gaussian_target(1, 1.0);
    t.L = 0.5;  // deliberately too small: violates the smoothness side
    CHECK_FALSE(check_smooth_convex(t, 200, 2.0, 3).pass);
}

TEST_CASE("pcn target construction") {
    auto psi = [](const Vec& x) { return 0.25 * norm_sq(x); };
    auto grad = [](const Vec& x) {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 0.5 * x[i];
        return g;
    };
    PcnTarget t = make_pcn_target(Vec{1.0, 4.0}, psi, grad, 0.5);
    CHECK(t.trace_c == doctest::Approx(5.0));
    Vec y = t.chol_mul({1.0, 1.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(2.0));

    Matrix cov(2);
    cov(0, 0) = 2.0;
    cov(0, 1) = cov(1, 0) = 1.0;
    cov(1, 1) = 2.0;
    PcnTarget td = make_pcn_target(cov, psi, grad, 0.5);
    CHECK(td.trace_c == doctest::Approx(4.0));
    // chol(C) chol(C)^T xi reproduces C xi.
    Vec z = td.chol_mul({1.0, 0.0});
    Vec z2 = td.chol_mul({0.0, 1.0});
    CHECK(z[0] * z[0] + z2[0] * z2[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(z[0] * z[1] + z2[0] * z2[1] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_pcn_target(Vec{1.0, 0.0}, psi, grad, 0.5), std::invalid_argument);
}

TEST_CASE("cholesky rejects non-spd input") {
    Matrix bad(2);
    bad(0, 0) = 1.0;
    bad(0, 1) = bad(1, 0) = 3.0;
    bad(1, 1) = 1.0;
    CHECK_THROWS_AS(cholesky(bad), std::invalid_argument);
}
