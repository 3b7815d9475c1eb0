#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixbound/bounds.hpp"
#include "mixbound/estimators.hpp"
#include "mixbound/quadrature.hpp"

using namespace mixbound;

TEST_CASE("rayleigh quotient brackets the gaussian gap") {
    TargetSpec t = gaussian_target(4, 1.0);
    KernelConfig kc = KernelConfig::rwm_varsigma(1.0, t.L, t.d);
    auto f = [](const Vec& x) { return x[0]; };
    EstimateWithError e = rayleigh_quotient(t, kc, f, 40000, 5);
    CHECK(e.n == 40000);
    CHECK(e.std_error > 0.0);
    RwmLowerBounds lo = rwm_lower_bounds(t.m, t.L, t.d, 1.0);
    double hi = 0.5 * t.L * kc.sigma * kc.sigma;
    CHECK(e.value >= lo.gap_lower - 3.0 * e.std_error);
    CHECK(e.value <= hi + 3.0 * e.std_error);
    // Deterministic given the seed.
    EstimateWithError e2 = rayleigh_quotient(t, kc, f, 40000, 5);
    CHECK(e.value == e2.value);
    CHECK(e.std_error == e2.std_error);
}

TEST_CASE("rayleigh quotient rejects degenerate functionals") {
    TargetSpec t = gaussian_target(2, 1.0);
    KernelConfig kc = KernelConfig::rwm_varsigma(1.0, t.L, t.d);
    CHECK_THROWS_AS(rayleigh_quotient(t, kc, [](const Vec&) { return 1.0; }, 2000, 1),
                    std::invalid_argument);
    TargetSpec nos = t;
    nos.exact_sampler = nullptr;
    CHECK_THROWS_AS(rayleigh_quotient(nos, kc, [](const Vec& x) { return x[0]; }, 2000, 1),
                    std::invalid_argument);
}

TEST_CASE("halfspace flow brackets the conductance") {
    TargetSpec t = gaussian_target(4, 1.0);
    KernelConfig kc = KernelConfig::rwm_varsigma(1.0, t.L, t.d);
    Vec e1{1.0, 0.0, 0.0, 0.0};
    EstimateWithError e = halfspace_flow(t, kc, e1, 0.0, 40000, 6);
    RwmLowerBounds lo = rwm_lower_bounds(t.m, t.L, t.d, 1.0);
    CHECK(e.value >= lo.phi_star_lower - 3.0 * e.std_error);
    CHECK(e.value <= 2.0 * std::sqrt(t.L) * kc.sigma + 3.0 * e.std_error);
    // A far-away half-space is never entered at this sample size.
    CHECK_THROWS_AS(halfspace_flow(t, kc, e1, 50.0, 2000, 6), std::runtime_error);
}

TEST_CASE("dimension scan slopes and bounds") {
    ScanResult gap = dimension_scan({2, 4, 8, 16}, 1.0, ScanMetric::gap, 20000, 11);
    CHECK(gap.rows.size() == 4);
    for (const ScanRow& r : gap.rows) {
        CHECK(r.estimate >= r.lower_bound - 3.0 * r.std_error);
        CHECK(r.estimate <= r.upper_bound + 3.0 * r.std_error);
    }
    CHECK(std::fabs(gap.slope + 1.0) <= 0.2);

    ScanResult acc = dimension_scan({2, 4, 8, 16}, 1.0, ScanMetric::acceptance, 20000, 12);
    CHECK(std::fabs(acc.slope) <= 0.06);
    CHECK_THROWS_AS(dimension_scan({4}, 1.0, ScanMetric::gap, 1000, 1), std::invalid_argument);
}

TEST_CASE("dimension scan is identical across worker counts") {
    ScanResult serial = dimension_scan({2, 4, 8}, 1.0, ScanMetric::flow, 5000, 21, 1);
    ScanResult parallel = dimension_scan({2, 4, 8}, 1.0, ScanMetric::flow, 5000, 21, 3);
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].estimate == parallel.rows[i].estimate);
        CHECK(serial.rows[i].std_error == parallel.rows[i].std_error);
    }
    CHECK(serial.slope == parallel.slope);
}

TEST_CASE("chi squared between diagonal gaussians") {
    // d = 1, N(0, 1/2) against N(0, 1).
    CHECK(chi2_gaussian_diag({0.0}, {0.5}, {0.0}, {1.0}) ==
          doctest::Approx(0.15470053837925153).epsilon(1e-12));
    // Identical distributions.
    CHECK(chi2_gaussian_diag({0.3}, {2.0}, {0.3}, {2.0}) == doctest::Approx(0.0).epsilon(1e-14));
    // Tensorization: (1 + chi2_d) = (1 + chi2_1)^d for iid coordinates.
    double c1 = chi2_gaussian_diag({0.1}, {0.5}, {0.0}, {1.0});
    double c3 = chi2_gaussian_diag({0.1, 0.1, 0.1}, {0.5, 0.5, 0.5}, {0.0, 0.0, 0.0},
                                   {1.0, 1.0, 1.0});
    CHECK(1.0 + c3 == doctest::Approx(std::pow(1.0 + c1, 3)).epsilon(1e-12));
    // Heavy first argument: infinite divergence.
    CHECK(std::isinf(chi2_gaussian_diag({0.0}, {2.0}, {0.0}, {1.0})));
    CHECK_THROWS_AS(chi2_gaussian_diag({0.0}, {1.0, 1.0}, {0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(chi2_gaussian_diag({0.0}, {-1.0}, {0.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("chi squared closed form matches quadrature in one dimension") {
    double m1 = 0.2, v1 = 0.6, m2 = -0.1, v2 = 1.3;
    auto ratio_sq_times_pi = [&](double x) {
        double mu = std::exp(-0.5 * (x - m1) * (x - m1) / v1) / std::sqrt(2.0 * M_PI * v1);
        double pi = std::exp(-0.5 * (x - m2) * (x - m2) / v2) / std::sqrt(2.0 * M_PI * v2);
        return mu * mu / pi;
    };
    double integral = adaptive_quadrature(ratio_sq_times_pi, -20.0, 20.0, 1e-10);
    CHECK(chi2_gaussian_diag({m1}, {v1}, {m2}, {v2}) ==
          doctest::Approx(integral - 1.0).epsilon(1e-8));
}
