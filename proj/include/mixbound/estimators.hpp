#pragma once

#include <cstdint>
#include <vector>

#include "mixbound/samplers.hpp"
#include "mixbound/targets.hpp"

namespace mixbound {

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    long long n = 0;
};

// Estimates the Rayleigh quotient E(P, f) / Var_pi(f) from n independent pairs
// (X ~ pi, Y ~ P(X, .)); the standard error is a delete-block jackknife.
// Requires an exact sampler on the target.
EstimateWithError rayleigh_quotient(const TargetSpec& target, const KernelConfig& config,
                                    const Functional& f, long long n, std::uint64_t seed);

// Estimates (pi x P)(A x A^c) / pi(A) for the half-space
// A = {x : <direction, x> >= offset}.
EstimateWithError halfspace_flow(const TargetSpec& target, const KernelConfig& config,
                                 const Vec& direction, double offset, long long n,
                                 std::uint64_t seed);

enum class ScanMetric { gap, flow, acceptance };

struct ScanRow {
    int d = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    double slope = 0.0;     // least-squares slope of log(estimate) vs log(d)
    double slope_se = 0.0;
};

// Runs the chosen estimator on unit Gaussian targets at each dimension with
// sigma = varsigma / sqrt(L d); dimensions fan out over a pool of `jobs`
// worker threads with per-dimension seeds, so results match the serial run.
ScanResult dimension_scan(const std::vector<int>& dims, double varsigma,
                          ScanMetric metric, long long n_per_dim, std::uint64_t seed,
                          int jobs = 1);

// chi^2(N(mean1, diag var1), N(mean2, diag var2)); +infinity when some
// coordinate has 2 var2 <= var1.
double chi2_gaussian_diag(const Vec& mean1, const Vec& var1, const Vec& mean2,
                          const Vec& var2);

}  // namespace mixbound
