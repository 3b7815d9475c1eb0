#pragma once

#include <functional>
#include <string>

#include "mixbound/linalg.hpp"
#include "mixbound/rng.hpp"

namespace mixbound {

// A target density pi(x) ~ exp(-U(x)) with m-strongly-convex, L-smooth U.
struct TargetSpec {
    int d = 0;
    std::function<double(const Vec&)> potential;
    std::function<Vec(const Vec&)> gradient;
    double m = 0.0;
    double L = 0.0;
    Vec mode;
    std::function<Vec(RngStream&)> exact_sampler;  // may be empty

    double kappa() const { return L / m; }
};

// Gaussian-reference target for pCN: pi ~ exp(-Psi(x)) N(0, C).
struct PcnTarget {
    int d = 0;
    bool diagonal = false;
    Vec cov_diag;        // populated when diagonal
    Matrix cov;          // populated when dense
    Matrix cov_chol;     // lower factor (dense path)
    std::function<double(const Vec&)> psi;
    std::function<Vec(const Vec&)> psi_grad;
    double L_psi = 0.0;
    double trace_c = 0.0;

    // y = chol(C) * xi
    Vec chol_mul(const Vec& xi) const;
};

TargetSpec gaussian_target(int d, double sigma0_sq);

// Anisotropic diagonal Gaussian with per-coordinate variances;
// m = 1/max(var), L = 1/min(var).
TargetSpec diagonal_gaussian_target(const Vec& variances);

// Bayesian logistic regression posterior:
// U(x) = |x|^2/(2 sigma0^2) + sum_i log(1+exp(-<a_i,x>)) - y_i <a_i,x>.
TargetSpec logistic_posterior_target(const std::vector<Vec>& covariates,
                                     const std::vector<int>& responses,
                                     double sigma0_sq);

PcnTarget make_pcn_target(const Vec& cov_diag,
                          std::function<double(const Vec&)> psi,
                          std::function<Vec(const Vec&)> psi_grad, double L_psi);
PcnTarget make_pcn_target(const Matrix& cov,
                          std::function<double(const Vec&)> psi,
                          std::function<Vec(const Vec&)> psi_grad, double L_psi);

struct SmoothConvexReport {
    double max_lower_violation = 0.0;  // strong-convexity side
    double max_upper_violation = 0.0;  // smoothness side
    bool pass = true;
};

// Samples pairs (x, h) with |x|,|h| <= radius and checks
// (m/2)|h|^2 <= U(x+h) - U(x) - <grad U(x), h> <= (L/2)|h|^2.
SmoothConvexReport check_smooth_convex(const TargetSpec& target, int n_samples,
                                       double radius, std::uint64_t seed);

// Largest eigenvalue of A A^T by power iteration (relative tolerance 1e-10).
double lambda_max_aat(const std::vector<Vec>& rows, int d);

}  // namespace mixbound
