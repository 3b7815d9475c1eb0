#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mixbound/linalg.hpp"
#include "mixbound/rng.hpp"
#include "mixbound/targets.hpp"

namespace mixbound {

struct KernelConfig {
    enum class Kind { rwm, pcn };
    Kind kind = Kind::rwm;
    double sigma = 0.0;     // rwm step size (0 when derived from varsigma)
    double rho = 0.0;       // pcn autoregression coefficient
    double eta = 0.0;       // pcn step size, rho^2 + eta^2 = 1
    double varsigma = 0.0;  // optional; derives sigma or eta

    static KernelConfig rwm_sigma(double sigma);
    static KernelConfig rwm_varsigma(double varsigma, double L, int d);
    static KernelConfig pcn_rho(double rho);
    static KernelConfig pcn_varsigma(double varsigma, double L, double trace_c);
};

struct StepResult {
    Vec x;
    bool accepted = false;
    double log_ratio = 0.0;
    bool nonfinite = false;
};

struct FunctionalStats {
    double sum_f = 0.0;       // over all n+1 visited states
    double sum_f_sq = 0.0;
    double sum_lag1 = 0.0;    // sum of f(X_i) f(X_{i+1})
    double sum_sq_inc = 0.0;  // sum of (f(X_{i+1}) - f(X_i))^2
    double f_init = 0.0;
    double f_final = 0.0;
};

struct ChainStats {
    long long n_steps = 0;
    long long n_accepted = 0;
    long long n_nonfinite = 0;
    std::uint64_t seed = 0;
    Vec final_state;
    std::vector<FunctionalStats> functionals;

    double acceptance_rate() const {
        return n_steps > 0 ? static_cast<double>(n_accepted) / n_steps : 0.0;
    }
    // Append stats of a continuation run (whose init was this run's final
    // state); the shared boundary state is counted once.
    void merge(const ChainStats& next);
};

StepResult rwm_step(const Vec& x, const TargetSpec& target, double sigma, RngStream& rand);
StepResult pcn_step(const Vec& x, const PcnTarget& target, double rho, RngStream& rand);

using Functional = std::function<double(const Vec&)>;

// Runs n steps from init.  Step i draws from an independent substream keyed by
// step_offset + i, so a run of n1+n2 steps coincides with a run of n1 steps
// followed by one of n2 steps at step_offset = n1.
ChainStats run_chain(const KernelConfig& config, const TargetSpec& target, Vec init,
                     long long n, std::uint64_t seed,
                     const std::vector<Functional>& functionals = {},
                     long long step_offset = 0);
ChainStats run_chain(const KernelConfig& config, const PcnTarget& target, Vec init,
                     long long n, std::uint64_t seed,
                     const std::vector<Functional>& functionals = {},
                     long long step_offset = 0);

struct AcceptedProposal {
    Vec x;
    long long trials = 0;
};

// Proposes from x0 until one proposal passes the acceptance test; the result
// is a draw from the accepted-proposal kernel at x0.
AcceptedProposal accepted_proposal_init(const Vec& x0, const TargetSpec& target,
                                        double sigma, RngStream& rand);

Vec gaussian_sample(const Vec& mean, double sigma_sq, RngStream& rand);
Vec gaussian_sample(const Vec& mean, const Matrix& chol, RngStream& rand);

}  // namespace mixbound
