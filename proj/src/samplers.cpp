#include "mixbound/samplers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mixbound {

KernelConfig KernelConfig::rwm_sigma(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("KernelConfig: sigma must be > 0");
    KernelConfig c;
    c.kind = Kind::rwm;
    c.sigma = sigma;
    return c;
}

KernelConfig KernelConfig::rwm_varsigma(double varsigma, double L, int d) {
    if (!(varsigma > 0.0 && L > 0.0 && d >= 1)) {
        throw std::invalid_argument("KernelConfig: invalid varsigma parameterization");
    }
    KernelConfig c;
    c.kind = Kind::rwm;
    c.varsigma = varsigma;
    c.sigma = varsigma / std::sqrt(L * d);
    return c;
}

KernelConfig KernelConfig::pcn_rho(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("KernelConfig: rho must lie in (0,1)");
    KernelConfig c;
    c.kind = Kind::pcn;
    c.rho = rho;
    c.eta = std::sqrt(1.0 - rho * rho);
    return c;
}

KernelConfig KernelConfig::pcn_varsigma(double varsigma, double L, double trace_c) {
    double kt = L * trace_c;
    if (!(varsigma > 0.0 && varsigma * varsigma < kt)) {
        throw std::invalid_argument("KernelConfig: need 0 < varsigma < (L Tr C)^{1/2}");
    }
    KernelConfig c;
    c.kind = Kind::pcn;
    c.varsigma = varsigma;
    c.eta = varsigma / std::sqrt(kt);
    c.rho = std::sqrt(1.0 - c.eta * c.eta);
    return c;
}

void ChainStats::merge(const ChainStats& next) {
    n_steps += next.n_steps;
    n_accepted += next.n_accepted;
    n_nonfinite += next.n_nonfinite;
    final_state = next.final_state;
    for (std::size_t k = 0; k < functionals.size(); ++k) {
        FunctionalStats& a = functionals[k];
        const FunctionalStats& b = next.functionals[k];
        // b's initial state duplicates a's final state.
        a.sum_f += b.sum_f - b.f_init;
        a.sum_f_sq += b.sum_f_sq - b.f_init * b.f_init;
        a.sum_lag1 += b.sum_lag1;
        a.sum_sq_inc += b.sum_sq_inc;
        a.f_final = b.f_final;
    }
}

namespace {

// Log-space acceptance test shared by both kernels.
bool accept(double log_ratio, RngStream& rand) {
    double log_u = std::log(rand.next_uniform());
    return log_u <= std::min(0.0, log_ratio);
}

}  // namespace

StepResult rwm_step(const Vec& x, const TargetSpec& target, double sigma, RngStream& rand) {
    if (!(sigma > 0.0)) throw std::invalid_argument("rwm_step: sigma must be > 0");
    Vec y(target.d);
    for (int i = 0; i < target.d; ++i) y[i] = x[i] + sigma * rand.next_normal();
    double uy = target.potential(y);
    StepResult r;
    if (!std::isfinite(uy)) {
        r.x = x;
        r.nonfinite = true;
        r.log_ratio = -std::numeric_limits<double>::infinity();
        return r;
    }
    r.log_ratio = target.potential(x) - uy;
    if (accept(r.log_ratio, rand)) {
        r.x = std::move(y);
        r.accepted = true;
    } else {
        r.x = x;
    }
    return r;
}

StepResult pcn_step(const Vec& x, const PcnTarget& target, double rho, RngStream& rand) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("pcn_step: rho must lie in (0,1)");
    double eta = std::sqrt(1.0 - rho * rho);
    Vec xi(target.d);
    for (int i = 0; i < target.d; ++i) xi[i] = rand.next_normal();
    Vec noise = target.chol_mul(xi);
    Vec w(target.d);
    for (int i = 0; i < target.d; ++i) w[i] = rho * x[i] + eta * noise[i];
    double pw = target.psi(w);
    StepResult r;
    if (!std::isfinite(pw)) {
        r.x = x;
        r.nonfinite = true;
        r.log_ratio = -std::numeric_limits<double>::infinity();
        return r;
    }
    r.log_ratio = target.psi(x) - pw;
    if (accept(r.log_ratio, rand)) {
        r.x = std::move(w);
        r.accepted = true;
    } else {
        r.x = x;
    }
    return r;
}

namespace {

template <typename Target, typename StepFn>
ChainStats run_chain_impl(const Target& target, Vec init, long long n,
                          std::uint64_t seed, const std::vector<Functional>& functionals,
                          long long step_offset, const StepFn& step) {
    if (n < 1) throw std::invalid_argument("run_chain: n must be >= 1");
    ChainStats stats;
    stats.seed = seed;
    stats.functionals.resize(functionals.size());
    Vec x = std::move(init);
    std::vector<double> fx(functionals.size());
    for (std::size_t k = 0; k < functionals.size(); ++k) {
        fx[k] = functionals[k](x);
        stats.functionals[k].f_init = fx[k];
        stats.functionals[k].sum_f = fx[k];
        stats.functionals[k].sum_f_sq = fx[k] * fx[k];
    }
    RngStream master(seed);
    for (long long i = 0; i < n; ++i) {
        RngStream sub = master.split(static_cast<std::uint64_t>(step_offset + i));
        StepResult r = step(x, target, sub);
        x = std::move(r.x);
        stats.n_steps += 1;
        if (r.accepted) stats.n_accepted += 1;
        if (r.nonfinite) stats.n_nonfinite += 1;
        for (std::size_t k = 0; k < functionals.size(); ++k) {
            double fy = functionals[k](x);
            FunctionalStats& fs = stats.functionals[k];
            fs.sum_f += fy;
            fs.sum_f_sq += fy * fy;
            fs.sum_lag1 += fx[k] * fy;
            double inc = fy - fx[k];
            fs.sum_sq_inc += inc * inc;
            fx[k] = fy;
        }
    }
    for (std::size_t k = 0; k < functionals.size(); ++k) {
        stats.functionals[k].f_final = fx[k];
    }
    stats.final_state = std::move(x);
    return stats;
}

}  // namespace

ChainStats run_chain(const KernelConfig& config, const TargetSpec& target, Vec init,
                     long long n, std::uint64_t seed,
                     const std::vector<Functional>& functionals, long long step_offset) {
    if (config.kind != KernelConfig::Kind::rwm) {
        throw std::invalid_argument("run_chain: rwm kernel required for TargetSpec");
    }
    double sigma = config.sigma;
    return run_chain_impl(target, std::move(init), n, seed, functionals, step_offset,
                          [sigma](const Vec& x, const TargetSpec& t, RngStream& rng) {
                              return rwm_step(x, t, sigma, rng);
                          });
}

ChainStats run_chain(const KernelConfig& config, const PcnTarget& target, Vec init,
                     long long n, std::uint64_t seed,
                     const std::vector<Functional>& functionals, long long step_offset) {
    if (config.kind != KernelConfig::Kind::pcn) {
        throw std::invalid_argument("run_chain: pcn kernel required for PcnTarget");
    }
    double rho = config.rho;
    return run_chain_impl(target, std::move(init), n, seed, functionals, step_offset,
                          [rho](const Vec& x, const PcnTarget& t, RngStream& rng) {
                              return pcn_step(x, t, rho, rng);
                          });
}

AcceptedProposal accepted_proposal_init(const Vec& x0, const TargetSpec& target,
                                        double sigma, RngStream& rand) {
    if (!(sigma > 0.0)) throw std::invalid_argument("accepted_proposal_init: sigma must be > 0");
    double ux = target.potential(x0);
    AcceptedProposal out;
    constexpr long long kTrialCap = 1000000;
    while (out.trials < kTrialCap) {
        ++out.trials;
        Vec y(target.d);
        for (int i = 0; i < target.d; ++i) y[i] = x0[i] + sigma * rand.next_normal();
        double uy = target.potential(y);
        if (!std::isfinite(uy)) continue;
        if (accept(ux - uy, rand)) {
            out.x = std::move(y);
            return out;
        }
    }
    throw std::runtime_error("accepted_proposal_init: trial cap exceeded (acceptance at x0 is ~0)");
}

Vec gaussian_sample(const Vec& mean, double sigma_sq, RngStream& rand) {
    if (!(sigma_sq >= 0.0)) throw std::invalid_argument("gaussian_sample: negative variance");
    double sd = std::sqrt(sigma_sq);
    Vec x(mean.size());
    for (std::size_t i = 0; i < mean.size(); ++i) x[i] = mean[i] + sd * rand.next_normal();
    return x;
}

Vec gaussian_sample(const Vec& mean, const Matrix& chol, RngStream& rand) {
    std::size_t d = mean.size();
    Vec z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = rand.next_normal();
    Vec x = mean;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) x[i] += chol(i, j) * z[j];
    return x;
}

}  // namespace mixbound
