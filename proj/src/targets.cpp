#include "mixbound/targets.hpp"

#include <cmath>
#include <stdexcept>

namespace mixbound {

Vec PcnTarget::chol_mul(const Vec& xi) const {
    if (diagonal) {
        Vec y(d);
        for (int i = 0; i < d; ++i) y[i] = std::sqrt(cov_diag[i]) * xi[i];
        return y;
    }
    Vec y(d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) y[i] += cov_chol(i, j) * xi[j];
    return y;
}

TargetSpec gaussian_target(int d, double sigma0_sq) {
    if (d < 1) throw std::invalid_argument("gaussian_target: d must be >= 1");
    if (!(sigma0_sq > 0.0)) throw std::invalid_argument("gaussian_target: sigma0_sq must be > 0");
    TargetSpec t;
    t.d = d;
    double prec = 1.0 / sigma0_sq;
    t.potential = [prec](const Vec& x) { return 0.5 * prec * norm_sq(x); };
    t.gradient = [prec, d](const Vec& x) {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = prec * x[i];
        return g;
    };
    t.m = prec;
    t.L = prec;
    t.mode = Vec(d, 0.0);
    double sigma0 = std::sqrt(sigma0_sq);
    t.exact_sampler = [d, sigma0](RngStream& rng) {
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = sigma0 * rng.next_normal();
        return x;
    };
    return t;
}

TargetSpec diagonal_gaussian_target(const Vec& variances) {
    int d = static_cast<int>(variances.size());
    if (d < 1) throw std::invalid_argument("diagonal_gaussian_target: empty variance vector");
    for (double v : variances) {
        if (!(v > 0.0)) throw std::invalid_argument("diagonal_gaussian_target: variances must be > 0");
    }
    TargetSpec t;
    t.d = d;
    Vec prec(d);
    double vmin = variances[0], vmax = variances[0];
    for (int i = 0; i < d; ++i) {
        prec[i] = 1.0 / variances[i];
        vmin = std::min(vmin, variances[i]);
        vmax = std::max(vmax, variances[i]);
    }
    t.potential = [prec, d](const Vec& x) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += prec[i] * x[i] * x[i];
        return 0.5 * s;
    };
    t.gradient = [prec, d](const Vec& x) {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = prec[i] * x[i];
        return g;
    };
    t.m = 1.0 / vmax;
    t.L = 1.0 / vmin;
    t.mode = Vec(d, 0.0);
    Vec sd(d);
    for (int i = 0; i < d; ++i) sd[i] = std::sqrt(variances[i]);
    t.exact_sampler = [d, sd](RngStream& rng) {
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = sd[i] * rng.next_normal();
        return x;
    };
    return t;
}

double lambda_max_aat(const std::vector<Vec>& rows, int d) {
    if (rows.empty()) return 0.0;
    // Power iteration on A^T A (same nonzero spectrum as A A^T).
    Vec v(d, 0.0);
    RngStream rng(0x5ca1ab1e);
    for (int i = 0; i < d; ++i) v[i] = rng.next_normal();
    double nv = norm(v);
    for (int i = 0; i < d; ++i) v[i] /= nv;
    double lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
        Vec w(d, 0.0);
        for (const Vec& a : rows) {
            double av = dot(a, v);
            for (int i = 0; i < d; ++i) w[i] += av * a[i];
        }
        double nw = norm(w);
        if (nw == 0.0) return 0.0;
        double next = nw;  // Rayleigh quotient since |v| = 1
        for (int i = 0; i < d; ++i) v[i] = w[i] / nw;
        if (iter > 0 && std::fabs(next - lambda) <= 1e-10 * next) return next;
        lambda = next;
    }
    return lambda;
}

TargetSpec logistic_posterior_target(const std::vector<Vec>& covariates,
                                     const std::vector<int>& responses,
                                     double sigma0_sq) {
    if (!(sigma0_sq > 0.0)) throw std::invalid_argument("logistic_posterior_target: sigma0_sq must be > 0");
    if (covariates.size() != responses.size()) {
        throw std::invalid_argument("logistic_posterior_target: covariate/response size mismatch");
    }
    for (int y : responses) {
        if (y != 0 && y != 1) throw std::invalid_argument("logistic_posterior_target: responses must be 0/1");
    }
    if (covariates.empty()) {
        throw std::invalid_argument("logistic_posterior_target: dimension unknown without data");
    }
    int d = static_cast<int>(covariates[0].size());
    for (const Vec& a : covariates) {
        if (static_cast<int>(a.size()) != d) {
            throw std::invalid_argument("logistic_posterior_target: ragged covariate rows");
        }
        for (double v : a) {
            if (!std::isfinite(v)) throw std::invalid_argument("logistic_posterior_target: non-finite covariate");
        }
    }

    double prec = 1.0 / sigma0_sq;
    auto a_rows = covariates;
    auto y = responses;
    TargetSpec t;
    t.d = d;
    t.potential = [prec, a_rows, y](const Vec& x) {
        double u = 0.5 * prec * norm_sq(x);
        for (std::size_t i = 0; i < a_rows.size(); ++i) {
            double s = dot(a_rows[i], x);
            // log(1 + exp(-s)) evaluated stably
            double l = s > 0.0 ? std::log1p(std::exp(-s)) : -s + std::log1p(std::exp(s));
            u += l - y[i] * s;
        }
        return u;
    };
    t.gradient = [prec, a_rows, y, d](const Vec& x) {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = prec * x[i];
        for (std::size_t i = 0; i < a_rows.size(); ++i) {
            double s = dot(a_rows[i], x);
            double sig = 1.0 / (1.0 + std::exp(-s));
            double w = sig - 1.0 - y[i];  // d/ds [log(1+e^{-s}) - y s]
            for (int j = 0; j < d; ++j) g[j] += w * a_rows[i][j];
        }
        return g;
    };
    t.m = prec;
    t.L = prec + 0.25 * lambda_max_aat(a_rows, d);

    // Damped Newton with backtracking for the mode.
    Vec x(d, 0.0);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        Vec g = t.gradient(x);
        if (norm(g) <= 1e-10) {
            converged = true;
            break;
        }
        Matrix h(d);
        for (int i = 0; i < d; ++i) h(i, i) = prec;
        for (std::size_t i = 0; i < a_rows.size(); ++i) {
            double s = dot(a_rows[i], x);
            double sig = 1.0 / (1.0 + std::exp(-s));
            double w = sig * (1.0 - sig);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) h(r, c) += w * a_rows[i][r] * a_rows[i][c];
        }
        Vec step = cholesky_solve(cholesky(h), g);
        double u0 = t.potential(x);
        double alpha = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
            Vec xn(d);
            for (int i = 0; i < d; ++i) xn[i] = x[i] - alpha * step[i];
            if (t.potential(xn) < u0) {
                x = xn;
                break;
            }
            alpha *= 0.5;
        }
    }
    if (!converged && norm(t.gradient(x)) > 1e-10) {
        throw std::runtime_error("logistic_posterior_target: Newton failed to reach gradient tolerance");
    }
    t.mode = x;
    return t;
}

PcnTarget make_pcn_target(const Vec& cov_diag, std::function<double(const Vec&)> psi,
                          std::function<Vec(const Vec&)> psi_grad, double L_psi) {
    PcnTarget t;
    t.d = static_cast<int>(cov_diag.size());
    for (double v : cov_diag) {
        if (!(v > 0.0)) throw std::invalid_argument("make_pcn_target: covariance diagonal must be > 0");
    }
    t.diagonal = true;
    t.cov_diag = cov_diag;
    t.psi = std::move(psi);
    t.psi_grad = std::move(psi_grad);
    t.L_psi = L_psi;
    for (double v : cov_diag) t.trace_c += v;
    return t;
}

PcnTarget make_pcn_target(const Matrix& cov, std::function<double(const Vec&)> psi,
                          std::function<Vec(const Vec&)> psi_grad, double L_psi) {
    PcnTarget t;
    t.d = static_cast<int>(cov.size());
    t.diagonal = false;
    t.cov = cov;
    t.cov_chol = cholesky(cov);
    t.psi = std::move(psi);
    t.psi_grad = std::move(psi_grad);
    t.L_psi = L_psi;
    for (int i = 0; i < t.d; ++i) t.trace_c += cov(i, i);
    return t;
}

SmoothConvexReport check_smooth_convex(const TargetSpec& target, int n_samples,
                                       double radius, std::uint64_t seed) {
    SmoothConvexReport rep;
    RngStream rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        Vec x(target.d), h(target.d);
        for (int i = 0; i < target.d; ++i) x[i] = radius * (2.0 * rng.next_uniform() - 1.0);
        for (int i = 0; i < target.d; ++i) h[i] = radius * (2.0 * rng.next_uniform() - 1.0);
        Vec xh(target.d);
        for (int i = 0; i < target.d; ++i) xh[i] = x[i] + h[i];
        double ux = target.potential(x);
        double gain = target.potential(xh) - ux - dot(target.gradient(x), h);
        double h2 = norm_sq(h);
        double tol = 1e-8 * (1.0 + std::fabs(ux));
        double lower_violation = 0.5 * target.m * h2 - gain;  // >0 breaks convexity side
        double upper_violation = gain - 0.5 * target.L * h2;  // >0 breaks smoothness side
        rep.max_lower_violation = std::max(rep.max_lower_violation, lower_violation);
        rep.max_upper_violation = std::max(rep.max_upper_violation, upper_violation);
        if (lower_violation > tol || upper_violation > tol) rep.pass = false;
    }
    return rep;
}

}  // namespace mixbound
