#include "mixbound/estimators.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mixbound/bounds.hpp"

namespace mixbound {

namespace {

constexpr int kJackknifeBlocks = 100;

struct PairSums {
    double num = 0.0;     // numerator statistic
    double f1 = 0.0;      // sum f(X)
    double f2 = 0.0;      // sum f(X)^2
    long long count = 0;
};

// Delete-block jackknife of a ratio-type estimator defined on block sums.
template <typename Estimate>
EstimateWithError jackknife(const std::vector<PairSums>& blocks, const Estimate& est) {
    PairSums total;
    for (const PairSums& b : blocks) {
        total.num += b.num;
        total.f1 += b.f1;
        total.f2 += b.f2;
        total.count += b.count;
    }
    EstimateWithError out;
    out.n = total.count;
    out.value = est(total);
    std::vector<double> loo;
    loo.reserve(blocks.size());
    for (const PairSums& b : blocks) {
        if (b.count == total.count) continue;
        PairSums rest{total.num - b.num, total.f1 - b.f1, total.f2 - b.f2,
                      total.count - b.count};
        loo.push_back(est(rest));
    }
    if (loo.size() > 1) {
        double mean = 0.0;
        for (double v : loo) mean += v;
        mean /= loo.size();
        double ss = 0.0;
        for (double v : loo) ss += (v - mean) * (v - mean);
        double nb = static_cast<double>(loo.size());
        out.std_error = std::sqrt((nb - 1.0) / nb * ss);
    }
    return out;
}

StepResult kernel_step(const KernelConfig& config, const TargetSpec& target,
                       const Vec& x, RngStream& rng) {
    return rwm_step(x, target, config.sigma, rng);
}

}  // namespace

EstimateWithError rayleigh_quotient(const TargetSpec& target, const KernelConfig& config,
                                    const Functional& f, long long n, std::uint64_t seed) {
    if (!target.exact_sampler) {
        throw std::invalid_argument("rayleigh_quotient: target lacks an exact sampler");
    }
    std::vector<PairSums> blocks(kJackknifeBlocks);
    RngStream master(seed);
    for (long long i = 0; i < n; ++i) {
        RngStream sub = master.split(static_cast<std::uint64_t>(i));
        Vec x = target.exact_sampler(sub);
        double fx = f(x);
        StepResult r = kernel_step(config, target, x, sub);
        double fy = f(r.x);
        PairSums& b = blocks[i % kJackknifeBlocks];
        double inc = fy - fx;
        b.num += 0.5 * inc * inc;
        b.f1 += fx;
        b.f2 += fx * fx;
        b.count += 1;
    }
    auto est = [](const PairSums& s) {
        double mean_f = s.f1 / s.count;
        double var_f = s.f2 / s.count - mean_f * mean_f;
        if (!(var_f > 1e-14)) {
            throw std::invalid_argument("rayleigh_quotient: degenerate functional");
        }
        return (s.num / s.count) / var_f;
    };
    return jackknife(blocks, est);
}

EstimateWithError halfspace_flow(const TargetSpec& target, const KernelConfig& config,
                                 const Vec& direction, double offset, long long n,
                                 std::uint64_t seed) {
    if (!target.exact_sampler) {
        throw std::invalid_argument("halfspace_flow: target lacks an exact sampler");
    }
    std::vector<PairSums> blocks(kJackknifeBlocks);
    RngStream master(seed);
    for (long long i = 0; i < n; ++i) {
        RngStream sub = master.split(static_cast<std::uint64_t>(i));
        Vec x = target.exact_sampler(sub);
        bool in_a = dot(direction, x) >= offset;
        PairSums& b = blocks[i % kJackknifeBlocks];
        b.count += 1;
        if (!in_a) continue;
        StepResult r = kernel_step(config, target, x, sub);
        bool left = dot(direction, r.x) < offset;
        b.f1 += 1.0;             // X in A
        if (left) b.num += 1.0;  // crossing
    }
    double total_in = 0.0;
    for (const PairSums& b : blocks) total_in += b.f1;
    if (total_in == 0.0) {
        throw std::runtime_error("halfspace_flow: no sample landed in the half-space");
    }
    auto est = [](const PairSums& s) { return s.num / s.f1; };
    return jackknife(blocks, est);
}

namespace {

ScanRow scan_row(int d, double varsigma, ScanMetric metric, long long n_per_dim,
                 const RngStream& master, std::size_t j) {
        TargetSpec target = gaussian_target(d, 1.0);
        KernelConfig config = KernelConfig::rwm_varsigma(varsigma, target.L, d);
        std::uint64_t sub_seed = master.split(j).seed();
        ScanRow row;
        row.d = d;
        auto lower = rwm_lower_bounds(target.m, target.L, d, varsigma);
        if (metric == ScanMetric::gap) {
            auto e = rayleigh_quotient(target, config, [](const Vec& x) { return x[0]; },
                                       n_per_dim, sub_seed);
            row.estimate = e.value;
            row.std_error = e.std_error;
            row.lower_bound = lower.gap_lower;
            row.upper_bound = 0.5 * target.L * config.sigma * config.sigma;
        } else if (metric == ScanMetric::flow) {
            Vec e1(d, 0.0);
            e1[0] = 1.0;
            auto e = halfspace_flow(target, config, e1, 0.0, n_per_dim, sub_seed);
            row.estimate = e.value;
            row.std_error = e.std_error;
            row.lower_bound = lower.phi_star_lower;
            row.upper_bound = 2.0 * std::sqrt(target.L) * config.sigma;
        } else {
            RngStream init_rng = master.split(j ^ 0xacce97ull);
            Vec init = target.exact_sampler(init_rng);
            ChainStats stats = run_chain(config, target, init, n_per_dim, sub_seed);
            double p = stats.acceptance_rate();
            row.estimate = p;
            row.std_error = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n_per_dim);
            row.lower_bound = rwm_alpha0_lower(target.L, config.sigma, d);
            row.upper_bound = 1.0;
        }
        return row;
}

}  // namespace

ScanResult dimension_scan(const std::vector<int>& dims, double varsigma,
                          ScanMetric metric, long long n_per_dim, std::uint64_t seed,
                          int jobs) {
    if (dims.size() < 2) throw std::invalid_argument("dimension_scan: need at least 2 dimensions");
    ScanResult out;
    out.rows.resize(dims.size());
    RngStream master(seed);
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (std::size_t j = 0; j < dims.size(); ++j) {
            out.rows[j] = scan_row(dims[j], varsigma, metric, n_per_dim, master, j);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mu;
        for (int w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t j = next.fetch_add(1);
                    if (j >= dims.size()) return;
                    try {
                        out.rows[j] = scan_row(dims[j], varsigma, metric, n_per_dim, master, j);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mu);
                        if (!err) err = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (err) std::rethrow_exception(err);
    }
    // Least-squares slope of log(estimate) against log(d).
    std::size_t k = out.rows.size();
    double sx = 0.0, sy = 0.0;
    for (const ScanRow& r : out.rows) {
        sx += std::log(static_cast<double>(r.d));
        sy += std::log(r.estimate);
    }
    double mx = sx / k, my = sy / k;
    double sxx = 0.0, sxy = 0.0;
    for (const ScanRow& r : out.rows) {
        double dx = std::log(static_cast<double>(r.d)) - mx;
        double dy = std::log(r.estimate) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    out.slope = sxy / sxx;
    if (k > 2) {
        double ss_res = 0.0;
        for (const ScanRow& r : out.rows) {
            double dx = std::log(static_cast<double>(r.d)) - mx;
            double dy = std::log(r.estimate) - my;
            double e = dy - out.slope * dx;
            ss_res += e * e;
        }
        out.slope_se = std::sqrt(ss_res / (k - 2) / sxx);
    }
    return out;
}

double chi2_gaussian_diag(const Vec& mean1, const Vec& var1, const Vec& mean2,
                          const Vec& var2) {
    std::size_t d = mean1.size();
    if (var1.size() != d || mean2.size() != d || var2.size() != d) {
        throw std::invalid_argument("chi2_gaussian_diag: dimension mismatch");
    }
    double log_prod = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double v1 = var1[i], v2 = var2[i];
        if (!(v1 > 0.0 && v2 > 0.0)) throw std::invalid_argument("chi2_gaussian_diag: variances must be > 0");
        if (2.0 * v2 - v1 <= 0.0) return std::numeric_limits<double>::infinity();
        double a = (2.0 * v2 - v1) / (2.0 * v1 * v2);
        double b = 2.0 * mean1[i] / v1 - mean2[i] / v2;
        double c = mean1[i] * mean1[i] / v1 - mean2[i] * mean2[i] / (2.0 * v2);
        log_prod += std::log(v2) - 0.5 * std::log(v1 * (2.0 * v2 - v1)) +
                    b * b / (4.0 * a) - c;
    }
    return std::expm1(log_prod);
}

}  // namespace mixbound
