#include "mixbound/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "mixbound/quadrature.hpp"
#include "mixbound/special.hpp"

namespace mixbound {

namespace {

const double kLog2 = std::log(2.0);
const double kLog4 = std::log(4.0);

void require_regular_concave(const IsoMinorant& minorant, const char* who) {
    if (!minorant.regular() || !minorant.concave()) {
        throw std::invalid_argument(std::string(who) + ": minorant must be regular and concave");
    }
}

void require_eps_mix(double eps_mix, const char* who) {
    if (!(eps_mix > 0.0 && eps_mix < 8.0)) {
        throw std::invalid_argument(std::string(who) + ": eps_mix must lie in (0,8)");
    }
}

// Golden-section maximization of a unimodal objective on [a,b].
template <typename F>
double golden_max(const F& f, double a, double b, double tol) {
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

long long ceil_to_n(double sufficient) {
    double c = std::ceil(sufficient);
    if (c < 2.0) c = 2.0;
    return static_cast<long long>(c);
}

struct Phases {
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    double total() const { return t1 + t2 + t3; }
};

// Shared three-phase assembly for the two kernel-specific mixing bounds.
// log_vcirc is log of the far-phase threshold v_circ = min{1/2, 2 exp(-X)}.
Phases kernel_mixing_phases(double c1, double c2, double c3, double log_vcirc,
                            double u0, double eps_mix, bool far_phase_full_u0) {
    Phases ph;
    if (far_phase_full_u0) {
        ph.t1 = c1 * std::log(std::max(u0, 1.0));
    } else {
        ph.t1 = c1 * std::max(std::log(u0) + log_vcirc - kLog4, 0.0);
    }
    // log M with M = min{max{u0/2, 4}, 2/v_circ}; M >= 4 always.
    double log_m = std::min(std::log(std::max(0.5 * u0, 4.0)), kLog2 - log_vcirc);
    ph.t2 = c2 * std::log(log_m / kLog4);
    ph.t3 = c3 * std::log(std::max(std::min(u0, 8.0) / eps_mix, 1.0));
    return ph;
}

}  // namespace

double conductance_profile_lower(const IsoMinorant& minorant, const CloseCoupling& cc,
                                 double v) {
    require_regular_concave(minorant, "conductance_profile_lower");
    if (!(v > 0.0 && v <= 0.5)) {
        throw std::invalid_argument("conductance_profile_lower: v must lie in (0,1/2]");
    }
    double eps = cc.eps, delta = cc.delta;
    double half_v = 0.5 * v;
    double closed = 0.25 * eps * std::min(1.0, 0.5 * delta * minorant(half_v) / half_v);
    auto objective = [&](double theta) {
        if (theta <= 0.0) return 0.0;
        double q = theta * v;
        return std::min(0.5 * (1.0 - theta) * eps, 0.25 * eps * delta * minorant(q) / v);
    };
    double swept = golden_max(objective, 0.0, 1.0, 1e-10);
    return std::max(closed, swept);
}

double conductance_star_lower(const IsoMinorant& minorant, const CloseCoupling& cc) {
    require_regular_concave(minorant, "conductance_star_lower");
    return 0.25 * cc.eps * std::min(1.0, 2.0 * cc.delta * minorant(0.25));
}

double spectral_gap_lower(const IsoMinorant& minorant, const CloseCoupling& cc) {
    double phi = conductance_star_lower(minorant, cc);
    return 0.5 * phi * phi;
}

double spectral_profile_lower(const std::function<double(double)>& phi_profile,
                              double phi_star, double v) {
    if (v <= 0.5) {
        double p = phi_profile(v);
        return 0.5 * p * p;
    }
    return 0.5 * phi_star * phi_star;
}

double v_star(const IsoMinorant& minorant, double delta) {
    require_regular_concave(minorant, "v_star");
    if (!(delta > 0.0)) throw std::invalid_argument("v_star: delta must be > 0");
    auto holds = [&](double v) {
        double q = 0.5 * v;
        return 0.5 * delta * minorant(q) / q >= 1.0;
    };
    if (holds(0.5)) return 0.5;  // boundary ties resolve toward 1/2
    double t_lo = std::log(2e-300);
    double t_hi = std::log(0.5);
    if (!holds(std::exp(t_lo))) return 0.0;
    // I/id is nonincreasing for regular concave minorants, so the condition is
    // monotone in v and bisection (in log v, for relative accuracy) applies.
    for (int i = 0; i < 120; ++i) {
        double t = 0.5 * (t_lo + t_hi);
        (holds(std::exp(t)) ? t_lo : t_hi) = t;
    }
    return std::exp(t_lo);
}

MixingBudget mixing_time_profile(const std::function<double(double)>& phi_profile,
                                 double phi_star, double u0, double eps_mix) {
    require_eps_mix(eps_mix, "mixing_time_profile");
    if (!(phi_star > 0.0)) throw std::invalid_argument("mixing_time_profile: phi_star must be > 0");
    MixingBudget b;
    double v_lo = std::min(4.0 / u0, 0.5);
    double integral = 0.0;
    if (v_lo < 0.5) {
        integral = adaptive_quadrature(
            [&](double v) {
                double p = phi_profile(v);
                return 1.0 / (v * p * p);
            },
            v_lo, 0.5, 1e-9);
    }
    b.phases[1] = 4.0 * integral;
    b.phases[2] = std::log(std::max(std::min(u0, 8.0) / eps_mix, 1.0)) / (phi_star * phi_star);
    b.sufficient = 2.0 + b.phases[0] + b.phases[1] + b.phases[2];
    b.n = ceil_to_n(b.sufficient);
    return b;
}

BoundReport mixing_time_iso(const IsoMinorant& minorant, const CloseCoupling& cc,
                            double u0, double eps_mix) {
    require_regular_concave(minorant, "mixing_time_iso");
    require_eps_mix(eps_mix, "mixing_time_iso");
    double eps = cc.eps, delta = cc.delta;
    BoundReport r;
    r.u0 = u0;
    r.eps_mix = eps_mix;
    r.phi_star_lower = conductance_star_lower(minorant, cc);
    r.gap_lower = 0.5 * r.phi_star_lower * r.phi_star_lower;
    r.v_star = v_star(minorant, delta);

    double inv_eps2 = 1.0 / (eps * eps);
    if (r.v_star > 0.0) {
        r.mixing_phase_terms[0] =
            64.0 * inv_eps2 * std::max(std::log(u0 * r.v_star / 4.0), 0.0);
    }
    double lo = std::max(std::min(2.0 / u0, 0.25), 0.5 * r.v_star);
    if (lo < 0.25) {
        double integral = adaptive_quadrature(
            [&](double xi) {
                double i = minorant(xi);
                return xi / (i * i);
            },
            lo, 0.25, 1e-9);
        r.mixing_phase_terms[1] = 256.0 * inv_eps2 / (delta * delta) * integral;
    }
    double i14 = minorant(0.25);
    r.mixing_phase_terms[2] =
        16.0 * std::max(1.0, 0.25 / (delta * delta * i14 * i14)) * inv_eps2 *
        std::log(std::max(std::min(u0, 8.0) / eps_mix, 1.0));

    r.mixing_sufficient = 2.0 + r.mixing_phase_terms[0] + r.mixing_phase_terms[1] +
                          r.mixing_phase_terms[2];
    r.mixing_n = ceil_to_n(r.mixing_sufficient);
    return r;
}

double rwm_alpha0_lower_general(const std::function<double(double)>& psi,
                                double sigma, int d) {
    if (!(sigma > 0.0) || d < 1) {
        throw std::invalid_argument("rwm_alpha0_lower_general: need sigma > 0, d >= 1");
    }
    // E[psi(sigma R)] with R chi-distributed, d degrees of freedom.
    double log_norm = (1.0 - 0.5 * d) * kLog2 - std::lgamma(0.5 * d);
    double upper = std::sqrt(static_cast<double>(d)) + 12.0;
    double expectation = adaptive_quadrature(
        [&](double radius) {
            if (radius <= 0.0) return 0.0;
            double log_density = log_norm - 0.5 * radius * radius;
            if (d > 1) log_density += (d - 1) * std::log(radius);
            return psi(sigma * radius) * std::exp(log_density);
        },
        0.0, upper, 1e-9);
    return 0.5 * std::exp(-expectation);
}

double rwm_alpha0_lower(double L, double sigma, int d) {
    return 0.5 * std::exp(-0.5 * L * sigma * sigma * d);
}

CloseCoupling rwm_close_coupling(double alpha0, double sigma) {
    if (!(alpha0 > 0.0 && alpha0 <= 1.0)) {
        throw std::invalid_argument("rwm_close_coupling: alpha0 must lie in (0,1]");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("rwm_close_coupling: sigma must be > 0");
    return CloseCoupling{MetricTag::euclidean, alpha0 * sigma, 0.5 * alpha0};
}

double rwm_phi_star_lower_general(double alpha0, double sigma, const IsoMinorant& minorant) {
    require_regular_concave(minorant, "rwm_phi_star_lower_general");
    return 0.125 * alpha0 * std::min(1.0, 2.0 * alpha0 * sigma * minorant(0.25));
}

RwmLowerBounds rwm_lower_bounds(double m, double L, int d, double varsigma) {
    if (!(m > 0.0 && m <= L)) throw std::invalid_argument("rwm_lower_bounds: need 0 < m <= L");
    const auto& uc = universal_constants();
    double s = varsigma;
    RwmLowerBounds b;
    b.phi_star_lower = 0.0625 * uc.c_gamma * s * std::exp(-s * s) *
                       std::sqrt(m / L / d);
    b.gap_lower = uc.c_gamma * uc.c_gamma / 512.0 * s * s * std::exp(-2.0 * s * s) *
                  (m / L) / d;
    return b;
}

RwmUpperBounds rwm_upper_bounds(double m, double L, int d, double sigma) {
    if (!(m > 0.0 && m <= L)) throw std::invalid_argument("rwm_upper_bounds: need 0 < m <= L");
    double small_set = std::exp(-0.5 * d * std::log1p(m * sigma * sigma));
    RwmUpperBounds b;
    b.phi_star_upper = std::min(2.0 * std::sqrt(L) * sigma, small_set);
    b.phi_star_upper_weak = std::min(4.0 * std::sqrt(L) * sigma, small_set);
    b.gap_upper = std::min(0.5 * L * sigma * sigma, small_set);
    return b;
}

AsvarBounds rwm_asvar_bounds(double varsigma, double kappa, int d, double f_norm_sq) {
    if (!(varsigma > 0.0 && kappa >= 1.0 && d >= 1 && f_norm_sq > 0.0)) {
        throw std::invalid_argument("rwm_asvar_bounds: invalid inputs");
    }
    const auto& uc = universal_constants();
    double s2 = varsigma * varsigma;
    AsvarBounds b;
    b.upper = 1024.0 / (uc.c_gamma * uc.c_gamma) / s2 * std::exp(2.0 * s2) * kappa * d *
              f_norm_sq;
    b.linear_lower = 2.0 / s2 * d * f_norm_sq;
    return b;
}

BoundReport rwm_mixing_time(double m, double L, int d, double varsigma, double u0,
                            double eps_mix, int variant,
                            bool proof_variant_third_phase) {
    if (!(m > 0.0 && m <= L)) throw std::invalid_argument("rwm_mixing_time: need 0 < m <= L");
    require_eps_mix(eps_mix, "rwm_mixing_time");
    if (variant < 1 || variant > 3) throw std::invalid_argument("rwm_mixing_time: variant must be 1..3");
    const auto& uc = universal_constants();
    double s = varsigma, s2 = s * s;
    double kd = (L / m) * d;
    double sigma = s / std::sqrt(L * d);
    double alpha0 = 0.5 * std::exp(-0.5 * s2);
    double inv_a2 = 1.0 / (alpha0 * alpha0);
    double cl2 = 1.0 / (uc.c_ell * uc.c_ell);
    double cg2 = 1.0 / (uc.c_gamma * uc.c_gamma);
    double inv_s2m = 1.0 / (sigma * sigma * m);  // equals kd / s2

    Phases ph;
    double log_vcirc = kNaN;
    if (variant == 1) {
        double x = 4.0 * cl2 * inv_s2m * inv_a2;
        log_vcirc = std::min(-kLog2, kLog2 - x);
        double c3 = 16.0 * std::max(1.0, 0.25 * cg2 * inv_a2 * inv_s2m) * inv_a2;
        if (proof_variant_third_phase) c3 /= sigma * sigma;
        ph = kernel_mixing_phases(256.0 * inv_a2, 1024.0 * cl2 * inv_a2 * inv_a2 * inv_s2m,
                                  c3, log_vcirc, u0, eps_mix, false);
    } else if (variant == 2) {
        double x = 16.0 * cl2 * std::exp(s2) / s2 * kd;
        log_vcirc = std::min(-kLog2, kLog2 - x);
        ph = kernel_mixing_phases(1024.0 * std::exp(s2),
                                  16384.0 * cl2 * std::exp(2.0 * s2) / s2 * kd,
                                  64.0 * cg2 * std::exp(2.0 * s2) / s2 * kd, log_vcirc,
                                  u0, eps_mix, false);
    } else {
        ph.t1 = 1024.0 * std::exp(s2) * std::log(std::max(u0, 1.0));
        ph.t2 = 16384.0 * cl2 * std::exp(2.0 * s2) / s2 * kd *
                (std::log(16.0 * cl2 / s2) + std::log(kd) + s2);
        ph.t3 = 64.0 * cg2 * std::exp(2.0 * s2) / s2 * kd * std::log(8.0 / eps_mix);
    }

    BoundReport r;
    r.m = m;
    r.L = L;
    r.d = d;
    r.varsigma = s;
    r.sigma = sigma;
    r.u0 = u0;
    r.eps_mix = eps_mix;
    r.variant = variant;
    r.alpha0_lower = alpha0;
    if (variant != 3) r.v_star = std::exp(log_vcirc);
    auto lower = rwm_lower_bounds(m, L, d, s);
    r.phi_star_lower = lower.phi_star_lower;
    r.gap_lower = lower.gap_lower;
    auto upper = rwm_upper_bounds(m, L, d, sigma);
    r.phi_star_upper = upper.phi_star_upper;
    r.phi_star_upper_weak = upper.phi_star_upper_weak;
    r.gap_upper = upper.gap_upper;
    r.mixing_phase_terms = {ph.t1, ph.t2, ph.t3};
    r.mixing_sufficient = 2.0 + ph.total();
    r.mixing_n = ceil_to_n(r.mixing_sufficient);
    return r;
}

double warm_start_gaussian_mode(double kappa, int d) {
    if (!(kappa >= 1.0 && d >= 1)) throw std::invalid_argument("warm_start_gaussian_mode: invalid inputs");
    return std::pow(kappa, 0.5 * d);
}

double warm_start_accepted_proposal(double varsigma, double kappa, int d, double L,
                                    double dist0_sq) {
    if (!(varsigma > 0.0 && kappa >= 1.0 && d >= 1 && L > 0.0 && dist0_sq >= 0.0)) {
        throw std::invalid_argument("warm_start_accepted_proposal: invalid inputs");
    }
    double s2 = varsigma * varsigma;
    return 2.0 * std::exp(0.5 * s2) * std::pow(kappa * d / s2, 0.5 * d) *
           std::exp(0.5 * L * dist0_sq);
}

double warm_start_pcn_gaussian(double L, double trace_c) {
    if (!(L >= 0.0 && trace_c > 0.0)) throw std::invalid_argument("warm_start_pcn_gaussian: invalid inputs");
    return std::exp(0.5 * L * trace_c);
}

double warm_start_u0(const std::string& kind, const WarmStartParams& p) {
    if (kind == "gaussian-mode") return warm_start_gaussian_mode(p.kappa, p.d);
    if (kind == "accepted-proposal") {
        return warm_start_accepted_proposal(p.varsigma, p.kappa, p.d, p.L, p.dist0_sq);
    }
    if (kind == "pcn-gaussian") return warm_start_pcn_gaussian(p.L, p.trace_c);
    throw std::invalid_argument("warm_start_u0: unknown kind '" + kind + "'");
}

double pcn_alpha0_lower(double L, double eta, double trace_c) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("pcn_alpha0_lower: eta must lie in (0,1)");
    return 0.5 * std::exp(-0.5 * L * eta * eta * trace_c);
}

CloseCoupling pcn_close_coupling(double alpha0, double rho, double eta) {
    if (std::fabs(rho * rho + eta * eta - 1.0) > 1e-12) {
        throw std::invalid_argument("pcn_close_coupling: rho^2 + eta^2 must equal 1");
    }
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("pcn_close_coupling: rho must lie in (0,1)");
    if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw std::invalid_argument("pcn_close_coupling: alpha0 must lie in (0,1]");
    return CloseCoupling{MetricTag::cov_weighted, alpha0 * eta / rho, 0.5 * alpha0};
}

PcnLowerBounds pcn_lower_bounds(double L, double trace_c, double varsigma) {
    if (!(L > 0.0 && trace_c > 0.0 && varsigma > 0.0)) {
        throw std::invalid_argument("pcn_lower_bounds: invalid inputs");
    }
    double kt = L * trace_c;
    if (!(varsigma * varsigma < kt)) {
        throw std::invalid_argument("pcn_lower_bounds: need varsigma^2 < L Tr(C)");
    }
    const auto& uc = universal_constants();
    double eta = varsigma / std::sqrt(kt);
    double alpha0 = 0.5 * std::exp(-0.5 * varsigma * varsigma);
    PcnLowerBounds b;
    b.phi_star_lower = 0.25 * uc.c_gamma * alpha0 * alpha0 * eta;
    b.gap_lower = uc.c_gamma * uc.c_gamma / 32.0 * std::pow(alpha0, 4) * eta * eta;
    b.gap_lower_optimized = uc.c_gamma * uc.c_gamma / 1024.0 / M_E / kt;
    return b;
}

BoundReport pcn_mixing_time(double L, double trace_c, double varsigma, double u0,
                            double eps_mix, int variant) {
    require_eps_mix(eps_mix, "pcn_mixing_time");
    if (variant < 1 || variant > 3) throw std::invalid_argument("pcn_mixing_time: variant must be 1..3");
    double kt = L * trace_c;
    double s = varsigma, s2 = s * s;
    if (!(s > 0.0 && s2 < kt)) {
        throw std::invalid_argument("pcn_mixing_time: need 0 < varsigma < (L Tr C)^{1/2}");
    }
    const auto& uc = universal_constants();
    double eta = s / std::sqrt(kt);
    double rho = std::sqrt(1.0 - eta * eta);
    double alpha0 = 0.5 * std::exp(-0.5 * s2);
    double inv_a2 = 1.0 / (alpha0 * alpha0);
    double cl2 = 1.0 / (uc.c_ell * uc.c_ell);
    double cg2 = 1.0 / (uc.c_gamma * uc.c_gamma);
    double r2e2 = rho * rho / (eta * eta);

    Phases ph;
    double log_vcirc = kNaN;
    if (variant == 1) {
        double x = 4.0 * cl2 * inv_a2 * r2e2;
        log_vcirc = std::min(-kLog2, kLog2 - x);
        ph = kernel_mixing_phases(256.0 * inv_a2, 1024.0 * cl2 * inv_a2 * inv_a2 * r2e2,
                                  64.0 * std::max(1.0, 0.25 * cg2 * inv_a2 * r2e2) * inv_a2,
                                  log_vcirc, u0, eps_mix, false);
    } else if (variant == 2) {
        // Third-phase coefficient 2^8: substituting alpha0 >= e^{-s^2/2}/2 and
        // rho <= 1 into variant 1 gives 2^8 C_g^-2 e^{2s^2} s^-2 kt, and using
        // anything smaller would order variant 2 below variant 1.
        double x = 16.0 * cl2 * std::exp(s2) / s2 * kt;
        log_vcirc = std::min(-kLog2, kLog2 - x);
        ph = kernel_mixing_phases(1024.0 * std::exp(s2),
                                  16384.0 * cl2 * std::exp(2.0 * s2) / s2 * kt,
                                  256.0 * cg2 * std::exp(2.0 * s2) / s2 * kt, log_vcirc,
                                  u0, eps_mix, false);
    } else {
        ph.t1 = 1024.0 * std::exp(s2) * std::log(std::max(u0, 1.0));
        ph.t2 = 16384.0 * cl2 * std::exp(2.0 * s2) / s2 * kt *
                (std::log(16.0 * cl2 / s2 * kt) + s2);
        ph.t3 = 256.0 * cg2 * std::exp(2.0 * s2) / s2 * kt * std::log(8.0 / eps_mix);
    }

    BoundReport r;
    r.L = L;
    r.trace_c = trace_c;
    r.varsigma = s;
    r.rho = rho;
    r.eta = eta;
    r.u0 = u0;
    r.eps_mix = eps_mix;
    r.variant = variant;
    r.alpha0_lower = alpha0;
    if (variant != 3) r.v_star = std::exp(log_vcirc);
    auto lower = pcn_lower_bounds(L, trace_c, s);
    r.phi_star_lower = lower.phi_star_lower;
    r.gap_lower = lower.gap_lower;
    r.mixing_phase_terms = {ph.t1, ph.t2, ph.t3};
    r.mixing_sufficient = 2.0 + ph.total();
    r.mixing_n = ceil_to_n(r.mixing_sufficient);
    return r;
}

double tv_proposal_bound(ProposalKind kind, double displacement, const TvParams& params) {
    if (!(displacement >= 0.0)) throw std::invalid_argument("tv_proposal_bound: negative displacement");
    double v;
    if (kind == ProposalKind::rwm) {
        v = displacement / (2.0 * params.sigma);
    } else {
        v = 0.5 * params.rho / params.eta * displacement;
    }
    return std::min(v, 1.0);
}

DensitySandwich gauss_sandwich(const TargetSpec& target, const Vec& x) {
    if (!(target.m > 0.0)) throw std::invalid_argument("gauss_sandwich: m must be > 0");
    Vec diff(target.d);
    for (int i = 0; i < target.d; ++i) diff[i] = x[i] - target.mode[i];
    double r2 = norm_sq(diff);
    double half_d = 0.5 * target.d;
    DensitySandwich s;
    s.lower = std::exp(half_d * std::log(target.m / (2.0 * M_PI)) - 0.5 * target.L * r2);
    s.upper = std::exp(half_d * std::log(target.L / (2.0 * M_PI)) - 0.5 * target.m * r2);
    return s;
}

}  // namespace mixbound
