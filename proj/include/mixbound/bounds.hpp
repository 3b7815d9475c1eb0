#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "mixbound/isoperimetry.hpp"
#include "mixbound/targets.hpp"

namespace mixbound {

// Close-coupling certificate: states within delta (in the tagged metric) have
// kernels overlapping by at least eps in total variation.
struct CloseCoupling {
    MetricTag metric = MetricTag::euclidean;
    double delta = 0.0;
    double eps = 0.0;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct BoundReport {
    double phi_star_lower = kNaN;
    double phi_star_upper = kNaN;
    double phi_star_upper_weak = kNaN;  // the weaker 4 L^{1/2} sigma variant
    double gap_lower = kNaN;
    double gap_upper = kNaN;
    double alpha0_lower = kNaN;
    double v_star = kNaN;
    long long mixing_n = 0;
    double mixing_sufficient = kNaN;  // real-valued bound before the ceiling
    std::array<double, 3> mixing_phase_terms{0.0, 0.0, 0.0};

    // Inputs echo (NaN/0 when not applicable).
    double m = kNaN, L = kNaN;
    int d = 0;
    double varsigma = kNaN, sigma = kNaN, rho = kNaN, eta = kNaN;
    double trace_c = kNaN, u0 = kNaN, eps_mix = kNaN;
    int variant = 0;
};

// --- conductance / spectral machinery -------------------------------------

double conductance_profile_lower(const IsoMinorant& minorant, const CloseCoupling& cc, double v);
double conductance_star_lower(const IsoMinorant& minorant, const CloseCoupling& cc);
double spectral_gap_lower(const IsoMinorant& minorant, const CloseCoupling& cc);

double spectral_profile_lower(const std::function<double(double)>& phi_profile,
                              double phi_star, double v);

// sup{v : 1 <= (delta/2) I(v/2)/(v/2)}, clipped to [0, 1/2].
double v_star(const IsoMinorant& minorant, double delta);

struct MixingBudget {
    double sufficient = kNaN;
    long long n = 0;
    std::array<double, 3> phases{0.0, 0.0, 0.0};
};

MixingBudget mixing_time_profile(const std::function<double(double)>& phi_profile,
                                 double phi_star, double u0, double eps_mix);

BoundReport mixing_time_iso(const IsoMinorant& minorant, const CloseCoupling& cc,
                            double u0, double eps_mix);

// --- random-walk Metropolis ------------------------------------------------

double rwm_alpha0_lower_general(const std::function<double(double)>& psi,
                                double sigma, int d);
double rwm_alpha0_lower(double L, double sigma, int d);
CloseCoupling rwm_close_coupling(double alpha0, double sigma);

// General conductance floor (alpha0/8) min{1, 2 alpha0 sigma I(1/4)}.
double rwm_phi_star_lower_general(double alpha0, double sigma, const IsoMinorant& minorant);

struct RwmLowerBounds {
    double phi_star_lower;
    double gap_lower;
};
RwmLowerBounds rwm_lower_bounds(double m, double L, int d, double varsigma);

struct RwmUpperBounds {
    double phi_star_upper;       // min{2 L^{1/2} sigma, (1+m sigma^2)^{-d/2}}
    double phi_star_upper_weak;  // min{4 L^{1/2} sigma, (1+m sigma^2)^{-d/2}}
    double gap_upper;            // min{L sigma^2 / 2, (1+m sigma^2)^{-d/2}}
};
RwmUpperBounds rwm_upper_bounds(double m, double L, int d, double sigma);

struct AsvarBounds {
    double upper;
    double linear_lower;
};
AsvarBounds rwm_asvar_bounds(double varsigma, double kappa, int d, double f_norm_sq);

BoundReport rwm_mixing_time(double m, double L, int d, double varsigma, double u0,
                            double eps_mix, int variant,
                            bool proof_variant_third_phase = false);

// --- warm starts -----------------------------------------------------------

double warm_start_gaussian_mode(double kappa, int d);
double warm_start_accepted_proposal(double varsigma, double kappa, int d, double L,
                                    double dist0_sq);
double warm_start_pcn_gaussian(double L, double trace_c);

struct WarmStartParams {
    double kappa = kNaN;
    int d = 0;
    double varsigma = kNaN;
    double L = kNaN;
    double dist0_sq = 0.0;
    double trace_c = kNaN;
};
double warm_start_u0(const std::string& kind, const WarmStartParams& params);

// --- preconditioned Crank-Nicolson ----------------------------------------

double pcn_alpha0_lower(double L, double eta, double trace_c);
CloseCoupling pcn_close_coupling(double alpha0, double rho, double eta);

struct PcnLowerBounds {
    double phi_star_lower;
    double gap_lower;
    double gap_lower_optimized;  // varsigma-optimized floor
};
PcnLowerBounds pcn_lower_bounds(double L, double trace_c, double varsigma);

BoundReport pcn_mixing_time(double L, double trace_c, double varsigma, double u0,
                            double eps_mix, int variant);

// --- misc ------------------------------------------------------------------

enum class ProposalKind { rwm, pcn };

struct TvParams {
    double sigma = kNaN;  // rwm
    double rho = kNaN, eta = kNaN;  // pcn
};
double tv_proposal_bound(ProposalKind kind, double displacement, const TvParams& params);

struct DensitySandwich {
    double lower;
    double upper;
};
DensitySandwich gauss_sandwich(const TargetSpec& target, const Vec& x);

}  // namespace mixbound
