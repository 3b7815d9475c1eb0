#include "mixbound/isoperimetry.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "mixbound/special.hpp"

namespace mixbound {

namespace {

constexpr double kPClampLo = 1e-300;
constexpr double kPClampHi = 1.0 - 1e-16;

double clamp_p(double p) {
    if (p < kPClampLo) return kPClampLo;
    if (p > kPClampHi) return kPClampHi;
    return p;
}

// Construction-time verification that the emitted flags hold on a grid.
void validate_flags(const std::function<double(double)>& eval_q, bool regular,
                    bool concave, const std::string& label) {
    constexpr int n = 1000;
    constexpr double tol = 1e-12;
    auto at = [&](double p) {
        p = clamp_p(p);
        return eval_q(std::min(p, 1.0 - p));
    };
    if (regular) {
        double prev = at(0.5 / (n + 1));
        for (int i = 2; i <= n; ++i) {
            double p = 0.5 * i / (n + 1);
            double cur = at(p);
            if (cur < prev * (1.0 - tol) - tol) {
                throw std::invalid_argument(label + ": regular flag violated (not nondecreasing on (0,1/2])");
            }
            prev = cur;
        }
    }
    if (concave) {
        for (int i = 1; i + 2 <= n; ++i) {
            double pl = static_cast<double>(i) / (n + 1);
            double pr = static_cast<double>(i + 2) / (n + 1);
            double pm = 0.5 * (pl + pr);
            if (at(pm) < 0.5 * (at(pl) + at(pr)) - tol) {
                throw std::invalid_argument(label + ": concave flag violated");
            }
        }
    }
}

}  // namespace

IsoMinorant::IsoMinorant(std::function<double(double)> eval_q, bool regular,
                         bool concave, std::string label, MetricTag metric)
    : eval_q_(std::move(eval_q)),
      regular_(regular),
      concave_(concave),
      label_(std::move(label)),
      metric_(metric) {
    validate_flags(eval_q_, regular_, concave_, label_);
}

double IsoMinorant::operator()(double p) const {
    p = clamp_p(p);
    return eval_q_(std::min(p, 1.0 - p));
}

const UniversalConstants& universal_constants() {
    static const UniversalConstants c = [] {
        UniversalConstants u;
        u.c_ell = std::sqrt(2.0 / (M_PI * std::log(2.0)));
        u.c_gamma = gaussian_profile(0.25);
        return u;
    }();
    return c;
}

IsoMinorant strongly_logconcave_minorant(double m) {
    if (!(m > 0.0)) throw std::invalid_argument("strongly_logconcave_minorant: m must be > 0");
    double root_m = std::sqrt(m);
    return IsoMinorant([root_m](double q) { return root_m * gaussian_profile(q); },
                       /*regular=*/true, /*concave=*/true, "strongly_logconcave",
                       MetricTag::euclidean);
}

IsoMinorant laplace_profile() {
    return IsoMinorant([](double q) { return q; }, /*regular=*/true,
                       /*concave=*/true, "laplace", MetricTag::euclidean);
}

IsoMinorant subbotin_minorant(double alpha, double k_alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw std::invalid_argument("subbotin_minorant: alpha must lie in (1,2)");
    }
    if (!(k_alpha > 0.0)) throw std::invalid_argument("subbotin_minorant: k_alpha must be > 0");
    double expo = 1.0 - 1.0 / alpha;
    return IsoMinorant(
        [k_alpha, expo](double q) { return k_alpha * q * std::pow(std::log(1.0 / q), expo); },
        /*regular=*/true, /*concave=*/true, "subbotin", MetricTag::euclidean);
}

IsoMinorant minorant_from_poincare(double gamma_pi) {
    if (!(gamma_pi > 0.0)) throw std::invalid_argument("minorant_from_poincare: gamma must be > 0");
    double c = std::sqrt(gamma_pi) / 6.0;
    return IsoMinorant([c](double q) { return c * q; }, /*regular=*/true,
                       /*concave=*/true, "poincare", MetricTag::euclidean);
}

IsoMinorant minorant_from_logsobolev(double lambda_pi, double q, double c_q) {
    if (!(q >= 1.0 && q <= 2.0)) {
        throw std::invalid_argument("minorant_from_logsobolev: q must lie in [1,2]");
    }
    double expo = 1.0 / q;
    double pref = (q == 2.0) ? std::sqrt(lambda_pi) / 34.0 : c_q * lambda_pi;
    // p (log 1/p)^{1/q} is increasing on (0,1/2] only when 1/q <= log 2; past
    // that point the symmetrized function also has a convex kink at 1/2.
    bool shape_ok = expo <= std::log(2.0);
    return IsoMinorant(
        [pref, expo](double p) { return pref * p * std::pow(std::log(1.0 / p), expo); },
        shape_ok, shape_ok, "logsobolev", MetricTag::euclidean);
}

IsoMinorant lipschitz_pushforward(const IsoMinorant& minorant, double lip_norm) {
    if (!(lip_norm > 0.0)) throw std::invalid_argument("lipschitz_pushforward: lip_norm must be > 0");
    IsoMinorant base = minorant;
    return IsoMinorant([base, lip_norm](double q) { return base(q) / lip_norm; },
                       base.regular(), base.concave(),
                       base.label() + "/lipschitz", base.metric());
}

IsoMinorant density_perturbation(const IsoMinorant& minorant, double c) {
    if (!(c > 0.0 && c <= 1.0)) {
        throw std::invalid_argument("density_perturbation: c must lie in (0,1]");
    }
    IsoMinorant base = minorant;
    return IsoMinorant([base, c](double q) { return c * base(q); }, base.regular(),
                       base.concave(), base.label() + "/perturbed", base.metric());
}

IsoMinorant osc_perturbation(const IsoMinorant& minorant, double osc) {
    if (!(osc >= 0.0)) throw std::invalid_argument("osc_perturbation: osc must be >= 0");
    return density_perturbation(minorant, std::exp(-osc));
}

double three_set_lower(const IsoMinorant& minorant, double p1, double p2, double dist) {
    if (!minorant.regular()) throw std::invalid_argument("three_set_lower: minorant must be regular");
    if (p1 < 0.0 || p2 < 0.0 || dist < 0.0) {
        throw std::invalid_argument("three_set_lower: negative argument");
    }
    if (p1 + p2 > 1.0) throw std::invalid_argument("three_set_lower: p1 + p2 > 1");
    double q = std::min(p1, p2);
    if (q == 0.0) return 0.0;
    return dist * minorant(q);
}

}  // namespace mixbound
