#pragma once

#include <functional>
#include <string>

namespace mixbound {

enum class MetricTag { euclidean, cov_weighted };

// Isoperimetric minorant p -> I(p).  Stored as a function of q = min{p, 1-p},
// so symmetry about 1/2 is structural.  Evaluation clamps p to
// [1e-300, 1 - 1e-16].  Flags are verified on construction by grid checks.
class IsoMinorant {
  public:
    IsoMinorant(std::function<double(double)> eval_q, bool regular, bool concave,
                std::string label, MetricTag metric);

    double operator()(double p) const;

    bool regular() const { return regular_; }
    bool concave() const { return concave_; }
    const std::string& label() const { return label_; }
    MetricTag metric() const { return metric_; }

  private:
    std::function<double(double)> eval_q_;
    bool regular_;
    bool concave_;
    std::string label_;
    MetricTag metric_;
};

struct UniversalConstants {
    double c_ell;    // (2 / (pi log 2))^{1/2}
    double c_gamma;  // (phi o Phi^-1)(1/4)
};

// Computed on first use, never hard-coded.
const UniversalConstants& universal_constants();

IsoMinorant strongly_logconcave_minorant(double m);
IsoMinorant laplace_profile();
IsoMinorant subbotin_minorant(double alpha, double k_alpha);
IsoMinorant minorant_from_poincare(double gamma_pi);
// q = 2 uses the built-in 1/34 prefactor (c_q ignored); q < 2 uses c_q * lambda
// with lambda interpreted as the constant D.
IsoMinorant minorant_from_logsobolev(double lambda_pi, double q, double c_q);

IsoMinorant lipschitz_pushforward(const IsoMinorant& minorant, double lip_norm);
IsoMinorant density_perturbation(const IsoMinorant& minorant, double c);
IsoMinorant osc_perturbation(const IsoMinorant& minorant, double osc);

// Lower bound on the measure of the separating set S3 in a partition
// (S1, S2, S3) with d(S1, S2) >= dist: dist * I(min{p1, p2}).
double three_set_lower(const IsoMinorant& minorant, double p1, double p2, double dist);

}  // namespace mixbound
