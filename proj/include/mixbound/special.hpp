#pragma once

namespace mixbound {

// Standard normal density, CDF, and inverse CDF.
double normal_pdf(double z);
double normal_cdf(double z);

// Inverse of the standard normal CDF.  Rational initial approximation
// polished by Newton steps against erfc; absolute error <= 1e-13 on
// p in [1e-300, 1 - 1e-16].  Throws std::invalid_argument outside (0,1).
double inv_normal_cdf(double p);

// (phi o Phi^-1)(p): the Gaussian isoperimetric profile.
double gaussian_profile(double p);

}  // namespace mixbound
