#pragma once

#include <vector>

namespace kolmo {

// Standard normal density and distribution function.
double normal_pdf(double x);
double normal_cdf(double x);

// Inverse of normal_cdf. Rational approximation plus one Halley refinement,
// accurate to roughly double precision away from the extreme tails.
double normal_quantile(double p);

// E[Z^k] for Z ~ N(0, var); zero for odd k.
double normal_central_moment(int k, double var);

// E[p(X)] for X ~ N(mean, var) and p given by coefficients (p[k] multiplies x^k).
double gaussian_poly_expectation(const std::vector<double>& coeffs, double mean, double var);

// Coefficients of q(x) = E[p(x + Z)] for Z ~ N(0, var). Same degree as p.
std::vector<double> gaussian_shift_poly(const std::vector<double>& coeffs, double var);

// Kolmogorov distribution tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda);

// Asymptotic KS p-value with the standard finite-n scaling
// lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * d.
double ks_p_value(double d, double n_effective);

// Survival function of chi-square with one degree of freedom.
double chi_square1_tail(double x);

}  // namespace kolmo
