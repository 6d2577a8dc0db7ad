#include "kolmo/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kolmo {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// Acklam's rational approximation to the normal quantile.
double quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p outside (0, 1)");
  }
  double x = quantile_estimate(p);
  // One Halley step against the exact CDF via erfc.
  double e = 0.5 * std::erfc(-x / kSqrt2) - p;
  double u = e / normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double normal_central_moment(int k, double var) {
  if (k < 0) throw std::domain_error("normal_central_moment: negative order");
  if (k % 2 == 1) return 0.0;
  // var^(k/2) * (k-1)!!
  double m = 1.0;
  for (int j = k - 1; j >= 1; j -= 2) m *= j;
  return m * std::pow(var, k / 2.0);
}

double gaussian_poly_expectation(const std::vector<double>& coeffs, double mean, double var) {
  // Raw moments of N(mean, var) via m_k = mean*m_{k-1} + (k-1)*var*m_{k-2}.
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 0) return 0.0;
  std::vector<double> m(deg + 1);
  m[0] = 1.0;
  if (deg >= 1) m[1] = mean;
  for (int k = 2; k <= deg; ++k) m[k] = mean * m[k - 1] + (k - 1) * var * m[k - 2];
  double total = 0.0;
  for (int k = deg; k >= 0; --k) total += coeffs[k] * m[k];
  return total;
}

std::vector<double> gaussian_shift_poly(const std::vector<double>& coeffs, double var) {
  // q_j = sum_{k>=j} p_k * C(k, j) * E[Z^(k-j)].
  const int deg = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> out(coeffs.size(), 0.0);
  for (int j = 0; j <= deg; ++j) {
    double binom = 1.0;  // C(k, j), updated incrementally over k
    for (int k = j; k <= deg; ++k) {
      if (k > j) binom = binom * k / (k - j);
      int m = k - j;
      if (m % 2 == 0) out[j] += coeffs[k] * binom * normal_central_moment(m, var);
    }
  }
  return out;
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  double q = 2.0 * sum;
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  return q;
}

double ks_p_value(double d, double n_effective) {
  if (d <= 0.0) return 1.0;
  double s = std::sqrt(n_effective);
  return kolmogorov_tail((s + 0.12 + 0.11 / s) * d);
}

double chi_square1_tail(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(0.5 * x));
}

}  // namespace kolmo
