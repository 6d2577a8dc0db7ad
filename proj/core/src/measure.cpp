#include "kolmo/measure.hpp"

#include <algorithm>

#include "kolmo/normal.hpp"

namespace kolmo {

KsResult ks_statistic(const EmpiricalSample& sample,
                      const std::function<double(double)>& cdf) {
  if (sample.draws.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> xs = sample.draws;
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - F);
    d = std::max(d, F - static_cast<double>(i) / n);
  }
  return {d, ks_p_value(d, n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, ks_p_value(d, ne)};
}

}  // namespace kolmo
