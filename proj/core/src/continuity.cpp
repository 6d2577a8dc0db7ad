#include "kolmo/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "kolmo/rng.hpp"

namespace kolmo {

std::vector<HolderEstimate> holder_constants(const SamplePath& path,
                                             const std::vector<double>& gammas,
                                             HolderScope scope, double window) {
  for (double gamma : gammas) {
    if (!(gamma > 0.0) || gamma > 1.0) {
      throw std::domain_error("holder_constants: gamma outside (0, 1]");
    }
  }
  const std::int64_t m = path.grid.count();
  if (m < 2) throw std::invalid_argument("holder_constants: need at least 2 points");
  if (m > kHolderScanGuard) {
    throw std::invalid_argument("holder_constants: path too long for the pairwise scan");
  }
  if (scope == HolderScope::local && !(window > 0.0)) {
    throw std::invalid_argument("holder_constants: local scope needs a positive window");
  }
  const double h = path.grid.spacing();
  const std::int64_t max_lag =
      scope == HolderScope::global
          ? m - 1
          : std::min<std::int64_t>(m - 1, static_cast<std::int64_t>(std::ceil(window / h)) - 1);

  // One pass over all pairs, organized by lag; every gamma reuses these maxima.
  std::vector<double> lag_max(static_cast<std::size_t>(std::max<std::int64_t>(max_lag, 0)) + 1,
                              0.0);
  const double* x = path.values.data();
  for (std::int64_t g = 1; g <= max_lag; ++g) {
    if (scope == HolderScope::local && !(static_cast<double>(g) * h < window)) break;
    double best = 0.0;
    for (std::int64_t i = 0; i + g < m; ++i) {
      const double d = std::abs(x[i + g] - x[i]);
      if (d > best) best = d;
    }
    lag_max[static_cast<std::size_t>(g)] = best;
  }

  std::vector<HolderEstimate> out;
  out.reserve(gammas.size());
  for (double gamma : gammas) {
    HolderEstimate est;
    est.gamma = gamma;
    est.scope = scope;
    est.window = scope == HolderScope::local ? window : 0.0;
    std::int64_t best_lag = 0;
    double best = 0.0;
    for (std::int64_t g = 1; g <= max_lag; ++g) {
      if (scope == HolderScope::local && !(static_cast<double>(g) * h < window)) break;
      const double c = lag_max[static_cast<std::size_t>(g)] /
                       std::pow(static_cast<double>(g) * h, gamma);
      if (c > best) {
        best = c;
        best_lag = g;
      }
    }
    if (best_lag > 0) {
      est.constant = best;
      const double target = lag_max[static_cast<std::size_t>(best_lag)];
      for (std::int64_t i = 0; i + best_lag < m; ++i) {
        if (std::abs(x[i + best_lag] - x[i]) == target) {
          est.s = path.grid.time(i);
          est.t = path.grid.time(i + best_lag);
          break;
        }
      }
    }
    out.push_back(est);
  }
  return out;
}

HolderEstimate holder_constant(const SamplePath& path, double gamma, HolderScope scope,
                               double window) {
  return holder_constants(path, {gamma}, scope, window).front();
}

KCParams::KCParams(double alpha_in, double beta_in, double c_in, double gamma_in)
    : alpha(alpha_in), beta(beta_in), C(c_in), gamma(gamma_in) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(C > 0.0)) {
    throw std::domain_error("KCParams: alpha, beta, C must be > 0");
  }
  if (!(gamma > 0.0) || !(gamma < beta / alpha)) {
    throw std::domain_error("KCParams: gamma must lie in (0, beta/alpha)");
  }
}

double chebyshev_tail_bound(const KCParams& params, double gap, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("chebyshev_tail_bound: eps must be > 0");
  if (gap < 0.0) throw std::domain_error("chebyshev_tail_bound: negative gap");
  if (gap == 0.0) return 0.0;
  const double raw = params.C * std::pow(gap, 1.0 + params.beta) / std::pow(eps, params.alpha);
  return std::min(raw, 1.0);
}

double an_bound(double alpha, double beta, double C, double gamma, int n, double T) {
  if (n < 0) throw std::domain_error("an_bound: negative level");
  if (!(T > 0.0)) throw std::domain_error("an_bound: horizon must be > 0");
  const double increments = std::floor(std::ldexp(T, n));
  return increments * C * std::exp2(-static_cast<double>(n) * (1.0 + beta - alpha * gamma));
}

double an_bound(const KCParams& params, int n, double T) {
  return an_bound(params.alpha, params.beta, params.C, params.gamma, n, T);
}

AnReport an_probability(const PathSampler& sampler, int n, double gamma, double T,
                        std::size_t nsamples, std::uint64_t seed,
                        const std::optional<KCParams>& params) {
  if (nsamples == 0) throw std::invalid_argument("an_probability: nsamples must be > 0");
  if (!(T > 0.0) || T > sampler.horizon()) {
    throw std::invalid_argument("an_probability: T outside (0, horizon]");
  }
  const double threshold = std::exp2(-gamma * static_cast<double>(n));
  const std::int64_t increments = static_cast<std::int64_t>(std::floor(std::ldexp(T, n)));
  std::size_t bad = 0;
  for (std::size_t i = 0; i < nsamples; ++i) {
    const SamplePath path = sampler.sample(n, RngStream(path_id_for(seed, i)));
    double worst = 0.0;
    for (std::int64_t k = 1; k <= increments; ++k) {
      worst = std::max(worst, std::abs(path.value_at_index(k) - path.value_at_index(k - 1)));
    }
    if (worst >= threshold) ++bad;  // ties are bad
  }
  AnReport report;
  report.n = n;
  report.gamma = gamma;
  report.empirical = static_cast<double>(bad) / static_cast<double>(nsamples);
  if (params) report.bound = an_bound(*params, n, T);
  report.nsamples = nsamples;
  report.seed = {seed, 0};
  return report;
}

std::vector<MomentRow> kc_moment_check(const PathSampler& sampler, const KCParams& params,
                                       const std::vector<std::pair<double, double>>& pairs,
                                       std::size_t nsamples, std::uint64_t seed) {
  if (pairs.empty()) throw std::invalid_argument("kc_moment_check: no pairs");
  if (nsamples < 2) throw std::invalid_argument("kc_moment_check: nsamples must be >= 2");
  std::vector<double> endpoints;
  for (const auto& [s, t] : pairs) {
    if (s < 0.0 || t < 0.0 || s > sampler.horizon() || t > sampler.horizon()) {
      throw std::invalid_argument("kc_moment_check: pair outside the horizon");
    }
    endpoints.push_back(s);
    endpoints.push_back(t);
  }
  const int level = resolve_level(endpoints);

  std::vector<double> sum(pairs.size(), 0.0);
  std::vector<double> sum_sq(pairs.size(), 0.0);
  for (std::size_t i = 0; i < nsamples; ++i) {
    const SamplePath path = sampler.sample(level, RngStream(path_id_for(seed, i)));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto si = static_cast<std::int64_t>(std::nearbyint(std::ldexp(pairs[k].first, level)));
      const auto ti = static_cast<std::int64_t>(std::nearbyint(std::ldexp(pairs[k].second, level)));
      const double d =
          std::pow(std::abs(path.value_at_index(ti) - path.value_at_index(si)), params.alpha);
      sum[k] += d;
      sum_sq[k] += d * d;
    }
  }

  std::vector<MomentRow> rows;
  rows.reserve(pairs.size());
  const double n = static_cast<double>(nsamples);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    MomentRow row;
    row.s = pairs[k].first;
    row.t = pairs[k].second;
    row.estimate = sum[k] / n;
    const double var = std::max(0.0, sum_sq[k] / n - row.estimate * row.estimate);
    row.std_error = std::sqrt(var / n);
    row.bound = params.C * std::pow(std::abs(row.t - row.s), 1.0 + params.beta);
    row.margin = row.bound - row.estimate;
    row.pass = row.estimate <= row.bound + 3.0 * row.std_error;
    rows.push_back(row);
  }
  return rows;
}

ExtensionValue dyadic_extension(const SamplePath& path, double t,
                                const HolderEstimate& holder) {
  const NearestDyadic nd = nearest_dyadic(t, path.grid);
  ExtensionValue out;
  out.value = path.value_at_index(nd.index);
  out.error_bound = nd.dist == 0.0 ? 0.0 : holder.constant * std::pow(nd.dist, holder.gamma);
  return out;
}

void to_json(nlohmann::json& j, const SeedRecord& r) {
  j = nlohmann::json{{"seed", r.seed}, {"stream", r.stream}};
}

void to_json(nlohmann::json& j, const HolderEstimate& e) {
  j = nlohmann::json{{"gamma", e.gamma},
                     {"constant", e.constant},
                     {"argmax_s", e.s},
                     {"argmax_t", e.t},
                     {"scope", e.scope == HolderScope::global ? "global" : "local"}};
  if (e.scope == HolderScope::local) j["window"] = e.window;
}

void to_json(nlohmann::json& j, const AnReport& r) {
  j = nlohmann::json{{"n", r.n},           {"gamma", r.gamma},
                     {"empirical", r.empirical}, {"bound", nullptr},
                     {"nsamples", r.nsamples},   {"seed", r.seed}};
  if (r.bound) j["bound"] = *r.bound;
}

void to_json(nlohmann::json& j, const MomentRow& row) {
  j = nlohmann::json{{"s", row.s},           {"t", row.t},
                     {"estimate", row.estimate}, {"bound", row.bound},
                     {"margin", row.margin},     {"std_error", row.std_error},
                     {"pass", row.pass}};
}

}  // namespace kolmo
