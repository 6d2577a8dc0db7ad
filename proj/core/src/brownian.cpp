#include "kolmo/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "kolmo/normal.hpp"

namespace kolmo {

double brownian_increment(const RngStream& path_stream, int level, std::uint64_t k) {
  return path_stream.child(static_cast<std::uint64_t>(level)).gaussian(k) *
         std::sqrt(std::ldexp(1.0, -level));
}

BrownianSampler::BrownianSampler(double horizon) : horizon_(horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("BrownianSampler: horizon must be > 0");
  }
}

SamplePath BrownianSampler::sample(int level, const RngStream& stream) const {
  if (level < 0 || level > kMaxLevel) {
    throw std::invalid_argument("BrownianSampler: level outside [0, 30]");
  }
  DyadicGrid grid(level, horizon_);
  std::vector<double> values(static_cast<std::size_t>(grid.count()));
  values[0] = 0.0;
  const RngStream level_stream = stream.child(static_cast<std::uint64_t>(level));
  const double sd = std::sqrt(std::ldexp(1.0, -level));
  for (std::int64_t k = 1; k < grid.count(); ++k) {
    values[static_cast<std::size_t>(k)] =
        values[static_cast<std::size_t>(k - 1)] +
        level_stream.gaussian(static_cast<std::uint64_t>(k)) * sd;
  }
  return SamplePath(grid, std::move(values));
}

SamplePath refine_bridge(const SamplePath& path, const RngStream& stream) {
  const int n = path.grid.level();
  if (n + 1 > BrownianSampler::kMaxLevel) {
    throw std::invalid_argument("refine_bridge: level guard exceeded");
  }
  DyadicGrid fine(n + 1, path.grid.horizon());
  const std::int64_t coarse_count = path.grid.count();
  std::vector<double> values(static_cast<std::size_t>(fine.count()));
  const RngStream fine_stream = stream.child(static_cast<std::uint64_t>(n + 1));
  const double mid_sd = std::sqrt(std::ldexp(1.0, -(n + 2)));
  const double inc_sd = std::sqrt(std::ldexp(1.0, -(n + 1)));
  for (std::int64_t k = 0; k < fine.count(); ++k) {
    if (k % 2 == 0) {
      values[static_cast<std::size_t>(k)] = path.value_at_index(k / 2);
      continue;
    }
    const std::int64_t left = (k - 1) / 2;
    const double xi = fine_stream.gaussian(static_cast<std::uint64_t>(k));
    if (left + 1 < coarse_count) {
      const double a = path.value_at_index(left);
      const double b = path.value_at_index(left + 1);
      values[static_cast<std::size_t>(k)] = 0.5 * (a + b) + xi * mid_sd;
    } else {
      // Past the last coarse point: a fresh level-(n+1) increment.
      values[static_cast<std::size_t>(k)] = values[static_cast<std::size_t>(k - 1)] + xi * inc_sd;
    }
  }
  return SamplePath(fine, std::move(values));
}

std::vector<double> marginal_samples(const PathSampler& sampler, double time, int level,
                                     std::size_t nsamples, std::uint64_t seed) {
  const DyadicGrid grid(level, sampler.horizon());
  const double scaled = std::ldexp(time, level);
  const auto index = static_cast<std::int64_t>(std::nearbyint(scaled));
  if (std::abs(scaled - static_cast<double>(index)) > 1e-9 || index < 0 ||
      index >= grid.count()) {
    throw std::invalid_argument("marginal_samples: time is not a level grid point");
  }
  std::vector<double> out(nsamples);
  for (std::size_t i = 0; i < nsamples; ++i) {
    out[i] = sampler.sample(level, RngStream(path_id_for(seed, i))).value_at_index(index);
  }
  return out;
}

HolderTrend holder_trend(const PathSampler& sampler, int level_lo, int level_hi,
                         const std::vector<double>& gammas, std::size_t npaths,
                         std::uint64_t seed) {
  if (level_lo >= level_hi) throw std::invalid_argument("holder_trend: need level_lo < level_hi");
  if (npaths == 0 || gammas.empty()) throw std::invalid_argument("holder_trend: empty sweep");
  HolderTrend trend;
  for (int level = level_lo; level <= level_hi; ++level) trend.levels.push_back(level);
  trend.gammas = gammas;
  const std::size_t nlevels = trend.levels.size();
  trend.mean_constant.assign(gammas.size(), std::vector<double>(nlevels, 0.0));
  trend.growth_factor.assign(gammas.size(), 0.0);
  trend.max_ratio.assign(gammas.size(), 0.0);
  trend.min_ratio.assign(gammas.size(), std::numeric_limits<double>::infinity());

  std::vector<double> growth_sum(gammas.size(), 0.0);
  for (std::size_t p = 0; p < npaths; ++p) {
    const RngStream stream(path_id_for(seed, p));
    SamplePath path = sampler.sample(level_lo, stream);
    // constants[gamma][level index] for this path
    std::vector<std::vector<double>> constants(gammas.size(), std::vector<double>(nlevels, 0.0));
    for (std::size_t li = 0; li < nlevels; ++li) {
      if (li > 0) path = refine_bridge(path, stream);
      const auto estimates = holder_constants(path, gammas);
      for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        constants[gi][li] = estimates[gi].constant;
        trend.mean_constant[gi][li] += estimates[gi].constant;
      }
    }
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      for (std::size_t li = 0; li + 1 < nlevels; ++li) {
        if (constants[gi][li] > 0.0) {
          const double ratio = constants[gi][li + 1] / constants[gi][li];
          trend.max_ratio[gi] = std::max(trend.max_ratio[gi], ratio);
          trend.min_ratio[gi] = std::min(trend.min_ratio[gi], ratio);
        }
      }
      if (constants[gi].front() > 0.0) {
        growth_sum[gi] += (std::log2(constants[gi].back()) - std::log2(constants[gi].front())) /
                          static_cast<double>(nlevels - 1);
      }
    }
  }
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    for (std::size_t li = 0; li < nlevels; ++li) {
      trend.mean_constant[gi][li] /= static_cast<double>(npaths);
    }
    trend.growth_factor[gi] = std::exp2(growth_sum[gi] / static_cast<double>(npaths));
  }
  return trend;
}

namespace {

std::uint64_t subseed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag));
}

}  // namespace

ValidationReport validate(const PathSampler& sampler, const ValidationConfig& config) {
  if (config.nsamples < 1000) throw std::invalid_argument("validate: nsamples must be >= 1000");
  if (config.times.size() < 2 || !std::is_sorted(config.times.begin(), config.times.end())) {
    throw std::invalid_argument("validate: times must be sorted with >= 2 entries");
  }
  if (config.levels.empty() || !std::is_sorted(config.levels.begin(), config.levels.end())) {
    throw std::invalid_argument("validate: levels must be sorted and nonempty");
  }

  ValidationReport report;
  report.config = config;

  // Property 1: W_0 = 0.
  report.w0_ok = true;
  for (std::size_t i = 0; i < 100; ++i) {
    const SamplePath path =
        sampler.sample(config.levels.front(), RngStream(path_id_for(subseed(config.seed, 1), i)));
    if (path.values[0] != 0.0) {
      report.w0_ok = false;
      break;
    }
  }

  // Property 2: increments over consecutive times are N(0, gap).
  const int level = resolve_level(config.times);
  const std::size_t m = config.times.size() - 1;
  std::vector<std::int64_t> indices(config.times.size());
  for (std::size_t i = 0; i < config.times.size(); ++i) {
    indices[i] = static_cast<std::int64_t>(std::nearbyint(std::ldexp(config.times[i], level)));
  }
  std::vector<std::vector<double>> inc(m, std::vector<double>(config.nsamples));
  const std::uint64_t inc_seed = subseed(config.seed, 2);
  for (std::size_t s = 0; s < config.nsamples; ++s) {
    const SamplePath path = sampler.sample(level, RngStream(path_id_for(inc_seed, s)));
    for (std::size_t k = 0; k < m; ++k) {
      inc[k][s] = path.value_at_index(indices[k + 1]) - path.value_at_index(indices[k]);
    }
  }
  report.increments_normal = true;
  for (std::size_t k = 0; k < m; ++k) {
    const double gap = config.times[k + 1] - config.times[k];
    const double sd = std::sqrt(gap);
    const KsResult ks = ks_statistic({inc[k], {inc_seed, 0}},
                                     [sd](double x) { return normal_cdf(x / sd); });
    report.increment_ks.push_back({config.times[k], config.times[k + 1], ks.d, ks.p});
    report.increments_normal = report.increments_normal && ks.p > 0.01;
  }

  // Property 3: increments over disjoint intervals are independent.
  report.independence =
      independent_increments_test(sampler, config.times, config.nsamples, subseed(config.seed, 3));

  // Stationarity: same-length windows have the same increment law.
  report.stationary = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double gap_i = config.times[i + 1] - config.times[i];
      const double gap_j = config.times[j + 1] - config.times[j];
      if (gap_i != gap_j) continue;
      const KsResult ks = ks_two_sample(inc[i], inc[j]);
      report.stationarity_ks.push_back({config.times[i], config.times[j], ks.d, ks.p});
      report.stationary = report.stationary && ks.p > 0.01;
    }
  }

  // Property 4 stand-in: Hölder constants stay put below gamma = 1/2 and grow
  // above it across nested refinements.
  report.holder = holder_trend(sampler, config.levels.front(), config.levels.back(),
                               config.gammas, config.holder_paths, subseed(config.seed, 4));
  report.holder_ok = true;
  for (std::size_t gi = 0; gi < config.gammas.size(); ++gi) {
    const auto& means = report.holder.mean_constant[gi];
    if (config.gammas[gi] < 0.5) {
      for (std::size_t li = 0; li + 1 < means.size(); ++li) {
        if (means[li] > 0.0 && means[li + 1] / means[li] >= 2.0) report.holder_ok = false;
      }
    } else if (config.gammas[gi] > 0.5) {
      const double g = report.holder.growth_factor[gi];
      if (!(g >= std::exp2(0.05) && g <= std::exp2(0.2))) report.holder_ok = false;
    }
  }

  report.all_pass = report.w0_ok && report.increments_normal && report.independence.pass &&
                    report.stationary && report.holder_ok;
  return report;
}

void to_json(nlohmann::json& j, const KsRow& row) {
  j = nlohmann::json{{"s", row.s}, {"t", row.t}, {"d", row.d}, {"p", row.p}};
}

void to_json(nlohmann::json& j, const HolderTrend& trend) {
  j = nlohmann::json{{"levels", trend.levels},
                     {"gammas", trend.gammas},
                     {"mean_constant", trend.mean_constant},
                     {"growth_factor", trend.growth_factor},
                     {"max_ratio", trend.max_ratio},
                     {"min_ratio", trend.min_ratio}};
}

void to_json(nlohmann::json& j, const ValidationConfig& config) {
  j = nlohmann::json{{"levels", config.levels},   {"gammas", config.gammas},
                     {"times", config.times},     {"nsamples", config.nsamples},
                     {"holder_paths", config.holder_paths}, {"seed", config.seed}};
}

void to_json(nlohmann::json& j, const ValidationReport& report) {
  j = nlohmann::json{{"w0_ok", report.w0_ok},
                     {"increment_ks", report.increment_ks},
                     {"increments_normal", report.increments_normal},
                     {"independence", report.independence},
                     {"stationarity_ks", report.stationarity_ks},
                     {"stationary", report.stationary},
                     {"holder", report.holder},
                     {"holder_ok", report.holder_ok},
                     {"all_pass", report.all_pass},
                     {"config", report.config}};
}

}  // namespace kolmo
