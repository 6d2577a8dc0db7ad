#pragma once

#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "kolmo/continuity.hpp"
#include "kolmo/process.hpp"

namespace kolmo {

// Level-n Brownian increment read off a path stream: the level's substream at
// counter k, scaled to variance 2^-n. The SHS driver pulls its noise through
// this same function, so simulations couple exactly to sampled paths.
double brownian_increment(const RngStream& path_stream, int level, std::uint64_t k);

// W on D_n(T) as cumulative sums of i.i.d. N(0, 2^-n) increments; W_0 = 0.
class BrownianSampler : public PathSampler {
 public:
  static constexpr int kMaxLevel = 30;  // path length guard

  explicit BrownianSampler(double horizon);

  double horizon() const override { return horizon_; }
  SamplePath sample(int level, const RngStream& stream) const override;

 private:
  double horizon_;
};

// One bridge-refinement step from level n to n+1: retained points are
// bit-identical; each interior midpoint is drawn from N((a+b)/2, 2^{-(n+2)});
// a trailing point past the last coarse point gets a fresh increment.
SamplePath refine_bridge(const SamplePath& path, const RngStream& stream);

// Marginal of the sampler at one grid time across independently seeded paths.
std::vector<double> marginal_samples(const PathSampler& sampler, double time, int level,
                                     std::size_t nsamples, std::uint64_t seed);

// Hölder constants on one nested refinement sweep per path: sampled at
// level_lo, bridge-refined up to level_hi, scanned at every level in between.
struct HolderTrend {
  std::vector<int> levels;
  std::vector<double> gammas;
  std::vector<std::vector<double>> mean_constant;  // [gamma][level]
  std::vector<double> growth_factor;  // [gamma]: per-path geometric per-level growth, averaged
  std::vector<double> max_ratio;      // [gamma]: worst per-path consecutive-level ratio
  std::vector<double> min_ratio;
};

HolderTrend holder_trend(const PathSampler& sampler, int level_lo, int level_hi,
                         const std::vector<double>& gammas, std::size_t npaths,
                         std::uint64_t seed);

struct ValidationConfig {
  std::vector<int> levels = {8, 9, 10, 11, 12};
  std::vector<double> gammas = {0.4, 0.6};
  std::vector<double> times = {0.0, 0.25, 0.5, 1.0};
  std::size_t nsamples = 10000;
  std::size_t holder_paths = 20;
  std::uint64_t seed = 0;
};

struct KsRow {
  double s = 0.0;  // interval (or window start) being tested
  double t = 0.0;
  double d = 0.0;
  double p = 1.0;
};

// The four defining properties, checked empirically: start at zero, normal
// increments, independent increments, and the Hölder dichotomy around 1/2
// standing in for path continuity.
struct ValidationReport {
  bool w0_ok = false;
  std::vector<KsRow> increment_ks;    // W_t - W_s against N(0, t-s)
  bool increments_normal = false;     // all p > 0.01
  IncrementsReport independence;
  std::vector<KsRow> stationarity_ks;  // equal-length windows, two-sample
  bool stationary = false;
  HolderTrend holder;
  bool holder_ok = false;  // gammas below 1/2 stable, above 1/2 growing
  bool all_pass = false;
  ValidationConfig config;
};

ValidationReport validate(const PathSampler& sampler, const ValidationConfig& config = {});

void to_json(nlohmann::json& j, const KsRow& row);
void to_json(nlohmann::json& j, const HolderTrend& trend);
void to_json(nlohmann::json& j, const ValidationConfig& config);
void to_json(nlohmann::json& j, const ValidationReport& report);

}  // namespace kolmo
