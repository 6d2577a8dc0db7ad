#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <vector>

#include "kolmo/process.hpp"

namespace kolmo {

enum class HolderScope { global, local };

struct HolderEstimate {
  double gamma = 0.0;
  double constant = 0.0;
  double s = 0.0;  // argmax pair
  double t = 0.0;
  HolderScope scope = HolderScope::global;
  double window = 0.0;  // local scope: pairs restricted to |s - t| < window
};

inline constexpr std::int64_t kHolderScanGuard = 20001;  // full O(m^2) scan cap

// Largest |x_s - x_t| / |s - t|^gamma over in-scope grid pairs. Ties keep the
// first pair in scan order (lags ascending, then left endpoints ascending).
HolderEstimate holder_constant(const SamplePath& path, double gamma,
                               HolderScope scope = HolderScope::global,
                               double window = 0.0);

// Same scan for several gammas at once: the per-lag increment maxima are
// computed once and reused, which is what makes multi-level sweeps affordable.
std::vector<HolderEstimate> holder_constants(const SamplePath& path,
                                             const std::vector<double>& gammas,
                                             HolderScope scope = HolderScope::global,
                                             double window = 0.0);

// Moment-condition parameters: E|X_t - X_s|^alpha <= C |t-s|^{1+beta}, with the
// target exponent gamma constrained to (0, beta/alpha).
struct KCParams {
  double alpha;
  double beta;
  double C;
  double gamma;

  KCParams(double alpha_in, double beta_in, double c_in, double gamma_in);
};

// C * gap^{1+beta} / eps^alpha, clamped to [0,1] for reporting.
double chebyshev_tail_bound(const KCParams& params, double gap, double eps);

// Union bound over the floor(2^n T) adjacent increments at level n:
// floor(2^n T) * C * 2^{-n(1 + beta - alpha gamma)}.
double an_bound(const KCParams& params, int n, double T);

// Unvalidated overload so boundary cases (gamma = beta/alpha and beyond) stay
// computable for negative controls.
double an_bound(double alpha, double beta, double C, double gamma, int n, double T);

// The level-n bad event: some adjacent dyadic increment within [0, T] has
// magnitude >= 2^{-gamma n}; ties land in the bad set.
struct AnReport {
  int n = 0;
  double gamma = 0.0;
  double empirical = 0.0;  // sample proportion of bad paths
  std::optional<double> bound;
  std::size_t nsamples = 0;
  SeedRecord seed;
};

AnReport an_probability(const PathSampler& sampler, int n, double gamma, double T,
                        std::size_t nsamples, std::uint64_t seed,
                        const std::optional<KCParams>& params = std::nullopt);

struct MomentRow {
  double s = 0.0;
  double t = 0.0;
  double estimate = 0.0;  // Monte-Carlo mean of |X_t - X_s|^alpha
  double bound = 0.0;     // C |t-s|^{1+beta}
  double margin = 0.0;    // bound - estimate
  double std_error = 0.0;
  bool pass = false;  // estimate <= bound + 3 * std_error
};

std::vector<MomentRow> kc_moment_check(const PathSampler& sampler, const KCParams& params,
                                       const std::vector<std::pair<double, double>>& pairs,
                                       std::size_t nsamples, std::uint64_t seed);

// Value of the path extended off the grid via its Hölder estimate: nearest
// grid point plus the worst-case gap contribution C * dist^gamma.
struct ExtensionValue {
  double value = 0.0;
  double error_bound = 0.0;
};

ExtensionValue dyadic_extension(const SamplePath& path, double t,
                                const HolderEstimate& holder);

void to_json(nlohmann::json& j, const SeedRecord& r);
void to_json(nlohmann::json& j, const HolderEstimate& e);
void to_json(nlohmann::json& j, const AnReport& r);
void to_json(nlohmann::json& j, const MomentRow& row);

}  // namespace kolmo
