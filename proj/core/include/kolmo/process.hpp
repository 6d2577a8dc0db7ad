#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/dyadic.hpp"
#include "kolmo/measure.hpp"
#include "kolmo/rng.hpp"

namespace kolmo {

// One realization of a process: values aligned with the points of a grid.
struct SamplePath {
  DyadicGrid grid;
  std::vector<double> values;

  SamplePath(DyadicGrid grid_in, std::vector<double> values_in);

  double value_at_index(std::int64_t i) const { return values[static_cast<std::size_t>(i)]; }

  // CSV with header "time,value"; numbers carry 17 significant digits so the
  // doubles round-trip exactly.
  void write_csv(std::ostream& out) const;
};

// Monte-Carlo face of a process: a deterministic map (level, stream) -> path.
class PathSampler {
 public:
  virtual ~PathSampler() = default;
  virtual double horizon() const = 0;
  virtual SamplePath sample(int level, const RngStream& stream) const = 0;
};

// R_n over a 1-based bit stream: +1 for true, -1 for false, summed over
// j = 1..n. Index 0 of `bits` is deliberately never read.
State random_walk(const std::vector<bool>& bits, int n);

// A process over finitely many times and a finite sample space: the value
// table is total on times x atoms.
class GridProcess {
 public:
  GridProcess(std::vector<double> times, MeasureQ space,
              std::vector<std::vector<double>> values);  // values[time][atom]

  const std::vector<double>& times() const { return times_; }
  const MeasureQ& space() const { return space_; }
  double value(std::size_t time_index, std::size_t atom_index) const {
    return values_[time_index][atom_index];
  }

  std::size_t time_index(double t) const;  // exact match required

  // Finite-dimensional distribution: the pushforward of the space's measure
  // through omega -> (X_t(omega))_{t in J}.
  FiniteMeasure<std::vector<double>, Rat> fdd(const std::vector<double>& J) const;

  bool compatible_with(const GridProcess& other) const;

 private:
  std::vector<double> times_;
  MeasureQ space_;
  std::vector<std::vector<double>> values_;
};

// mu{X_t != Y_t}; zero at every t means X is a modification of Y.
Rat modification_defect(const GridProcess& x, const GridProcess& y, double t);

// mu{exists t with X_t != Y_t}.
Rat indistinguishability_defect(const GridProcess& x, const GridProcess& y);

// Convergence verdicts need a finite-N surrogate for "tends to 0"; both
// thresholds are visible here, never hidden in the implementation.
struct ConvergenceConfig {
  int n_max = 64;
  double tail_threshold = 1e-3;  // in-measure: max defect over the last quarter
  double ae_tolerance = 0.05;    // a.e.: per-atom tail max beyond n_max/2
};

struct ConvergenceReport {
  std::vector<Rat> defects;  // defect(n) for n = 1..n_max
  bool converging = false;
  ConvergenceConfig config;
};

using RandomVariableFamily = std::function<RandomVariableD(int)>;

// defect(n) = mu({|f_n - limit| > eps} intersected with the restriction).
ConvergenceReport converges_in_measure(
    const RandomVariableFamily& family, const RandomVariableD& limit, const MeasureQ& mu,
    double eps, const std::function<bool(State)>& restriction = nullptr,
    const ConvergenceConfig& config = {});

// Measure of the set of atoms whose sequence f_n(omega) fails to settle at
// limit(omega): tail max beyond n_max/2 above the tolerance.
Rat converges_ae(const RandomVariableFamily& family, const RandomVariableD& limit,
                 const MeasureQ& mu, const ConvergenceConfig& config = {});

struct IncrementPairStat {
  std::size_t i = 0;  // increment indices being compared
  std::size_t j = 0;
  double corr = 0.0;
  double corr_p = 1.0;  // two-sided, Fisher z
  double chi2 = 0.0;    // median-split 2x2 independence statistic
  double chi2_p = 1.0;
};

struct IncrementsReport {
  std::vector<double> times;
  std::size_t nsamples = 0;
  SeedRecord seed;
  int level = 0;  // grid level the times were resolved on
  std::vector<IncrementPairStat> pairs;
  bool vacuous = false;  // fewer than two increments: nothing to correlate
  bool pass = false;     // all |corr| < 4/sqrt(nsamples)
};

// Samples nsamples paths, forms increments over consecutive times, and tests
// every pair of increments for independence (Pearson correlation with Fisher-z
// p-values plus a median-split chi-square).
IncrementsReport independent_increments_test(const PathSampler& sampler,
                                             const std::vector<double>& times,
                                             std::size_t nsamples, std::uint64_t seed);

// Smallest level on which every time is a grid point (within 1e-9 of k/2^n).
int resolve_level(const std::vector<double>& times, int max_level = 20);

// 17-significant-digit decimal rendering used by every CSV/report writer.
std::string format_g17(double x);

void to_json(nlohmann::json& j, const IncrementPairStat& stat);
void to_json(nlohmann::json& j, const IncrementsReport& report);

}  // namespace kolmo
