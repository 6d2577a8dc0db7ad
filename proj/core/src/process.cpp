#include "kolmo/process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

#include "kolmo/normal.hpp"

namespace kolmo {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SamplePath::SamplePath(DyadicGrid grid_in, std::vector<double> values_in)
    : grid(grid_in), values(std::move(values_in)) {
  if (static_cast<std::int64_t>(values.size()) != grid.count()) {
    throw std::invalid_argument("SamplePath: value count does not match the grid");
  }
}

void SamplePath::write_csv(std::ostream& out) const {
  out << "time,value\n";
  for (std::int64_t i = 0; i < grid.count(); ++i) {
    out << format_g17(grid.time(i)) << "," << format_g17(value_at_index(i)) << "\n";
  }
}

State random_walk(const std::vector<bool>& bits, int n) {
  if (n < 0) throw std::invalid_argument("random_walk: negative n");
  if (bits.size() < static_cast<std::size_t>(n) + 1) {
    throw std::invalid_argument("random_walk: need bits for 1-based indices 1..n");
  }
  State sum = 0;
  for (int j = 1; j <= n; ++j) sum += bits[static_cast<std::size_t>(j)] ? 1 : -1;
  return sum;
}

GridProcess::GridProcess(std::vector<double> times, MeasureQ space,
                         std::vector<std::vector<double>> values)
    : times_(std::move(times)), space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != times_.size()) {
    throw std::invalid_argument("GridProcess: one value row per time required");
  }
  for (const auto& row : values_) {
    if (row.size() != space_.size()) {
      throw std::invalid_argument("GridProcess: value row size != atom count");
    }
  }
}

std::size_t GridProcess::time_index(double t) const {
  const auto it = std::find(times_.begin(), times_.end(), t);
  if (it == times_.end()) throw std::invalid_argument("GridProcess: time not in index");
  return static_cast<std::size_t>(it - times_.begin());
}

FiniteMeasure<std::vector<double>, Rat> GridProcess::fdd(const std::vector<double>& J) const {
  std::vector<std::size_t> indices;
  indices.reserve(J.size());
  for (double t : J) indices.push_back(time_index(t));
  std::vector<std::pair<std::vector<double>, Rat>> atoms;
  atoms.reserve(space_.size());
  for (std::size_t a = 0; a < space_.size(); ++a) {
    std::vector<double> tuple;
    tuple.reserve(indices.size());
    for (std::size_t ti : indices) tuple.push_back(values_[ti][a]);
    atoms.emplace_back(std::move(tuple), space_.atoms()[a].second);
  }
  return FiniteMeasure<std::vector<double>, Rat>::accumulate(atoms);
}

bool GridProcess::compatible_with(const GridProcess& other) const {
  return times_ == other.times_ && space_ == other.space_;
}

namespace {

void require_compatible(const GridProcess& x, const GridProcess& y) {
  if (!x.compatible_with(y)) {
    throw std::invalid_argument("processes are incompatible (index or space differ)");
  }
}

}  // namespace

Rat modification_defect(const GridProcess& x, const GridProcess& y, double t) {
  require_compatible(x, y);
  const std::size_t ti = x.time_index(t);
  Rat defect(0);
  const auto& atoms = x.space().atoms();
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (x.value(ti, a) != y.value(ti, a)) defect += atoms[a].second;
  }
  return defect;
}

Rat indistinguishability_defect(const GridProcess& x, const GridProcess& y) {
  require_compatible(x, y);
  Rat defect(0);
  const auto& atoms = x.space().atoms();
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    for (std::size_t ti = 0; ti < x.times().size(); ++ti) {
      if (x.value(ti, a) != y.value(ti, a)) {
        defect += atoms[a].second;
        break;
      }
    }
  }
  return defect;
}

ConvergenceReport converges_in_measure(const RandomVariableFamily& family,
                                       const RandomVariableD& limit, const MeasureQ& mu,
                                       double eps,
                                       const std::function<bool(State)>& restriction,
                                       const ConvergenceConfig& config) {
  if (!(eps > 0.0)) throw std::domain_error("converges_in_measure: eps must be > 0");
  if (config.n_max < 4) throw std::invalid_argument("converges_in_measure: n_max too small");
  if (!limit.matches_domain(mu)) {
    throw std::invalid_argument("converges_in_measure: limit domain != atom set");
  }
  ConvergenceReport report;
  report.config = config;
  report.defects.reserve(static_cast<std::size_t>(config.n_max));
  for (int n = 1; n <= config.n_max; ++n) {
    const RandomVariableD fn = family(n);
    if (!fn.matches_domain(mu)) {
      throw std::invalid_argument("converges_in_measure: family domain != atom set");
    }
    Rat defect(0);
    for (const auto& [outcome, weight] : mu.atoms()) {
      if (restriction && !restriction(outcome)) continue;
      if (std::abs(fn.at(outcome) - limit.at(outcome)) > eps) defect += weight;
    }
    report.defects.push_back(defect);
  }
  const int tail_start = config.n_max - config.n_max / 4;  // last quarter: n > tail_start
  double tail_max = 0.0;
  for (int n = tail_start + 1; n <= config.n_max; ++n) {
    tail_max = std::max(tail_max, rat_to_double(report.defects[static_cast<std::size_t>(n - 1)]));
  }
  report.converging = tail_max < config.tail_threshold;
  return report;
}

Rat converges_ae(const RandomVariableFamily& family, const RandomVariableD& limit,
                 const MeasureQ& mu, const ConvergenceConfig& config) {
  if (config.n_max < 4) throw std::invalid_argument("converges_ae: n_max too small");
  if (!limit.matches_domain(mu)) {
    throw std::invalid_argument("converges_ae: limit domain != atom set");
  }
  const auto& atoms = mu.atoms();
  std::vector<double> tail_max(atoms.size(), 0.0);
  for (int n = config.n_max / 2 + 1; n <= config.n_max; ++n) {
    const RandomVariableD fn = family(n);
    if (!fn.matches_domain(mu)) {
      throw std::invalid_argument("converges_ae: family domain != atom set");
    }
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const State outcome = atoms[a].first;
      tail_max[a] = std::max(tail_max[a], std::abs(fn.at(outcome) - limit.at(outcome)));
    }
  }
  Rat defect(0);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (tail_max[a] > config.ae_tolerance) defect += atoms[a].second;
  }
  return defect;
}

int resolve_level(const std::vector<double>& times, int max_level) {
  for (int level = 0; level <= max_level; ++level) {
    bool all_exact = true;
    for (double t : times) {
      const double scaled = std::ldexp(t, level);
      if (std::abs(scaled - std::nearbyint(scaled)) > 1e-9) {
        all_exact = false;
        break;
      }
    }
    if (all_exact) return level;
  }
  throw std::invalid_argument("times are not dyadic at any level <= " +
                              std::to_string(max_level));
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    ma += a[s];
    mb += b[s];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const double da = a[s] - ma;
    const double db = b[s] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double median_of(std::vector<double> xs) {
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  return xs[mid];
}

}  // namespace

IncrementsReport independent_increments_test(const PathSampler& sampler,
                                             const std::vector<double>& times,
                                             std::size_t nsamples, std::uint64_t seed) {
  if (times.size() < 2) throw std::invalid_argument("independent_increments_test: need >= 2 times");
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end()) {
    throw std::invalid_argument("independent_increments_test: times must be strictly increasing");
  }
  if (nsamples < 1000) {
    throw std::invalid_argument("independent_increments_test: nsamples must be >= 1000");
  }
  if (times.back() > sampler.horizon()) {
    throw std::invalid_argument("independent_increments_test: time beyond the horizon");
  }

  IncrementsReport report;
  report.times = times;
  report.nsamples = nsamples;
  report.seed = {seed, 0};
  report.level = resolve_level(times);

  const std::size_t m = times.size() - 1;
  std::vector<std::int64_t> indices(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    indices[i] = static_cast<std::int64_t>(std::nearbyint(std::ldexp(times[i], report.level)));
  }
  std::vector<std::vector<double>> inc(m, std::vector<double>(nsamples));
  for (std::size_t s = 0; s < nsamples; ++s) {
    const SamplePath path = sampler.sample(report.level, RngStream(path_id_for(seed, s)));
    for (std::size_t k = 0; k < m; ++k) {
      inc[k][s] = path.value_at_index(indices[k + 1]) - path.value_at_index(indices[k]);
    }
  }

  if (m < 2) {
    report.vacuous = true;
    report.pass = true;
    return report;
  }

  std::vector<double> medians(m);
  for (std::size_t k = 0; k < m; ++k) medians[k] = median_of(inc[k]);

  const double corr_cap = 4.0 / std::sqrt(static_cast<double>(nsamples));
  report.pass = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      IncrementPairStat stat;
      stat.i = i;
      stat.j = j;
      stat.corr = pearson(inc[i], inc[j]);
      const double r = std::clamp(stat.corr, -1.0 + 1e-15, 1.0 - 1e-15);
      const double z = std::atanh(r) * std::sqrt(static_cast<double>(nsamples) - 3.0);
      stat.corr_p = 2.0 * (1.0 - normal_cdf(std::abs(z)));

      double table[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
      for (std::size_t s = 0; s < nsamples; ++s) {
        table[inc[i][s] > medians[i] ? 1 : 0][inc[j][s] > medians[j] ? 1 : 0] += 1.0;
      }
      const double row0 = table[0][0] + table[0][1];
      const double row1 = table[1][0] + table[1][1];
      const double col0 = table[0][0] + table[1][0];
      const double col1 = table[0][1] + table[1][1];
      const double total = row0 + row1;
      if (row0 > 0 && row1 > 0 && col0 > 0 && col1 > 0) {
        const double det = table[0][0] * table[1][1] - table[0][1] * table[1][0];
        stat.chi2 = total * det * det / (row0 * row1 * col0 * col1);
        stat.chi2_p = chi_square1_tail(stat.chi2);
      }
      if (std::abs(stat.corr) >= corr_cap) report.pass = false;
      report.pairs.push_back(stat);
    }
  }
  return report;
}

void to_json(nlohmann::json& j, const IncrementPairStat& stat) {
  j = nlohmann::json{{"i", stat.i},           {"j", stat.j},
                     {"corr", stat.corr},     {"corr_p", stat.corr_p},
                     {"chi2", stat.chi2},     {"chi2_p", stat.chi2_p}};
}

void to_json(nlohmann::json& j, const IncrementsReport& report) {
  j = nlohmann::json{{"times", report.times},
                     {"nsamples", report.nsamples},
                     {"seed", nlohmann::json{{"seed", report.seed.seed},
                                             {"stream", report.seed.stream}}},
                     {"level", report.level},
                     {"pairs", report.pairs},
                     {"vacuous", report.vacuous},
                     {"pass", report.pass}};
}

}  // namespace kolmo
