// kolmo — command-line front end for the stochastic-process toolkit.
//
// Subcommands: sample-brownian, verify-kc, verify-semigroup, test-increments,
// simulate-shs, dyadics, validate-brownian. Every command is a pure function
// of (flags, config file, seed): identical inputs give byte-identical outputs.
// Flags override config-file values; KOLMO_SEED supplies the default seed; the
// effective merged configuration is echoed into every JSON report.
//
// Exit codes: 0 all checks passed, 1 a statistical or structural check failed,
// 2 usage or configuration error.

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kolmo/brownian.hpp"
#include "kolmo/continuity.hpp"
#include "kolmo/dyadic.hpp"
#include "kolmo/kernel.hpp"
#include "kolmo/process.hpp"
#include "kolmo/rng.hpp"
#include "kolmo/shs.hpp"

namespace {

using nlohmann::json;

// Negative-control sampler: the identically-zero path on every grid.
class ZeroSampler : public kolmo::PathSampler {
 public:
  explicit ZeroSampler(double horizon) : horizon_(horizon) {}
  double horizon() const override { return horizon_; }
  kolmo::SamplePath sample(int level, const kolmo::RngStream&) const override {
    kolmo::DyadicGrid grid(level, horizon_);
    return kolmo::SamplePath(grid, std::vector<double>(static_cast<std::size_t>(grid.count())));
  }

 private:
  double horizon_;
};

std::unique_ptr<kolmo::PathSampler> make_sampler(const std::string& name, double horizon) {
  if (name == "brownian") return std::make_unique<kolmo::BrownianSampler>(horizon);
  if (name == "zero") return std::make_unique<ZeroSampler>(horizon);
  throw std::invalid_argument("unknown sampler '" + name + "' (expected brownian|zero)");
}

// Empty path prints to stdout; a write failure is a usage-level error.
int emit_json(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out_path);
  if (!file) {
    std::cerr << "kolmo: cannot open '" << out_path << "' for writing\n";
    return 2;
  }
  file << text;
  file.flush();
  if (!file.good()) {
    std::cerr << "kolmo: write to '" << out_path << "' failed\n";
    return 2;
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

int require_integer(double x, const char* what) {
  if (!(x >= 0.0) || x != std::floor(x) || x > 1e9) {
    throw std::invalid_argument(std::string(what) + " must be a small nonnegative integer");
  }
  return static_cast<int>(x);
}

// ---------------------------------------------------------------------------
// sample-brownian
// ---------------------------------------------------------------------------
struct SampleBrownianOpts {
  double T = 1.0;
  int level = 8;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int run_sample_brownian(const SampleBrownianOpts& opts) {
  const kolmo::BrownianSampler sampler(opts.T);
  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) {
    std::cerr << "kolmo: cannot create '" << opts.out_dir << "': " << ec.message() << "\n";
    return 2;
  }
  if (opts.count < 1) throw std::invalid_argument("count must be >= 1");

  json manifest;
  manifest["command"] = "sample-brownian";
  manifest["config"] = {{"T", opts.T},
                        {"level", opts.level},
                        {"count", opts.count},
                        {"seed", opts.seed},
                        {"out-dir", opts.out_dir}};
  json paths = json::array();
  for (int i = 0; i < opts.count; ++i) {
    const std::uint64_t path_id = kolmo::path_id_for(opts.seed, static_cast<std::uint64_t>(i));
    const kolmo::SamplePath path = sampler.sample(opts.level, kolmo::RngStream(path_id));
    char name[32];
    std::snprintf(name, sizeof name, "path_%04d.csv", i);
    const std::string file_path = opts.out_dir + "/" + name;
    std::ofstream csv(file_path);
    if (!csv) {
      std::cerr << "kolmo: cannot open '" << file_path << "' for writing\n";
      return 2;
    }
    path.write_csv(csv);
    csv.flush();
    if (!csv.good()) {
      std::cerr << "kolmo: write to '" << file_path << "' failed\n";
      return 2;
    }
    paths.push_back({{"file", name}, {"path-id", path_id}, {"rows", path.values.size()}});
  }
  manifest["paths"] = paths;
  return emit_json(manifest, opts.out_dir + "/manifest.json");
}

// ---------------------------------------------------------------------------
// verify-kc
// ---------------------------------------------------------------------------
struct VerifyKcOpts {
  double alpha = 4.0;
  double beta = 1.0;
  double C = 3.0;
  double gamma = 0.2;
  double T = 1.0;
  std::vector<int> levels = {4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::size_t nsamples = 10000;
  std::string sampler = "brownian";
  std::uint64_t seed = 0;
  std::string out;
};

int run_verify_kc(const VerifyKcOpts& opts) {
  const kolmo::KCParams params(opts.alpha, opts.beta, opts.C, opts.gamma);
  const auto sampler = make_sampler(opts.sampler, opts.T);

  bool all_pass = true;
  json an_rows = json::array();
  for (int n : opts.levels) {
    const kolmo::AnReport report =
        kolmo::an_probability(*sampler, n, opts.gamma, opts.T, opts.nsamples, opts.seed, params);
    const double sigma =
        std::sqrt(report.empirical * (1.0 - report.empirical) /
                  static_cast<double>(report.nsamples));
    const bool ok = report.empirical <= *report.bound + 3.0 * sigma;
    json row = report;
    row["pass"] = ok;
    an_rows.push_back(row);
    all_pass = all_pass && ok;
  }

  const double T = opts.T;
  const std::vector<std::pair<double, double>> pairs = {
      {0.0, T / 2}, {T / 2, 3 * T / 4}, {T / 4, T / 2}, {0.0, T / 8}, {T / 8, T / 4}};
  const std::vector<kolmo::MomentRow> moments =
      kolmo::kc_moment_check(*sampler, params, pairs, opts.nsamples, opts.seed);
  for (const auto& row : moments) all_pass = all_pass && row.pass;

  json report;
  report["command"] = "verify-kc";
  report["config"] = {{"alpha", opts.alpha}, {"beta", opts.beta},     {"C", opts.C},
                      {"gamma", opts.gamma}, {"T", opts.T},           {"levels", opts.levels},
                      {"nsamples", opts.nsamples}, {"sampler", opts.sampler},
                      {"seed", opts.seed}};
  report["an"] = an_rows;
  report["moments"] = moments;
  report["pass"] = all_pass;
  const int write_rc = emit_json(report, opts.out);
  if (write_rc != 0) return write_rc;
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-semigroup
// ---------------------------------------------------------------------------
struct VerifySemigroupOpts {
  std::string family = "gaussian";
  double s = 0.5;
  double t = 0.25;
  std::string p = "1/2";
  std::string lhs;
  std::string rhs;
  std::string expect;
  std::string out;
};

int run_verify_semigroup(const VerifySemigroupOpts& opts) {
  json report;
  report["command"] = "verify-semigroup";
  bool pass = false;

  if (opts.family == "files") {
    if (opts.lhs.empty() || opts.rhs.empty() || opts.expect.empty()) {
      throw std::invalid_argument("--family files requires --lhs, --rhs and --expect");
    }
    const kolmo::DiscreteKernel lhs = kolmo::kernel_from_text(read_file(opts.lhs));
    const kolmo::DiscreteKernel rhs = kolmo::kernel_from_text(read_file(opts.rhs));
    const kolmo::DiscreteKernel expect = kolmo::kernel_from_text(read_file(opts.expect));
    pass = kolmo::compose(lhs, rhs) == expect;
    report["config"] = {{"family", opts.family},
                        {"lhs", opts.lhs},
                        {"rhs", opts.rhs},
                        {"expect", opts.expect}};
    report["exact"] = pass;
  } else if (opts.family == "gaussian") {
    std::vector<double> index = {0.0, opts.s, opts.t, opts.s + opts.t};
    std::sort(index.begin(), index.end());
    index.erase(std::unique(index.begin(), index.end()), index.end());
    const kolmo::KernelFamily family = kolmo::gaussian_semigroup(index);
    const kolmo::SemigroupCheck check = kolmo::check_semigroup(family, opts.s, opts.t);
    pass = check.pass();
    report["config"] = {{"family", opts.family}, {"s", opts.s}, {"t", opts.t}};
    report["identity-ok"] = check.identity_ok;
    report["exact"] = check.exact;
    report["max-discrepancy"] = check.max_discrepancy;
  } else if (opts.family == "random-walk") {
    const int s = require_integer(opts.s, "--s");
    const int t = require_integer(opts.t, "--t");
    const kolmo::Rat p = kolmo::rat_from_string(opts.p);
    const kolmo::KernelFamily family =
        kolmo::random_walk_semigroup(p, std::max(16, s + t));
    const kolmo::SemigroupCheck check =
        kolmo::check_semigroup(family, static_cast<double>(s), static_cast<double>(t));
    pass = check.pass();
    report["config"] = {{"family", opts.family}, {"s", s}, {"t", t}, {"p", opts.p}};
    report["identity-ok"] = check.identity_ok;
    report["exact"] = check.exact;
    report["max-discrepancy"] = check.max_discrepancy;
  } else {
    throw std::invalid_argument("unknown family '" + opts.family +
                                "' (expected gaussian|random-walk|files)");
  }

  report["pass"] = pass;
  const int write_rc = emit_json(report, opts.out);
  if (write_rc != 0) return write_rc;
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// test-increments
// ---------------------------------------------------------------------------
struct TestIncrementsOpts {
  std::vector<double> times = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t nsamples = 2000;
  double T = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_test_increments(const TestIncrementsOpts& opts) {
  const kolmo::BrownianSampler sampler(opts.T);
  const kolmo::IncrementsReport result =
      kolmo::independent_increments_test(sampler, opts.times, opts.nsamples, opts.seed);

  json report;
  report["command"] = "test-increments";
  report["config"] = {{"times", opts.times},
                      {"nsamples", opts.nsamples},
                      {"T", opts.T},
                      {"seed", opts.seed}};
  report["report"] = result;
  report["pass"] = result.pass;
  const int write_rc = emit_json(report, opts.out);
  if (write_rc != 0) return write_rc;
  return result.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate-shs
// ---------------------------------------------------------------------------
struct SimulateShsOpts {
  std::string model = "thermostat";
  double T = 50.0;
  int level = 10;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  std::string trace_out;
  std::string events_out;
  std::string out;
};

int run_simulate_shs(const SimulateShsOpts& opts) {
  if (opts.model != "thermostat") {
    throw std::invalid_argument("unknown model '" + opts.model + "' (expected thermostat)");
  }
  kolmo::HybridAutomaton automaton = kolmo::thermostat();
  if (opts.sigma) {
    for (auto& mode : automaton.modes) mode.sigma = *opts.sigma;
  }
  const kolmo::Trace trace =
      kolmo::simulate(automaton, opts.T, opts.level, kolmo::RngStream(opts.seed));

  for (const auto& [path, writer] :
       std::initializer_list<std::pair<std::string, void (kolmo::Trace::*)(std::ostream&) const>>{
           {opts.trace_out, &kolmo::Trace::write_csv},
           {opts.events_out, &kolmo::Trace::write_events_csv}}) {
    if (path.empty()) continue;
    std::ofstream csv(path);
    if (!csv) {
      std::cerr << "kolmo: cannot open '" << path << "' for writing\n";
      return 2;
    }
    (trace.*writer)(csv);
    csv.flush();
    if (!csv.good()) {
      std::cerr << "kolmo: write to '" << path << "' failed\n";
      return 2;
    }
  }

  json report;
  report["command"] = "simulate-shs";
  report["config"] = {{"model", opts.model},
                      {"T", opts.T},
                      {"level", opts.level},
                      {"sigma", opts.sigma ? json(*opts.sigma) : json(nullptr)},
                      {"seed", opts.seed},
                      {"trace-out", opts.trace_out},
                      {"events-out", opts.events_out}};
  report["steps"] = trace.times.size() - 1;
  report["final-x"] = trace.xs.back();
  report["final-mode"] = trace.mode_at(trace.times.size() - 1);
  report["first-event-time"] =
      trace.events.empty() ? json(nullptr) : json(trace.events.front().time);
  report["events"] = trace.events;
  report["violations"] = trace.violations;
  return emit_json(report, opts.out);
}

// ---------------------------------------------------------------------------
// dyadics
// ---------------------------------------------------------------------------
struct DyadicsOpts {
  std::vector<double> grid;     // level T
  std::vector<double> nearest;  // t level T
  std::vector<double> canon;    // k n
};

int run_dyadics(const DyadicsOpts& opts) {
  if (!opts.grid.empty()) {
    const int level = require_integer(opts.grid[0], "grid level");
    const kolmo::DyadicGrid grid(level, opts.grid[1]);
    for (std::int64_t i = 0; i < grid.count(); ++i) {
      if (i > 0) std::cout << " ";
      std::cout << grid.point(i).to_string();
    }
    std::cout << "\n";
    return 0;
  }
  if (!opts.nearest.empty()) {
    const int level = require_integer(opts.nearest[1], "nearest level");
    const kolmo::DyadicGrid grid(level, opts.nearest[2]);
    const kolmo::NearestDyadic hit = kolmo::nearest_dyadic(opts.nearest[0], grid);
    std::cout << hit.point.to_string() << " " << kolmo::format_g17(hit.dist) << " " << hit.index
              << "\n";
    return 0;
  }
  if (!opts.canon.empty()) {
    const int n = require_integer(opts.canon[1], "denominator exponent");
    if (opts.canon[0] != std::floor(opts.canon[0])) {
      throw std::invalid_argument("numerator must be an integer");
    }
    std::cout << kolmo::canonicalize(static_cast<std::int64_t>(opts.canon[0]), n).to_string()
              << "\n";
    return 0;
  }
  throw std::invalid_argument("dyadics needs one of --grid, --nearest, --canonicalize");
}

// ---------------------------------------------------------------------------
// validate-brownian
// ---------------------------------------------------------------------------
struct ValidateBrownianOpts {
  kolmo::ValidationConfig config;
  double T = 1.0;
  std::string out;
};

int run_validate_brownian(const ValidateBrownianOpts& opts) {
  const kolmo::BrownianSampler sampler(opts.T);
  const kolmo::ValidationReport result = kolmo::validate(sampler, opts.config);

  json report;
  report["command"] = "validate-brownian";
  report["config"] = opts.config;
  report["config"]["T"] = opts.T;
  report["report"] = result;
  report["pass"] = result.all_pass;
  const int write_rc = emit_json(report, opts.out);
  if (write_rc != 0) return write_rc;
  return result.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Shared --config / --seed plumbing
// ---------------------------------------------------------------------------
// Every subcommand takes `--config FILE` (flat key=value lines, `#` comments)
// and, where randomness is involved, `--seed N`. Precedence: command-line
// flags beat config-file values, which beat the KOLMO_SEED environment
// variable. Config keys are option names without the leading dashes; unknown
// or duplicate keys are errors.

struct CommonRefs {
  std::string config_path;
  CLI::Option* seed_opt = nullptr;
  std::uint64_t* seed = nullptr;
};

void add_common(std::map<CLI::App*, CommonRefs>& registry, CLI::App* sub, std::uint64_t* seed) {
  CommonRefs& refs = registry[sub];
  sub->add_option("--config", refs.config_path,
                  "flat key=value config file; flags take precedence");
  if (seed != nullptr) {
    refs.seed = seed;
    refs.seed_opt = sub->add_option("--seed", *seed, "experiment seed (default: $KOLMO_SEED)")
                        ->capture_default_str();
  }
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& origin) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument(origin + ": seed must be a nonnegative integer, got '" + text +
                                "'");
  }
  errno = 0;
  const unsigned long long value = std::strtoull(text.c_str(), nullptr, 10);
  if (errno == ERANGE) {
    throw std::invalid_argument(origin + ": seed out of range: '" + text + "'");
  }
  return static_cast<std::uint64_t>(value);
}

// Applies the config file (if given) and the KOLMO_SEED fallback to the
// subcommand that was actually parsed. Values already set on the command line
// are left untouched.
void apply_config_and_env(CLI::App* sub, CommonRefs& refs) {
  bool seed_from_config = false;
  if (!refs.config_path.empty()) {
    std::ifstream in(refs.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + refs.config_path);
    std::vector<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string text = trim(line);
      if (text.empty() || text[0] == '#') continue;
      const std::string where = refs.config_path + ":" + std::to_string(lineno);
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key=value");
      const std::string key = trim(text.substr(0, eq));
      const std::string value = trim(text.substr(eq + 1));
      if (key.empty()) throw std::invalid_argument(where + ": empty key");
      if (key == "config") {
        throw std::invalid_argument(where + ": 'config' cannot be set from a config file");
      }
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
        throw std::invalid_argument(where + ": duplicate key '" + key + "'");
      }
      seen.push_back(key);
      CLI::Option* opt = sub->get_option_no_throw("--" + key);
      if (opt == nullptr) throw std::invalid_argument(where + ": unknown key '" + key + "'");
      if (opt->count() > 0) continue;  // command-line flag wins
      opt->add_result(value);
      opt->run_callback();
      if (opt == refs.seed_opt) seed_from_config = true;
    }
  }
  if (refs.seed != nullptr && !seed_from_config && refs.seed_opt->count() == 0) {
    const char* env = std::getenv("KOLMO_SEED");
    if (env != nullptr && *env != '\0') {
      *refs.seed = parse_seed_text(env, "KOLMO_SEED");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic-process construction and verification toolkit"};
  app.require_subcommand(1);
  std::map<CLI::App*, CommonRefs> common;

  SampleBrownianOpts sample_opts;
  CLI::App* sample = app.add_subcommand("sample-brownian", "emit Brownian path CSVs");
  add_common(common, sample, &sample_opts.seed);
  sample->add_option("--T", sample_opts.T, "time horizon")->capture_default_str();
  sample->add_option("--level", sample_opts.level, "dyadic grid level")->capture_default_str();
  sample->add_option("--count", sample_opts.count, "number of paths")->capture_default_str();
  sample->add_option("--out-dir", sample_opts.out_dir, "output directory")
      ->capture_default_str();

  VerifyKcOpts kc_opts;
  CLI::App* kc = app.add_subcommand("verify-kc", "empirical moment and A_n bound suite");
  add_common(common, kc, &kc_opts.seed);
  kc->add_option("--alpha", kc_opts.alpha, "moment exponent")->capture_default_str();
  kc->add_option("--beta", kc_opts.beta, "gap exponent offset")->capture_default_str();
  kc->add_option("--C", kc_opts.C, "moment constant")->capture_default_str();
  kc->add_option("--gamma", kc_opts.gamma, "target regularity exponent")->capture_default_str();
  kc->add_option("--T", kc_opts.T, "time horizon")->capture_default_str();
  kc->add_option("--levels", kc_opts.levels, "grid levels to test")->delimiter(',');
  kc->add_option("--nsamples", kc_opts.nsamples, "paths per level")->capture_default_str();
  kc->add_option("--sampler", kc_opts.sampler, "brownian|zero")->capture_default_str();
  kc->add_option("--out", kc_opts.out, "report path (default stdout)");

  VerifySemigroupOpts semi_opts;
  CLI::App* semi = app.add_subcommand("verify-semigroup", "composition-law checks");
  add_common(common, semi, nullptr);
  semi->add_option("--family", semi_opts.family, "gaussian|random-walk|files")
      ->capture_default_str();
  semi->add_option("--s", semi_opts.s, "first time index")->capture_default_str();
  semi->add_option("--t", semi_opts.t, "second time index")->capture_default_str();
  semi->add_option("--p", semi_opts.p, "random-walk up-probability (rational a/b)")
      ->capture_default_str();
  semi->add_option("--lhs", semi_opts.lhs, "kernel text file, left factor");
  semi->add_option("--rhs", semi_opts.rhs, "kernel text file, right factor");
  semi->add_option("--expect", semi_opts.expect, "kernel text file, expected composition");
  semi->add_option("--out", semi_opts.out, "report path (default stdout)");

  TestIncrementsOpts inc_opts;
  CLI::App* inc = app.add_subcommand("test-increments", "increment-independence test");
  add_common(common, inc, &inc_opts.seed);
  inc->add_option("--times", inc_opts.times, "strictly increasing dyadic times")->delimiter(',');
  inc->add_option("--nsamples", inc_opts.nsamples, "sample count (>= 1000)")
      ->capture_default_str();
  inc->add_option("--T", inc_opts.T, "time horizon")->capture_default_str();
  inc->add_option("--out", inc_opts.out, "report path (default stdout)");

  SimulateShsOpts shs_opts;
  double shs_sigma = 0.0;
  CLI::App* shs = app.add_subcommand("simulate-shs", "stochastic hybrid system simulation");
  add_common(common, shs, &shs_opts.seed);
  shs->add_option("--model", shs_opts.model, "model name (thermostat)")->capture_default_str();
  shs->add_option("--T", shs_opts.T, "time horizon")->capture_default_str();
  shs->add_option("--level", shs_opts.level, "step size 2^-level")->capture_default_str();
  CLI::Option* sigma_opt =
      shs->add_option("--sigma", shs_sigma, "override the diffusion coefficient in every mode");
  shs->add_option("--trace-out", shs_opts.trace_out, "trace CSV path");
  shs->add_option("--events-out", shs_opts.events_out, "events CSV path");
  shs->add_option("--out", shs_opts.out, "report path (default stdout)");

  DyadicsOpts dyadic_opts;
  CLI::App* dyadics = app.add_subcommand("dyadics", "dyadic grid utilities");
  add_common(common, dyadics, nullptr);
  CLI::Option* grid_opt =
      dyadics->add_option("--grid", dyadic_opts.grid, "LEVEL T: print the grid points")
          ->expected(2);
  CLI::Option* nearest_opt =
      dyadics
          ->add_option("--nearest", dyadic_opts.nearest, "t LEVEL T: closest grid point to t")
          ->expected(3);
  dyadics->add_option("--canonicalize", dyadic_opts.canon, "K N: reduce K/2^N")
      ->expected(2)
      ->excludes(grid_opt)
      ->excludes(nearest_opt);
  grid_opt->excludes(nearest_opt);

  ValidateBrownianOpts val_opts;
  CLI::App* val = app.add_subcommand("validate-brownian", "full Brownian property suite");
  add_common(common, val, &val_opts.config.seed);
  val->add_option("--levels", val_opts.config.levels, "refinement levels")->delimiter(',');
  val->add_option("--gammas", val_opts.config.gammas, "regularity exponents")->delimiter(',');
  val->add_option("--times", val_opts.config.times, "marginal times")->delimiter(',');
  val->add_option("--nsamples", val_opts.config.nsamples, "sample count (>= 1000)")
      ->capture_default_str();
  val->add_option("--holder-paths", val_opts.config.holder_paths, "paths per regularity sweep")
      ->capture_default_str();
  val->add_option("--T", val_opts.T, "time horizon")->capture_default_str();
  val->add_option("--out", val_opts.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto guarded = [](auto&& body) -> int {
    try {
      return body();
    } catch (const std::exception& e) {
      std::cerr << "kolmo: " << e.what() << "\n";
      return 2;
    }
  };

  const int common_rc = guarded([&] {
    for (auto& [sub, refs] : common) {
      if (app.got_subcommand(sub)) apply_config_and_env(sub, refs);
    }
    return 0;
  });
  if (common_rc != 0) return common_rc;

  if (app.got_subcommand(sample)) return guarded([&] { return run_sample_brownian(sample_opts); });
  if (app.got_subcommand(kc)) return guarded([&] { return run_verify_kc(kc_opts); });
  if (app.got_subcommand(semi)) return guarded([&] { return run_verify_semigroup(semi_opts); });
  if (app.got_subcommand(inc)) return guarded([&] { return run_test_increments(inc_opts); });
  if (app.got_subcommand(shs)) {
    if (sigma_opt->count() > 0) shs_opts.sigma = shs_sigma;
    return guarded([&] { return run_simulate_shs(shs_opts); });
  }
  if (app.got_subcommand(dyadics)) return guarded([&] { return run_dyadics(dyadic_opts); });
  if (app.got_subcommand(val)) return guarded([&] { return run_validate_brownian(val_opts); });

  std::cerr << "kolmo: no subcommand\n";
  return 2;
}
