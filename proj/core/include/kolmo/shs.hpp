#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/process.hpp"

namespace kolmo {

// Guard and invariant predicates are interval thresholds on the continuous
// state, so traces can report exactly which comparison fired.
struct ThresholdPredicate {
  enum class Cmp { lt, gt, le, ge };

  Cmp cmp = Cmp::lt;
  double bound = 0.0;

  bool eval(double x) const;
  std::string to_string() const;
};

struct Guard {
  ThresholdPredicate trigger;
  std::string target;
};

// dx = (a + b x) dt + sigma dB while in the mode; guards fire in declaration
// order with an identity reset.
struct Mode {
  std::string name;
  double drift_a = 0.0;
  double drift_b = 0.0;
  double sigma = 0.0;
  std::optional<ThresholdPredicate> invariant;
  std::vector<Guard> guards;
};

struct HybridAutomaton {
  std::vector<Mode> modes;
  std::string initial_mode;
  double initial_x = 0.0;

  // Mode names unique, guard targets and the initial mode present.
  void validate() const;
  std::size_t mode_index(const std::string& name) const;
};

// The two-mode heater: Off has dx = -0.1 x dt + 0.1 dB with invariant x >= 18
// and guard x < 19 -> On; On has dx = (5 - 0.1 x) dt + 0.1 dB with invariant
// x <= 22 and guard x > 21 -> Off; start (Off, 20).
HybridAutomaton thermostat();

struct TraceEvent {
  double time = 0.0;
  std::string from;
  std::string to;
};

// Invariants are monitored, not enforced: with unbounded Gaussian noise any
// hard constraint fails with positive probability, so breaches are logged.
struct InvariantViolation {
  double time = 0.0;
  std::string mode;
  double x = 0.0;
};

struct Trace {
  std::vector<double> times;
  std::vector<std::size_t> mode_indices;
  std::vector<double> xs;
  std::vector<std::string> mode_names;  // indexed by mode_indices entries
  std::vector<TraceEvent> events;
  std::vector<InvariantViolation> violations;

  const std::string& mode_at(std::size_t row) const { return mode_names[mode_indices[row]]; }
  void write_csv(std::ostream& out) const;         // header "time,mode,x"
  void write_events_csv(std::ostream& out) const;  // header "time,from,to"
};

inline constexpr int kMaxSimulationLevel = 24;

// Euler-Maruyama at dt = 2^-level, driven by the same level-indexed Brownian
// increments the path sampler uses. After each step the first satisfied guard
// (declaration order) switches the mode instantaneously, x unchanged.
Trace simulate(const HybridAutomaton& automaton, double T, int level,
               const RngStream& stream);

void to_json(nlohmann::json& j, const TraceEvent& event);
void to_json(nlohmann::json& j, const InvariantViolation& violation);

}  // namespace kolmo
