#include "kolmo/shs.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <stdexcept>

#include "kolmo/brownian.hpp"

namespace kolmo {

bool ThresholdPredicate::eval(double x) const {
  switch (cmp) {
    case Cmp::lt:
      return x < bound;
    case Cmp::gt:
      return x > bound;
    case Cmp::le:
      return x <= bound;
    case Cmp::ge:
      return x >= bound;
  }
  return false;
}

std::string ThresholdPredicate::to_string() const {
  const char* op = "";
  switch (cmp) {
    case Cmp::lt:
      op = "x < ";
      break;
    case Cmp::gt:
      op = "x > ";
      break;
    case Cmp::le:
      op = "x <= ";
      break;
    case Cmp::ge:
      op = "x >= ";
      break;
  }
  return op + format_g17(bound);
}

void HybridAutomaton::validate() const {
  if (modes.empty()) throw std::invalid_argument("HybridAutomaton: no modes");
  std::set<std::string> names;
  for (const auto& mode : modes) {
    if (!names.insert(mode.name).second) {
      throw std::invalid_argument("HybridAutomaton: duplicate mode '" + mode.name + "'");
    }
    if (mode.sigma < 0.0) {
      throw std::invalid_argument("HybridAutomaton: negative sigma in '" + mode.name + "'");
    }
  }
  for (const auto& mode : modes) {
    for (const auto& guard : mode.guards) {
      if (!names.count(guard.target)) {
        throw std::invalid_argument("HybridAutomaton: guard target '" + guard.target +
                                    "' missing");
      }
    }
  }
  if (!names.count(initial_mode)) {
    throw std::invalid_argument("HybridAutomaton: initial mode '" + initial_mode + "' missing");
  }
}

std::size_t HybridAutomaton::mode_index(const std::string& name) const {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].name == name) return i;
  }
  throw std::invalid_argument("HybridAutomaton: unknown mode '" + name + "'");
}

HybridAutomaton thermostat() {
  using Cmp = ThresholdPredicate::Cmp;
  HybridAutomaton automaton;
  automaton.modes = {
      Mode{"Off", 0.0, -0.1, 0.1, ThresholdPredicate{Cmp::ge, 18.0},
           {Guard{ThresholdPredicate{Cmp::lt, 19.0}, "On"}}},
      Mode{"On", 5.0, -0.1, 0.1, ThresholdPredicate{Cmp::le, 22.0},
           {Guard{ThresholdPredicate{Cmp::gt, 21.0}, "Off"}}},
  };
  automaton.initial_mode = "Off";
  automaton.initial_x = 20.0;
  return automaton;
}

void Trace::write_csv(std::ostream& out) const {
  out << "time,mode,x\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << format_g17(times[i]) << "," << mode_at(i) << "," << format_g17(xs[i]) << "\n";
  }
}

void Trace::write_events_csv(std::ostream& out) const {
  out << "time,from,to\n";
  for (const auto& event : events) {
    out << format_g17(event.time) << "," << event.from << "," << event.to << "\n";
  }
}

Trace simulate(const HybridAutomaton& automaton, double T, int level,
               const RngStream& stream) {
  automaton.validate();
  if (!(T > 0.0)) throw std::invalid_argument("simulate: horizon must be > 0");
  if (level < 0 || level > kMaxSimulationLevel) {
    throw std::invalid_argument("simulate: level outside [0, 24]");
  }

  const double dt = std::ldexp(1.0, -level);
  const auto steps = static_cast<std::int64_t>(std::floor(std::ldexp(T, level)));

  Trace trace;
  trace.mode_names.reserve(automaton.modes.size());
  for (const auto& mode : automaton.modes) trace.mode_names.push_back(mode.name);
  trace.times.reserve(static_cast<std::size_t>(steps) + 1);
  trace.mode_indices.reserve(static_cast<std::size_t>(steps) + 1);
  trace.xs.reserve(static_cast<std::size_t>(steps) + 1);

  std::size_t mode = automaton.mode_index(automaton.initial_mode);
  double x = automaton.initial_x;
  trace.times.push_back(0.0);
  trace.mode_indices.push_back(mode);
  trace.xs.push_back(x);

  for (std::int64_t k = 1; k <= steps; ++k) {
    const double t = std::ldexp(static_cast<double>(k), -level);
    const Mode& active = automaton.modes[mode];
    const double db = active.sigma == 0.0
                          ? 0.0
                          : brownian_increment(stream, level, static_cast<std::uint64_t>(k));
    x += (active.drift_a + active.drift_b * x) * dt + active.sigma * db;

    if (active.invariant && !active.invariant->eval(x)) {
      trace.violations.push_back({t, active.name, x});
    }
    for (const auto& guard : active.guards) {
      if (guard.trigger.eval(x)) {
        trace.events.push_back({t, active.name, guard.target});
        mode = automaton.mode_index(guard.target);
        break;
      }
    }
    trace.times.push_back(t);
    trace.mode_indices.push_back(mode);
    trace.xs.push_back(x);
  }
  return trace;
}

void to_json(nlohmann::json& j, const TraceEvent& event) {
  j = nlohmann::json{{"time", event.time}, {"from", event.from}, {"to", event.to}};
}

void to_json(nlohmann::json& j, const InvariantViolation& violation) {
  j = nlohmann::json{{"time", violation.time}, {"mode", violation.mode}, {"x", violation.x}};
}

}  // namespace kolmo
