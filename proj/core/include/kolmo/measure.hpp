#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kolmo/rational.hpp"

namespace kolmo {

using State = std::int64_t;

namespace detail {

inline bool scalar_invalid(const Rat&) { return false; }
inline bool scalar_invalid(double w) { return std::isnan(w); }

}  // namespace detail

// Exact weighted finite sample space: the finite stand-in for (Omega, F, mu).
// Outcomes are distinct and ordered; zero-weight atoms are kept (null atoms
// matter for modification counterexamples).
template <typename Outcome, typename Scalar>
class FiniteMeasure {
 public:
  using Atom = std::pair<Outcome, Scalar>;

  FiniteMeasure() = default;

  // Atoms must name distinct outcomes; weights must be >= 0.
  explicit FiniteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i > 0 && !(atoms_[i - 1].first < atoms_[i].first)) {
        throw std::invalid_argument("FiniteMeasure: duplicate outcome");
      }
      if (atoms_[i].second < Scalar(0) || detail::scalar_invalid(atoms_[i].second)) {
        throw std::invalid_argument("FiniteMeasure: negative weight");
      }
      total_ += atoms_[i].second;
    }
  }

  // Like the constructor but merges duplicate outcomes by adding weights.
  static FiniteMeasure accumulate(const std::vector<Atom>& atoms) {
    std::map<Outcome, Scalar> merged;
    for (const auto& [outcome, weight] : atoms) {
      auto [it, fresh] = merged.emplace(outcome, weight);
      if (!fresh) it->second += weight;
    }
    std::vector<Atom> unique(merged.begin(), merged.end());
    return FiniteMeasure(std::move(unique));
  }

  static FiniteMeasure dirac(const Outcome& outcome) {
    return FiniteMeasure({{outcome, Scalar(1)}});
  }

  static FiniteMeasure uniform(const std::vector<Outcome>& outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("uniform: empty outcome set");
    std::vector<Atom> atoms;
    const Scalar w = Scalar(1) / Scalar(static_cast<std::int64_t>(outcomes.size()));
    for (const auto& o : outcomes) atoms.emplace_back(o, w);
    return FiniteMeasure(std::move(atoms));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Scalar& total() const { return total_; }

  bool is_probability() const {
    if constexpr (std::is_same_v<Scalar, Rat>) {
      return total_ == Scalar(1);
    } else {
      return std::abs(total_ - 1.0) <= 1e-12;
    }
  }

  // Weight of a single outcome; zero when absent.
  Scalar weight_of(const Outcome& outcome) const {
    auto it = std::lower_bound(
        atoms_.begin(), atoms_.end(), outcome,
        [](const Atom& a, const Outcome& o) { return a.first < o; });
    if (it == atoms_.end() || it->first < outcome || outcome < it->first) return Scalar(0);
    return it->second;
  }

  bool contains(const Outcome& outcome) const {
    auto it = std::lower_bound(
        atoms_.begin(), atoms_.end(), outcome,
        [](const Atom& a, const Outcome& o) { return a.first < o; });
    return it != atoms_.end() && !(it->first < outcome) && !(outcome < it->first);
  }

  // mu(event): sum of weights of outcomes satisfying the predicate.
  template <typename Pred>
  Scalar measure_of(Pred&& predicate) const {
    Scalar sum(0);
    for (const auto& [outcome, weight] : atoms_) {
      if (predicate(outcome)) sum += weight;
    }
    return sum;
  }

  // Integral of a function against the measure.
  template <typename Fn>
  Scalar integrate(Fn&& f) const {
    Scalar sum(0);
    for (const auto& [outcome, weight] : atoms_) sum += weight * f(outcome);
    return sum;
  }

  // Image measure under f, merging outcomes that collide.
  template <typename Fn>
  auto pushforward(Fn&& f) const {
    using Out2 = std::decay_t<decltype(f(atoms_.front().first))>;
    std::vector<std::pair<Out2, Scalar>> mapped;
    mapped.reserve(atoms_.size());
    for (const auto& [outcome, weight] : atoms_) mapped.emplace_back(f(outcome), weight);
    return FiniteMeasure<Out2, Scalar>::accumulate(mapped);
  }

  friend bool operator==(const FiniteMeasure& a, const FiniteMeasure& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<Atom> atoms_;
  Scalar total_ = Scalar(0);
};

using MeasureQ = FiniteMeasure<State, Rat>;
using PairMeasureQ = FiniteMeasure<std::pair<State, State>, Rat>;

// Finite random variable: a value for every outcome of a paired measure.
template <typename Scalar>
struct RandomVariableTable {
  std::map<State, Scalar> values;

  const Scalar& at(State outcome) const {
    auto it = values.find(outcome);
    if (it == values.end()) {
      throw std::invalid_argument("RandomVariableTable: outcome not in domain");
    }
    return it->second;
  }

  template <typename OutcomeScalar>
  bool matches_domain(const FiniteMeasure<State, OutcomeScalar>& mu) const {
    if (values.size() != mu.size()) return false;
    for (const auto& [outcome, weight] : mu.atoms()) {
      (void)weight;
      if (!values.count(outcome)) return false;
    }
    return true;
  }
};

using RandomVariableQ = RandomVariableTable<Rat>;
using RandomVariableD = RandomVariableTable<double>;

// Monotone functions are restricted to a small closed vocabulary so the
// Markov-inequality precondition stays checkable: identity, x^a for a > 0
// (integer exponents when the scalar is rational), and user tables.
template <typename Scalar>
class MonotoneFn {
 public:
  static MonotoneFn identity() { return MonotoneFn(Kind::identity, 1.0, {}); }

  static MonotoneFn power(double exponent) {
    if (!(exponent > 0.0)) throw std::domain_error("MonotoneFn::power: exponent must be > 0");
    if constexpr (std::is_same_v<Scalar, Rat>) {
      if (exponent != std::floor(exponent) || exponent > 64.0) {
        throw std::domain_error("MonotoneFn::power: rational scalars need integer exponent <= 64");
      }
    }
    return MonotoneFn(Kind::power, exponent, {});
  }

  static MonotoneFn tabulated(std::map<Scalar, Scalar> table) {
    if (table.empty()) throw std::invalid_argument("MonotoneFn::tabulated: empty table");
    return MonotoneFn(Kind::tabulated, 0.0, std::move(table));
  }

  Scalar operator()(const Scalar& x) const {
    switch (kind_) {
      case Kind::identity:
        return x;
      case Kind::power:
        if constexpr (std::is_same_v<Scalar, Rat>) {
          return rat_pow(x, static_cast<unsigned>(exponent_));
        } else {
          return std::pow(x, exponent_);
        }
      case Kind::tabulated: {
        auto it = table_.find(x);
        if (it == table_.end()) {
          throw std::domain_error("MonotoneFn::tabulated: point not in table");
        }
        return it->second;
      }
    }
    throw std::logic_error("MonotoneFn: bad kind");
  }

  std::string name() const {
    switch (kind_) {
      case Kind::identity:
        return "identity";
      case Kind::power:
        return "x^" + std::to_string(exponent_);
      case Kind::tabulated:
        return "tabulated";
    }
    return "?";
  }

 private:
  enum class Kind { identity, power, tabulated };

  MonotoneFn(Kind kind, double exponent, std::map<Scalar, Scalar> table)
      : kind_(kind), exponent_(exponent), table_(std::move(table)) {}

  Kind kind_;
  double exponent_;
  std::map<Scalar, Scalar> table_;
};

template <typename Scalar>
struct MarkovBound {
  Scalar lhs;  // mu[x >= eps]
  Scalar rhs;  // integral of f(x) dmu / f(eps)
  bool holds;  // lhs <= rhs (the inequality being verified)
};

// Generalized Markov inequality mu[x >= eps] <= E[f(x)] / f(eps), computed in
// the input's own arithmetic. The preconditions on f (positive at eps,
// nonnegative on the support, monotone on the evaluated points) are enforced,
// not assumed.
template <typename Scalar>
MarkovBound<Scalar> markov_bound(const FiniteMeasure<State, Scalar>& mu,
                                 const RandomVariableTable<Scalar>& x,
                                 const MonotoneFn<Scalar>& f, const Scalar& eps) {
  if (!(eps > Scalar(0))) throw std::domain_error("markov_bound: eps must be > 0");
  if (!x.matches_domain(mu)) {
    throw std::invalid_argument("markov_bound: random variable domain != atom set");
  }
  const Scalar feps = f(eps);
  if (!(feps > Scalar(0))) throw std::domain_error("markov_bound: f(eps) <= 0");

  // Evaluate f over range(x) plus eps and check monotonicity on that set.
  std::map<Scalar, Scalar> evaluated;
  evaluated.emplace(eps, feps);
  for (const auto& [outcome, weight] : mu.atoms()) {
    const Scalar& v = x.at(outcome);
    auto it = evaluated.find(v);
    if (it == evaluated.end()) it = evaluated.emplace(v, f(v)).first;
    if (weight > Scalar(0) && it->second < Scalar(0)) {
      throw std::domain_error("markov_bound: f negative on the support");
    }
    if (detail::scalar_invalid(it->second)) {
      throw std::domain_error("markov_bound: f not finite on the support");
    }
  }
  const Scalar* prev = nullptr;
  for (const auto& [point, value] : evaluated) {
    (void)point;
    if (prev && value < *prev) {
      throw std::domain_error("markov_bound: f not monotone on evaluated points");
    }
    prev = &value;
  }

  Scalar lhs(0);
  Scalar num(0);
  for (const auto& [outcome, weight] : mu.atoms()) {
    const Scalar& v = x.at(outcome);
    if (!(v < eps)) lhs += weight;
    num += weight * evaluated.at(v);
  }
  Scalar rhs = num / feps;
  return {lhs, rhs, !(rhs < lhs)};
}

// Convenience overload matching the plain-vocabulary spelling mu[event].
template <typename Outcome, typename Scalar, typename Pred>
Scalar measure_of_event(const FiniteMeasure<Outcome, Scalar>& mu, Pred&& predicate) {
  return mu.measure_of(std::forward<Pred>(predicate));
}

// Seed bookkeeping carried by every Monte-Carlo artifact.
struct SeedRecord {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const SeedRecord&, const SeedRecord&) = default;
};

struct EmpiricalSample {
  std::vector<double> draws;
  SeedRecord seed;
};

struct KsResult {
  double d = 0.0;
  double p = 1.0;
};

// One-sample Kolmogorov-Smirnov distance and asymptotic p-value.
KsResult ks_statistic(const EmpiricalSample& sample,
                      const std::function<double(double)>& cdf);

// Two-sample variant with effective size n1*n2/(n1+n2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace kolmo
