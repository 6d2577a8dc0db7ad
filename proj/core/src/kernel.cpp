#include "kolmo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kolmo/normal.hpp"

namespace kolmo {

namespace {

double eval_poly(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

State require_integer_state(double omega) {
  const double rounded = std::nearbyint(omega);
  if (std::abs(omega - rounded) > 1e-9) {
    throw std::invalid_argument("discrete kernel state must be an integer");
  }
  return static_cast<State>(rounded);
}

}  // namespace

// ---------------------------------------------------------------------------
// Probe
// ---------------------------------------------------------------------------

Probe Probe::poly(std::vector<Rat> coeffs) {
  if (coeffs.empty() || coeffs.size() > kMaxDegree + 1) {
    throw std::invalid_argument("Probe::poly: degree must be within [0, 8]");
  }
  Probe p;
  p.kind_ = Kind::poly;
  p.coeffs_ = std::move(coeffs);
  return p;
}

Probe Probe::indicator(std::optional<Rat> lo, const Rat& hi) {
  if (lo && !(*lo < hi)) throw std::invalid_argument("Probe::indicator: need lo < hi");
  Probe p;
  p.kind_ = Kind::indicator;
  p.lo_ = std::move(lo);
  p.hi_ = hi;
  return p;
}

std::vector<Probe> Probe::default_set() {
  return {poly({Rat(0), Rat(1)}), poly({Rat(0), Rat(0), Rat(1)}),
          indicator(std::nullopt, Rat(0))};
}

std::vector<double> Probe::coeffs_real() const {
  std::vector<double> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = rat_to_double(coeffs_[i]);
  return out;
}

Rat Probe::eval_exact(State x) const {
  if (kind_ == Kind::poly) {
    Rat acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * Rat(x) + *it;
    return acc;
  }
  const Rat rx(x);
  const bool in = !(hi_ < rx) && (!lo_ || *lo_ < rx);
  return in ? Rat(1) : Rat(0);
}

double Probe::eval(double x) const {
  if (kind_ == Kind::poly) return eval_poly(coeffs_real(), x);
  const bool in = x <= rat_to_double(hi_) && (!lo_ || x > rat_to_double(*lo_));
  return in ? 1.0 : 0.0;
}

std::string Probe::describe() const {
  if (kind_ == Kind::poly) {
    std::string s = "poly[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) s += ",";
      s += rat_to_string(coeffs_[i]);
    }
    return s + "]";
  }
  std::string s = "1_(";
  s += lo_ ? rat_to_string(*lo_) : "-inf";
  s += ",";
  s += rat_to_string(hi_);
  return s + "]";
}

// ---------------------------------------------------------------------------
// DiscreteKernel
// ---------------------------------------------------------------------------

DiscreteKernel DiscreteKernel::shift_invariant(MeasureQ offsets) {
  DiscreteKernel k;
  k.shift_invariant_ = true;
  k.offsets_ = std::move(offsets);
  return k;
}

DiscreteKernel DiscreteKernel::from_table(std::map<State, MeasureQ> rows) {
  if (rows.empty()) throw std::invalid_argument("DiscreteKernel: empty table");
  DiscreteKernel k;
  k.rows_ = std::move(rows);
  return k;
}

const MeasureQ& DiscreteKernel::offsets() const {
  if (!shift_invariant_) throw std::logic_error("offsets(): table kernel");
  return offsets_;
}

const std::map<State, MeasureQ>& DiscreteKernel::rows() const {
  if (shift_invariant_) throw std::logic_error("rows(): shift-invariant kernel");
  return rows_;
}

bool DiscreteKernel::has_row(State omega) const {
  return shift_invariant_ || rows_.count(omega) > 0;
}

MeasureQ DiscreteKernel::row(State omega) const {
  if (shift_invariant_) return shift_measure(offsets_, omega);
  auto it = rows_.find(omega);
  if (it == rows_.end()) throw std::out_of_range("DiscreteKernel::row: state not in domain");
  return it->second;
}

bool DiscreteKernel::stochastic() const {
  if (shift_invariant_) return offsets_.total() == Rat(1);
  return std::all_of(rows_.begin(), rows_.end(),
                     [](const auto& kv) { return kv.second.total() == Rat(1); });
}

bool DiscreteKernel::substochastic() const {
  if (shift_invariant_) return !(Rat(1) < offsets_.total());
  return std::all_of(rows_.begin(), rows_.end(),
                     [](const auto& kv) { return !(Rat(1) < kv.second.total()); });
}

DiscreteKernel DiscreteKernel::restricted(State lo, State hi) const {
  if (lo > hi) throw std::invalid_argument("restricted: lo > hi");
  std::map<State, MeasureQ> rows;
  if (shift_invariant_) {
    for (State w = lo; w <= hi; ++w) rows.emplace(w, shift_measure(offsets_, w));
  } else {
    for (const auto& [w, mu] : rows_) {
      if (lo <= w && w <= hi) rows.emplace(w, mu);
    }
    if (rows.empty()) throw std::invalid_argument("restricted: no rows in range");
  }
  return from_table(std::move(rows));
}

DiscreteKernel random_walk_kernel(const Rat& p) {
  if (p < Rat(0) || Rat(1) < p) throw std::invalid_argument("random_walk_kernel: p outside [0,1]");
  return DiscreteKernel::shift_invariant(MeasureQ({{-1, Rat(1) - p}, {1, p}}));
}

DiscreteKernel identity_discrete() {
  return DiscreteKernel::shift_invariant(MeasureQ::dirac(0));
}

MeasureQ convolve(const MeasureQ& a, const MeasureQ& b) {
  std::vector<std::pair<State, Rat>> atoms;
  atoms.reserve(a.size() * b.size());
  for (const auto& [x, wa] : a.atoms()) {
    for (const auto& [y, wb] : b.atoms()) atoms.emplace_back(x + y, wa * wb);
  }
  return MeasureQ::accumulate(atoms);
}

MeasureQ shift_measure(const MeasureQ& mu, State s) {
  return mu.pushforward([s](State x) { return x + s; });
}

DiscreteKernel compose(const DiscreteKernel& k1, const DiscreteKernel& k2) {
  if (k1.is_shift_invariant() && k2.is_shift_invariant()) {
    return DiscreteKernel::shift_invariant(convolve(k1.offsets(), k2.offsets()));
  }
  if (k1.is_shift_invariant()) {
    throw std::invalid_argument(
        "compose: shift-invariant before a table kernel; restrict the first factor");
  }
  std::map<State, MeasureQ> rows;
  for (const auto& [omega, mu1] : k1.rows()) {
    if (k2.is_shift_invariant()) {
      rows.emplace(omega, convolve(mu1, k2.offsets()));
      continue;
    }
    std::vector<std::pair<State, Rat>> atoms;
    for (const auto& [w1, p1] : mu1.atoms()) {
      if (!k2.has_row(w1)) {
        throw std::invalid_argument("compose: intermediate state outside second kernel's domain");
      }
      const MeasureQ mu2 = k2.row(w1);
      for (const auto& [w2, p2] : mu2.atoms()) atoms.emplace_back(w2, p1 * p2);
    }
    rows.emplace(omega, MeasureQ::accumulate(atoms));
  }
  return DiscreteKernel::from_table(std::move(rows));
}

// ---------------------------------------------------------------------------
// Kernel variant
// ---------------------------------------------------------------------------

GaussianKernel::GaussianKernel(double variance_in) : variance(variance_in) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::domain_error("GaussianKernel: variance must be > 0");
  }
}

bool is_identity(const Kernel& k) {
  if (std::holds_alternative<IdentityKernel>(k)) return true;
  if (const auto* d = std::get_if<DiscreteKernel>(&k)) {
    if (d->is_shift_invariant()) return d->offsets() == MeasureQ::dirac(0);
    return std::all_of(d->rows().begin(), d->rows().end(), [](const auto& kv) {
      return kv.second == MeasureQ::dirac(kv.first);
    });
  }
  return false;
}

Kernel compose(const Kernel& k1, const Kernel& k2) {
  if (std::holds_alternative<IdentityKernel>(k1)) return k2;
  if (std::holds_alternative<IdentityKernel>(k2)) return k1;
  if (const auto* d1 = std::get_if<DiscreteKernel>(&k1)) {
    if (const auto* d2 = std::get_if<DiscreteKernel>(&k2)) return compose(*d1, *d2);
  }
  if (const auto* g1 = std::get_if<GaussianKernel>(&k1)) {
    if (const auto* g2 = std::get_if<GaussianKernel>(&k2)) {
      return GaussianKernel(g1->variance + g2->variance);
    }
  }
  throw std::invalid_argument("compose: incompatible kernel types");
}

Rat kernel_integral(const DiscreteKernel& k, State omega,
                    const std::function<Rat(State)>& f) {
  Rat acc(0);
  const MeasureQ mu = k.row(omega);
  for (const auto& [x, w] : mu.atoms()) acc += w * f(x);
  return acc;
}

Rat kernel_integral_exact(const DiscreteKernel& k, State omega, const Probe& f) {
  return kernel_integral(k, omega, [&f](State x) { return f.eval_exact(x); });
}

double kernel_integral(const Kernel& k, double omega, const Probe& f) {
  if (const auto* d = std::get_if<DiscreteKernel>(&k)) {
    return rat_to_double(kernel_integral_exact(*d, require_integer_state(omega), f));
  }
  if (std::holds_alternative<IdentityKernel>(k)) return f.eval(omega);
  const auto& g = std::get<GaussianKernel>(k);
  if (f.is_poly()) return gaussian_poly_expectation(f.coeffs_real(), omega, g.variance);
  const double sd = std::sqrt(g.variance);
  double mass = normal_cdf((rat_to_double(f.hi()) - omega) / sd);
  if (f.lo()) mass -= normal_cdf((rat_to_double(*f.lo()) - omega) / sd);
  return mass;
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

PairKernel product_pair_K(const DiscreteKernel& k1, PairInputKernel k2) {
  return PairKernel([k1, k2 = std::move(k2)](State w0) {
    std::vector<std::pair<std::pair<State, State>, Rat>> atoms;
    const MeasureQ mu1 = k1.row(w0);
    for (const auto& [w1, p1] : mu1.atoms()) {
      const MeasureQ mu2 = k2(w0, w1);
      for (const auto& [w2, p2] : mu2.atoms()) {
        atoms.push_back({{w1, w2}, p1 * p2});
      }
    }
    return PairMeasureQ::accumulate(atoms);
  });
}

PairKernel product_pair_P(const DiscreteKernel& k1, const DiscreteKernel& k2) {
  return product_pair_K(k1, [k2](State, State w1) { return k2.row(w1); });
}

std::size_t ProductLawTable::steps() const {
  return law.size() ? law.atoms().front().first.size() : 0;
}

MeasureQ ProductLawTable::coordinate_marginal(std::size_t i) const {
  if (i >= steps()) throw std::out_of_range("coordinate_marginal: index");
  return law.pushforward([i](const std::vector<State>& tuple) { return tuple[i]; });
}

ProductLawTable product_finite(const std::vector<DiscreteKernel>& kernels, State start) {
  if (kernels.empty()) throw std::invalid_argument("product_finite: no kernels");
  std::vector<std::pair<std::vector<State>, Rat>> acc = {{{}, Rat(1)}};
  for (const auto& kernel : kernels) {
    std::vector<std::pair<std::vector<State>, Rat>> next;
    for (const auto& [prefix, mass] : acc) {
      const State at = prefix.empty() ? start : prefix.back();
      const MeasureQ row = kernel.row(at);
      for (const auto& [target, w] : row.atoms()) {
        std::vector<State> extended = prefix;
        extended.push_back(target);
        next.emplace_back(std::move(extended), mass * w);
        if (next.size() > kProductTableGuard) {
          throw std::length_error("product_finite: table guard exceeded");
        }
      }
    }
    acc = std::move(next);
  }
  return {FiniteMeasure<std::vector<State>, Rat>(std::move(acc))};
}

ConvolutionCheck convolution_family_check(const std::vector<MeasureQ>& dists) {
  if (dists.empty()) throw std::invalid_argument("convolution_family_check: no distributions");
  for (const auto& d : dists) {
    if (!d.is_probability()) {
      throw std::invalid_argument("convolution_family_check: not a probability measure");
    }
  }
  std::vector<DiscreteKernel> kernels;
  kernels.reserve(dists.size());
  for (const auto& d : dists) kernels.push_back(DiscreteKernel::shift_invariant(d));
  const auto product = product_finite(kernels, 0).law;

  // Independent product of the increments, pushed through partial sums.
  std::vector<std::pair<std::vector<State>, Rat>> acc = {{{}, Rat(1)}};
  for (const auto& d : dists) {
    std::vector<std::pair<std::vector<State>, Rat>> next;
    for (const auto& [tuple, mass] : acc) {
      for (const auto& [x, w] : d.atoms()) {
        std::vector<State> extended = tuple;
        extended.push_back(x);
        next.emplace_back(std::move(extended), mass * w);
        if (next.size() > kProductTableGuard) {
          throw std::length_error("convolution_family_check: table guard exceeded");
        }
      }
    }
    acc = std::move(next);
  }
  for (auto& [tuple, mass] : acc) {
    (void)mass;
    State running = 0;
    for (auto& x : tuple) {
      running += x;
      x = running;
    }
  }
  const auto sums = FiniteMeasure<std::vector<State>, Rat>::accumulate(acc);

  std::set<std::vector<State>> outcomes;
  for (const auto& [tuple, w] : product.atoms()) {
    (void)w;
    outcomes.insert(tuple);
  }
  for (const auto& [tuple, w] : sums.atoms()) {
    (void)w;
    outcomes.insert(tuple);
  }
  Rat worst(0);
  for (const auto& tuple : outcomes) {
    Rat diff = product.weight_of(tuple) - sums.weight_of(tuple);
    if (diff < Rat(0)) diff = -diff;
    if (worst < diff) worst = diff;
  }
  return {worst == Rat(0), worst};
}

PairMeasureQ semidirect_product(const MeasureQ& mu, const DiscreteKernel& kappa) {
  std::vector<std::pair<std::pair<State, State>, Rat>> atoms;
  for (const auto& [w1, m] : mu.atoms()) {
    const MeasureQ row = kappa.row(w1);
    for (const auto& [w2, p] : row.atoms()) {
      atoms.push_back({{w1, w2}, m * p});
    }
  }
  return PairMeasureQ::accumulate(atoms);
}

// ---------------------------------------------------------------------------
// Families and laws
// ---------------------------------------------------------------------------

KernelFamily gaussian_semigroup(std::vector<double> index) {
  std::sort(index.begin(), index.end());
  return {std::move(index), [](double t) -> Kernel {
            if (t < 0.0) throw std::out_of_range("gaussian_semigroup: negative index");
            if (t == 0.0) return IdentityKernel{};
            return GaussianKernel(t);
          }};
}

KernelFamily random_walk_semigroup(const Rat& p, int max_steps) {
  if (max_steps < 0) throw std::invalid_argument("random_walk_semigroup: max_steps < 0");
  const DiscreteKernel step = random_walk_kernel(p);
  std::vector<double> index(static_cast<std::size_t>(max_steps) + 1);
  for (int i = 0; i <= max_steps; ++i) index[static_cast<std::size_t>(i)] = i;
  return {std::move(index), [step, max_steps](double s) -> Kernel {
            const double rounded = std::nearbyint(s);
            if (std::abs(s - rounded) > 1e-9 || rounded < 0.0 || rounded > max_steps) {
              throw std::out_of_range("random_walk_semigroup: index not a step count");
            }
            const int n = static_cast<int>(rounded);
            if (n == 0) return IdentityKernel{};
            MeasureQ acc = step.offsets();
            for (int i = 1; i < n; ++i) acc = convolve(acc, step.offsets());
            return DiscreteKernel::shift_invariant(std::move(acc));
          }};
}

namespace {

// Two-stage integral through a pair of Gaussian kernels, computed by iterated
// moment algebra — deliberately not via the variance-addition shortcut, so the
// comparison against kappa_{s+t} is a real dual-route check.
double two_stage_gaussian(double s, double t, double omega, const Probe& f) {
  if (f.is_poly()) {
    const auto inner = gaussian_shift_poly(f.coeffs_real(), t);
    const auto outer = gaussian_shift_poly(inner, s);
    return eval_poly(outer, omega);
  }
  // Gaussian smoothing of the normal CDF: E Phi((a - X)/sqrt(t)) for
  // X ~ N(omega, s) equals Phi((a - omega)/sqrt(s + t)).
  const double sd = std::sqrt(s + t);
  double mass = normal_cdf((rat_to_double(f.hi()) - omega) / sd);
  if (f.lo()) mass -= normal_cdf((rat_to_double(*f.lo()) - omega) / sd);
  return mass;
}

double composed_integral(const Kernel& first, const Kernel& second, double omega,
                         const Probe& f) {
  if (std::holds_alternative<IdentityKernel>(first)) return kernel_integral(second, omega, f);
  if (std::holds_alternative<IdentityKernel>(second)) return kernel_integral(first, omega, f);
  if (const auto* d1 = std::get_if<DiscreteKernel>(&first)) {
    const auto* d2 = std::get_if<DiscreteKernel>(&second);
    if (!d2) throw std::invalid_argument("composed_integral: incompatible kernel types");
    const Rat exact =
        kernel_integral(*d1, require_integer_state(omega), [&](State w1) {
          return kernel_integral_exact(*d2, w1, f);
        });
    return rat_to_double(exact);
  }
  const auto& g1 = std::get<GaussianKernel>(first);
  const auto* g2 = std::get_if<GaussianKernel>(&second);
  if (!g2) throw std::invalid_argument("composed_integral: incompatible kernel types");
  return two_stage_gaussian(g1.variance, g2->variance, omega, f);
}

bool kernels_equal(const Kernel& a, const Kernel& b) {
  if (is_identity(a) && is_identity(b)) return true;
  const auto* da = std::get_if<DiscreteKernel>(&a);
  const auto* db = std::get_if<DiscreteKernel>(&b);
  if (is_identity(a) && db) return is_identity(b);
  if (is_identity(b) && da) return is_identity(a);
  if (da && db) return *da == *db;
  const auto* ga = std::get_if<GaussianKernel>(&a);
  const auto* gb = std::get_if<GaussianKernel>(&b);
  if (ga && gb) return ga->variance == gb->variance;
  return false;
}

std::vector<double> default_starts(const Kernel& ks, const Kernel& kt, const Kernel& kst) {
  for (const Kernel* k : {&ks, &kt, &kst}) {
    if (const auto* d = std::get_if<DiscreteKernel>(k)) {
      if (!d->is_shift_invariant()) {
        std::vector<double> starts;
        for (const auto& [w, mu] : d->rows()) {
          (void)mu;
          starts.push_back(static_cast<double>(w));
          if (starts.size() == 3) break;
        }
        return starts;
      }
      return {-1.0, 0.0, 1.0};
    }
  }
  return {-0.5, 0.0, 1.0};
}

struct LawComparison {
  bool exact = false;
  double max_discrepancy = 0.0;
};

LawComparison compare_composed(const Kernel& first, const Kernel& second,
                               const Kernel& direct, const std::vector<Probe>& probes,
                               std::vector<double> starts) {
  if (starts.empty()) starts = default_starts(first, second, direct);
  LawComparison out;
  for (double omega : starts) {
    for (const auto& probe : probes) {
      const double lhs = composed_integral(first, second, omega, probe);
      const double rhs = kernel_integral(direct, omega, probe);
      out.max_discrepancy = std::max(out.max_discrepancy, std::abs(lhs - rhs));
    }
  }
  const bool discrete_route = !std::holds_alternative<GaussianKernel>(first) &&
                              !std::holds_alternative<GaussianKernel>(second) &&
                              !std::holds_alternative<GaussianKernel>(direct);
  if (discrete_route) out.exact = kernels_equal(compose(first, second), direct);
  return out;
}

}  // namespace

SemigroupCheck check_semigroup(const KernelFamily& family, double s, double t,
                               const std::vector<Probe>& probes,
                               std::vector<double> starts) {
  SemigroupCheck check;
  try {
    check.identity_ok = is_identity(family.at(0.0));
  } catch (const std::out_of_range&) {
    check.identity_ok = false;
  }
  const Kernel ks = family.at(s);
  const Kernel kt = family.at(t);
  const Kernel kst = family.at(s + t);
  const LawComparison cmp = compare_composed(ks, kt, kst, probes, std::move(starts));
  check.exact = cmp.exact;
  check.max_discrepancy = cmp.max_discrepancy;
  return check;
}

PairFamily PairFamily::from_semigroup(const KernelFamily& family, std::vector<double> index) {
  std::sort(index.begin(), index.end());
  return {std::move(index), [at = family.at](double i, double j) -> Kernel {
            if (j < i) throw std::invalid_argument("PairFamily: need i <= j");
            return at(j - i);
          }};
}

ConsistencyCheck check_consistent(const PairFamily& family,
                                  const std::vector<Probe>& probes,
                                  std::vector<double> starts) {
  ConsistencyCheck check;
  if (family.index.size() < 3) {
    check.pass = true;
    check.vacuous = true;
    check.exact = true;
    return check;
  }
  check.exact = true;
  check.pass = true;
  const auto& ix = family.index;
  for (std::size_t a = 0; a < ix.size(); ++a) {
    for (std::size_t b = a + 1; b < ix.size(); ++b) {
      for (std::size_t c = b + 1; c < ix.size(); ++c) {
        const Kernel kij = family.at(ix[a], ix[b]);
        const Kernel kjk = family.at(ix[b], ix[c]);
        const Kernel kik = family.at(ix[a], ix[c]);
        const LawComparison cmp = compare_composed(kij, kjk, kik, probes, starts);
        check.max_discrepancy = std::max(check.max_discrepancy, cmp.max_discrepancy);
        const bool gaussian_route = std::holds_alternative<GaussianKernel>(kij) ||
                                    std::holds_alternative<GaussianKernel>(kjk) ||
                                    std::holds_alternative<GaussianKernel>(kik);
        const bool triple_ok =
            gaussian_route ? cmp.max_discrepancy <= 1e-12 : cmp.exact;
        if (!triple_ok && check.pass) {
          check.pass = false;
          check.failing_triple = std::array<double, 3>{ix[a], ix[b], ix[c]};
        }
        check.exact = check.exact && cmp.exact;
      }
    }
  }
  return check;
}

// ---------------------------------------------------------------------------
// Text serialization
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string row_to_text(const MeasureQ& mu) {
  std::string out;
  bool first = true;
  for (const auto& [state, weight] : mu.atoms()) {
    if (!first) out += ", ";
    out += std::to_string(state) + ":" + rat_to_string(weight);
    first = false;
  }
  return out;
}

State parse_state(const std::string& text) {
  std::size_t used = 0;
  State value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("kernel_from_text: bad state '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("kernel_from_text: bad state '" + text + "'");
  }
  return value;
}

MeasureQ parse_row(const std::string& text) {
  std::vector<std::pair<State, Rat>> atoms;
  std::stringstream ss(text);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    const auto colon = entry.rfind(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("kernel_from_text: missing ':' in '" + entry + "'");
    }
    atoms.emplace_back(parse_state(trim(entry.substr(0, colon))),
                       rat_from_string(trim(entry.substr(colon + 1))));
  }
  return MeasureQ(std::move(atoms));
}

}  // namespace

std::string kernel_to_text(const DiscreteKernel& k) {
  std::string out;
  if (k.is_shift_invariant()) {
    out = "* -> " + row_to_text(k.offsets()) + "\n";
    return out;
  }
  for (const auto& [state, row] : k.rows()) {
    out += std::to_string(state) + " -> " + row_to_text(row) + "\n";
  }
  return out;
}

DiscreteKernel kernel_from_text(const std::string& text) {
  std::map<State, MeasureQ> rows;
  std::optional<MeasureQ> offsets;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw std::invalid_argument("kernel_from_text: missing '->' in '" + line + "'");
    }
    const std::string lhs = trim(line.substr(0, arrow));
    const std::string rhs = line.substr(arrow + 2);
    if (lhs == "*") {
      if (offsets || !rows.empty()) {
        throw std::invalid_argument("kernel_from_text: '*' row must be the only row");
      }
      offsets = parse_row(rhs);
      continue;
    }
    if (offsets) {
      throw std::invalid_argument("kernel_from_text: '*' row must be the only row");
    }
    const State state = parse_state(lhs);
    if (!rows.emplace(state, parse_row(rhs)).second) {
      throw std::invalid_argument("kernel_from_text: duplicate row for state " +
                                  std::to_string(state));
    }
  }
  if (offsets) return DiscreteKernel::shift_invariant(std::move(*offsets));
  return DiscreteKernel::from_table(std::move(rows));
}

}  // namespace kolmo
