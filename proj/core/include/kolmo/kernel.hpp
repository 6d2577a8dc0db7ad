#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kolmo/measure.hpp"

namespace kolmo {

// ---------------------------------------------------------------------------
// Probes: the closed vocabulary of integrands every kernel can integrate in
// closed form — polynomials of degree <= 8 with rational coefficients, and
// indicators of half-open intervals (lo, hi] (lo omitted means -infinity).
// ---------------------------------------------------------------------------
class Probe {
 public:
  static constexpr int kMaxDegree = 8;

  static Probe poly(std::vector<Rat> coeffs);
  static Probe indicator(std::optional<Rat> lo, const Rat& hi);
  static std::vector<Probe> default_set();  // {x, x^2, 1_{(-inf, 0]}}

  bool is_poly() const { return kind_ == Kind::poly; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }
  std::vector<double> coeffs_real() const;
  const std::optional<Rat>& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }

  Rat eval_exact(State x) const;  // exact evaluation at integer states
  double eval(double x) const;
  std::string describe() const;

 private:
  enum class Kind { poly, indicator };
  Probe() = default;

  Kind kind_ = Kind::poly;
  std::vector<Rat> coeffs_;
  std::optional<Rat> lo_;
  Rat hi_;
};

// ---------------------------------------------------------------------------
// Discrete kernels: exact rational rows over integer states. Two layouts:
//  * shift-invariant — one offset measure, row(w) = offsets translated by w,
//    defined on all of Z (the random-walk kernel lives here);
//  * table — an explicit finite map state -> row measure.
// ---------------------------------------------------------------------------
class DiscreteKernel {
 public:
  static DiscreteKernel shift_invariant(MeasureQ offsets);
  static DiscreteKernel from_table(std::map<State, MeasureQ> rows);

  bool is_shift_invariant() const { return shift_invariant_; }
  const MeasureQ& offsets() const;              // shift-invariant only
  const std::map<State, MeasureQ>& rows() const;  // table only

  bool has_row(State omega) const;
  MeasureQ row(State omega) const;

  bool stochastic() const;     // every row total == 1 exactly
  bool substochastic() const;  // every row total <= 1

  // Materializes a shift-invariant kernel as a table over [lo, hi] (also
  // restricts a table kernel's domain). Needed before composing on the left
  // of a table kernel.
  DiscreteKernel restricted(State lo, State hi) const;

  friend bool operator==(const DiscreteKernel&, const DiscreteKernel&) = default;

 private:
  DiscreteKernel() = default;

  bool shift_invariant_ = false;
  MeasureQ offsets_;
  std::map<State, MeasureQ> rows_;
};

// kappa(i, {i+1}) = p, kappa(i, {i-1}) = 1-p on all of Z.
DiscreteKernel random_walk_kernel(const Rat& p);

// The Dirac kernel delta_w as a shift-invariant discrete kernel.
DiscreteKernel identity_discrete();

// Distribution of the sum of independent draws from a and b.
MeasureQ convolve(const MeasureQ& a, const MeasureQ& b);

// Image of a measure under translation by s.
MeasureQ shift_measure(const MeasureQ& mu, State s);

// (k1 o k2)(w, A) = integral of k2(w1, A) over k1(w, dw1). Exact.
DiscreteKernel compose(const DiscreteKernel& k1, const DiscreteKernel& k2);

// ---------------------------------------------------------------------------
// Gaussian kernels kappa_t(x, (-inf, a]) = Phi((a - x)/sqrt(t)); the identity
// kernel is the shared kappa_0 of both families.
// ---------------------------------------------------------------------------
struct GaussianKernel {
  double variance = 1.0;

  explicit GaussianKernel(double variance_in);
  friend bool operator==(const GaussianKernel&, const GaussianKernel&) = default;
};

struct IdentityKernel {
  friend bool operator==(const IdentityKernel&, const IdentityKernel&) = default;
};

using Kernel = std::variant<DiscreteKernel, GaussianKernel, IdentityKernel>;

bool is_identity(const Kernel& k);

Kernel compose(const Kernel& k1, const Kernel& k2);

// Integral of a probe against one kernel row. Discrete rows are summed in
// exact arithmetic and converted at the end; Gaussian rows use closed forms.
double kernel_integral(const Kernel& k, double omega, const Probe& f);

// Exact variants for discrete kernels.
Rat kernel_integral_exact(const DiscreteKernel& k, State omega, const Probe& f);
Rat kernel_integral(const DiscreteKernel& k, State omega,
                    const std::function<Rat(State)>& f);

// ---------------------------------------------------------------------------
// Products.
// ---------------------------------------------------------------------------

// A kernel from states onto pair-states, evaluated row by row.
class PairKernel {
 public:
  explicit PairKernel(std::function<PairMeasureQ(State)> row) : row_(std::move(row)) {}
  PairMeasureQ row(State omega) const { return row_(omega); }

 private:
  std::function<PairMeasureQ(State)> row_;
};

// Second factor of the full kernel product sees the pair (start, intermediate).
using PairInputKernel = std::function<MeasureQ(State, State)>;

// Kernel product: (k1 x_K k2)(w0, {(w1, w2)}) = k1(w0,{w1}) * k2((w0,w1),{w2}).
PairKernel product_pair_K(const DiscreteKernel& k1, PairInputKernel k2);

// Plain product: k2 ignores the starting state and consumes only w1.
PairKernel product_pair_P(const DiscreteKernel& k1, const DiscreteKernel& k2);

// Law of the whole trajectory (s1, ..., sn) of the chain K_0, ..., K_{n-1}
// started at a fixed state: the finite product measure, built by recursion.
struct ProductLawTable {
  FiniteMeasure<std::vector<State>, Rat> law;

  std::size_t steps() const;
  MeasureQ coordinate_marginal(std::size_t i) const;
};

inline constexpr std::size_t kProductTableGuard = 1000000;

ProductLawTable product_finite(const std::vector<DiscreteKernel>& kernels, State start);

// Verifies that the product law of the kernels kappa_i = delta_w * dist_i at
// state 0 coincides exactly with the law of the partial-sum vector of
// independent draws dist_1, ..., dist_n.
struct ConvolutionCheck {
  bool exact = false;
  Rat max_discrepancy;
};

ConvolutionCheck convolution_family_check(const std::vector<MeasureQ>& dists);

// (mu x_S kappa)({(w1, w2)}) = mu({w1}) * kappa(w1, {w2}).
PairMeasureQ semidirect_product(const MeasureQ& mu, const DiscreteKernel& kappa);

// ---------------------------------------------------------------------------
// Families, semigroup law, consistency.
// ---------------------------------------------------------------------------
struct KernelFamily {
  std::vector<double> index;  // sorted, nonempty
  std::function<Kernel(double)> at;
};

// kappa_t = N(., t) for t > 0, identity at t = 0; resolvable at any t >= 0.
KernelFamily gaussian_semigroup(std::vector<double> index = {0.0, 0.25, 0.5, 1.0});

// kappa_n = n-fold composition of the random-walk kernel; integer indices.
KernelFamily random_walk_semigroup(const Rat& p, int max_steps = 16);

struct SemigroupCheck {
  bool identity_ok = false;   // kappa_0 is the Dirac kernel
  bool exact = false;         // discrete structural equality held
  double max_discrepancy = 0.0;
  bool pass(double tol = 1e-12) const {
    return identity_ok && (exact || max_discrepancy <= tol);
  }
};

// Compares kappa_s o kappa_t against kappa_{s+t}. Discrete families are
// compared structurally (exact); the Gaussian route evaluates both sides on
// the probes via iterated closed-form integrals. Empty starts pick defaults.
SemigroupCheck check_semigroup(const KernelFamily& family, double s, double t,
                               const std::vector<Probe>& probes = Probe::default_set(),
                               std::vector<double> starts = {});

// Doubly indexed family kappa_{i,j}; from_semigroup derives kappa_{i,j} =
// kappa_{j-i} ("any Markov semigroup is a consistent family").
struct PairFamily {
  std::vector<double> index;  // sorted distinct time points
  std::function<Kernel(double, double)> at;

  static PairFamily from_semigroup(const KernelFamily& family, std::vector<double> index);
};

struct ConsistencyCheck {
  bool pass = false;
  bool vacuous = false;  // fewer than three indices: nothing to check
  bool exact = false;
  double max_discrepancy = 0.0;
  std::optional<std::array<double, 3>> failing_triple;
};

// Checks kappa_{i,j} o kappa_{j,k} = kappa_{i,k} over every triple i < j < k.
ConsistencyCheck check_consistent(const PairFamily& family,
                                  const std::vector<Probe>& probes = Probe::default_set(),
                                  std::vector<double> starts = {});

// ---------------------------------------------------------------------------
// Text serialization: one line per row, "state -> state:prob, state:prob"
// with exact rationals "a/b"; a shift-invariant kernel is a single line with
// "*" in place of the source state.
// ---------------------------------------------------------------------------
std::string kernel_to_text(const DiscreteKernel& k);
DiscreteKernel kernel_from_text(const std::string& text);

}  // namespace kolmo
