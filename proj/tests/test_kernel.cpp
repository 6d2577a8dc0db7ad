#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>
#include <vector>

#include "kolmo/kernel.hpp"
#include "kolmo/rng.hpp"

using namespace kolmo;

namespace {

// Independent path-enumeration oracle for the trajectory law: walk every
// tuple of intermediate states depth-first, multiplying row weights.
void enumerate_paths(const std::vector<DiscreteKernel>& kernels, std::size_t depth,
                     State current, const Rat& mass, std::vector<State>& tuple,
                     std::map<std::vector<State>, Rat>& law) {
  if (depth == kernels.size()) {
    law[tuple] += mass;
    return;
  }
  const MeasureQ row = kernels[depth].row(current);
  for (const auto& [next, weight] : row.atoms()) {
    if (weight == Rat(0)) continue;
    tuple.push_back(next);
    enumerate_paths(kernels, depth + 1, next, mass * weight, tuple, law);
    tuple.pop_back();
  }
}

std::map<std::vector<State>, Rat> brute_force_law(const std::vector<DiscreteKernel>& kernels,
                                                  State start) {
  std::map<std::vector<State>, Rat> law;
  std::vector<State> tuple;
  enumerate_paths(kernels, 0, start, Rat(1), tuple, law);
  return law;
}

// Random stochastic row over the given states with small rational weights.
MeasureQ random_row(const RngStream& stream, std::uint64_t tag,
                    const std::vector<State>& states) {
  std::vector<std::int64_t> weights(states.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    weights[i] = static_cast<std::int64_t>(stream.bits(tag * 64 + i) % 5);
    total += weights[i];
  }
  if (total == 0) {
    weights[0] = 1;
    total = 1;
  }
  std::vector<MeasureQ::Atom> atoms;
  for (std::size_t i = 0; i < states.size(); ++i) {
    atoms.emplace_back(states[i], Rat(weights[i], total));
  }
  return MeasureQ(atoms);
}

DiscreteKernel random_table_kernel(const RngStream& stream, std::uint64_t tag,
                                   const std::vector<State>& states) {
  std::map<State, MeasureQ> rows;
  for (std::size_t i = 0; i < states.size(); ++i) {
    rows.emplace(states[i], random_row(stream, tag * 8 + i, states));
  }
  return DiscreteKernel::from_table(rows);
}

}  // namespace

TEST_CASE("random_walk_kernel rows match the displayed transition function") {
  const DiscreteKernel half = random_walk_kernel(Rat(1, 2));
  CHECK(half.row(0).weight_of(1) == Rat(1, 2));
  CHECK(half.row(0).weight_of(-1) == Rat(1, 2));
  CHECK(half.row(0).weight_of(0) == Rat(0));
  CHECK(half.stochastic());

  const DiscreteKernel sure = random_walk_kernel(Rat(1));
  CHECK(sure.row(7).weight_of(8) == Rat(1));
  CHECK(sure.row(7).weight_of(6) == Rat(0));

  CHECK(random_walk_kernel(Rat(3, 10)).row(2).weight_of(1) == Rat(7, 10));
  CHECK_THROWS_AS(random_walk_kernel(Rat(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(random_walk_kernel(Rat(-1, 2)), std::invalid_argument);
}

TEST_CASE("kernel_integral takes exact sums and Gaussian closed forms") {
  const Probe id = Probe::poly({Rat(0), Rat(1)});
  const Probe square = Probe::poly({Rat(0), Rat(0), Rat(1)});

  CHECK(kernel_integral_exact(random_walk_kernel(Rat(1, 2)), 0, id) == Rat(0));
  CHECK(kernel_integral(Kernel(GaussianKernel(2.0)), 1.0, id) == doctest::Approx(1.0));
  CHECK(kernel_integral(Kernel(GaussianKernel(2.0)), 0.0, square) == doctest::Approx(2.0));

  // Indicator of (-inf, 0] against one random-walk step from 0: mass at -1.
  const Probe negatives = Probe::indicator(std::nullopt, Rat(0));
  CHECK(kernel_integral_exact(random_walk_kernel(Rat(1, 2)), 0, negatives) == Rat(1, 2));
  // Gaussian row: kappa_t(x, (-inf, x]) = 1/2 by symmetry.
  CHECK(kernel_integral(Kernel(GaussianKernel(0.5)), 0.0, negatives) == doctest::Approx(0.5));

  CHECK_THROWS_AS(Probe::poly(std::vector<Rat>(10, Rat(1))), std::invalid_argument);
}

TEST_CASE("compose: two random-walk steps enumerate exactly") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 2));
  const DiscreteKernel two = compose(rw, rw);
  CHECK(two.row(0).weight_of(-2) == Rat(1, 4));
  CHECK(two.row(0).weight_of(0) == Rat(1, 2));
  CHECK(two.row(0).weight_of(2) == Rat(1, 4));
  CHECK(two.stochastic());

  const DiscreteKernel biased = random_walk_kernel(Rat(1, 3));
  const DiscreteKernel square = compose(biased, biased);
  CHECK(square.row(0).weight_of(-2) == Rat(4, 9));
  CHECK(square.row(0).weight_of(0) == Rat(4, 9));
  CHECK(square.row(0).weight_of(2) == Rat(1, 9));
}

TEST_CASE("compose: Gaussian variances add; identity is neutral") {
  const Kernel g = compose(Kernel(GaussianKernel(0.5)), Kernel(GaussianKernel(0.25)));
  REQUIRE(std::holds_alternative<GaussianKernel>(g));
  CHECK(std::get<GaussianKernel>(g).variance == doctest::Approx(0.75));

  const DiscreteKernel rw = random_walk_kernel(Rat(2, 5));
  const Kernel left = compose(Kernel(IdentityKernel{}), Kernel(rw));
  const Kernel right = compose(Kernel(rw), Kernel(IdentityKernel{}));
  REQUIRE(std::holds_alternative<DiscreteKernel>(left));
  REQUIRE(std::holds_alternative<DiscreteKernel>(right));
  CHECK(std::get<DiscreteKernel>(left) == rw);
  CHECK(std::get<DiscreteKernel>(right) == rw);

  CHECK(is_identity(compose(Kernel(IdentityKernel{}), Kernel(IdentityKernel{}))));
}

TEST_CASE("compose is associative on discrete kernels") {
  const RngStream stream(9091);
  const std::vector<State> states = {-1, 0, 1, 2};
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    const RngStream t = stream.child(trial);
    const DiscreteKernel a = random_table_kernel(t.child(1), 1, states);
    const DiscreteKernel b = random_table_kernel(t.child(2), 2, states);
    const DiscreteKernel c = random_table_kernel(t.child(3), 3, states);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }
  // Shift-invariant route: offset convolution is associative too.
  const DiscreteKernel x = random_walk_kernel(Rat(1, 3));
  const DiscreteKernel y = random_walk_kernel(Rat(2, 7));
  const DiscreteKernel z = random_walk_kernel(Rat(1, 2));
  CHECK(compose(compose(x, y), z) == compose(x, compose(y, z)));
}

TEST_CASE("composing shift-invariant after table requires restriction") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 2));
  const DiscreteKernel table = rw.restricted(-2, 2);
  CHECK_FALSE(table.is_shift_invariant());
  CHECK(table.has_row(0));
  CHECK_FALSE(table.has_row(3));
  // Table-first composition needs the second kernel to cover the reachable
  // states; a shift-invariant second factor always does.
  const DiscreteKernel ok = compose(table, rw);
  CHECK(ok.row(0).weight_of(-2) == Rat(1, 4));
  // Shift-invariant first, table second would walk off the table's domain.
  CHECK_THROWS_AS(compose(rw, table), std::invalid_argument);
}

TEST_CASE("product_pair_P assigns the enumerated pair masses") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 2));
  const PairKernel prod = product_pair_P(rw, rw);
  const PairMeasureQ at0 = prod.row(0);
  CHECK(at0.weight_of({1, 2}) == Rat(1, 4));
  CHECK(at0.weight_of({1, 0}) == Rat(1, 4));
  CHECK(at0.weight_of({-1, 0}) == Rat(1, 4));
  CHECK(at0.weight_of({-1, -2}) == Rat(1, 4));
  CHECK(at0.total() == Rat(1));

  // First-coordinate marginal equals the first kernel's row exactly.
  const MeasureQ first = at0.pushforward([](const std::pair<State, State>& p) {
    return p.first;
  });
  CHECK(first == rw.row(0));
}

TEST_CASE("product_pair_K lets the second factor see the start") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 2));
  // kappa2((w0, w1), .) = point mass at w0: the pair law remembers the start.
  const PairKernel prod = product_pair_K(rw, [](State w0, State) {
    return MeasureQ::dirac(w0);
  });
  const PairMeasureQ at3 = prod.row(3);
  CHECK(at3.weight_of({4, 3}) == Rat(1, 2));
  CHECK(at3.weight_of({2, 3}) == Rat(1, 2));
}

TEST_CASE("deterministic first factor collapses the product to composition") {
  const DiscreteKernel step = DiscreteKernel::shift_invariant(MeasureQ::dirac(1));
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 4));
  const PairMeasureQ pairs = product_pair_P(step, rw).row(0);
  const MeasureQ second = pairs.pushforward([](const std::pair<State, State>& p) {
    return p.second;
  });
  CHECK(second == compose(step, rw).row(0));
}

TEST_CASE("product_finite: the two-step fair walk has four quarter paths") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 2));
  const ProductLawTable table = product_finite({rw, rw}, 0);
  CHECK(table.steps() == 2);
  CHECK(table.law.weight_of({1, 2}) == Rat(1, 4));
  CHECK(table.law.weight_of({1, 0}) == Rat(1, 4));
  CHECK(table.law.weight_of({-1, 0}) == Rat(1, 4));
  CHECK(table.law.weight_of({-1, -2}) == Rat(1, 4));
  CHECK(table.law.total() == Rat(1));
}

TEST_CASE("product_finite base and deterministic cases") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 3));
  const ProductLawTable base = product_finite({rw}, 5);
  CHECK(base.steps() == 1);
  CHECK(base.law.weight_of({6}) == Rat(1, 3));
  CHECK(base.law.weight_of({4}) == Rat(2, 3));
  CHECK(base.coordinate_marginal(0) == rw.row(5));

  const DiscreteKernel step = DiscreteKernel::shift_invariant(MeasureQ::dirac(1));
  const ProductLawTable sure = product_finite({step, step, step}, 0);
  CHECK(sure.law.size() == 1);
  CHECK(sure.law.weight_of({1, 2, 3}) == Rat(1));
}

TEST_CASE("product_finite agrees with brute-force path enumeration") {
  const RngStream stream(777);
  const std::vector<State> states = {-2, -1, 0, 1, 2};
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const RngStream t = stream.child(trial);
    const std::size_t steps = 1 + t.bits(0) % 4;
    std::vector<DiscreteKernel> kernels;
    for (std::size_t i = 0; i < steps; ++i) {
      kernels.push_back(random_table_kernel(t.child(i + 1), i, states));
    }
    const State start = states[t.bits(1) % states.size()];
    const ProductLawTable table = product_finite(kernels, start);
    const auto oracle = brute_force_law(kernels, start);
    Rat oracle_total(0);
    for (const auto& [tuple, mass] : oracle) {
      oracle_total += mass;
      CHECK(table.law.weight_of(tuple) == mass);
    }
    CHECK(table.law.total() == oracle_total);
    CHECK(table.law.total() == Rat(1));
  }
}

TEST_CASE("product_finite guards the table size") {
  // 21 states per row over 6 steps: 21^6 > 10^6 tuples.
  const DiscreteKernel wide = random_walk_kernel(Rat(1, 2)).restricted(-10, 10);
  std::map<State, MeasureQ> rows;
  std::vector<MeasureQ::Atom> flat;
  for (State s = -10; s <= 10; ++s) flat.emplace_back(s, Rat(1, 21));
  for (State s = -10; s <= 10; ++s) rows.emplace(s, MeasureQ(flat));
  const DiscreteKernel uniform = DiscreteKernel::from_table(rows);
  const std::vector<DiscreteKernel> kernels(6, uniform);
  CHECK_THROWS_AS(product_finite(kernels, 0), std::length_error);
}

TEST_CASE("convolution family check: partial sums match the product law") {
  const MeasureQ fair({{-1, Rat(1, 2)}, {1, Rat(1, 2)}});
  const ConvolutionCheck two = convolution_family_check({fair, fair});
  CHECK(two.exact);
  CHECK(two.max_discrepancy == Rat(0));

  const ConvolutionCheck one = convolution_family_check({fair});
  CHECK(one.exact);

  const MeasureQ biased({{-1, Rat(7, 10)}, {1, Rat(3, 10)}});
  const ConvolutionCheck three = convolution_family_check({biased, biased, biased});
  CHECK(three.exact);
  CHECK(three.max_discrepancy == Rat(0));

  CHECK_THROWS_AS(convolution_family_check({MeasureQ({{0, Rat(1, 2)}})}),
                  std::invalid_argument);
}

TEST_CASE("convolution family check on randomized integer distributions") {
  const RngStream stream(321);
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    const RngStream t = stream.child(trial);
    const std::size_t count = 1 + t.bits(0) % 4;
    std::vector<MeasureQ> dists;
    for (std::size_t i = 0; i < count; ++i) {
      dists.push_back(random_row(t, i + 1, {-2, -1, 0, 1, 2}));
    }
    const ConvolutionCheck check = convolution_family_check(dists);
    CHECK(check.exact);
    CHECK(check.max_discrepancy == Rat(0));
  }
}

TEST_CASE("semidirect product unfolds mu(w1) * kappa(w1, w2)") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 2));
  const PairMeasureQ from_zero = semidirect_product(MeasureQ::dirac(0), rw);
  CHECK(from_zero.weight_of({0, 1}) == Rat(1, 2));
  CHECK(from_zero.weight_of({0, -1}) == Rat(1, 2));

  const DiscreteKernel step = DiscreteKernel::shift_invariant(MeasureQ::dirac(1));
  const PairMeasureQ uniform = semidirect_product(MeasureQ::uniform({0, 1}), step);
  CHECK(uniform.weight_of({0, 1}) == Rat(1, 2));
  CHECK(uniform.weight_of({1, 2}) == Rat(1, 2));

  // Total mass is preserved under stochastic kernels.
  CHECK(uniform.total() == Rat(1));
}

TEST_CASE("semidirect product satisfies the integral-splitting identity") {
  const Rat p(1, 3);
  const DiscreteKernel rw = random_walk_kernel(p);
  const PairMeasureQ joint = semidirect_product(MeasureQ::dirac(0), rw);

  // f(a, b) = b. Outer route: integrate the inner kernel integral over mu.
  Rat lhs(0);
  for (const auto& [pair, weight] : joint.atoms()) lhs += weight * Rat(pair.second);
  const Rat rhs = kernel_integral(rw, 0, [](State w) { return Rat(w); });
  CHECK(lhs == rhs);
  CHECK(lhs == Rat(2) * p - Rat(1));
}

TEST_CASE("check_semigroup: Gaussian family closes under composition") {
  const KernelFamily family = gaussian_semigroup();
  const SemigroupCheck check = check_semigroup(family, 0.5, 0.25);
  CHECK(check.identity_ok);
  CHECK(check.max_discrepancy <= 1e-12);
  CHECK(check.pass());

  // s = 0 exercises the identity law.
  const SemigroupCheck zero = check_semigroup(family, 0.0, 0.5);
  CHECK(zero.pass());
}

TEST_CASE("check_semigroup: binomial random-walk family is exact") {
  const KernelFamily family = random_walk_semigroup(Rat(1, 3));
  for (const auto& [s, t] : std::vector<std::pair<int, int>>{{2, 3}, {0, 7}, {5, 5}, {1, 1}}) {
    const SemigroupCheck check =
        check_semigroup(family, static_cast<double>(s), static_cast<double>(t));
    CHECK(check.identity_ok);
    CHECK(check.exact);
    CHECK(check.pass());
  }
}

TEST_CASE("check_semigroup flags a non-Dirac kappa_0 as a violation") {
  KernelFamily family;
  family.index = {0.0, 0.25, 0.5, 0.75};
  family.at = [](double t) {
    return t == 0.0 ? Kernel(GaussianKernel(0.25)) : Kernel(GaussianKernel(t));
  };
  const SemigroupCheck check = check_semigroup(family, 0.25, 0.5);
  CHECK_FALSE(check.identity_ok);
  CHECK_FALSE(check.pass());
  CHECK(check.max_discrepancy <= 1e-12);  // the law itself still holds
}

TEST_CASE("check_consistent: derived pair family of a semigroup passes") {
  const PairFamily derived =
      PairFamily::from_semigroup(gaussian_semigroup(), {0.0, 0.5, 1.0});
  const ConsistencyCheck check = check_consistent(derived);
  CHECK(check.pass);
  CHECK_FALSE(check.vacuous);
  CHECK(check.max_discrepancy <= 1e-12);

  const PairFamily walk =
      PairFamily::from_semigroup(random_walk_semigroup(Rat(1, 2)), {0.0, 1.0, 3.0, 4.0});
  const ConsistencyCheck exact = check_consistent(walk);
  CHECK(exact.pass);
  CHECK(exact.exact);
}

TEST_CASE("check_consistent locates a deliberately broken kernel") {
  PairFamily family;
  family.index = {0.0, 1.0, 2.0};
  family.at = [](double i, double j) {
    if (i == 0.0 && j == 2.0) return Kernel(GaussianKernel(5.0));
    if (j - i == 0.0) return Kernel(IdentityKernel{});
    return Kernel(GaussianKernel(j - i));
  };
  const ConsistencyCheck check = check_consistent(family);
  CHECK_FALSE(check.pass);
  REQUIRE(check.failing_triple.has_value());
  CHECK((*check.failing_triple) == std::array<double, 3>{0.0, 1.0, 2.0});
}

TEST_CASE("check_consistent: single-index family is a vacuous pass") {
  PairFamily family;
  family.index = {1.0};
  family.at = [](double, double) { return Kernel(IdentityKernel{}); };
  const ConsistencyCheck check = check_consistent(family);
  CHECK(check.pass);
  CHECK(check.vacuous);
}

TEST_CASE("stochasticity is closed under composition and products") {
  const RngStream stream(555);
  const std::vector<State> states = {0, 1, 2};
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const RngStream t = stream.child(trial);
    const DiscreteKernel a = random_table_kernel(t.child(1), 1, states);
    const DiscreteKernel b = random_table_kernel(t.child(2), 2, states);
    CHECK(a.stochastic());
    CHECK(compose(a, b).stochastic());
    CHECK(product_pair_P(a, b).row(1).total() == Rat(1));
    CHECK(product_finite({a, b}, 0).law.total() == Rat(1));
  }
}

TEST_CASE("kernel text round-trips shift-invariant and table forms") {
  const DiscreteKernel rw = random_walk_kernel(Rat(1, 2));
  const std::string si_text = kernel_to_text(rw);
  CHECK(si_text == "* -> -1:1/2, 1:1/2\n");
  CHECK(kernel_from_text(si_text) == rw);

  const DiscreteKernel table = rw.restricted(-1, 1);
  const DiscreteKernel reparsed = kernel_from_text(kernel_to_text(table));
  CHECK(reparsed == table);

  const DiscreteKernel parsed = kernel_from_text("0 -> 1:2/3, 2:1/3\n1 -> 1:1\n");
  CHECK(parsed.row(0).weight_of(1) == Rat(2, 3));
  CHECK(parsed.row(1).weight_of(1) == Rat(1));
}

TEST_CASE("kernel text rejects malformed input") {
  CHECK_THROWS_AS(kernel_from_text(""), std::invalid_argument);
  CHECK_THROWS_AS(kernel_from_text("0 -> 1:1\n0 -> 2:1\n"), std::invalid_argument);
  CHECK_THROWS_AS(kernel_from_text("* -> 1:1\n0 -> 1:1\n"), std::invalid_argument);
  CHECK_THROWS_AS(kernel_from_text("0 -> 1:0.5\n"), std::invalid_argument);
  CHECK_THROWS_AS(kernel_from_text("0 -> 1:-1/2\n"), std::invalid_argument);
  CHECK_THROWS_AS(kernel_from_text("garbage\n"), std::invalid_argument);
}

TEST_CASE("probes evaluate their closed vocabulary") {
  CHECK(Probe::default_set().size() == 3);
  const Probe cubic = Probe::poly({Rat(1), Rat(0), Rat(0), Rat(2)});
  CHECK(cubic.eval_exact(2) == Rat(17));
  CHECK(cubic.eval(2.0) == doctest::Approx(17.0));

  const Probe window = Probe::indicator(Rat(0), Rat(2));
  CHECK(window.eval(0.0) == 0.0);  // half-open on the left
  CHECK(window.eval(1.0) == 1.0);
  CHECK(window.eval(2.0) == 1.0);  // closed on the right
  CHECK(window.eval(2.5) == 0.0);
  CHECK_THROWS_AS(Probe::indicator(Rat(2), Rat(2)), std::invalid_argument);
}
