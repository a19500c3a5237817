#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lgl/order.h"
#include "support/generators.h"

using namespace lgl::order;

namespace {

FinitePoset diamond() { return FinitePoset::from_pairs({"bot", "x", "y", "top"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

// a < c, b < c, b < d: a and d have no upper bound in common.
FinitePoset n_poset() { return FinitePoset::from_pairs({"a", "b", "c", "d"}, {{0, 2}, {1, 2}, {1, 3}}); }

bool brute_upper_set(const FinitePoset& p, int mask) {
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j)
      if (((mask >> i) & 1) && p.le(i, j) && !((mask >> j) & 1)) return false;
  return true;
}

}  // namespace

TEST_CASE("lattice examples") {
  auto chain = FinitePoset::chain(2);
  auto c = check_lattice(chain);
  REQUIRE(c.is_lattice);
  CHECK(c.join[0][1] == 1);
  CHECK(c.meet[0][1] == 0);

  auto d = check_lattice(diamond());
  CHECK(d.is_lattice);
  CHECK(d.join[1][2] == 3);
  CHECK(d.meet[1][2] == 0);
  CHECK(top_element(diamond()) == 3);
  CHECK(bottom_element(diamond()) == 0);

  auto n = check_lattice(n_poset());
  CHECK_FALSE(n.is_lattice);
  CHECK(n.witness.has_value());
}

TEST_CASE("poset defects") {
  CHECK(poset_defect(diamond()).empty());
  auto broken = diamond();
  broken.leq[3][0] = true;
  CHECK_FALSE(poset_defect(broken).empty());
}

TEST_CASE("two-chain dominance") {
  auto p = FinitePoset::chain(2);
  for (auto m : {DominanceMethod::kCoupling, DominanceMethod::kUpperSets, DominanceMethod::kMonotoneFunctions}) {
    CHECK(stochastic_dominates(p, {0.4, 0.6}, {0.5, 0.5}, m).dominates);
    CHECK_FALSE(stochastic_dominates(p, {0.5, 0.5}, {0.4, 0.6}, m).dominates);
  }
  auto r = stochastic_dominates(p, {0.5, 0.5}, {0.4, 0.6}, DominanceMethod::kUpperSets);
  REQUIRE(r.violating_upper_set.has_value());
  CHECK(*r.violating_upper_set == std::vector<int>{1});
}

TEST_CASE("self dominance uses the identity coupling") {
  lgl::testing::Rng rng(3);
  auto p = lgl::testing::random_poset(rng, 6);
  auto d = rng.simplex(6, 4);
  auto r = stochastic_dominates(p, d, d);
  REQUIRE(r.dominates);
  REQUIRE(r.coupling.has_value());
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK((*r.coupling)[i][j] == doctest::Approx(i == j ? d[i] : 0.0));
}

TEST_CASE("upper sets match brute force") {
  lgl::testing::Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(1, 7);
    auto p = lgl::testing::random_poset(rng, n);
    auto sets = enumerate_upper_sets(p);
    int expected = 0;
    for (int mask = 0; mask < (1 << n); ++mask) expected += brute_upper_set(p, mask);
    CHECK(static_cast<int>(sets.size()) == expected);
    for (const auto& s : sets) {
      int mask = 0;
      for (int i : s) mask |= 1 << i;
      CHECK(brute_upper_set(p, mask));
    }
  }
}

TEST_CASE("enumeration refuses large posets") {
  auto p = FinitePoset::chain(kMaxEnumerationSize + 1);
  std::vector<double> d(p.size(), 1.0 / p.size());
  CHECK_THROWS_AS(stochastic_dominates(p, d, d, DominanceMethod::kUpperSets), std::invalid_argument);
  CHECK(stochastic_dominates(p, d, d, DominanceMethod::kCoupling).dominates);
}

TEST_CASE("coupling network agrees with the upper-set test on a dominated pair") {
  auto p = diamond();
  std::vector<double> lower{0.4, 0.3, 0.2, 0.1};
  std::vector<double> upper{0.1, 0.3, 0.2, 0.4};
  auto r = stochastic_dominates(p, upper, lower);
  CHECK(r.dominates);
  CHECK(stochastic_dominates(p, upper, lower, DominanceMethod::kUpperSets).dominates);
  double total = 0.0;
  for (const auto& row : *r.coupling)
    for (double x : row) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("product order") {
  auto p = FinitePoset::chain(2);
  std::vector<double> nu{0.5, 0.5};
  std::vector<std::vector<double>> base{{0.3, 0.2}, {0.25, 0.25}};
  CHECK(product_order_dominates(nu, p, base, base));

  auto shifted = base;
  shifted[0] = {0.2, 0.3};
  CHECK(product_order_dominates(nu, p, shifted, base));
  CHECK_FALSE(product_order_dominates(nu, p, base, shifted));

  // A null characteristic carries no mass at all.
  std::vector<double> nu_null{1.0, 0.0};
  std::vector<std::vector<double>> a{{0.5, 0.5}, {0.0, 0.0}};
  CHECK(product_order_dominates(nu_null, p, a, a));

  std::vector<std::vector<double>> bad{{0.6, 0.2}, {0.1, 0.1}};
  CHECK_THROWS_AS(product_order_dominates(nu, p, bad, base), std::invalid_argument);
}
