#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "oracles.hpp"
#include "sring/group_ring.hpp"
#include "sring/util.hpp"

using namespace sring;

TEST_CASE("simple_quantity") {
  auto z5 = GroupSpec::from_factors({5});
  CHECK(simple_quantity(z5, {}).is_zero());
  auto unit = simple_quantity(z5, {0});
  auto x = simple_quantity(z5, {1, 4});
  CHECK(multiply(x, unit) == x);  // unit law
  auto all = simple_quantity(z5, {0, 1, 2, 3, 4});
  CHECK(all.support().size() == 5);
  for (int r = 0; r < 5; ++r) CHECK(all.coeff(r) == 1);
}

TEST_CASE("multiply") {
  auto z5 = GroupSpec::from_factors({5});
  auto x = simple_quantity(z5, {1, 4});
  auto sq = multiply(x, x);
  CHECK(sq.coeff(0) == 2);
  CHECK(sq.coeff(2) == 1);
  CHECK(sq.coeff(3) == 1);
  CHECK(sq.coeff(1) == 0);
  CHECK(sq.coeff(4) == 0);

  // H * H = |H| H for any group
  for (auto factors : {std::vector<int>{2, 3}, std::vector<int>{2, 2, 2}}) {
    auto g = GroupSpec::from_factors(factors);
    std::vector<int> all;
    for (int r = 0; r < g.order(); ++r) all.push_back(r);
    auto h = simple_quantity(g, all);
    auto hh = multiply(h, h);
    for (int r = 0; r < g.order(); ++r) CHECK(hh.coeff(r) == g.order());
  }

  auto z6 = GroupSpec::from_factors({2, 3});
  CHECK_THROWS_AS(multiply(simple_quantity(z5, {1}), simple_quantity(z6, {1})),
                  std::invalid_argument);
}

TEST_CASE("multiply matches hand convolution, associative and commutative") {
  auto g = GroupSpec::from_factors({2, 2, 3});
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<long long> a(g.order()), b(g.order()), c(g.order());
    RingElement ra(g), rb(g), rc(g);
    for (int r = 0; r < g.order(); ++r) {
      a[r] = static_cast<long long>(rng.below(7)) - 3;
      b[r] = static_cast<long long>(rng.below(7)) - 3;
      c[r] = static_cast<long long>(rng.below(7)) - 3;
      ra.set_coeff(r, a[r]);
      rb.set_coeff(r, b[r]);
      rc.set_coeff(r, c[r]);
    }
    auto conv = oracles::brute_convolve(g, a, b);
    auto prod = multiply(ra, rb);
    for (int r = 0; r < g.order(); ++r) CHECK(prod.coeff(r) == conv[r]);
    CHECK(multiply(ra, rb) == multiply(rb, ra));
    CHECK(multiply(multiply(ra, rb), rc) == multiply(ra, multiply(rb, rc)));
  }
}

TEST_CASE("power_map") {
  auto z5 = GroupSpec::from_factors({5});
  auto x = simple_quantity(z5, {1, 2});
  CHECK(power_map(x, 1) == x);
  auto x2 = power_map(x, 2);
  CHECK(x2.coeff(2) == 1);
  CHECK(x2.coeff(4) == 1);
  CHECK(x2.support().size() == 2);

  auto z4 = GroupSpec::from_factors({4});
  auto y = power_map(simple_quantity(z4, {1, 3}), 2);
  CHECK(y.coeff(2) == 2);  // both square to 2
  CHECK(y.support().size() == 1);

  // negative m: inverse powers
  auto inv = power_map(simple_quantity(z5, {1, 2}), -1);
  CHECK(inv.coeff(4) == 1);
  CHECK(inv.coeff(3) == 1);

  // gcd(m,|H|)=1 transports coefficients bijectively
  auto g = GroupSpec::from_factors({2, 3});
  RingElement r(g);
  for (int i = 0; i < 6; ++i) r.set_coeff(i, i * i - 3);
  for (long long m : {1, 5, 7, 11}) {
    auto rm = power_map(r, m);
    std::multiset<long long> before, after;
    for (int i = 0; i < 6; ++i) {
      before.insert(static_cast<long long>(r.coeff(i)));
      after.insert(static_cast<long long>(rm.coeff(i)));
    }
    CHECK(before == after);
  }
}

TEST_CASE("schur_wielandt_extract") {
  auto z5 = GroupSpec::from_factors({5});
  RingElement x(z5);
  x.set_coeff(1, 3);  // 3a
  x.set_coeff(2, 2);  // 2b
  x.set_coeff(3, 6);  // 6c
  CHECK(schur_wielandt_extract(x, 3) == std::vector<int>{2});
  CHECK(schur_wielandt_extract(RingElement(z5), 2).empty());
  auto sq = multiply(simple_quantity(z5, {1, 4}), simple_quantity(z5, {1, 4}));
  CHECK(schur_wielandt_extract(sq, 2) == std::vector<int>{2, 3});
}

TEST_CASE("coefficient_class") {
  auto z5 = GroupSpec::from_factors({5});
  RingElement x(z5);
  x.set_coeff(1, 3);
  x.set_coeff(2, 2);
  CHECK(coefficient_class(x, 2) == std::vector<int>{2});
  CHECK(coefficient_class(x, 0) == std::vector<int>{0, 3, 4});
  std::vector<int> all{0, 1, 2, 3, 4};
  auto hh = multiply(simple_quantity(z5, all), simple_quantity(z5, all));
  CHECK(coefficient_class(hh, 5) == all);
}

TEST_CASE("freshman's dream: x^m = x^(m) mod m for prime m") {
  for (auto factors : {std::vector<int>{2, 3}, std::vector<int>{2, 2, 2}, std::vector<int>{5}}) {
    auto g = GroupSpec::from_factors(factors);
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      RingElement x(g);
      for (int r = 0; r < g.order(); ++r) x.set_coeff(r, static_cast<long long>(rng.below(5)) - 2);
      for (int m : {2, 3, 5}) {
        RingElement pow = simple_quantity(g, {0});
        for (int i = 0; i < m; ++i) pow = multiply(pow, x);
        RingElement tr = power_map(x, m);
        for (int r = 0; r < g.order(); ++r) {
          coeff_t diff = pow.coeff(r) - tr.coeff(r);
          CHECK(diff % m == 0);
        }
      }
    }
  }
}

TEST_CASE("dump format") {
  auto z5 = GroupSpec::from_factors({5});
  RingElement x(z5);
  x.set_coeff(3, -2);
  x.set_coeff(1, 7);
  CHECK(x.dump() == "1:7 3:-2");
}

TEST_CASE("coeff_to_string handles big values") {
  coeff_t big = 1;
  for (int i = 0; i < 36; ++i) big = checked_mul(big, 10);
  CHECK(coeff_to_string(big) == "1" + std::string(36, '0'));
  CHECK(coeff_to_string(-big) == "-1" + std::string(36, '0'));
  CHECK_THROWS_AS(checked_mul(big, big), std::overflow_error);
}
