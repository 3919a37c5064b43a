#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../support/corpora.hpp"
#include "../support/oracles.hpp"
#include "heightlab/towers.hpp"

using namespace hl;
using hl::testing::near;

namespace {

const IntPolynomial kPhi5{1, 1, 1, 1, 1};

// Multiplicative order of p mod n.
int order_mod(uint64_t p, uint64_t n) {
  uint64_t x = p % n;
  int k = 1;
  while (x != 1) {
    x = x * p % n;
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("prime ideal counts") {
  auto c = nq_counts(kPhi5, 11, 4);
  CHECK(c.by_degree[1] == 4);
  CHECK(c.certified);
  c = nq_counts(kPhi5, 2, 4);
  CHECK(c.by_degree[4] == 1);
  CHECK(c.by_degree[1] == 0);
  c = nq_counts(IntPolynomial{-2, 0, 0, 0, 1}, 7, 4);
  CHECK(c.by_degree[1] == 2);
  CHECK(c.by_degree[2] == 1);
}

TEST_CASE("prime powers") {
  CHECK(prime_power(3, 4) == 81);
  CHECK(as_prime_power(49) == std::make_pair<uint64_t, int>(7, 2));
  CHECK_FALSE(as_prime_power(12).has_value());
  CHECK_FALSE(as_prime_power(1).has_value());
}

TEST_CASE("tower validation") {
  CHECK_NOTHROW(hl::testing::radical_tower().validate());
  CHECK_NOTHROW(hl::testing::cyclotomic_tower().validate());
  TowerSpec bad;
  bad.levels = {IntPolynomial{-2, 0, 0, 1}, IntPolynomial{-2, 0, 0, 0, 1}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TowerSpec wrong = hl::testing::radical_tower();
  wrong.witnesses[0] = hl::testing::ypoly({0, 1});
  CHECK_THROWS_AS(wrong.validate(), std::invalid_argument);
}

TEST_CASE("radical tower ratios at 7") {
  auto s = psi_estimate(hl::testing::radical_tower(), 7, 4);
  REQUIRE(s.levels.size() == 3);
  CHECK(s.levels[0].ratio[1] == 1);
  CHECK(s.levels[1].ratio[1] == mpq_class(1, 2));
  CHECK(s.levels[2].ratio[1] == mpq_class(1, 4));
  CHECK(s.trend == "nonincreasing-consistent");
}

TEST_CASE("constant tower gives a constant sequence") {
  TowerSpec t;
  t.levels = {kPhi5, kPhi5, kPhi5};
  auto s = psi_estimate(t, 11, 2);
  for (const auto& l : s.levels) CHECK(l.ratio.at(1) == 1);
}

TEST_CASE("cyclotomic tower ratios follow the order of p") {
  for (uint64_t p : {2, 5, 7, 11, 13, 17}) {
    auto s = psi_estimate(hl::testing::cyclotomic_tower(), p, 20);
    uint64_t n = 3;
    for (const auto& l : s.levels) {
      int f = order_mod(p, n);
      long phi = static_cast<long>(n / 3 * 2);
      for (const auto& [m, r] : l.ratio) {
        mpq_class expect = m == f ? mpq_class(1, f) : mpq_class(0);
        CHECK(r == expect);
      }
      CHECK(phi == l.degree);
      n *= 3;
    }
  }
}

TEST_CASE("weighted partial sums do not increase along test towers") {
  for (const auto& t : {hl::testing::radical_tower(), hl::testing::cyclotomic_tower()}) {
    for (const auto& c : monotonicity_diagnostic(t, 100)) {
      CAPTURE(c.p);
      CHECK(c.nonincreasing);
      for (size_t i = 1; i < c.weights.size(); ++i) CHECK(c.weights[i] <= c.weights[i - 1]);
    }
  }
}

TEST_CASE("bound values") {
  BoundSpec b;
  b.variant = BoundVariant::ThmAIntegers;
  b.psi = {{2, 1}};
  CHECK(near(eval_bound(b).value, 0.5 * std::log(2.0) / 2, 1e-15));

  b.variant = BoundVariant::ConjecturePlus1;
  CHECK(near(eval_bound(b).value, 0.5 * std::log(2.0) / 3, 1e-15));

  b = BoundSpec{};
  b.variant = BoundVariant::Pottmeyer;
  b.primes = {5};
  CHECK(near(eval_bound(b).value, std::log(2.5) / 6, 1e-15));

  b = BoundSpec{};
  b.variant = BoundVariant::BZ;
  b.local = {{2, 1, 1}};
  auto v = eval_bound(b);
  REQUIRE(v.upper.has_value());
  CHECK(near(*v.upper, std::log(2.0), 1e-15));
  CHECK(near(v.value, 0.5 * std::log(2.0) / 3, 1e-15));

  b = BoundSpec{};
  b.variant = BoundVariant::AlmostSplit;
  b.primes = {2, 3};
  CHECK(near(eval_bound(b).value, 0.5 * (std::log(2.0) / 3 + std::log(3.0) / 4), 1e-15));

  b = BoundSpec{};
  b.variant = BoundVariant::EllipticCorollary;
  b.psi = {{2, 1}};
  CHECK(near(eval_bound(b).value, std::log(2.0) / (8 * (3 + 2 * std::sqrt(2.0))), 1e-15));
}

TEST_CASE("missing bound parameters name the requirement") {
  for (auto v : {BoundVariant::BZ, BoundVariant::ThmAIntegers, BoundVariant::ThmBMetric, BoundVariant::AlmostSplit,
                 BoundVariant::AlmostUnramified, BoundVariant::Pottmeyer, BoundVariant::EllipticThm,
                 BoundVariant::EllipticCorollary}) {
    BoundSpec b;
    b.variant = v;
    CHECK_THROWS_WITH_AS(eval_bound(b), doctest::Contains(to_string(v).c_str()), std::invalid_argument);
  }
  CHECK(parse_variant("thmA") == BoundVariant::ThmAIntegers);
  CHECK_THROWS(parse_variant("nope"));
}

TEST_CASE("metric bound picks the smallest admissible lambda") {
  BoundSpec b;
  b.variant = BoundVariant::ThmBMetric;
  b.psi = {{2, mpq_class(1, 2)}};
  auto v = eval_bound(b);
  REQUIRE(v.lambda.has_value());
  REQUIRE(v.s.has_value());
  mpq_class target = mpq_class(2) / mpq_class(1, 2);
  CHECK(*v.s > target);
  CHECK(*v.rho == mpq_class(1, 4));
  if (*v.lambda > 0) CHECK(acceleration(2, *v.rho, *v.lambda - 1).s <= target);
  CHECK(v.value.certainly_positive());
}

TEST_CASE("series bounds grow with the cutoff") {
  BoundSpec b;
  b.variant = BoundVariant::ThmAIntegers;
  b.psi = {{2, 1}, {3, mpq_class(1, 2)}, {49, mpq_class(1, 3)}, {101, mpq_class(1, 10)}};
  Interval prev(0L, 128);
  for (uint64_t x : {2, 3, 50, 200}) {
    b.cutoff = x;
    auto v = eval_bound(b);
    CHECK(prev.hi() <= v.value.hi());
    CHECK(v.truncated == (x < 101));
    prev = v.value;
  }
}

TEST_CASE("conjecture terms are q/(q+1) times integer terms") {
  std::map<uint64_t, mpq_class> psi{{2, 1}, {4, mpq_class(1, 2)}, {5, mpq_class(1, 3)}, {27, mpq_class(2, 3)}};
  for (const auto& [q, v] : psi) {
    BoundSpec a, c;
    a.variant = BoundVariant::ThmAIntegers;
    c.variant = BoundVariant::ConjecturePlus1;
    a.psi = c.psi = {{q, v}};
    Interval ratio = eval_bound(c).value / eval_bound(a).value;
    CHECK(near(ratio, double(q) / double(q + 1), 1e-15));
  }
  BoundSpec a, c;
  a.variant = BoundVariant::ThmAIntegers;
  c.variant = BoundVariant::ConjecturePlus1;
  a.psi = c.psi = psi;
  CHECK(eval_bound(c).value.certainly_le(eval_bound(a).value));
}

TEST_CASE("BZ value equals the conjecture value with psi = 1/(e f)") {
  std::vector<LocalDegree> local{{2, 2, 1}, {3, 1, 2}, {5, 3, 1}, {7, 1, 1}};
  BoundSpec bz;
  bz.variant = BoundVariant::BZ;
  bz.local = local;
  BoundSpec conj;
  conj.variant = BoundVariant::ConjecturePlus1;
  for (const auto& l : local) {
    conj.psi[static_cast<uint64_t>(prime_power(l.p, static_cast<int>(l.f)).get_ui())] = mpq_class(1, l.e * l.f);
  }
  CHECK(eval_bound(bz).value.overlaps(eval_bound(conj).value));
}

TEST_CASE("almost unramified check") {
  TowerSpec t;
  t.levels = {kPhi5};
  auto r = almost_unramified_check(psi_estimate(t, 11, 4), 0);
  CHECK(r.sums.back() == 1);
  CHECK(r.within_tolerance);

  t.levels = {IntPolynomial{1, 0, 1}};
  r = almost_unramified_check(psi_estimate(t, 2, 4), mpq_class(1, 10));
  CHECK(r.sums.back() == mpq_class(1, 2));
  CHECK_FALSE(r.within_tolerance);

  auto radical = psi_estimate(hl::testing::radical_tower(), 7, 8);
  r = almost_unramified_check(radical, 0);
  for (const auto& s : r.sums) CHECK(s == 1);
}

TEST_CASE("compositum floor") {
  CHECK(compositum_psi_floor(1, 1) == 1);
  CHECK(compositum_psi_floor(mpq_class(1, 2), 2) == mpq_class(1, 8));
  CHECK(compositum_psi_floor(mpq_class(3, 10), 3) == mpq_class(1, 30));
  for (long d = 1; d <= 6; ++d) CHECK(compositum_psi_floor(mpq_class(2, 7), d) <= mpq_class(2, 7));
}

TEST_CASE("psi map parsing is exact") {
  auto m = parse_psi_map("2:1.0,9:0.25");
  CHECK(m.at(2) == 1);
  CHECK(m.at(9) == mpq_class(1, 4));
  CHECK(parse_decimal("-1.5e-2") == mpq_class(-3, 200));
  CHECK(parse_decimal("0.025") == mpq_class(1, 40));
  BoundSpec b;
  b.psi = parse_psi_map("6:0.5");
  CHECK_THROWS_AS(eval_bound(b), std::invalid_argument);
}
