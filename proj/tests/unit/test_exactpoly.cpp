#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <cmath>

#include "../support/oracles.hpp"
#include "heightlab/roots.hpp"

using namespace hl;
using hl::testing::near;

namespace {

IntPolynomial random_poly(boost::random::mt19937_64& rng, int deg, long bound) {
  boost::random::uniform_int_distribution<long> c(-bound, bound);
  std::vector<mpz_class> v;
  for (int i = 0; i <= deg; ++i) v.emplace_back(c(rng));
  while (v.back() == 0) v.back() = c(rng);
  return IntPolynomial(v);
}

}  // namespace

TEST_CASE("parse and print round trip") {
  IntPolynomial f = IntPolynomial::parse("-2 0 0 1  # x^3 - 2");
  CHECK(f == IntPolynomial{-2, 0, 0, 1});
  CHECK(IntPolynomial::parse(f.to_string()) == f);
  CHECK(f.pretty() == "x^3 - 2");
  CHECK_THROWS_AS(IntPolynomial::parse("1 x 2"), std::invalid_argument);
  CHECK(IntPolynomial::parse("0 0").is_zero());
}

TEST_CASE("content and primitive part") {
  IntPolynomial f{6, -4, 2};
  CHECK(f.content() == 2);
  CHECK(f.primitive_part() == IntPolynomial{3, -2, 1});
  CHECK((-f).primitive_part() == IntPolynomial{3, -2, 1});
  CHECK(f.primitive_part().content() == 1);
}

TEST_CASE("discriminant examples") {
  CHECK(discriminant(IntPolynomial{-1, -1, 1}) == 5);
  CHECK(discriminant(IntPolynomial{-1, 0, 1}) == 4);
  CHECK(discriminant(IntPolynomial{-2, 0, 0, 1}) == -108);
  CHECK_THROWS_AS(discriminant(IntPolynomial{3}), std::domain_error);
}

TEST_CASE("resultant examples") {
  CHECK(resultant(IntPolynomial{-2, 1}, IntPolynomial{-3, 1}) == -1);
  CHECK(resultant(IntPolynomial{1, 0, 1}, IntPolynomial{-1, 1}) == 2);
  CHECK(resultant(IntPolynomial{-2, 0, 1}, IntPolynomial{-3, 0, 1}) == 1);
  CHECK_THROWS(resultant(IntPolynomial{}, IntPolynomial{1, 1}));
}

TEST_CASE("resultant matches the Sylvester determinant") {
  boost::random::mt19937_64 rng(11);
  boost::random::uniform_int_distribution<int> d(1, 6);
  for (int t = 0; t < 60; ++t) {
    IntPolynomial f = random_poly(rng, d(rng), 9), g = random_poly(rng, d(rng), 9);
    CHECK(mpq_class(resultant(f, g)) == hl::testing::sylvester_resultant(f, g));
  }
}

TEST_CASE("discriminant equals the product over root differences") {
  boost::random::mt19937_64 rng(12);
  boost::random::uniform_int_distribution<int> d(2, 8);
  for (int t = 0; t < 25; ++t) {
    IntPolynomial f = random_poly(rng, d(rng), 20);
    if (!is_squarefree(f)) continue;
    int n = f.degree();
    auto z = hl::testing::float_roots(f);
    std::complex<long double> prod = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) prod *= (z[i] - z[j]) * (z[i] - z[j]);
    long double lead = f.leading().get_d();
    long double expect = std::pow(lead, 2 * n - 2) * prod.real();
    long double got = discriminant(f).get_d();
    CHECK(std::fabs(got - expect) <= 1e-6L * std::max<long double>(1, std::fabs(got)));
  }
}

TEST_CASE("squarefree test and decomposition") {
  CHECK_FALSE(is_squarefree(IntPolynomial{1, -2, 1}));
  CHECK(is_squarefree(IntPolynomial{-2, 0, 0, 1}));
  CHECK_FALSE(is_squarefree(IntPolynomial{0, 0, -2, 0, 1}));
  // 3 (x - 1)^2 (x + 2)^3
  IntPolynomial f = mpz_class(3) * IntPolynomial{-1, 1} * IntPolynomial{-1, 1} * IntPolynomial{2, 1} *
                    IntPolynomial{2, 1} * IntPolynomial{2, 1};
  mpz_class unit;
  auto parts = squarefree_decomposition(f, &unit);
  IntPolynomial back{1};
  for (const auto& s : parts)
    for (int i = 0; i < s.multiplicity; ++i) back = back * s.factor;
  CHECK(unit * back == f);
  CHECK(squarefree_part(f) == IntPolynomial{-1, 1} * IntPolynomial{2, 1});
}

TEST_CASE("gcd") {
  IntPolynomial a = IntPolynomial{-1, 1} * IntPolynomial{1, 0, 1};
  IntPolynomial b = IntPolynomial{-1, 1} * IntPolynomial{3, 2};
  CHECK(gcd(a, b) == IntPolynomial{-1, 1});
  CHECK(gcd(IntPolynomial{}, IntPolynomial{}).is_zero());
}

TEST_CASE("complex roots of small examples") {
  auto i_roots = complex_roots(IntPolynomial{1, 0, 1}, 60);
  REQUIRE(i_roots.size() == 2);
  CHECK(i_roots[0].im.contains(Real(1.0, 64)));
  CHECK(i_roots[1].im.contains(Real(-1.0, 64)));

  auto phi = complex_roots(IntPolynomial{-1, -1, 1}, 60);
  REQUIRE(phi.size() == 2);
  CHECK(std::fabs(phi[1].re.approx() - (1 + std::sqrt(5.0)) / 2) < 1e-15);
  CHECK(std::fabs(phi[0].re.approx() - (1 - std::sqrt(5.0)) / 2) < 1e-15);

  auto cube = complex_roots(IntPolynomial{-2, 0, 0, 1}, 60);
  REQUIRE(cube.size() == 3);
  CHECK(std::fabs(cube[0].re.approx() - std::cbrt(2.0)) < 1e-15);
  CHECK(cube[0].im.contains_zero());
  CHECK(cube[1].im.approx() > 0);

  CHECK_THROWS_AS(complex_roots(IntPolynomial{1, -2, 1}), std::domain_error);
}

TEST_CASE("root boxes are disjoint, narrow and complete") {
  boost::random::mt19937_64 rng(13);
  boost::random::uniform_int_distribution<int> d(1, 10);
  for (int t = 0; t < 30; ++t) {
    IntPolynomial f = squarefree_part(random_poly(rng, d(rng), 30));
    if (f.degree() < 1) continue;
    auto boxes = complex_roots(f, 40);
    REQUIRE(static_cast<int>(boxes.size()) == f.degree());
    for (size_t i = 0; i < boxes.size(); ++i) {
      CHECK(boxes[i].width() <= ldexp(Real(1.0, 64), -40));
      for (size_t j = i + 1; j < boxes.size(); ++j) CHECK(boxes[i].disjoint(boxes[j]));
    }
  }
}

TEST_CASE("Mahler measure examples") {
  CHECK(near(mahler_measure(IntPolynomial{-3, 2}), 3.0, 1e-15));
  IntPolynomial lehmer{1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1};
  Interval m = mahler_measure(lehmer, 80);
  CHECK(near(m, 1.17628081825991750654, 1e-15));
  CHECK(m.width() <= ldexp(Real(1.0, 64), -70));
  CHECK(near(mahler_measure(IntPolynomial{1, 0, 1}), 1.0, 1e-18));
  // not squarefree: (x - 2)^2
  CHECK(near(mahler_measure(IntPolynomial{4, -4, 1}), 4.0, 1e-15));
}

TEST_CASE("house examples") {
  CHECK(near(house(IntPolynomial{1, 0, 1}), 1.0, 1e-15));
  CHECK(near(house(IntPolynomial{-2, 0, 1}), std::sqrt(2.0), 1e-15));
  CHECK(near(house(IntPolynomial{-2, 0, 0, 1}), std::cbrt(2.0), 1e-15));
}

TEST_CASE("Mahler measure agrees with a floating root oracle") {
  boost::random::mt19937_64 rng(14);
  boost::random::uniform_int_distribution<int> d(1, 7);
  for (int t = 0; t < 40; ++t) {
    IntPolynomial f = squarefree_part(random_poly(rng, d(rng), 12));
    if (f.degree() < 1) continue;
    long double expect = hl::testing::float_mahler(f);
    CHECK(std::fabs(mahler_measure(f).approx() - expect) <= 1e-9L * expect);
  }
}

TEST_CASE("Mahler measure is multiplicative") {
  boost::random::mt19937_64 rng(15);
  boost::random::uniform_int_distribution<int> d(1, 6);
  for (int t = 0; t < 25; ++t) {
    IntPolynomial f = random_poly(rng, d(rng), 15), g = random_poly(rng, d(rng), 15);
    Interval mf = mahler_measure(f, 80), mg = mahler_measure(g, 80), mfg = mahler_measure(f * g, 80);
    CHECK(mfg.overlaps(mf * mg));
  }
}

TEST_CASE("Mahler inequality on a random sample") {
  boost::random::mt19937_64 rng(16);
  boost::random::uniform_int_distribution<int> d(2, 12);
  for (int t = 0; t < 200; ++t) {
    IntPolynomial f = random_poly(rng, d(rng), 100);
    long n = f.degree();
    Interval lhs = abs(Interval(discriminant(f), 128));
    Interval rhs = pow(Interval(n, 128), static_cast<unsigned long>(n)) *
                   pow(mahler_measure(f, 64), static_cast<unsigned long>(2 * n - 2));
    CHECK(lhs.lo() <= rhs.hi());
  }
}

TEST_CASE("conjugates carry their minimal polynomial") {
  auto c = conjugates(IntPolynomial{-2, 0, 0, 1});
  REQUIRE(c.size() == 3);
  for (size_t i = 0; i < c.size(); ++i) CHECK(c[i].index == i);
}
