#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "heightlab/elliptic.hpp"

using namespace hl;
using hl::testing::near;

namespace {

EllipticCurve curve(long a1, long a2, long a3, long a4, long a6) {
  return invariants({mpq_class(a1), mpq_class(a2), mpq_class(a3), mpq_class(a4), mpq_class(a6)});
}

CurvePoint pt(mpq_class x, mpq_class y) { return {false, x, y}; }

const EllipticCurve E37 = curve(0, 0, 1, -1, 0);
const CurvePoint P37 = pt(0, 0);

// ord_p of an integer-valued rational, for the reduction type oracle.
long ordp(mpz_class n, long p) {
  long k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

// a_p by enumerating affine points of the reduced model.
long trace_of_frobenius(const EllipticCurve& E, long p) {
  long count = 1;
  auto md = [p](const mpq_class& q) {
    mpz_class d = q.get_den(), n = q.get_num();
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mpz_class(p).get_mpz_t());
    mpz_class r = n * inv % p;
    if (r < 0) r += p;
    return r.get_si();
  };
  long a1 = md(E.a1), a2 = md(E.a2), a3 = md(E.a3), a4 = md(E.a4), a6 = md(E.a6);
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long l = (y * y + a1 * x * y + a3 * y) % p;
      long r = (((x * x % p) * x) + a2 * x % p * x + a4 * x + a6) % p;
      if (((l - r) % p + p) % p == 0) ++count;
    }
  return p + 1 - count;
}

}  // namespace

TEST_CASE("invariants examples") {
  CHECK(E37.disc == 37);
  CHECK(E37.c4 == 48);
  auto E = curve(0, 0, 0, 1, 0);
  CHECK(E.disc == -64);
  CHECK(E.c4 == -48);
  E = curve(0, 0, 0, 0, 1);
  CHECK(E.disc == -432);
  CHECK(E.c4 == 0);
  CHECK_THROWS_AS(curve(0, 0, 0, 0, 0), std::domain_error);
}

TEST_CASE("standard relations hold exactly") {
  for (auto a : std::vector<std::array<long, 5>>{{0, 0, 1, -1, 0}, {1, -1, 1, -3, 3}, {0, 1, 1, -2, 0},
                                                 {1, 0, 0, -1, 1}, {0, 0, 0, -2, 4}, {1, 1, 1, 1, 1}}) {
    auto E = curve(a[0], a[1], a[2], a[3], a[4]);
    CHECK(E.b2 == E.a1 * E.a1 + 4 * E.a2);
    CHECK(E.c4 == E.b2 * E.b2 - 24 * E.b4);
    CHECK(1728 * E.disc == E.c4 * E.c4 * E.c4 - E.c6 * E.c6);
    CHECK(E.j == E.c4 * E.c4 * E.c4 / E.disc);
  }
}

TEST_CASE("group law") {
  CHECK(on_curve(E37, P37));
  CHECK_FALSE(on_curve(E37, pt(1, 1)));
  CurvePoint P2 = add(E37, P37, P37);
  CHECK(P2 == pt(1, 0));
  CHECK(multiply(E37, P37, 5) == pt(mpq_class(1, 4), mpq_class(-5, 8)));
  CHECK(add(E37, P37, negate(E37, P37)).infinity);
  CHECK(multiply(E37, P37, -2) == negate(E37, P2));
  // associativity on a few multiples
  CurvePoint A = multiply(E37, P37, 2), B = multiply(E37, P37, 3), C = multiply(E37, P37, 4);
  CHECK(add(E37, add(E37, A, B), C) == add(E37, A, add(E37, B, C)));
}

TEST_CASE("transformations") {
  Transformation T{2, 1, -1, 3};
  EllipticCurve F = apply(E37, T);
  CHECK(F.j == E37.j);
  CHECK(F.disc * mpq_class(4096) == E37.disc);
  CurvePoint Q = apply(T, P37);
  CHECK(on_curve(F, Q));
  Transformation U{mpq_class(1, 3), 0, 2, -1};
  CHECK(apply(apply(E37, T), U).coefficients() == apply(E37, compose(T, U)).coefficients());
}

TEST_CASE("minimal models") {
  auto m = minimal_model(E37);
  CHECK(m.transform.is_identity());
  CHECK(m.curve.coefficients() == E37.coefficients());

  // y^2 = x^3 + 64x is y^2 = x^3 + x scaled by u = 2
  auto E = curve(0, 0, 0, 64, 0);
  m = minimal_model(E);
  CHECK(m.transform.u == 2);
  CHECK(E.disc == m.curve.disc * 4096);
  CHECK(m.curve.j == E.j);

  E = curve(0, 0, 0, 0, 16);
  m = minimal_model(E);
  CHECK(abs(m.curve.disc) < abs(E.disc));
  CHECK(m.curve.coefficients() == curve(0, 0, 1, 0, 0).coefficients());
  CHECK(minimal_model(m.curve).transform.is_identity());

  // non-integral model of 37a1
  auto F = apply(E37, Transformation{mpq_class(1, 6), 2, 1, -1});
  m = minimal_model(F);
  CHECK(m.curve.coefficients() == E37.coefficients());
  CHECK(apply(F, m.transform).coefficients() == m.curve.coefficients());
}

TEST_CASE("reduction types") {
  CHECK(reduction_type(E37, 2) == Reduction::Good);
  CHECK(reduction_type(curve(0, 0, 0, 1, 0), 2) == Reduction::Additive);
  // a_37 = -1 for 37a1, so the node has slopes outside F_37
  CHECK(reduction_type(E37, 37) == Reduction::NonsplitMult);
  // 11a1: a_11 = 1 (split); 14a1 [1,0,1,4,-6]: a_2 = -1, a_7 = 1; 15a1 [1,1,1,-10,-10]: a_3 = -1, a_5 = 1
  CHECK(reduction_type(curve(0, -1, 1, -10, -20), 11) == Reduction::SplitMult);
  CHECK(reduction_type(curve(1, 0, 1, 4, -6), 2) == Reduction::NonsplitMult);
  CHECK(reduction_type(curve(1, 0, 1, 4, -6), 7) == Reduction::SplitMult);
  CHECK(reduction_type(curve(1, 1, 1, -10, -10), 3) == Reduction::NonsplitMult);
  CHECK(reduction_type(curve(1, 1, 1, -10, -10), 5) == Reduction::SplitMult);
}

TEST_CASE("multiplicative reduction type matches the point count at bad primes") {
  // split: a_p = 1, nonsplit: a_p = -1, additive: a_p = 0
  for (auto a : std::vector<std::array<long, 5>>{{0, -1, 1, -10, -20}, {1, 0, 1, 4, -6}, {1, 1, 1, -10, -10},
                                                 {0, 0, 1, -1, 0}, {0, 1, 1, -2, 0}, {1, -1, 1, -3, 3}}) {
    auto E = minimal_model(curve(a[0], a[1], a[2], a[3], a[4])).curve;
    for (const auto& q : prime_factors(E.disc.get_num())) {
      long p = q.get_si();
      if (p > 200) continue;
      long ap = trace_of_frobenius(E, p);
      Reduction r = reduction_type(E, static_cast<uint64_t>(p));
      long expect = r == Reduction::SplitMult ? 1 : r == Reduction::NonsplitMult ? -1 : 0;
      CAPTURE(E.label());
      CAPTURE(p);
      CHECK(ap == expect);
      bool mult = ordp(E.c4.get_num(), p) == 0;
      CHECK(mult == (r != Reduction::Additive));
    }
  }
}

TEST_CASE("nonarchimedean local heights") {
  auto r = local_height_nonarch(E37, P37, 2);
  CHECK(r.type == Reduction::Good);
  CHECK(r.coefficient == 0);

  r = local_height_nonarch(E37, P37, 37);
  // (0,0) is a smooth point of the nodal fibre, so B2(0)/2 * v(D) = v(D)/12 either way
  CHECK(r.smooth);
  CHECK(r.coefficient == mpq_class(1, 12));
  CHECK(near(r.lambda, std::log(37.0) / 12, 1e-15));

  // good reduction with x(P) integral and nonzero mod p
  r = local_height_nonarch(E37, pt(1, 0), 5);
  CHECK(r.coefficient == 0);
  // denominator prime contributes half its order of 1/x
  r = local_height_nonarch(E37, pt(mpq_class(1, 4), mpq_class(-5, 8)), 2);
  CHECK(r.coefficient == 1);

  CHECK_THROWS(local_height_nonarch(E37, CurvePoint::zero(), 2));
  CHECK_THROWS(local_height_nonarch(E37, pt(1, 1), 2));
}

TEST_CASE("multiplicative formula on points through the node") {
  // torsion on 14a1; Tamagawa numbers > 1 at 2 and 7
  auto E = curve(1, 0, 1, 4, -6);
  CurvePoint T = pt(1, -1);
  REQUIRE(on_curve(E, T));
  int singular = 0;
  for (long k = 1; k <= 5; ++k) {
    CurvePoint Q = multiply(E, T, k);
    if (Q.infinity) break;
    for (uint64_t p : {2, 7}) {
      auto r = local_height_nonarch(E, Q, p);
      if (r.smooth) continue;
      ++singular;
      REQUIRE(r.alpha.has_value());
      CHECK(*r.alpha > 0);
      CHECK(*r.alpha <= mpq_class(1, 2));
      CHECK(*r.coefficient == bernoulli2(*r.alpha) / 2 * r.v_disc);
    }
  }
  CHECK(singular > 0);
}

TEST_CASE("good reduction local heights are nonnegative") {
  for (long k = 1; k <= 8; ++k) {
    CurvePoint Q = multiply(E37, P37, k);
    for (uint64_t p : {2, 3, 5, 7, 11, 13}) CHECK(local_height_nonarch(E37, Q, p).lambda.lo().sign() >= 0);
  }
}

TEST_CASE("archimedean local height") {
  auto r = local_height_arch(E37, P37, 80);
  CHECK(r.p == 0);
  CHECK(r.series_terms > 0);
  CHECK(r.error_bound.to_double() < 1e-20);
  // large x: lambda is dominated by (1/2) log |x|
  CurvePoint Q = multiply(E37, P37, 7);
  double lx = 0.5 * std::log(std::fabs(Q.x.get_d()));
  CHECK(std::fabs(local_height_arch(E37, Q, 80).lambda.approx() - lx) < 0.5 + 1e-9);
}

TEST_CASE("periods and the Weierstrass function") {
  auto L = periods(E37, 128);
  CHECK(L.tau.im > Real(0.0, 53));
  // p(z) at the elliptic log of a point reproduces the shifted x-coordinate
  Complex z = elliptic_log(E37, P37, 128);
  Complex w = weierstrass_p(L, z);
  double expect = mpq_class(E37.b2 / 12).get_d();
  CHECK(std::fabs(w.re.to_double() - expect) < 1e-20);
  CHECK(std::fabs(w.im.to_double()) < 1e-20);
}

TEST_CASE("canonical height against the doubling oracle") {
  auto h = canonical_height(E37, P37);
  CHECK(near(h.value, 0.0511114082399688, 1e-12));
  CHECK(h.kappa == 2);
  auto o = canonical_height_oracle(E37, P37, 1e-7);
  CHECK(std::fabs(o.value.approx() - h.value.approx()) < 1e-6);

  auto E389 = curve(0, 1, 1, -2, 0);
  CHECK(near(canonical_height(E389, pt(-1, 1)).value, 0.686667083305587, 1e-10));
  CHECK(near(canonical_height(E389, pt(0, 0)).value, 0.327000773651605, 1e-10));
}

TEST_CASE("height is quadratic") {
  Interval h1 = canonical_height(E37, P37).value;
  for (long n = 2; n <= 5; ++n) {
    Interval hn = canonical_height(E37, multiply(E37, P37, n)).value;
    CHECK(std::fabs(hn.approx() - n * n * h1.approx()) < 1e-12);
  }
  auto E389 = curve(0, 1, 1, -2, 0);
  CurvePoint P = pt(-1, 1), Q = pt(0, 0);
  double lhs = canonical_height(E389, add(E389, P, Q)).value.approx() +
               canonical_height(E389, add(E389, P, negate(E389, Q))).value.approx();
  double rhs = 2 * canonical_height(E389, P).value.approx() + 2 * canonical_height(E389, Q).value.approx();
  CHECK(std::fabs(lhs - rhs) < 1e-12);
}

TEST_CASE("oracle doubling ratio") {
  auto a = canonical_height_oracle(E37, P37, 1e-7);
  auto b = canonical_height_oracle(E37, multiply(E37, P37, 2), 1e-7);
  CHECK(std::fabs(b.value.approx() / a.value.approx() - 4) < 1e-4);
}

TEST_CASE("torsion") {
  auto E = curve(0, 0, 0, 0, 1);
  auto t = is_torsion(E, pt(0, 1));
  CHECK(t.torsion);
  CHECK(t.order == 3);
  CHECK(is_torsion(E, pt(2, 3)).order == 6);
  CHECK_FALSE(is_torsion(E37, P37).torsion);
  t = is_torsion(E37, CurvePoint::zero());
  CHECK(t.torsion);
  CHECK(t.order == 1);
  CHECK(canonical_height_oracle(E, pt(0, 1)).torsion);
  CHECK(std::fabs(canonical_height(E, pt(2, 3)).value.approx()) < 1e-8);
  // 2-torsion on y^2 = x^3 - x
  auto F = curve(0, 0, 0, -1, 0);
  CHECK(std::fabs(canonical_height(F, pt(0, 0)).value.approx()) < 1e-8);
}

TEST_CASE("Bernoulli pair sums") {
  CHECK(bernoulli2(0) == mpq_class(1, 6));
  CHECK(bernoulli2(mpq_class(1, 2)) == mpq_class(-1, 12));
  CHECK(bernoulli2(mpq_class(-1, 3)) == bernoulli2(mpq_class(2, 3)));
  CHECK(bernoulli_pair_sum({0, mpq_class(1, 2)}) == mpq_class(-1, 6));
  CHECK(bernoulli_pair_sum({0, 0}) == mpq_class(1, 3));
  // equally spaced points attain 1/6 - N/6
  for (long N = 2; N <= 12; ++N) {
    std::vector<mpq_class> t;
    for (long i = 0; i < N; ++i) t.emplace_back(i, N);
    for (auto& x : t) x.canonicalize();
    CHECK(bernoulli_pair_sum(t) == mpq_class(1, 6) - mpq_class(N, 6));
  }
}

TEST_CASE("pairwise nonarchimedean sums") {
  std::vector<CurvePoint> pts;
  for (long k = 1; k <= 6; ++k) pts.push_back(multiply(E37, P37, k));
  auto s = pairwise_local_sum(E37, pts, 37);
  CHECK(s.floor_holds);
  CHECK(*s.coefficient >= s.floor_coefficient);
  CHECK(s.floor_coefficient == mpq_class(-1, 2));
  s = pairwise_local_sum(E37, {pts[0], pts[1]}, 5);
  CHECK(s.value.lo().sign() >= 0);
  CHECK_THROWS(pairwise_local_sum(E37, {pts[0], pts[0]}, 37));
  auto a = pairwise_local_sum(E37, pts, 0);
  CHECK(a.fitted_b.has_value());
}

TEST_CASE("point counts and the Hasse bound") {
  CHECK(count_points_mod_p(curve(0, 0, 0, 1, 0), 5) == 4);
  CHECK(count_points_mod_p(curve(0, 0, 0, 0, 1), 5) == 6);
  CHECK_THROWS(count_points_mod_p(E37, 37));
  for (uint64_t p = 2; p <= 100; ++p) {
    if (!is_prime(p) || p == 37) continue;
    long m = count_points_mod_p(E37, p);
    CHECK(std::fabs(double(m) - double(p + 1)) <= 2 * std::sqrt(double(p)));
    CHECK(p + 1 - m == trace_of_frobenius(E37, static_cast<long>(p)));
  }
}

TEST_CASE("point set floor") {
  std::vector<CurvePoint> Z{P37, multiply(E37, P37, 2), multiply(E37, P37, 3)};
  auto f = pointset_height_floor(E37, Z, {{2, {1, 0}}}, std::nullopt);
  double h = canonical_height(E37, P37).value.approx();
  CHECK(std::fabs(f.empirical_avg.approx() - 14.0 / 3 * h) < 1e-10);
  CHECK(f.avg_ge_pairwise);
  REQUIRE(f.bound_value.has_value());
  CHECK(near(*f.bound_value, std::log(2.0) / (8 * (3 + 2 * std::sqrt(2.0))), 1e-12));
  CHECK_THROWS(pointset_height_floor(E37, {P37}, {}, std::nullopt));
}

TEST_CASE("reduction statistics transfer") {
  // nonsplit at 37 becomes split in even residue degree
  SplittingType s;
  s.parts = {{1, 2}};
  s.certified = true;
  auto r = reduction_stats(E37, s, 2, 37);
  CHECK(r.xi_chi.count(37 * 37) == 1);
  s.parts = {{1, 1}, {1, 1}};
  r = reduction_stats(E37, s, 2, 2);
  CHECK(r.xi_chi.at(2).first == 1);
}
