#include "heightlab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heightlab/fp.hpp"
#include "heightlab/padic.hpp"

namespace hl {

namespace {

bool is_int(const mpq_class& q) { return q.get_den() == 1; }

mpq_class canon(mpq_class q) {
  q.canonicalize();
  return q;
}

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// ord_p; nullopt for zero.
std::optional<long> ord(const mpq_class& q, uint64_t p) { return vp(q, p); }

mpz_class lcm_den(const std::array<mpq_class, 5>& a) {
  mpz_class d = 1;
  for (const auto& x : a) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
  return d;
}

uint64_t mod_p(const mpq_class& q, uint64_t p) {
  mpz_class P(static_cast<unsigned long>(p)), r;
  mpz_fdiv_r(r.get_mpz_t(), q.get_num_mpz_t(), P.get_mpz_t());
  uint64_t n = r.get_ui();
  mpz_fdiv_r(r.get_mpz_t(), q.get_den_mpz_t(), P.get_mpz_t());
  return n * fp_inv(r.get_ui(), p) % p;
}

int legendre(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  return fp_pow(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace

bool EllipticCurve::is_integral() const {
  return is_int(a1) && is_int(a2) && is_int(a3) && is_int(a4) && is_int(a6);
}

std::string EllipticCurve::label() const {
  return "[" + a1.get_str() + "," + a2.get_str() + "," + a3.get_str() + "," + a4.get_str() + "," + a6.get_str() + "]";
}

EllipticCurve invariants(const std::array<mpq_class, 5>& a) {
  EllipticCurve E;
  E.a1 = canon(a[0]);
  E.a2 = canon(a[1]);
  E.a3 = canon(a[2]);
  E.a4 = canon(a[3]);
  E.a6 = canon(a[4]);
  E.b2 = E.a1 * E.a1 + 4 * E.a2;
  E.b4 = 2 * E.a4 + E.a1 * E.a3;
  E.b6 = E.a3 * E.a3 + 4 * E.a6;
  E.b8 = E.a1 * E.a1 * E.a6 + 4 * E.a2 * E.a6 - E.a1 * E.a3 * E.a4 + E.a2 * E.a3 * E.a3 - E.a4 * E.a4;
  E.c4 = E.b2 * E.b2 - 24 * E.b4;
  E.c6 = -E.b2 * E.b2 * E.b2 + 36 * E.b2 * E.b4 - 216 * E.b6;
  E.disc = -E.b2 * E.b2 * E.b8 - 8 * E.b4 * E.b4 * E.b4 - 27 * E.b6 * E.b6 + 9 * E.b2 * E.b4 * E.b6;
  if (E.disc == 0) throw std::domain_error("singular Weierstrass model (discriminant 0)");
  E.j = E.c4 * E.c4 * E.c4 / E.disc;
  return E;
}

bool on_curve(const EllipticCurve& E, const CurvePoint& P) {
  if (P.infinity) return true;
  const auto &x = P.x, &y = P.y;
  return y * y + E.a1 * x * y + E.a3 * y == x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
}

CurvePoint negate(const EllipticCurve& E, const CurvePoint& P) {
  if (P.infinity) return P;
  return {false, P.x, canon(-P.y - E.a1 * P.x - E.a3)};
}

CurvePoint add(const EllipticCurve& E, const CurvePoint& P, const CurvePoint& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  mpq_class lam, nu;
  if (P.x == Q.x) {
    if (P.y + Q.y + E.a1 * Q.x + E.a3 == 0) return CurvePoint::zero();
    mpq_class den = 2 * P.y + E.a1 * P.x + E.a3;
    lam = (3 * P.x * P.x + 2 * E.a2 * P.x + E.a4 - E.a1 * P.y) / den;
    nu = (-P.x * P.x * P.x + E.a4 * P.x + 2 * E.a6 - E.a3 * P.y) / den;
  } else {
    mpq_class dx = Q.x - P.x;
    lam = (Q.y - P.y) / dx;
    nu = (P.y * Q.x - Q.y * P.x) / dx;
  }
  mpq_class x3 = lam * lam + E.a1 * lam - E.a2 - P.x - Q.x;
  mpq_class y3 = -(lam + E.a1) * x3 - nu - E.a3;
  return {false, canon(x3), canon(y3)};
}

CurvePoint multiply(const EllipticCurve& E, const CurvePoint& P, long n) {
  if (n < 0) return multiply(E, negate(E, P), -n);
  CurvePoint R = CurvePoint::zero(), B = P;
  while (n) {
    if (n & 1) R = add(E, R, B);
    n >>= 1;
    if (n) B = add(E, B, B);
  }
  return R;
}

EllipticCurve apply(const EllipticCurve& E, const Transformation& T) {
  const auto &u = T.u, &r = T.r, &s = T.s, &t = T.t;
  mpq_class u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  std::array<mpq_class, 5> a;
  a[0] = (E.a1 + 2 * s) / u;
  a[1] = (E.a2 - s * E.a1 + 3 * r - s * s) / u2;
  a[2] = (E.a3 + r * E.a1 + 2 * t) / u3;
  a[3] = (E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1 + 3 * r * r - 2 * s * t) / u4;
  a[4] = (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1) / u6;
  return invariants(a);
}

CurvePoint apply(const Transformation& T, const CurvePoint& P) {
  if (P.infinity) return P;
  mpq_class u2 = T.u * T.u;
  mpq_class xr = P.x - T.r;
  return {false, canon(xr / u2), canon((P.y - T.s * xr - T.t) / (u2 * T.u))};
}

Transformation compose(const Transformation& a, const Transformation& b) {
  Transformation c;
  mpq_class u2 = a.u * a.u;
  c.u = a.u * b.u;
  c.r = u2 * b.r + a.r;
  c.s = a.u * b.s + a.s;
  c.t = u2 * a.u * b.t + a.s * u2 * b.r + a.t;
  return c;
}

std::vector<mpz_class> prime_factors(mpz_class n) {
  n = abs(n);
  if (n == 0) throw std::domain_error("prime factors of zero");
  std::vector<mpz_class> out;
  for (unsigned long p = 2; p < 100000 && n > 1; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.emplace_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  std::vector<mpz_class> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    mpz_class m = stack.back();
    stack.pop_back();
    if (mpz_probab_prime_p(m.get_mpz_t(), 30)) {
      out.push_back(m);
      continue;
    }
    // Pollard rho, Brent variant.
    mpz_class d = m;
    for (unsigned long c = 1; d == m; ++c) {
      mpz_class x = 2, y = 2;
      d = 1;
      while (d == 1) {
        x = (x * x + c) % m;
        y = (y * y + c) % m;
        y = (y * y + c) % m;
        mpz_class diff = abs(mpz_class(x - y));
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
      }
    }
    mpz_class e = m / d;
    stack.push_back(d);
    stack.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// One step of local minimization at p: an integral model with u = p, if any.
std::optional<Transformation> reduce_at(const EllipticCurve& E, unsigned long p) {
  mpz_class P = p, P2 = P * P, P3 = P2 * P;
  auto try_t = [&](const Transformation& T) -> std::optional<Transformation> {
    EllipticCurve F = apply(E, T);
    if (F.is_integral()) return T;
    return std::nullopt;
  };
  if (p >= 5) {
    mpz_class a1 = E.a1.get_num(), a2 = E.a2.get_num(), a3 = E.a3.get_num();
    mpz_class inv2, inv3;
    mpz_class two = 2, three = 3;
    mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), P3.get_mpz_t());
    mpz_invert(inv3.get_mpz_t(), three.get_mpz_t(), P2.get_mpz_t());
    mpz_class s = mod_pos(-a1 * inv2, P);
    mpz_class r = mod_pos((s * s + s * a1 - a2) * inv3, P2);
    mpz_class t = mod_pos(-(a3 + r * a1) * inv2, P3);
    return try_t({mpq_class(P), mpq_class(r), mpq_class(s), mpq_class(t)});
  }
  for (unsigned long s = 0; s < p; ++s) {
    if (mpq_class((E.a1 + 2 * s) / mpq_class(P)).get_den() != 1) continue;
    for (unsigned long r = 0; r < p * p; ++r) {
      mpq_class a2n = (E.a2 - s * E.a1 + 3 * r - s * s) / mpq_class(P2);
      if (a2n.get_den() != 1) continue;
      for (unsigned long t = 0; t < p * p * p; ++t) {
        auto T = try_t({mpq_class(P), mpq_class(r), mpq_class(s), mpq_class(t)});
        if (T) return T;
      }
    }
  }
  return std::nullopt;
}

mpz_class round_div3(const mpz_class& a) {
  // nearest integer to a / 3
  mpz_class q, r;
  mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), 3);
  if (r == 2) q += 1;
  return q;
}

}  // namespace

MinimalModel minimal_model(const EllipticCurve& E0) {
  std::array<mpq_class, 5> a = E0.coefficients();
  mpz_class D = lcm_den(a);
  Transformation T;
  if (D != 1) T.u = mpq_class(1, 1) / mpq_class(D);
  EllipticCurve E = apply(E0, T);

  std::vector<mpz_class> primes = prime_factors(E.disc.get_num());
  for (const auto& pz : primes) {
    if (!pz.fits_ulong_p()) continue;
    unsigned long p = pz.get_ui();
    while (true) {
      auto v12 = ord(E.disc, p);
      auto v4 = ord(E.c4, p);
      auto v6 = ord(E.c6, p);
      if (v12 && *v12 < 12) break;
      if (v4 && *v4 < 4) break;
      if (v6 && *v6 < 6) break;
      auto step = reduce_at(E, p);
      if (!step) break;
      E = apply(E, *step);
      T = compose(T, *step);
    }
  }

  // Reduced form: a1, a3 in {0, 1}, a2 in {-1, 0, 1}.
  Transformation R;
  mpz_class a1 = E.a1.get_num();
  mpz_class a1n = mod_pos(a1, 2);
  mpz_class s = (a1n - a1) / 2;
  mpz_class A = E.a2.get_num() - s * a1 - s * s;
  mpz_class r = -round_div3(A);
  mpz_class a3r = E.a3.get_num() + r * a1;
  mpz_class t = (mod_pos(a3r, 2) - a3r) / 2;
  R.r = r;
  R.s = s;
  R.t = t;
  if (!R.is_identity()) {
    E = apply(E, R);
    T = compose(T, R);
  }
  if (!E.is_integral()) throw std::logic_error("minimal model is not integral");
  return {E, T};
}

std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::Good: return "good";
    case Reduction::SplitMult: return "split-multiplicative";
    case Reduction::NonsplitMult: return "nonsplit-multiplicative";
    case Reduction::Additive: return "additive";
  }
  return "unknown";
}

Reduction reduction_type(const EllipticCurve& E, uint64_t p) {
  if (!E.is_integral()) throw std::invalid_argument("reduction type needs an integral model");
  auto vd = ord(E.disc, p);
  if (vd && *vd == 0) return Reduction::Good;
  auto vc4 = ord(E.c4, p);
  if (!vc4 || *vc4 > 0) return Reduction::Additive;
  if (p >= 5) return legendre(mod_p(-E.c6, p), p) == 1 ? Reduction::SplitMult : Reduction::NonsplitMult;
  // p = 2, 3: locate the node and test whether the tangent cone splits over F_p.
  uint64_t a1 = mod_p(E.a1, p), a2 = mod_p(E.a2, p), a3 = mod_p(E.a3, p), a4 = mod_p(E.a4, p),
           a6 = mod_p(E.a6, p);
  for (uint64_t x = 0; x < p; ++x) {
    for (uint64_t y = 0; y < p; ++y) {
      uint64_t f = (y * y + a1 * x * y + a3 * y + 3 * p * p * p - (x * x * x + a2 * x * x + a4 * x + a6) % p) % p;
      uint64_t fy = (2 * y + a1 * x + a3) % p;
      uint64_t fx = (a1 * y + 3 * p * p - (3 * x * x + 2 * a2 * x + a4) % p) % p;
      if (f || fy || fx) continue;
      // Tangent cone Y^2 + a1 X Y - (3x + a2) X^2.
      uint64_t c = (3 * x + a2) % p;
      for (uint64_t m = 0; m < p; ++m) {
        if ((m * m + a1 * m + p - c) % p == 0) return Reduction::SplitMult;
      }
      return Reduction::NonsplitMult;
    }
  }
  throw std::logic_error("no singular point found for multiplicative reduction");
}

mpq_class bernoulli2(const mpq_class& t) {
  mpq_class f = t - mpq_class(floor_q(t));
  return canon(f * f - f + mpq_class(1, 6));
}

mpq_class bernoulli_pair_sum(const std::vector<mpq_class>& t) {
  mpq_class s = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    for (size_t j = 0; j < t.size(); ++j) {
      if (i != j) s += bernoulli2(t[i] - t[j]);
    }
  }
  return canon(s);
}

LocalHeightReport local_height_nonarch(const EllipticCurve& E, const CurvePoint& P, uint64_t p) {
  if (P.infinity) throw std::invalid_argument("local height at the point at infinity");
  if (!on_curve(E, P)) throw std::invalid_argument("point is not on the curve");
  if (!E.is_integral()) throw std::invalid_argument("local height needs an integral model");
  LocalHeightReport rep;
  rep.p = p;
  rep.type = reduction_type(E, p);
  rep.v_disc = *ord(E.disc, p);
  auto vj = ord(E.j, p);
  rep.k_v = vj && *vj < 0 ? -*vj : 0;
  mpq_class vD(rep.v_disc);
  mpq_class c;
  auto vx = ord(P.x, p);
  if (vx && *vx < 0) {
    c = mpq_class(-*vx, 2) + vD / 12;
  } else {
    mpq_class psi2 = 2 * P.y + E.a1 * P.x + E.a3;
    mpq_class fx = 3 * P.x * P.x + 2 * E.a2 * P.x + E.a4 - E.a1 * P.y;
    auto v2 = ord(psi2, p);
    auto vfx = ord(fx, p);
    bool singular = rep.v_disc > 0 && (!v2 || *v2 > 0) && (!vfx || *vfx > 0);
    rep.smooth = !singular;
    if (!singular) {
      c = vD / 12;
    } else if (rep.type == Reduction::SplitMult || rep.type == Reduction::NonsplitMult) {
      mpq_class alpha = mpq_class(1, 2);
      if (v2) alpha = std::min(alpha, canon(mpq_class(*v2) / vD));
      rep.alpha = alpha;
      c = bernoulli2(alpha) * vD / 2;
    } else {
      const mpq_class& x = P.x;
      mpq_class F = 4 * x * x * x + E.b2 * x * x + 2 * E.b4 * x + E.b6;
      mpq_class g = 3 * x * x * x * x + E.b2 * x * x * x + 3 * E.b4 * x * x + 3 * E.b6 * x + E.b8;
      auto vF = ord(F, p);
      auto vG = ord(mpq_class(g * g), p);
      if (vF && (!vG || *vG >= 3 * *vF)) c = mpq_class(-*vF, 6) + vD / 12;
      else c = mpq_class(-*vG, 16) + vD / 12;
    }
  }
  c.canonicalize();
  rep.coefficient = c;
  const prec_t P128 = 128;
  rep.lambda = Interval(c, P128) * log(Interval(mpz_class(static_cast<unsigned long>(p)), P128));
  rep.error_bound = Real(0.0, 64);
  return rep;
}

TorsionResult is_torsion(const EllipticCurve& E, const CurvePoint& P) {
  if (P.infinity) return {true, 1};
  CurvePoint Q = P;
  for (int n = 1; n <= 16; ++n) {
    if (Q.infinity) return {true, n};
    Q = add(E, Q, P);
  }
  return {false, 0};
}

namespace {

Real log_abs_z(const mpz_class& z, prec_t prec) {
  Real r(prec);
  mpfr_set_z(r.get(), z.get_mpz_t(), MPFR_RNDN);
  return log(abs(r));
}

}  // namespace

OracleResult canonical_height_oracle(const EllipticCurve& E0, const CurvePoint& P0, double target, int max_doublings) {
  if (P0.infinity) throw std::invalid_argument("height oracle at the point at infinity");
  if (!on_curve(E0, P0)) throw std::invalid_argument("point is not on the curve");
  OracleResult res;
  const prec_t prec = 128;
  if (is_torsion(E0, P0).torsion) {
    res.torsion = true;
    res.value = Interval(0L, prec);
    return res;
  }
  MinimalModel M = minimal_model(E0);
  const EllipticCurve& E = M.curve;
  CurvePoint P = apply(M.transform, P0);
  mpz_class b2 = E.b2.get_num(), b4 = E.b4.get_num(), b6 = E.b6.get_num(), b8 = E.b8.get_num();
  IntPolynomial Fx({-b8, -2 * b6, -b4, mpz_class(0), mpz_class(1)});
  IntPolynomial Gx({b6, 2 * b4, b2, mpz_class(4)});
  mpz_class R = abs(resultant(Fx, Gx));

  mpz_class N = P.x.get_num(), D = P.x.get_den();
  Real scale(1.0, prec);
  Real raw_prev(prec), cmax(0.0, prec);
  // |h(2Q) - 4 h(Q)| <= C gives |h(2^n P) / 4^n - h_hat| <= C / (3 * 4^n); C is estimated from the run.
  for (int n = 0; n <= max_doublings; ++n) {
    Real hN = log_abs_z(N == 0 ? mpz_class(1) : N, prec), hD = log_abs_z(D, prec);
    Real raw = hN > hD ? hN : hD;
    if (n > 0) {
      Real c = abs(raw - raw_prev * Real(4.0, prec));
      if (c > cmax) cmax = c;
      res.doublings = n;
      Real err = cmax * Real(0.5, prec) / scale + Real(1e-30, prec);
      bool too_big = mpz_sizeinbase(N.get_mpz_t(), 2) + mpz_sizeinbase(D.get_mpz_t(), 2) > (1UL << 27);
      if ((n >= 3 && err.to_double() < target) || n == max_doublings || too_big) {
        res.value = Interval::ball(raw / scale, err);
        return res;
      }
    }
    raw_prev = raw;
    mpz_class N2 = N * N, D2 = D * D;
    mpz_class F = N2 * N2 - b4 * N2 * D2 - 2 * b6 * N * D2 * D - b8 * D2 * D2;
    mpz_class G = 4 * N2 * N * D + b2 * N2 * D2 + 2 * b4 * N * D2 * D + b6 * D2 * D2;
    if (G == 0) throw std::logic_error("doubling reached the point at infinity for a non-torsion point");
    mpz_class g = mod_pos(F, R), h = mod_pos(G, R);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), R.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), h.get_mpz_t());
    if (g == 0) g = 1;
    mpz_class gF, gG;
    mpz_gcd(gF.get_mpz_t(), F.get_mpz_t(), g.get_mpz_t());
    mpz_gcd(gG.get_mpz_t(), G.get_mpz_t(), gF.get_mpz_t());
    N = F / gG;
    D = G / gG;
    if (D < 0) {
      N = -N;
      D = -D;
    }
    scale *= Real(4.0, prec);
  }
  return res;
}

CanonicalHeight canonical_height(const EllipticCurve& E0, const CurvePoint& P0, long precision_bits) {
  if (P0.infinity) throw std::invalid_argument("canonical height at the point at infinity");
  if (!on_curve(E0, P0)) throw std::invalid_argument("point is not on the curve");
  CanonicalHeight out;
  out.model = minimal_model(E0);
  const EllipticCurve& E = out.model.curve;
  CurvePoint P = apply(out.model.transform, P0);

  std::vector<mpz_class> primes = prime_factors(E.disc.get_num());
  for (const auto& q : prime_factors(P.x.get_den())) primes.push_back(q);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  prec_t prec = static_cast<prec_t>(precision_bits + 64);
  Interval sum(0L, prec);
  for (const auto& q : primes) {
    if (!q.fits_ulong_p()) throw std::runtime_error("prime too large for local height evaluation");
    LocalHeightReport r = local_height_nonarch(E, P, q.get_ui());
    sum += Interval(*r.coefficient, prec) * log(Interval(q, prec));
    out.places.push_back(std::move(r));
  }
  LocalHeightReport arch = local_height_arch(E, P, precision_bits);
  sum += arch.lambda;
  out.places.insert(out.places.begin(), std::move(arch));
  out.value = Interval(static_cast<long>(kHeightKappa), prec) * sum;
  return out;
}

PairwiseSum pairwise_local_sum(const EllipticCurve& E, const std::vector<CurvePoint>& pts, uint64_t place,
                               long precision_bits) {
  PairwiseSum out;
  out.p = place;
  long N = static_cast<long>(pts.size());
  prec_t prec = static_cast<prec_t>(precision_bits + 64);
  Interval sum(0L, prec);
  mpq_class coeff = 0;
  for (long i = 0; i < N; ++i) {
    for (long j = 0; j < N; ++j) {
      if (i == j) continue;
      CurvePoint d = add(E, pts[static_cast<size_t>(i)], negate(E, pts[static_cast<size_t>(j)]));
      if (d.infinity) throw std::invalid_argument("coincident points in pairwise sum");
      if (place == 0) {
        sum += local_height_arch(E, d, precision_bits).lambda;
      } else {
        coeff += *local_height_nonarch(E, d, place).coefficient;
      }
    }
  }
  if (place == 0) {
    out.value = sum;
    Interval Ni(N, prec);
    // b >= -(sum + N log N / 2) / N
    out.fitted_b = -(sum + Ni * log(Ni) / Interval(2L, prec)) / Ni;
  } else {
    coeff.canonicalize();
    out.coefficient = coeff;
    out.v_disc = *ord(E.disc, place);
    out.floor_coefficient = canon(mpq_class(-N * out.v_disc, 12));
    out.floor_holds = coeff >= out.floor_coefficient;
    out.value = Interval(coeff, prec) * log(Interval(mpz_class(static_cast<unsigned long>(place)), prec));
  }
  return out;
}

long count_points_mod_p(const EllipticCurve& E0, uint64_t p) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("count_points_mod_p needs a prime");
  EllipticCurve E = minimal_model(E0).curve;
  if (*ord(E.disc, p) != 0) throw std::domain_error("bad reduction at " + std::to_string(p));
  uint64_t a1 = mod_p(E.a1, p), a2 = mod_p(E.a2, p), a3 = mod_p(E.a3, p), a4 = mod_p(E.a4, p), a6 = mod_p(E.a6, p);
  long count = 1;
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t A = (a1 * x + a3) % p;
    uint64_t B = (((x * x % p) * x) % p + a2 * (x * x % p) + a4 * x + a6) % p;
    if (p == 2) {
      for (uint64_t y = 0; y < 2; ++y) count += (y * y + A * y + 2 - B) % 2 == 0;
    } else {
      count += 1 + legendre((A * A + 4 * B) % p, p);
    }
  }
  double slack = 2.0 * std::sqrt(static_cast<double>(p));
  if (std::fabs(static_cast<double>(count) - static_cast<double>(p + 1)) > slack) {
    throw std::logic_error("Hasse bound violated; point count is wrong");
  }
  return count;
}

ReductionStats reduction_stats(const EllipticCurve& E0, const SplittingType& split, int degree, uint64_t p) {
  ReductionStats st;
  EllipticCurve E = minimal_model(E0).curve;
  Reduction red = reduction_type(E, p);
  std::map<int, long> good, splitm;
  for (const auto& [e, f] : split.parts) {
    if (e > 1) {
      st.ramified_excluded = true;
      continue;
    }
    switch (red) {
      case Reduction::Good: ++good[f]; break;
      case Reduction::SplitMult: ++splitm[f]; break;
      case Reduction::NonsplitMult:
        if (f % 2 == 0) ++splitm[f];
        break;
      case Reduction::Additive: st.additive_excluded = true; break;
    }
  }
  for (const auto& [e, f] : split.parts) {
    if (e > 1) continue;
    mpz_class q = prime_power(p, f);
    if (!q.fits_ulong_p()) continue;
    mpq_class xi(good[f], degree), chi(splitm[f], degree);
    st.xi_chi[q.get_ui()] = {canon(xi), canon(chi)};
  }
  return st;
}

PointsetFloor pointset_height_floor(const EllipticCurve& E, const std::vector<CurvePoint>& pts,
                                    const std::map<uint64_t, std::pair<mpq_class, mpq_class>>& stats,
                                    const std::optional<mpq_class>& c_E, long precision_bits) {
  long N = static_cast<long>(pts.size());
  if (N < 2) throw std::invalid_argument("point set needs at least two points");
  prec_t prec = static_cast<prec_t>(precision_bits + 64);
  Interval avg(0L, prec), pair(0L, prec);
  for (const auto& P : pts) avg += canonical_height(E, P, precision_bits).value;
  avg /= Interval(N, prec);
  for (long i = 0; i < N; ++i) {
    for (long j = 0; j < N; ++j) {
      if (i == j) continue;
      CurvePoint d = add(E, pts[static_cast<size_t>(i)], negate(E, pts[static_cast<size_t>(j)]));
      if (d.infinity) throw std::invalid_argument("point set has repeated points");
      pair += canonical_height(E, d, precision_bits).value;
    }
  }
  pair /= Interval(4L * N * (N - 1), prec);
  PointsetFloor out;
  out.empirical_avg = avg;
  out.pairwise = pair;
  out.avg_ge_pairwise = pair.certainly_le(avg);
  if (!stats.empty()) {
    BoundSpec b;
    b.variant = BoundVariant::EllipticThm;
    b.ec = stats;
    b.c_E = c_E;
    out.bound_value = eval_bound(b, prec).value;
  }
  return out;
}

}  // namespace hl
