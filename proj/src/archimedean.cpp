#include <cmath>
#include <stdexcept>

#include "heightlab/elliptic.hpp"
#include "heightlab/roots.hpp"

namespace hl {

namespace {

Complex cr(const Real& r) { return Complex(r, Real(0.0, r.prec())); }
Complex cd(double d, prec_t prec) { return Complex(Real(d, prec), Real(0.0, prec)); }
Real frac(long a, long b, prec_t prec) { return Real(mpq_class(a, b), prec); }

Real round_real(const Real& a) {
  Real r(a.prec());
  mpfr_round(r.get(), a.get());
  return r;
}

Real floor_real(const Real& a) {
  Real r(a.prec());
  mpfr_floor(r.get(), a.get());
  return r;
}

// Carlson's symmetric integral R_F by the duplication theorem.
Complex carlson_rf(Complex x, Complex y, Complex z, prec_t prec) {
  const Real quarter(0.25, prec);
  const Real tol = ldexp(Real(1.0, prec), -static_cast<long>(prec) / 6 - 4);
  for (int it = 0; it < 10000; ++it) {
    Complex A = (x + y + z) * frac(1, 3, prec);
    Real scale = abs(A);
    Real dev = abs(A - x);
    Real dy = abs(A - y), dz = abs(A - z);
    if (dy > dev) dev = dy;
    if (dz > dev) dev = dz;
    if (dev <= tol * scale) {
      Complex X = (A - x) / A, Y = (A - y) / A;
      Complex Z = -(X + Y);
      Complex E2 = X * Y - Z * Z;
      Complex E3 = X * Y * Z;
      Complex s = cd(1.0, prec) - E2 * frac(1, 10, prec) + E3 * frac(1, 14, prec) +
                  E2 * E2 * frac(1, 24, prec) - E2 * E3 * frac(3, 44, prec);
      return s / sqrt(A);
    }
    Complex sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    Complex lam = sx * sy + sy * sz + sz * sx;
    x = (x + lam) * quarter;
    y = (y + lam) * quarter;
    z = (z + lam) * quarter;
  }
  throw std::runtime_error("Carlson R_F did not converge");
}

struct RawPeriods {
  Complex w1, w2;      // w1 real, w2 / w1 in the upper half plane, not reduced
  Complex e1, e2, e3;  // p(w1/2) = e1, p(w2/2) = e3
  bool positive_disc = false;
};

RawPeriods raw_periods(const EllipticCurve& E, prec_t prec) {
  // 4X^3 - (c4/12) X - c6/216 = 0, times 216.
  mpq_class k0 = -E.c6, k1 = -18 * E.c4;
  mpz_class d;
  mpz_lcm(d.get_mpz_t(), k0.get_den_mpz_t(), k1.get_den_mpz_t());
  mpq_class c0 = k0 * d, c1 = k1 * d;
  IntPolynomial f({c0.get_num(), c1.get_num(), mpz_class(0), mpz_class(864 * d)});
  std::vector<ComplexInterval> boxes = complex_roots(f, static_cast<long>(prec));
  auto mid = [&](const ComplexInterval& b) { return Complex(Real(b.re.mid(), prec), Real(b.im.mid(), prec)); };
  RawPeriods r;
  r.positive_disc = E.disc > 0;
  Complex zero = cd(0.0, prec);
  if (r.positive_disc) {
    r.e3 = cr(mid(boxes[0]).re);
    r.e2 = cr(mid(boxes[1]).re);
    r.e1 = cr(mid(boxes[2]).re);
    r.w1 = carlson_rf(zero, r.e1 - r.e2, r.e1 - r.e3, prec) * Real(2.0, prec);
    Complex im = carlson_rf(zero, r.e1 - r.e3, r.e2 - r.e3, prec) * Real(2.0, prec);
    r.w2 = Complex(Real(0.0, prec), im.re);
  } else {
    r.e1 = cr(mid(boxes[0]).re);
    r.e2 = mid(boxes[1]);
    r.e3 = mid(boxes[2]);
    r.w1 = cr(carlson_rf(zero, r.e1 - r.e2, r.e1 - r.e3, prec).re * Real(2.0, prec));
    Real im = carlson_rf(zero, r.e2 - r.e1, r.e3 - r.e1, prec).re * Real(2.0, prec);
    r.w2 = (r.w1 + Complex(Real(0.0, prec), im)) * Real(0.5, prec);
  }
  return r;
}

PeriodLattice reduce_lattice(Complex w1, Complex w2) {
  // Boundary slack keeps tau = rho (j = 0) from cycling under rounding.
  const prec_t prec = w1.prec();
  const Real slack = ldexp(Real(1.0, prec), -static_cast<long>(prec) / 2);
  const Real half = Real(0.5, prec) + slack, one = Real(1.0, prec) - slack;
  for (int it = 0; it < 1000; ++it) {
    Complex tau = w2 / w1;
    if (tau.im.sign() < 0) {
      w2 = -w2;
      continue;
    }
    if (abs(tau.re) > half) {
      Real n = round_real(tau.re);
      w2 = w2 - w1 * n;
      continue;
    }
    if (norm(tau) < one) {
      Complex t = w1;
      w1 = -w2;
      w2 = t;
      continue;
    }
    return {w1, w2, tau};
  }
  throw std::logic_error("period lattice reduction did not terminate");
}

Complex two_pi_i_times(const Complex& a, prec_t prec) {
  Real tp = pi_real(prec) * Real(2.0, prec);
  return Complex(-(a.im * tp), a.re * tp);
}

// z / w1 shifted by multiples of tau and 1 so that Im part over Im tau lies in [lo, lo + 1).
Complex normalize(const PeriodLattice& L, const Complex& z, double lo) {
  Complex w = z / L.w1;
  Real t = w.im / L.tau.im;
  Real k = floor_real(t - Real(lo, t.prec()));
  w = w - L.tau * k;
  w.re = w.re - floor_real(w.re);
  return w;
}

}  // namespace

PeriodLattice periods(const EllipticCurve& E, prec_t prec) {
  RawPeriods r = raw_periods(E, prec);
  return reduce_lattice(r.w1, r.w2);
}

Complex weierstrass_p(const PeriodLattice& L, const Complex& z) {
  prec_t prec = z.prec();
  Complex w = normalize(L, z, -0.5);
  Complex q = exp(two_pi_i_times(L.tau, prec));
  Complex u = exp(two_pi_i_times(w, prec));
  Complex ui = cd(1.0, prec) / u;
  Complex one = cd(1.0, prec);
  auto term = [&](const Complex& a) {
    Complex d = one - a;
    return a / (d * d);
  };
  Complex s = cr(frac(1, 12, prec)) + term(u);
  Complex qn = q;
  Real eps = ldexp(Real(1.0, prec), -static_cast<long>(prec));
  for (int n = 1; n < 100000; ++n) {
    Complex t = term(qn * u) + term(qn * ui) - term(qn) * Real(2.0, prec);
    s = s + t;
    if (abs(qn) < eps) break;
    qn = qn * q;
  }
  Complex c = two_pi_i_times(one, prec) / L.w1;
  return c * c * s;
}

Complex elliptic_log(const EllipticCurve& E, const CurvePoint& P, prec_t prec) {
  if (P.infinity) throw std::invalid_argument("elliptic log at the point at infinity");
  RawPeriods r = raw_periods(E, prec);
  Real X(mpq_class(P.x + E.b2 / 12), prec);
  Complex z(prec);
  bool egg = r.positive_disc && X < (r.e1.re + r.e2.re) * Real(0.5, prec);
  if (!egg) {
    if (r.positive_disc && X < r.e1.re) X = r.e1.re;
    Complex cx = cr(X);
    z = carlson_rf(cx - r.e1, cx - r.e2, cx - r.e3, prec);
  } else {
    if (X < r.e3.re) X = r.e3.re;
    if (X > r.e2.re) X = r.e2.re;
    Real dx = X - r.e3.re;
    if (dx.is_zero()) {
      z = r.w2 * Real(0.5, prec);
    } else {
      Real Xp = r.e3.re + (r.e3.re - r.e1.re) * (r.e3.re - r.e2.re) / dx;
      Complex cx = cr(Xp);
      z = carlson_rf(cx - r.e1, cx - r.e2, cx - r.e3, prec) + r.w2 * Real(0.5, prec);
    }
  }
  return z;
}

LocalHeightReport local_height_arch(const EllipticCurve& E, const CurvePoint& P, long precision_bits) {
  if (P.infinity) throw std::invalid_argument("local height at the point at infinity");
  if (!on_curve(E, P)) throw std::invalid_argument("point is not on the curve");
  prec_t prec = static_cast<prec_t>(precision_bits + 64);
  LocalHeightReport rep;
  rep.p = 0;
  rep.v_disc = 0;

  Complex z = elliptic_log(E, P, prec);
  PeriodLattice L = reduce_lattice(raw_periods(E, prec).w1, raw_periods(E, prec).w2);

  Real X(mpq_class(P.x + E.b2 / 12), prec);
  Complex pz = weierstrass_p(L, z);
  Real scale = abs(X) + Real(1.0, prec);
  Real miss = abs(pz - cr(X)) / scale;
  if (miss > ldexp(Real(1.0, prec), -precision_bits / 2)) {
    throw std::runtime_error("elliptic logarithm failed the p-function check");
  }

  Complex w = normalize(L, z, 0.0);
  Real t = w.im / L.tau.im;
  if (t > Real(0.5, prec)) {
    w = L.tau - w;
    t = w.im / L.tau.im;
  }
  Complex q = exp(two_pi_i_times(L.tau, prec));
  Complex u = exp(two_pi_i_times(w, prec));
  Complex ui = cd(1.0, prec) / u;
  Complex one = cd(1.0, prec);
  Real absq = abs(q);
  Real logq = log(absq);

  Real b2 = t * t - t + frac(1, 6, prec);
  Real lam = -(b2 * logq) * Real(0.5, prec) - log(abs(one - u));
  Real eps = ldexp(Real(1.0, prec), -static_cast<long>(precision_bits) - 8);
  Real four(4.0, prec);
  Real tail(prec);
  Complex qn = q;
  long n = 1;
  for (; n < 100000; ++n) {
    lam = lam - log(abs(one - qn * u)) - log(abs(one - qn * ui));
    Real qn_abs = abs(qn);
    // |q|^(n + 1/2) bounds the next factor offsets since t <= 1/2.
    tail = four * qn_abs * sqrt(absq) / (Real(1.0, prec) - absq);
    if (tail < eps) break;
    qn = qn * q;
  }
  rep.series_terms = n;
  Real err = tail + ldexp(abs(lam) + Real(1.0, prec), -static_cast<long>(precision_bits));
  rep.lambda = Interval::ball(lam, err);
  rep.error_bound = Real(err, 64);
  return rep;
}

}  // namespace hl
