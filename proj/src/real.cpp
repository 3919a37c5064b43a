#include "heightlab/real.hpp"

#include <algorithm>
#include <stdexcept>

namespace hl {

namespace {

prec_t wider(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

std::string take_string(char* s) {
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

void set_min4(Real& out, const Real& a, const Real& b, const Real& c, const Real& d) {
  mpfr_min(out.get(), a.get(), b.get(), MPFR_RNDD);
  mpfr_min(out.get(), out.get(), c.get(), MPFR_RNDD);
  mpfr_min(out.get(), out.get(), d.get(), MPFR_RNDD);
}

void set_max4(Real& out, const Real& a, const Real& b, const Real& c, const Real& d) {
  mpfr_max(out.get(), a.get(), b.get(), MPFR_RNDU);
  mpfr_max(out.get(), out.get(), c.get(), MPFR_RNDU);
  mpfr_max(out.get(), out.get(), d.get(), MPFR_RNDU);
}

}  // namespace

std::string Real::to_fixed(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rf", digits, v_);
  std::string out = take_string(s);
  // "-0.000" and "0.000" must serialize identically.
  if (!out.empty() && out[0] == '-' &&
      out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

std::string Real::to_sci(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Re", std::max(digits - 1, 0), v_);
  return take_string(s);
}

Real operator+(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator-(const Real& a) {
  Real r(a.prec());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& a) {
  Real r(a.prec());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}
Real abs(const Real& a) {
  Real r(a.prec());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}
Real log(const Real& a) {
  Real r(a.prec());
  mpfr_log(r.get(), a.get(), MPFR_RNDN);
  return r;
}
Real exp(const Real& a) {
  Real r(a.prec());
  mpfr_exp(r.get(), a.get(), MPFR_RNDN);
  return r;
}
Real atan2(const Real& y, const Real& x) {
  Real r(wider(y, x));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
Real pi_real(prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}
Real ldexp(const Real& a, long e) {
  Real r(a.prec());
  mpfr_mul_2si(r.get(), a.get(), e, MPFR_RNDN);
  return r;
}

// ---------------------------------------------------------------- Interval

Interval::Interval(long v, prec_t prec) : lo_(prec), hi_(prec) {
  mpfr_set_si(lo_.get(), v, MPFR_RNDD);
  mpfr_set_si(hi_.get(), v, MPFR_RNDU);
}

Interval::Interval(const mpz_class& z, prec_t prec)
    : lo_(z, prec, MPFR_RNDD), hi_(z, prec, MPFR_RNDU) {}

Interval::Interval(const mpq_class& q, prec_t prec)
    : lo_(q, prec, MPFR_RNDD), hi_(q, prec, MPFR_RNDU) {}

Interval::Interval(const Real& lo, const Real& hi) : lo_(lo), hi_(hi) {
  if (hi_ < lo_) throw std::invalid_argument("interval endpoints out of order");
}

Interval Interval::point(const Real& r) { return Interval(r, r); }

Interval Interval::pi(prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
  mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
  return r;
}

Interval Interval::log2(prec_t prec) {
  Interval r(prec);
  mpfr_const_log2(r.lo_.get(), MPFR_RNDD);
  mpfr_const_log2(r.hi_.get(), MPFR_RNDU);
  return r;
}

Interval Interval::ball(const Real& mid, const Real& rad) {
  prec_t p = std::max(mid.prec(), rad.prec());
  Interval r(p);
  mpfr_sub(r.lo_.get(), mid.get(), rad.get(), MPFR_RNDD);
  mpfr_add(r.hi_.get(), mid.get(), rad.get(), MPFR_RNDU);
  return r;
}

Real Interval::width() const {
  Real w(prec());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

Real Interval::mid() const {
  Real m(prec() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

Real Interval::mag() const {
  Real a(prec()), b(prec());
  mpfr_abs(a.get(), lo_.get(), MPFR_RNDU);
  mpfr_abs(b.get(), hi_.get(), MPFR_RNDU);
  return a < b ? b : a;
}

Real Interval::mig() const {
  if (contains_zero()) return Real(prec());
  Real a(prec()), b(prec());
  mpfr_abs(a.get(), lo_.get(), MPFR_RNDD);
  mpfr_abs(b.get(), hi_.get(), MPFR_RNDD);
  return a < b ? a : b;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec(), b.prec()));
  mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(std::max(a.prec(), b.prec()));
  mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a) {
  Interval r(a.prec());
  mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
  mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  prec_t p = std::max(a.prec(), b.prec());
  Real d1(p), d2(p), d3(p), d4(p), u1(p), u2(p), u3(p), u4(p);
  mpfr_mul(d1.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_mul(d2.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_mul(d3.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_mul(d4.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_mul(u1.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDU);
  mpfr_mul(u2.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDU);
  mpfr_mul(u3.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  mpfr_mul(u4.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  Interval r(p);
  set_min4(r.lo_, d1, d2, d3, d4);
  set_max4(r.hi_, u1, u2, u3, u4);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
  prec_t p = std::max(a.prec(), b.prec());
  Real d1(p), d2(p), d3(p), d4(p), u1(p), u2(p), u3(p), u4(p);
  mpfr_div(d1.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_div(d2.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_div(d3.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_div(d4.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_div(u1.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDU);
  mpfr_div(u2.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDU);
  mpfr_div(u3.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  mpfr_div(u4.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  Interval r(p);
  set_min4(r.lo_, d1, d2, d3, d4);
  set_max4(r.hi_, u1, u2, u3, u4);
  return r;
}

Interval sqr(const Interval& a) {
  prec_t p = a.prec();
  Real lo(p), hi(p);
  Real mg = a.mig(), mx = a.mag();
  mpfr_sqr(lo.get(), mg.get(), MPFR_RNDD);
  mpfr_sqr(hi.get(), mx.get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval sqrt(const Interval& a) {
  if (a.hi().sign() < 0) throw std::domain_error("sqrt of a negative interval");
  prec_t p = a.prec();
  Real lo(p), hi(p);
  if (a.lo().sign() > 0) mpfr_sqrt(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval abs(const Interval& a) { return Interval(a.mig(), a.mag()); }

Interval log(const Interval& a) {
  if (a.lo().sign() <= 0) throw std::domain_error("log of an interval not bounded away from zero");
  prec_t p = a.prec();
  Real lo(p), hi(p);
  mpfr_log(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_log(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval exp(const Interval& a) {
  prec_t p = a.prec();
  Real lo(p), hi(p);
  mpfr_exp(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_exp(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(lo, hi);
}

Interval max(const Interval& a, const Interval& b) {
  const Real& lo = a.lo() < b.lo() ? b.lo() : a.lo();
  const Real& hi = a.hi() < b.hi() ? b.hi() : a.hi();
  return Interval(lo, hi);
}

Interval min(const Interval& a, const Interval& b) {
  const Real& lo = a.lo() < b.lo() ? a.lo() : b.lo();
  const Real& hi = a.hi() < b.hi() ? a.hi() : b.hi();
  return Interval(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) {
  const Real& lo = a.lo() < b.lo() ? a.lo() : b.lo();
  const Real& hi = a.hi() < b.hi() ? b.hi() : a.hi();
  return Interval(lo, hi);
}

Interval pow(const Interval& a, unsigned long n) {
  Interval r(1L, a.prec());
  Interval base = a;
  while (n > 0) {
    if (n & 1UL) r = r * base;
    n >>= 1;
    if (n > 0) base = sqr(base);
  }
  return r;
}

Interval scale2(const Interval& a, long e) {
  Real lo(a.prec()), hi(a.prec());
  mpfr_mul_2si(lo.get(), a.lo().get(), e, MPFR_RNDD);
  mpfr_mul_2si(hi.get(), a.hi().get(), e, MPFR_RNDU);
  return Interval(lo, hi);
}

// ----------------------------------------------------------------- Complex

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator/(const Complex& a, const Complex& b) {
  // Smith's scaling keeps intermediate magnitudes in range.
  if (abs(b.re) >= abs(b.im)) {
    Real r = b.im / b.re;
    Real d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  Real r = b.re / b.im;
  Real d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}
Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
Real abs(const Complex& a) {
  Real r(a.prec());
  mpfr_hypot(r.get(), a.re.get(), a.im.get(), MPFR_RNDN);
  return r;
}
Complex exp(const Complex& a) {
  Real m = exp(a.re);
  Real s(a.prec()), c(a.prec());
  mpfr_sin_cos(s.get(), c.get(), a.im.get(), MPFR_RNDN);
  return {m * c, m * s};
}
Complex log(const Complex& a) { return {log(abs(a)), atan2(a.im, a.re)}; }
Complex sqrt(const Complex& a) {
  prec_t p = a.prec();
  if (a.re.is_zero() && a.im.is_zero()) return Complex(p);
  Real m = abs(a);
  Real half(0.5, p);
  Real t = sqrt((m + abs(a.re)) * half);
  if (a.re.sign() >= 0) return {t, a.im / (t + t)};
  Real u = abs(a.im) / (t + t);
  return {u, a.im.sign() < 0 ? -t : t};
}
Complex conj(const Complex& a) { return {a.re, -a.im}; }

// --------------------------------------------------------- ComplexInterval

ComplexInterval ComplexInterval::point(const Complex& z) {
  return {Interval::point(z.re), Interval::point(z.im)};
}

Real ComplexInterval::width() const {
  Real a = re.width(), b = im.width();
  return a < b ? b : a;
}

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re + b.re, a.im + b.im};
}
ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re - b.re, a.im - b.im};
}
ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
ComplexInterval operator*(const ComplexInterval& a, const Interval& b) {
  return {a.re * b, a.im * b};
}
Interval abs(const ComplexInterval& a) { return sqrt(sqr(a.re) + sqr(a.im)); }

}  // namespace hl
