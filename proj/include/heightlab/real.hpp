#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace hl {

using prec_t = mpfr_prec_t;

// Owning handle on an mpfr_t. Operators round to nearest at the wider precision
// of the operands; directed rounding lives in Interval.
class Real {
 public:
  explicit Real(prec_t prec = 53) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double d, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  Real(const mpz_class& z, prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, z.get_mpz_t(), rnd);
  }
  Real(const mpq_class& q, prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), rnd);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(const Real& o, prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  prec_t prec() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }

  // Fixed-point decimal with `digits` after the point, rounded to nearest.
  std::string to_fixed(int digits) const;
  // Scientific notation with `digits` significant digits.
  std::string to_sci(int digits) const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);
  Real& operator+=(const Real& b) { return *this = *this + b; }
  Real& operator-=(const Real& b) { return *this = *this - b; }
  Real& operator*=(const Real& b) { return *this = *this * b; }
  Real& operator/=(const Real& b) { return *this = *this / b; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

Real sqrt(const Real& a);
Real abs(const Real& a);
Real log(const Real& a);
Real exp(const Real& a);
Real atan2(const Real& y, const Real& x);
Real pi_real(prec_t prec);
Real ldexp(const Real& a, long e);

// Closed interval [lo, hi] with outward-rounded endpoint arithmetic.
class Interval {
 public:
  explicit Interval(prec_t prec = 64) : lo_(prec), hi_(prec) {}
  Interval(long v, prec_t prec);
  Interval(const mpz_class& z, prec_t prec);
  Interval(const mpq_class& q, prec_t prec);
  Interval(const Real& lo, const Real& hi);

  static Interval point(const Real& r);
  static Interval pi(prec_t prec);
  static Interval log2(prec_t prec);
  // [mid - rad, mid + rad] rounded outward.
  static Interval ball(const Real& mid, const Real& rad);

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  prec_t prec() const { return lo_.prec(); }

  Real width() const;
  Real mid() const;
  Real mag() const;  // max |x| over the interval, rounded up
  Real mig() const;  // min |x| over the interval, rounded down
  double approx() const { return mid().to_double(); }

  bool contains(const Real& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool overlaps(const Interval& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }
  // Strict comparisons that only succeed when the enclosures separate.
  bool certainly_le(const Interval& o) const { return hi_ <= o.lo_; }
  bool certainly_lt(const Interval& o) const { return hi_ < o.lo_; }
  bool certainly_positive() const { return lo_.sign() > 0; }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);
  Interval& operator+=(const Interval& b) { return *this = *this + b; }
  Interval& operator-=(const Interval& b) { return *this = *this - b; }
  Interval& operator*=(const Interval& b) { return *this = *this * b; }
  Interval& operator/=(const Interval& b) { return *this = *this / b; }

 private:
  Real lo_, hi_;
};

Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval abs(const Interval& a);
Interval log(const Interval& a);
Interval exp(const Interval& a);
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
Interval pow(const Interval& a, unsigned long n);
Interval scale2(const Interval& a, long e);  // a * 2^e, exact

// Floating complex number at a fixed precision, used by the iterative solvers.
struct Complex {
  Real re, im;
  explicit Complex(prec_t prec = 53) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  prec_t prec() const { return re.prec(); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator-(const Complex& a);
Real norm(const Complex& a);  // |a|^2
Real abs(const Complex& a);
Complex exp(const Complex& a);
Complex log(const Complex& a);  // principal branch
Complex sqrt(const Complex& a); // principal branch
Complex conj(const Complex& a);

// Rectangular complex enclosure.
struct ComplexInterval {
  Interval re, im;
  explicit ComplexInterval(prec_t prec = 64) : re(prec), im(prec) {}
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  static ComplexInterval point(const Complex& z);

  Real width() const;  // max of the two side lengths
  bool disjoint(const ComplexInterval& o) const {
    return !re.overlaps(o.re) || !im.overlaps(o.im);
  }
  bool contains(const ComplexInterval& o) const { return re.contains(o.re) && im.contains(o.im); }
};

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b);
ComplexInterval operator*(const ComplexInterval& a, const Interval& b);
Interval abs(const ComplexInterval& a);

}  // namespace hl
