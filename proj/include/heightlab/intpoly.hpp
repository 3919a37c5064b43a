#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace hl {

// Dense polynomial over Z, constant term first. The empty coefficient vector
// is the zero polynomial; otherwise the leading coefficient is nonzero.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<mpz_class> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  static IntPolynomial monomial(const mpz_class& c, int degree);
  // Whitespace-separated integers, constant term first; '#' starts a comment.
  static IntPolynomial parse(const std::string& text);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(int i) const;
  const mpz_class& leading() const;

  mpz_class content() const;
  // Divides out the content and makes the leading coefficient positive.
  IntPolynomial primitive_part() const;
  IntPolynomial derivative() const;
  IntPolynomial reversed() const;
  IntPolynomial shifted(const mpz_class& c) const;  // f(x + c)
  IntPolynomial scaled_arg(const mpz_class& c) const;  // f(c x)

  mpz_class eval(const mpz_class& x) const;
  mpq_class eval(const mpq_class& x) const;

  std::string to_string() const;  // same format accepted by parse()
  std::string pretty() const;     // human readable, e.g. "x^2 - 2"

  IntPolynomial operator-() const;
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const mpz_class& s, const IntPolynomial& a);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const IntPolynomial& a, const IntPolynomial& b) { return !(a == b); }

  // Exact division by an integer that divides every coefficient.
  IntPolynomial divexact(const mpz_class& s) const;

 private:
  void trim();
  std::vector<mpz_class> c_;
};

// lc(b)^(deg a - deg b + 1) * a mod b
IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b);
// Returns true and sets q when b divides a in Z[x].
bool exact_quotient(const IntPolynomial& a, const IntPolynomial& b, IntPolynomial& q);

// Primitive gcd with positive leading coefficient; gcd(0, 0) = 0.
IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b);

mpz_class resultant(const IntPolynomial& f, const IntPolynomial& g);
mpz_class discriminant(const IntPolynomial& f);
bool is_squarefree(const IntPolynomial& f);

struct SquarefreeFactor {
  IntPolynomial factor;  // primitive, positive leading coefficient, degree >= 1
  int multiplicity;
};
// f = unit * prod factor^multiplicity, with unit an integer.
std::vector<SquarefreeFactor> squarefree_decomposition(const IntPolynomial& f, mpz_class* unit = nullptr);
IntPolynomial squarefree_part(const IntPolynomial& f);

// Polynomial over Q, constant term first, trimmed.
struct RatPolynomial {
  std::vector<mpq_class> c;

  RatPolynomial() = default;
  explicit RatPolynomial(std::vector<mpq_class> coeffs);
  explicit RatPolynomial(const IntPolynomial& f);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  mpq_class coeff(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : mpq_class(0); }
  mpq_class eval(const mpq_class& x) const;
  void trim();

  // Least common multiple of denominators times this, as an integer polynomial.
  IntPolynomial clear_denominators(mpz_class* scale = nullptr) const;
};

RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b);
RatPolynomial operator-(const RatPolynomial& a, const RatPolynomial& b);
RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b);
RatPolynomial operator*(const mpq_class& s, const RatPolynomial& a);
RatPolynomial rem(const RatPolynomial& a, const RatPolynomial& b);
// Newton interpolation through (xs[i], ys[i]).
RatPolynomial interpolate(const std::vector<mpq_class>& xs, const std::vector<mpq_class>& ys);
mpq_class resultant(const RatPolynomial& f, const RatPolynomial& g);
mpq_class discriminant(const RatPolynomial& f);

}  // namespace hl
