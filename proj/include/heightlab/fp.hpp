#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heightlab/intpoly.hpp"

namespace hl {

// Polynomials over F_p for p < 2^31, constant term first, trimmed.
class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(uint64_t p, std::vector<uint64_t> coeffs);
  static FpPoly from_int(const IntPolynomial& f, uint64_t p);
  static FpPoly x(uint64_t p);
  static FpPoly constant(uint64_t p, uint64_t c);

  uint64_t p() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  uint64_t coeff(int i) const { return i >= 0 && i <= degree() ? c_[static_cast<size_t>(i)] : 0; }
  uint64_t leading() const { return c_.back(); }
  const std::vector<uint64_t>& coeffs() const { return c_; }

  FpPoly monic() const;
  FpPoly derivative() const;
  IntPolynomial lift() const;  // coefficients in [0, p)
  uint64_t eval(uint64_t x) const;
  std::string to_string() const;

  friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  friend bool operator<(const FpPoly& a, const FpPoly& b);

 private:
  void trim();
  uint64_t p_ = 2;
  std::vector<uint64_t> c_;
};

uint64_t fp_inv(uint64_t a, uint64_t p);
uint64_t fp_pow(uint64_t a, uint64_t e, uint64_t p);

void divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r);
FpPoly operator%(const FpPoly& a, const FpPoly& b);
FpPoly operator/(const FpPoly& a, const FpPoly& b);
FpPoly gcd(const FpPoly& a, const FpPoly& b);  // monic
FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod);

struct FpFactor {
  FpPoly factor;  // monic irreducible
  int multiplicity;
};

struct FpFactorization {
  uint64_t leading = 1;
  std::vector<FpFactor> factors;  // sorted by (degree, coefficients)
  uint64_t seed = 0;
};

// Squarefree, distinct-degree and Cantor-Zassenhaus equal-degree splitting.
FpFactorization factor_fp(const FpPoly& f, uint64_t seed);

bool is_prime(uint64_t n);

}  // namespace hl
