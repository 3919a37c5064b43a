#pragma once

#include <string>
#include <vector>

#include "heightlab/intpoly.hpp"
#include "heightlab/real.hpp"
#include "heightlab/roots.hpp"

namespace hl {

// log M(f) / deg f in nats.
Interval weil_height(const IntPolynomial& f, long precision_bits = 64);

// alpha given by a monic relative minimal polynomial f_K over K = Q[y]/(g).
// rel[j] is the coefficient of x^j, a polynomial in y reduced mod g.
struct RelativeElement {
  IntPolynomial base;
  std::vector<RatPolynomial> rel;

  RelativeElement() = default;
  RelativeElement(IntPolynomial g, std::vector<RatPolynomial> coeffs);

  int base_degree() const { return base.degree(); }
  int rel_degree() const { return static_cast<int>(rel.size()) - 1; }
};

// prod over embeddings of sigma(f_K), as a primitive integer polynomial.
IntPolynomial norm_minpoly(const RelativeElement& e);

// D(f_K) as an element of Q[y]/(g).
RatPolynomial relative_discriminant(const RelativeElement& e);
// N_{K/Q}(a) for a in Q[y]/(g).
mpq_class field_norm(const IntPolynomial& g, const RatPolynomial& a);

// Certified roots of g in canonical order; embedding i sends y to the i-th root.
std::vector<ComplexInterval> embedding_roots(const IntPolynomial& g, long target_bits);

Interval relative_mahler(const RelativeElement& e, size_t embedding_index, long precision_bits = 64);

struct RelativeHeightReport {
  int base_degree = 0;
  int rel_degree = 0;
  std::vector<Interval> rel_mahler;  // M_sigma per embedding
  std::vector<Interval> rel_height;  // log M_sigma / m
  Interval average;                  // mean of rel_height
  Interval global_height;            // from norm_minpoly
  bool identity_consistent = false;  // average and global_height overlap
  mpq_class norm_rel_disc;           // N_{K/Q}(D(f_K))
  Interval localglobal_rhs;
  bool localglobal_violated = false;  // only set when certainly violated
};

RelativeHeightReport relative_height_decomposition(const RelativeElement& e, long precision_bits = 64);

enum class Verdict { Holds, Fails, Inconclusive };
std::string to_string(Verdict v);

struct InequalityReport {
  Interval lhs, rhs;
  Verdict verdict = Verdict::Inconclusive;
  long precision_bits = 0;  // precision at which the verdict was reached
};

// log|sigma(D(f_K))| <= m log m + (2m - 2) log M_sigma, refined up to max_bits.
InequalityReport relative_mahler_inequality_check(const RelativeElement& e, size_t embedding_index,
                                                  long max_bits = 1024);

struct DiscIdentityReport {
  mpz_class disc_f;          // discriminant of norm_minpoly
  mpq_class norm_rel_disc;   // N_{K/Q}(D(f_K))
  mpz_class disc_base;       // polynomial discriminant of g
  mpq_class ratio_square;    // D(f) / (disc(g)^2 N(D(f_K)))
  mpq_class ratio_power_m;   // D(f) / (disc(g)^m N(D(f_K)))
  std::string ratio_square_factored;
  std::string ratio_power_m_factored;
};

DiscIdentityReport disc_identity_probe(const RelativeElement& e);

// "2^3 * 5 / 3" style factorization by trial division (for small ratios).
std::string factor_rational(const mpq_class& q);

}  // namespace hl
