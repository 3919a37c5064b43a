#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heightlab/fp.hpp"
#include "heightlab/intpoly.hpp"

namespace hl {

struct PadicContext {
  uint64_t p;
  int precision;  // work modulo p^precision

  PadicContext(uint64_t prime, int k = 20);
  mpz_class modulus() const;
};

// ord_p(x); std::nullopt encodes +infinity (x = 0).
std::optional<long> vp(const mpq_class& x, uint64_t p);
long vp_nonzero(const mpz_class& x, uint64_t p);
long vp_poly(const IntPolynomial& f, uint64_t p);  // min over coefficients; LONG_MAX for zero

constexpr uint64_t kDefaultSeed = 0x5eed5eedULL;

FpFactorization factor_mod_p(const IntPolynomial& f, const PadicContext& ctx, uint64_t seed = kDefaultSeed);

struct SplittingType {
  std::vector<std::pair<int, int>> parts;  // (e, f), sorted
  bool certified = false;
  std::string method;  // "dedekind", "kummer-dedekind", "newton-polygon", "best-effort"
  uint64_t seed = kDefaultSeed;
  int degree_sum() const;
};

SplittingType splitting_type(const IntPolynomial& f, const PadicContext& ctx, uint64_t seed = kDefaultSeed);

struct PadicRoot {
  mpz_class value;  // representative in [0, p^k)
  uint64_t residue;
};

struct QpRoots {
  std::vector<PadicRoot> roots;
  bool complete = true;
};

QpRoots qp_integral_roots(const IntPolynomial& f, const PadicContext& ctx);

struct ClusterReport {
  uint64_t p = 0;
  uint64_t q = 0;
  std::map<uint64_t, long> residue_counts;
  long v_disc = 0;
  long cluster_lower_bound = 0;
  mpq_class cauchy_schwarz_floor;
  long integral_root_count = 0;
  long nonintegral_count = 0;
  long slack = 0;
  bool all_roots_integral = false;
  bool complete = true;
};

ClusterReport cluster_bound_report(const IntPolynomial& f, const PadicContext& ctx);

struct MetricReport {
  mpq_class lhs, rhs;
  std::optional<long> lhs_order;  // ord_p(alpha^q - alpha); nullopt = +inf
  long rhs_order = 0;             // exponent e with rhs = p^-e
  bool holds = false;
};

// |alpha^q - alpha|_p <= p^-1 max(1, |alpha|_p)^(q+1), q = p^f
MetricReport frobenius_metric_check(const mpq_class& alpha, const PadicContext& ctx, int f);

struct Acceleration {
  long k = 0;
  mpq_class s;
};

Acceleration acceleration(uint64_t p, const mpq_class& rho, long lambda);

struct AccelerationCheck {
  std::optional<long> order;  // ord_p(g1^(p^l) - g2^(p^l)); nullopt = +inf
  mpq_class s;
  bool holds = false;
};

AccelerationCheck acceleration_brute_check(const mpz_class& g1, const mpz_class& g2, uint64_t p, long rho,
                                           long lambda);

// Degree-set test across primes: true only when f is provably irreducible over Q.
bool irreducibility_certificate(const IntPolynomial& f, int max_primes = 20);

}  // namespace hl
