#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heightlab/intpoly.hpp"
#include "heightlab/padic.hpp"
#include "heightlab/real.hpp"

namespace hl {

// Prime ideal counts of Q[x]/(f) above p, keyed by residue degree m (norm p^m).
struct NqCounts {
  uint64_t p = 0;
  std::map<int, long> by_degree;
  SplittingType type;
  bool certified = false;
};

NqCounts nq_counts(const IntPolynomial& f, uint64_t p, int max_power);

mpz_class prime_power(uint64_t p, int m);
// Returns (p, m) with q = p^m, or nullopt when q is not a prime power.
std::optional<std::pair<uint64_t, int>> as_prime_power(uint64_t q);

struct TowerSpec {
  std::vector<IntPolynomial> levels;
  bool containment_asserted = true;
  // witnesses[i], when present, embeds level i into level i+1: f_i(g_i) = 0 mod f_{i+1}.
  std::vector<std::optional<RatPolynomial>> witnesses;

  // Throws std::invalid_argument on a degree chain that does not divide or a failed witness.
  void validate() const;
};

bool witness_holds(const IntPolynomial& f, const RatPolynomial& g, const IntPolynomial& modulus);

struct LevelStats {
  int degree = 0;
  NqCounts counts;
  std::map<int, mpq_class> ratio;  // m -> N_{p^m} / n
};

// Exact weighted partial sum over the prime powers of one prime:
// sum_{p^k <= x} k N_{p^k}(L_i) / n_i, the coefficient of log p.
struct CutoffCheck {
  uint64_t p = 0;
  mpz_class cutoff;
  std::vector<mpq_class> weights;
  bool nonincreasing = true;
  bool certified = true;
};

struct TowerStats {
  uint64_t p = 0;
  int max_power = 0;
  std::vector<LevelStats> levels;
  std::vector<CutoffCheck> diagnostic;
  std::vector<int> uncertified_levels;
  std::string trend;  // "nonincreasing-consistent" or "violated"
};

TowerStats psi_estimate(const TowerSpec& t, uint64_t p, int max_power);

// Runs the weighted partial sum check for every prime p <= max_cutoff and
// every cutoff p^k <= max_cutoff.
std::vector<CutoffCheck> monotonicity_diagnostic(const TowerSpec& t, uint64_t max_cutoff);

enum class BoundVariant {
  BZ,
  ConjecturePlus1,
  ThmAIntegers,
  ThmBMetric,
  AlmostSplit,
  AlmostUnramified,
  Pottmeyer,
  EllipticThm,
  EllipticCorollary,
};

std::string to_string(BoundVariant v);
BoundVariant parse_variant(const std::string& s);

struct LocalDegree {
  uint64_t p;
  long e;
  long f;
};

struct BoundSpec {
  BoundVariant variant = BoundVariant::ThmAIntegers;
  std::vector<LocalDegree> local;                         // BZ
  std::map<uint64_t, mpq_class> psi;                      // q -> psi_q
  std::map<uint64_t, std::pair<mpq_class, mpq_class>> ec;  // q -> (xi_q, chi_q)
  std::vector<uint64_t> primes;                           // AlmostSplit set, Pottmeyer / AlmostUnramified prime
  std::optional<mpq_class> c_E;
  uint64_t cutoff = 10000;
};

struct BoundValue {
  Interval value{128};
  bool truncated = false;
  long terms = 0;
  // Bombieri-Zannier sandwich: sum log p / (p - 1) over the primes of the spec.
  std::optional<Interval> upper;
  // Metric bound: chosen q, lambda, rho, s and the pre-simplification value.
  std::optional<uint64_t> q;
  std::optional<long> lambda;
  std::optional<mpq_class> rho, s;
  std::optional<Interval> refined;
  // Almost unramified: variant with q + 1 in the denominator, and sum_f f psi_{p^f}.
  std::optional<Interval> alternate;
  std::optional<mpq_class> hypothesis_sum;
  std::string note;
};

BoundValue eval_bound(const BoundSpec& b, prec_t prec = 128);

// Parses "2:1.0,3:0.5" into q -> psi_q with exact decimal conversion.
std::map<uint64_t, mpq_class> parse_psi_map(const std::string& s);
mpq_class parse_decimal(const std::string& s);

struct AlmostUnramifiedReport {
  uint64_t p = 0;
  std::vector<mpq_class> sums;  // per level: sum_f f N_{p^f} / n
  mpq_class tolerance;
  bool within_tolerance = false;
  bool certified = true;
};

AlmostUnramifiedReport almost_unramified_check(const TowerStats& stats, const mpq_class& tolerance);

mpq_class compositum_psi_floor(const mpq_class& psi_q, long d);

}  // namespace hl
