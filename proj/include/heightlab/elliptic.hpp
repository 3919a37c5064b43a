#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heightlab/real.hpp"
#include "heightlab/towers.hpp"

namespace hl {

struct EllipticCurve {
  mpq_class a1, a2, a3, a4, a6;
  mpq_class b2, b4, b6, b8, c4, c6, disc, j;

  std::array<mpq_class, 5> coefficients() const { return {a1, a2, a3, a4, a6}; }
  bool is_integral() const;
  std::string label() const;  // "[a1,a2,a3,a4,a6]"
};

// Standard b/c invariants; throws std::domain_error for a singular model.
EllipticCurve invariants(const std::array<mpq_class, 5>& a);

struct CurvePoint {
  bool infinity = false;
  mpq_class x, y;

  static CurvePoint zero() { return {true, 0, 0}; }
  friend bool operator==(const CurvePoint& p, const CurvePoint& q) {
    return p.infinity == q.infinity && (p.infinity || (p.x == q.x && p.y == q.y));
  }
};

bool on_curve(const EllipticCurve& E, const CurvePoint& P);
CurvePoint negate(const EllipticCurve& E, const CurvePoint& P);
CurvePoint add(const EllipticCurve& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint multiply(const EllipticCurve& E, const CurvePoint& P, long n);

// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct Transformation {
  mpq_class u = 1, r = 0, s = 0, t = 0;
  bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }
};

EllipticCurve apply(const EllipticCurve& E, const Transformation& T);
CurvePoint apply(const Transformation& T, const CurvePoint& P);
Transformation compose(const Transformation& first, const Transformation& second);

struct MinimalModel {
  EllipticCurve curve;
  Transformation transform;  // from the input model to curve
};

// Global minimal, reduced model over Z.
MinimalModel minimal_model(const EllipticCurve& E);

enum class Reduction { Good, SplitMult, NonsplitMult, Additive };
std::string to_string(Reduction r);

Reduction reduction_type(const EllipticCurve& E, uint64_t p);

// Prime factors of a nonzero integer, ascending.
std::vector<mpz_class> prime_factors(mpz_class n);

struct LocalHeightReport {
  uint64_t p = 0;  // 0 for the archimedean place
  Reduction type = Reduction::Good;
  Interval lambda{128};
  std::optional<mpq_class> coefficient;  // lambda = coefficient * log p at finite places
  long v_disc = 0;
  std::optional<mpq_class> alpha;
  long k_v = 0;  // -ord_p(j) when positive
  bool smooth = true;
  long series_terms = 0;
  Real error_bound{64};
};

// E must be integral and minimal at p.
LocalHeightReport local_height_nonarch(const EllipticCurve& E, const CurvePoint& P, uint64_t p);
LocalHeightReport local_height_arch(const EllipticCurve& E, const CurvePoint& P, long precision_bits = 80);

struct PeriodLattice {
  Complex w1, w2;  // tau = w2 / w1 in the fundamental domain
  Complex tau;
};

PeriodLattice periods(const EllipticCurve& E, prec_t prec);
// Elliptic logarithm up to sign and lattice translation, for a real point on E.
Complex elliptic_log(const EllipticCurve& E, const CurvePoint& P, prec_t prec);
// Weierstrass p-function of the lattice at z, via the q-expansion.
Complex weierstrass_p(const PeriodLattice& L, const Complex& z);

// Factor relating the local decomposition to lim h(x(2^n P)) / 4^n.
constexpr int kHeightKappa = 2;

struct OracleResult {
  Interval value{128};
  int doublings = 0;
  bool torsion = false;
};

OracleResult canonical_height_oracle(const EllipticCurve& E, const CurvePoint& P, double target = 1e-6,
                                     int max_doublings = 12);

struct CanonicalHeight {
  Interval value{128};
  std::vector<LocalHeightReport> places;
  int kappa = kHeightKappa;
  MinimalModel model;
};

CanonicalHeight canonical_height(const EllipticCurve& E, const CurvePoint& P, long precision_bits = 80);

struct TorsionResult {
  bool torsion = false;
  int order = 0;  // 0 when not torsion
};

TorsionResult is_torsion(const EllipticCurve& E, const CurvePoint& P);

struct PairwiseSum {
  uint64_t p = 0;
  Interval value{128};
  std::optional<mpq_class> coefficient;  // exact multiple of log p at finite places
  long v_disc = 0;
  mpq_class floor_coefficient;           // -(N/12) v(Delta) at finite places
  bool floor_holds = true;
  // Archimedean place: smallest b with sum >= -(1/2) N log N - b N for this configuration.
  std::optional<Interval> fitted_b;
};

// Sum over ordered pairs i != j of lambda_v(P_i - P_j). E integral and minimal.
PairwiseSum pairwise_local_sum(const EllipticCurve& E, const std::vector<CurvePoint>& points, uint64_t place,
                               long precision_bits = 80);

mpq_class bernoulli2(const mpq_class& t);
mpq_class bernoulli_pair_sum(const std::vector<mpq_class>& t);

long count_points_mod_p(const EllipticCurve& E, uint64_t p);

struct ReductionStats {
  // q -> (xi, chi) estimates for one number field with the given splitting data at p.
  std::map<uint64_t, std::pair<mpq_class, mpq_class>> xi_chi;
  bool additive_excluded = false;
  bool ramified_excluded = false;
};

ReductionStats reduction_stats(const EllipticCurve& E, const SplittingType& split, int degree, uint64_t p);

struct PointsetFloor {
  Interval empirical_avg{128};
  Interval pairwise{128};
  bool avg_ge_pairwise = false;
  std::optional<Interval> bound_value;
};

PointsetFloor pointset_height_floor(const EllipticCurve& E, const std::vector<CurvePoint>& points,
                                    const std::map<uint64_t, std::pair<mpq_class, mpq_class>>& stats,
                                    const std::optional<mpq_class>& c_E, long precision_bits = 80);

}  // namespace hl
