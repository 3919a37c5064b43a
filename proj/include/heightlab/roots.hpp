#pragma once

#include <functional>
#include <vector>

#include "heightlab/intpoly.hpp"
#include "heightlab/real.hpp"

namespace hl {

// Supplies enclosures of the coefficients (constant term first) at a requested
// working precision. Exact inputs return point intervals.
using CoeffOracle = std::function<std::vector<ComplexInterval>(prec_t)>;

struct CertifiedRoots {
  std::vector<Complex> centers;
  std::vector<Real> radii;              // each disk D(center, radius) holds exactly one root
  std::vector<ComplexInterval> boxes;   // squares circumscribing the disks, pairwise disjoint
  std::vector<bool> real;               // proven real (only meaningful for real coefficients)
  prec_t working_prec = 0;
};

struct RootOptions {
  long target_bits = 53;     // box side length <= 2^-target_bits
  prec_t start_prec = 128;
  prec_t max_prec = 1 << 16;
  bool real_coefficients = true;
};

// Simultaneous Aberth iteration followed by an inclusion-disk certificate:
// with p of degree n, the disks D(z_i, n|p(z_i)| / (|a_n| prod_{j!=i} |z_i - z_j|))
// cover the roots and each component of k disks holds k roots.
CertifiedRoots certified_roots(const CoeffOracle& coeffs, int degree, const RootOptions& opt);

CertifiedRoots certified_roots(const IntPolynomial& f, const RootOptions& opt = {});

// Boxes ordered canonically: real roots ascending, then conjugate pairs by
// ascending real part with the positive imaginary member first.
std::vector<ComplexInterval> complex_roots(const IntPolynomial& f, long target_bits = 53);
std::vector<size_t> canonical_order(const CertifiedRoots& roots);

// |a_n| prod max(1, |alpha_i|) with relative width <= 2^-precision_bits.
// f need not be squarefree or irreducible.
Interval mahler_measure(const IntPolynomial& f, long precision_bits = 64);
Interval house(const IntPolynomial& f, long precision_bits = 64);

struct AlgebraicNumber {
  IntPolynomial minpoly;
  ComplexInterval root_box;
  size_t index = 0;  // position in canonical order
};

std::vector<AlgebraicNumber> conjugates(const IntPolynomial& minpoly, long target_bits = 53);

}  // namespace hl
