#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "heightlab/intpoly.hpp"
#include "heightlab/real.hpp"

namespace hl::testing {

inline bool near(const Interval& x, double expected, double tol) { return std::fabs(x.approx() - expected) <= tol; }

// Sylvester matrix determinant by Gaussian elimination over Q.
inline mpq_class sylvester_resultant(const IntPolynomial& f, const IntPolynomial& g) {
  int m = f.degree(), n = g.degree();
  int N = m + n;
  if (N == 0) return 1;
  std::vector<std::vector<mpq_class>> a(static_cast<size_t>(N), std::vector<mpq_class>(static_cast<size_t>(N), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) a[i][i + j] = f.coeff(m - j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) a[n + i][i + j] = g.coeff(n - j);
  mpq_class det = 1;
  for (int c = 0; c < N; ++c) {
    int piv = c;
    while (piv < N && a[piv][c] == 0) ++piv;
    if (piv == N) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < N; ++r) {
      if (a[r][c] == 0) continue;
      mpq_class k = a[r][c] / a[c][c];
      for (int j = c; j < N; ++j) a[r][j] -= k * a[c][j];
    }
  }
  return det;
}

// Durand-Kerner in long double; adequate for small random inputs.
inline std::vector<std::complex<long double>> float_roots(const IntPolynomial& f) {
  using C = std::complex<long double>;
  int n = f.degree();
  std::vector<C> a(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) a[i] = C(f.coeff(i).get_d() / f.leading().get_d(), 0);
  std::vector<C> z(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) z[i] = std::pow(C(0.4L, 0.9L), i);
  for (int it = 0; it < 2000; ++it) {
    long double change = 0;
    for (int i = 0; i < n; ++i) {
      C num = a[n];
      for (int k = n - 1; k >= 0; --k) num = num * z[i] + a[k];
      C den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      C d = num / den;
      z[i] -= d;
      change = std::max(change, std::abs(d));
    }
    if (change < 1e-18L) break;
  }
  return z;
}

inline long double float_mahler(const IntPolynomial& f) {
  long double m = std::fabs(f.leading().get_d());
  for (auto& z : float_roots(f)) m *= std::max<long double>(1, std::abs(z));
  return m;
}

}  // namespace hl::testing
