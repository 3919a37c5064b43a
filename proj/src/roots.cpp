#include "heightlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace hl {

namespace {

using cld = std::complex<long double>;

// Initial points from the upper convex hull of (k, log|a_k|), one circle per
// hull edge, following Bini's starting strategy.
std::vector<cld> hull_start(const std::vector<cld>& a) {
  int n = static_cast<int>(a.size()) - 1;
  std::vector<int> idx;
  std::vector<long double> la(a.size());
  for (int k = 0; k <= n; ++k) {
    long double m = std::abs(a[k]);
    la[k] = m > 0 ? std::log(m) : -std::numeric_limits<long double>::infinity();
  }
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(la[k])) continue;
    while (idx.size() >= 2) {
      int i = idx[idx.size() - 2], j = idx.back();
      // drop j when it lies on or below the segment i -> k
      long double cross = (la[j] - la[i]) * (k - i) - (la[k] - la[i]) * (j - i);
      if (cross <= 0) idx.pop_back();
      else break;
    }
    idx.push_back(k);
  }
  std::vector<cld> z;
  const long double two_pi = 6.283185307179586476925286766559L;
  int placed = 0;
  // Roots at zero for every missing low-order coefficient.
  for (int k = 0; k < idx.front(); ++k) z.emplace_back(0.0L, 0.0L);
  placed = idx.front();
  for (size_t s = 0; s + 1 < idx.size(); ++s) {
    int i = idx[s], j = idx[s + 1];
    int cnt = j - i;
    long double u = std::exp((la[i] - la[j]) / cnt);
    for (int t = 0; t < cnt; ++t) {
      long double ang = two_pi * t / cnt + two_pi * placed / n + 0.7L;
      z.push_back(std::polar(u, ang));
    }
    placed += cnt;
  }
  return z;
}

void horner(const std::vector<cld>& a, const cld& z, cld& p, cld& dp) {
  int n = static_cast<int>(a.size()) - 1;
  p = a[n];
  dp = 0;
  for (int k = n - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
}

// Gauss-Seidel Aberth in long double. Returns false if it did not settle.
bool aberth_ld(const std::vector<cld>& a, std::vector<cld>& z) {
  size_t n = z.size();
  std::vector<bool> done(n, false);
  for (int it = 0; it < 2000; ++it) {
    bool all = true;
    for (size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      cld p, dp;
      horner(a, z[i], p, dp);
      if (p == cld(0)) {
        done[i] = true;
        continue;
      }
      cld w = p / dp;
      cld s = 0;
      for (size_t j = 0; j < n; ++j) {
        if (j != i) s += 1.0L / (z[i] - z[j]);
      }
      cld step = w / (1.0L - w * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
      z[i] -= step;
      if (std::abs(step) <= 1e-17L * std::max(1.0L, std::abs(z[i]))) done[i] = true;
      else all = false;
    }
    if (all) return true;
  }
  return false;
}

void horner_mp(const std::vector<Complex>& a, const Complex& z, Complex& p, Complex& dp) {
  int n = static_cast<int>(a.size()) - 1;
  p = a[n];
  dp = Complex(z.prec());
  for (int k = n - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
}

void aberth_mp(const std::vector<Complex>& a, std::vector<Complex>& z, prec_t P, int max_iter) {
  size_t n = z.size();
  Real one(1.0, P);
  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iter; ++it) {
    bool all = true;
    for (size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      Complex p(P), dp(P);
      horner_mp(a, z[i], p, dp);
      if (p.re.is_zero() && p.im.is_zero()) {
        done[i] = true;
        continue;
      }
      if (dp.re.is_zero() && dp.im.is_zero()) {
        all = false;
        continue;
      }
      Complex w = p / dp;
      Complex s(P);
      for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        Complex d = z[i] - z[j];
        if (d.re.is_zero() && d.im.is_zero()) continue;
        s = s + Complex(one, Real(P)) / d;
      }
      Complex den = Complex(one, Real(P)) - w * s;
      Complex step = (den.re.is_zero() && den.im.is_zero()) ? w : w / den;
      z[i] = z[i] - step;
      Real zs = abs(z[i]);
      if (zs < one) zs = one;
      Real tol = ldexp(zs, -static_cast<long>(P) + 6);
      if (abs(step) <= tol) done[i] = true;
      else all = false;
    }
    if (all) return;
  }
}

ComplexInterval horner_iv(const std::vector<ComplexInterval>& a, const ComplexInterval& z) {
  int n = static_cast<int>(a.size()) - 1;
  ComplexInterval p = a[n];
  for (int k = n - 1; k >= 0; --k) p = p * z + a[k];
  return p;
}

Complex mid_of(const ComplexInterval& c, prec_t P) {
  return {Real(c.re.mid(), P), Real(c.im.mid(), P)};
}

// Attempts the inclusion certificate; fills `out` on success.
bool certify(const std::vector<ComplexInterval>& a, std::vector<Complex>& z, const RootOptions& opt,
             prec_t P, CertifiedRoots& out) {
  size_t n = z.size();
  if (opt.real_coefficients) {
    for (auto& zi : z) {
      Real m = abs(zi);
      Real one(1.0, P);
      if (m < one) m = one;
      if (abs(zi.im) <= ldexp(m, -static_cast<long>(P) / 2)) zi.im = Real(P);
    }
  }
  Interval lead_abs = abs(a.back());
  if (lead_abs.lo().sign() <= 0) return false;
  Interval deg_iv(static_cast<long>(n), P);
  std::vector<Real> rad;
  std::vector<ComplexInterval> boxes;
  for (size_t i = 0; i < n; ++i) {
    ComplexInterval Z = ComplexInterval::point(z[i]);
    Interval num = abs(horner_iv(a, Z)) * deg_iv;
    Interval den = lead_abs;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      Interval d = abs(Z - ComplexInterval::point(z[j]));
      if (d.lo().sign() <= 0) return false;
      den = den * d;
    }
    Interval r = num / den;
    rad.push_back(r.hi());
    boxes.push_back({Interval::ball(z[i].re, r.hi()), Interval::ball(z[i].im, r.hi())});
  }
  Real target = ldexp(Real(1.0, P), -opt.target_bits);
  std::vector<bool> is_real(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (boxes[i].width() > target) return false;
    if (opt.real_coefficients) {
      if (z[i].im.is_zero()) is_real[i] = true;
      else if (boxes[i].im.contains_zero()) return false;
    }
    for (size_t j = i + 1; j < n; ++j) {
      if (!boxes[i].disjoint(boxes[j])) return false;
    }
  }
  out.centers = z;
  out.radii = std::move(rad);
  out.boxes = std::move(boxes);
  out.real = std::move(is_real);
  out.working_prec = P;
  return true;
}

}  // namespace

CertifiedRoots certified_roots(const CoeffOracle& coeffs, int degree, const RootOptions& opt) {
  if (degree < 1) throw std::domain_error("root isolation needs degree >= 1");
  prec_t P = std::max<prec_t>(opt.start_prec, opt.target_bits + 64);

  std::vector<ComplexInterval> a = coeffs(P);
  if (static_cast<int>(a.size()) != degree + 1) throw std::logic_error("coefficient oracle size mismatch");

  std::vector<cld> ald;
  bool finite = true;
  for (const auto& c : a) {
    long double re = mpfr_get_ld(c.re.mid().get(), MPFR_RNDN);
    long double im = mpfr_get_ld(c.im.mid().get(), MPFR_RNDN);
    if (!std::isfinite(re) || !std::isfinite(im)) finite = false;
    ald.emplace_back(re, im);
  }
  std::vector<cld> zl;
  bool settled = false;
  if (finite) {
    zl = hull_start(ald);
    settled = aberth_ld(ald, zl);
  }
  std::vector<Complex> z;
  if (finite) {
    for (const auto& w : zl) z.push_back({Real(static_cast<double>(w.real()), P), Real(static_cast<double>(w.imag()), P)});
  } else {
    // Coefficients beyond long double range: unit circle start scaled later by iteration.
    const double two_pi = 6.283185307179586;
    for (int k = 0; k < degree; ++k) {
      z.push_back({Real(std::cos(two_pi * k / degree + 0.7), P), Real(std::sin(two_pi * k / degree + 0.7), P)});
    }
  }

  int iters = settled ? 40 : 4000;
  while (P <= opt.max_prec) {
    std::vector<Complex> am;
    for (const auto& c : a) am.push_back(mid_of(c, P));
    for (auto& zi : z) zi = Complex(Real(zi.re, P), Real(zi.im, P));
    aberth_mp(am, z, P, iters);
    CertifiedRoots out;
    if (certify(a, z, opt, P, out)) return out;
    P *= 2;
    iters = std::max(iters, 200);
    a = coeffs(P);
  }
  throw std::runtime_error("root certification did not succeed within the precision cap");
}

CertifiedRoots certified_roots(const IntPolynomial& f, const RootOptions& opt) {
  if (f.is_zero() || f.degree() < 1) throw std::domain_error("root isolation needs degree >= 1");
  if (!is_squarefree(f)) {
    throw std::domain_error("polynomial is not squarefree; pass squarefree_part(f) instead");
  }
  CoeffOracle oracle = [&f](prec_t P) {
    std::vector<ComplexInterval> v;
    for (const auto& c : f.coeffs()) v.push_back({Interval(c, P), Interval(0L, P)});
    return v;
  };
  RootOptions o = opt;
  o.real_coefficients = true;
  return certified_roots(oracle, f.degree(), o);
}

std::vector<size_t> canonical_order(const CertifiedRoots& roots) {
  size_t n = roots.centers.size();
  std::vector<size_t> reals, upper, lower;
  for (size_t i = 0; i < n; ++i) {
    if (!roots.real.empty() && roots.real[i]) reals.push_back(i);
    else if (roots.centers[i].im.sign() > 0) upper.push_back(i);
    else lower.push_back(i);
  }
  auto by_re = [&](size_t i, size_t j) {
    const Complex& a = roots.centers[i];
    const Complex& b = roots.centers[j];
    if (!(a.re == b.re)) return a.re < b.re;
    return abs(a.im) < abs(b.im);
  };
  std::sort(reals.begin(), reals.end(), by_re);
  std::sort(upper.begin(), upper.end(), by_re);
  std::vector<size_t> out = reals;
  std::vector<bool> used(n, false);
  for (size_t u : upper) {
    out.push_back(u);
    // partner: nearest lower-half center to the conjugate
    size_t best = n;
    Real bestd(roots.working_prec);
    for (size_t l : lower) {
      if (used[l]) continue;
      Complex d = roots.centers[l] - conj(roots.centers[u]);
      Real dd = norm(d);
      if (best == n || dd < bestd) {
        best = l;
        bestd = dd;
      }
    }
    if (best != n) {
      used[best] = true;
      out.push_back(best);
    }
  }
  // Non-real coefficients may leave unmatched lower roots.
  std::vector<size_t> rest;
  for (size_t l : lower) {
    if (!used[l]) rest.push_back(l);
  }
  std::sort(rest.begin(), rest.end(), by_re);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<ComplexInterval> complex_roots(const IntPolynomial& f, long target_bits) {
  RootOptions opt;
  opt.target_bits = target_bits;
  CertifiedRoots r = certified_roots(f, opt);
  std::vector<ComplexInterval> out;
  for (size_t i : canonical_order(r)) out.push_back(r.boxes[i]);
  return out;
}

namespace {

bool relative_width_ok(const Interval& v, long bits) {
  if (v.lo().sign() <= 0) return false;
  Real rel = v.width() / v.lo();
  return rel <= ldexp(Real(1.0, 64), -bits);
}

Interval mahler_squarefree(const IntPolynomial& g, long target_bits, prec_t P) {
  if (g.degree() == 1) {
    mpz_class a = abs(g.coeff(0)), b = abs(g.coeff(1));
    return Interval(a > b ? a : b, P);
  }
  RootOptions opt;
  opt.target_bits = target_bits;
  CertifiedRoots r = certified_roots(g, opt);
  Interval one(1L, P);
  Interval m(mpz_class(abs(g.leading())), P);
  for (const auto& box : r.boxes) m = m * max(one, abs(box));
  return m;
}

}  // namespace

Interval mahler_measure(const IntPolynomial& f, long precision_bits) {
  if (f.is_zero()) throw std::domain_error("Mahler measure of the zero polynomial");
  mpz_class unit;
  auto factors = squarefree_decomposition(f, &unit);
  long target = precision_bits + 16;
  for (int attempt = 0; attempt < 8; ++attempt) {
    prec_t P = static_cast<prec_t>(target + 64);
    Interval m(mpz_class(abs(unit)), P);
    for (const auto& sf : factors) {
      Interval mg = mahler_squarefree(sf.factor, target + 8, P);
      m = m * pow(mg, static_cast<unsigned long>(sf.multiplicity));
    }
    if (m.width().is_zero() || relative_width_ok(m, precision_bits)) return m;
    target *= 2;
  }
  throw std::runtime_error("Mahler measure did not reach the requested precision");
}

Interval house(const IntPolynomial& f, long precision_bits) {
  if (f.is_zero() || f.degree() < 1) throw std::domain_error("house needs degree >= 1");
  IntPolynomial g = squarefree_part(f);
  long target = precision_bits + 16;
  for (int attempt = 0; attempt < 8; ++attempt) {
    RootOptions opt;
    opt.target_bits = target + 8;
    CertifiedRoots r = certified_roots(g, opt);
    Interval h = abs(r.boxes.front());
    for (const auto& box : r.boxes) h = max(h, abs(box));
    if (h.width().is_zero() || relative_width_ok(h, precision_bits) ||
        (h.lo().sign() == 0 && h.width() <= ldexp(Real(1.0, 64), -precision_bits))) {
      return h;
    }
    target *= 2;
  }
  throw std::runtime_error("house did not reach the requested precision");
}

std::vector<AlgebraicNumber> conjugates(const IntPolynomial& minpoly, long target_bits) {
  IntPolynomial f = minpoly.primitive_part();
  auto boxes = complex_roots(f, target_bits);
  std::vector<AlgebraicNumber> out;
  for (size_t i = 0; i < boxes.size(); ++i) out.push_back({f, boxes[i], i});
  return out;
}

}  // namespace hl
