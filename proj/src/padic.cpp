#include "heightlab/padic.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <stdexcept>

namespace hl {

PadicContext::PadicContext(uint64_t prime, int k) : p(prime), precision(k) {
  if (!is_prime(prime)) throw std::invalid_argument("p = " + std::to_string(prime) + " is not prime");
  if (k < 1) throw std::invalid_argument("p-adic precision must be >= 1");
}

mpz_class PadicContext::modulus() const {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), p, static_cast<unsigned long>(precision));
  return m;
}

long vp_nonzero(const mpz_class& x, uint64_t p) {
  if (x == 0) throw std::domain_error("valuation of zero");
  mpz_class P(static_cast<unsigned long>(p)), t = x;
  return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), P.get_mpz_t()));
}

std::optional<long> vp(const mpq_class& x, uint64_t p) {
  if (x == 0) return std::nullopt;
  return vp_nonzero(x.get_num(), p) - vp_nonzero(x.get_den(), p);
}

long vp_poly(const IntPolynomial& f, uint64_t p) {
  long v = LONG_MAX;
  for (const auto& a : f.coeffs()) {
    if (a != 0) v = std::min(v, vp_nonzero(a, p));
  }
  return v;
}

FpFactorization factor_mod_p(const IntPolynomial& f, const PadicContext& ctx, uint64_t seed) {
  if (f.is_zero()) throw std::domain_error("factorization of the zero polynomial");
  mpz_class P(static_cast<unsigned long>(ctx.p));
  if (mpz_divisible_p(f.leading().get_mpz_t(), P.get_mpz_t())) {
    throw std::domain_error("p divides the leading coefficient; reverse or rescale the polynomial first");
  }
  return factor_fp(FpPoly::from_int(f, ctx.p), seed);
}

int SplittingType::degree_sum() const {
  int s = 0;
  for (auto [e, f] : parts) s += e * f;
  return s;
}

namespace {

// lc^(n-1) f(x / lc): monic with the same stem field.
IntPolynomial make_monic(const IntPolynomial& f) {
  IntPolynomial g = f.primitive_part();
  mpz_class lc = g.leading();
  if (lc == 1) return g;
  int n = g.degree();
  // coefficient of x^i becomes a_i lc^(n-1-i)
  std::vector<mpz_class> v(static_cast<size_t>(n) + 1);
  mpz_class pw = 1;
  v[static_cast<size_t>(n)] = 1;
  for (int i = n - 1; i >= 0; --i) {
    v[static_cast<size_t>(i)] = g.coeff(i) * pw;
    pw *= lc;
  }
  return IntPolynomial(std::move(v));
}

// f = sum a_k phi^k with deg a_k < deg phi; phi monic.
std::vector<IntPolynomial> phi_expansion(const IntPolynomial& f, const IntPolynomial& phi, int count) {
  std::vector<IntPolynomial> out;
  IntPolynomial cur = f;
  for (int k = 0; k < count; ++k) {
    // division with remainder by monic phi
    std::vector<mpz_class> r = cur.coeffs();
    int dp = phi.degree();
    int dq = cur.degree() - dp;
    std::vector<mpz_class> q(dq >= 0 ? static_cast<size_t>(dq) + 1 : 0, 0);
    for (int i = dq; i >= 0; --i) {
      mpz_class t = r[static_cast<size_t>(i + dp)];
      q[static_cast<size_t>(i)] = t;
      for (int j = 0; j <= dp; ++j) r[static_cast<size_t>(i + j)] -= t * phi.coeff(j);
    }
    if (dq >= 0) r.resize(static_cast<size_t>(dp));
    out.emplace_back(std::move(r));
    cur = IntPolynomial(std::move(q));
    if (cur.is_zero()) break;
  }
  while (static_cast<int>(out.size()) < count) out.emplace_back();
  return out;
}

struct HullPoint {
  long k, v;
};

std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
  std::vector<HullPoint> h;
  for (const auto& q : pts) {
    while (h.size() >= 2) {
      const auto& a = h[h.size() - 2];
      const auto& b = h.back();
      // remove b if it is on or above segment a -> q
      long cross = (b.v - a.v) * (q.k - a.k) - (q.v - a.v) * (b.k - a.k);
      if (cross >= 0) h.pop_back();
      else break;
    }
    h.push_back(q);
  }
  return h;
}

}  // namespace

SplittingType splitting_type(const IntPolynomial& f_in, const PadicContext& ctx, uint64_t seed) {
  if (f_in.is_zero() || f_in.degree() < 1) throw std::domain_error("splitting type needs degree >= 1");
  uint64_t p = ctx.p;
  mpz_class P(static_cast<unsigned long>(p));
  if (mpz_divisible_p(f_in.primitive_part().leading().get_mpz_t(), P.get_mpz_t())) {
    throw std::domain_error("p divides the leading coefficient; use the reversed polynomial");
  }
  IntPolynomial f = make_monic(f_in);
  int n = f.degree();
  SplittingType st;
  st.seed = seed;
  FpFactorization fac = factor_mod_p(f, ctx, seed);
  mpz_class disc = discriminant(f);
  if (disc == 0) throw std::domain_error("polynomial is not squarefree");

  auto finish = [&](SplittingType& s) {
    std::sort(s.parts.begin(), s.parts.end());
    if (s.degree_sum() != n) s.certified = false;
    return s;
  };

  if (!mpz_divisible_p(disc.get_mpz_t(), P.get_mpz_t())) {
    for (const auto& fc : fac.factors) st.parts.push_back({1, fc.factor.degree()});
    st.certified = true;
    st.method = "dedekind";
    return finish(st);
  }

  // Dedekind's index criterion.
  FpPoly gbar = FpPoly::constant(p, 1), hbar = FpPoly::constant(p, fac.leading);
  for (const auto& fc : fac.factors) {
    gbar = gbar * fc.factor;
    for (int i = 1; i < fc.multiplicity; ++i) hbar = hbar * fc.factor;
  }
  IntPolynomial G = gbar.lift(), H = hbar.lift();
  IntPolynomial F = (G * H - f).divexact(P);
  FpPoly Fbar = FpPoly::from_int(F, p);
  FpPoly common = gcd(gcd(Fbar, gbar), hbar);
  if (common.degree() == 0) {
    for (const auto& fc : fac.factors) st.parts.push_back({fc.multiplicity, fc.factor.degree()});
    st.certified = true;
    st.method = "kummer-dedekind";
    return finish(st);
  }

  // One level of Newton polygons, one per repeated factor.
  st.certified = true;
  st.method = "newton-polygon";
  for (const auto& fc : fac.factors) {
    int df = fc.factor.degree();
    if (fc.multiplicity == 1) {
      st.parts.push_back({1, df});
      continue;
    }
    IntPolynomial phi = fc.factor.lift();
    std::vector<IntPolynomial> a = phi_expansion(f, phi, fc.multiplicity + 1);
    std::vector<HullPoint> pts;
    for (int k = 0; k <= fc.multiplicity; ++k) {
      if (!a[static_cast<size_t>(k)].is_zero()) pts.push_back({k, vp_poly(a[static_cast<size_t>(k)], p)});
    }
    if (pts.empty() || pts.front().k != 0 || pts.back().v != 0) {
      st.certified = false;
      st.parts.push_back({fc.multiplicity, df});
      continue;
    }
    std::vector<HullPoint> hull = lower_hull(pts);
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
      long l = hull[s + 1].k - hull[s].k;
      long height = hull[s].v - hull[s + 1].v;
      long g = std::gcd(l, height);
      long e = l / g, t = g;
      if (t == 1) {
        st.parts.push_back({static_cast<int>(e), df});
        continue;
      }
      if (df == 1) {
        // residual polynomial over F_p
        std::vector<uint64_t> rc;
        for (long j = 0; j <= t; ++j) {
          long k = hull[s].k + j * e;
          long line = hull[s].v - j * (height / g);
          const IntPolynomial& ak = a[static_cast<size_t>(k)];
          if (ak.is_zero() || vp_poly(ak, p) != line) {
            rc.push_back(0);
            continue;
          }
          mpz_class c = ak.coeff(0);
          mpz_class pw;
          mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(line));
          c /= pw;
          mpz_class r;
          mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), P.get_mpz_t());
          rc.push_back(r.get_ui());
        }
        FpFactorization rf = factor_fp(FpPoly(p, rc), seed);
        bool sqfree = std::all_of(rf.factors.begin(), rf.factors.end(),
                                  [](const FpFactor& x) { return x.multiplicity == 1; });
        if (sqfree) {
          for (const auto& x : rf.factors) st.parts.push_back({static_cast<int>(e), x.factor.degree()});
          continue;
        }
      }
      st.certified = false;
      for (long j = 0; j < t; ++j) st.parts.push_back({static_cast<int>(e), df});
    }
  }
  if (!st.certified) st.method = "best-effort";
  return finish(st);
}

namespace {

mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class hensel_lift(const IntPolynomial& f, mpz_class x, uint64_t p, int k) {
  IntPolynomial df = f.derivative();
  mpz_class P(static_cast<unsigned long>(p));
  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), p, static_cast<unsigned long>(k));
  mpz_class m = P;
  while (m < target) {
    m = m * m;
    if (m > target) m = target;
    mpz_class d = mod_pos(df.eval(x), m), inv;
    if (mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t()) == 0) {
      throw std::logic_error("Hensel lift lost a unit derivative");
    }
    x = mod_pos(x - f.eval(x) * inv, m);
  }
  return mod_pos(x, target);
}

std::vector<uint64_t> roots_mod_p(const IntPolynomial& f, uint64_t p) {
  FpPoly fb = FpPoly::from_int(f, p);
  std::vector<uint64_t> out;
  if (fb.is_zero()) {
    for (uint64_t r = 0; r < p; ++r) out.push_back(r);
    return out;
  }
  if (p <= 4096) {
    for (uint64_t r = 0; r < p; ++r) {
      if (fb.eval(r) == 0) out.push_back(r);
    }
    return out;
  }
  FpFactorization fac = factor_fp(fb, kDefaultSeed);
  for (const auto& fc : fac.factors) {
    if (fc.factor.degree() == 1) out.push_back((p - fc.factor.coeff(0)) % p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void roots_rec(const IntPolynomial& f, uint64_t p, int k, int depth, std::vector<mpz_class>& out, bool& complete) {
  if (f.degree() < 1) return;
  mpz_class P(static_cast<unsigned long>(p));
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), p, static_cast<unsigned long>(k));
  IntPolynomial df = f.derivative();
  for (uint64_t r : roots_mod_p(f, p)) {
    mpz_class R(static_cast<unsigned long>(r));
    if (!mpz_divisible_p(mpz_class(df.eval(R)).get_mpz_t(), P.get_mpz_t())) {
      out.push_back(hensel_lift(f, R, p, k));
      continue;
    }
    if (depth > 256) {
      complete = false;
      continue;
    }
    IntPolynomial g = f.shifted(R).scaled_arg(P);
    long v = vp_poly(g, p);
    mpz_class pv;
    mpz_ui_pow_ui(pv.get_mpz_t(), p, static_cast<unsigned long>(v));
    g = g.divexact(pv);
    std::vector<mpz_class> sub;
    roots_rec(g, p, std::max(k - 1, 1), depth + 1, sub, complete);
    for (const auto& y : sub) out.push_back(mod_pos(R + P * y, mod));
  }
}

}  // namespace

QpRoots qp_integral_roots(const IntPolynomial& f, const PadicContext& ctx) {
  if (f.is_zero() || f.degree() < 1) throw std::domain_error("p-adic roots need degree >= 1");
  if (!is_squarefree(f)) throw std::domain_error("polynomial is not squarefree");
  IntPolynomial g = f.primitive_part();
  QpRoots res;
  std::vector<mpz_class> vals;
  roots_rec(g, ctx.p, ctx.precision, 0, vals, res.complete);
  std::sort(vals.begin(), vals.end());
  mpz_class P(static_cast<unsigned long>(ctx.p));
  for (auto& v : vals) res.roots.push_back({v, mod_pos(v, P).get_ui()});
  return res;
}

ClusterReport cluster_bound_report(const IntPolynomial& f, const PadicContext& ctx) {
  ClusterReport rep;
  rep.p = ctx.p;
  rep.q = ctx.p;
  QpRoots roots = qp_integral_roots(f, ctx);
  rep.complete = roots.complete;
  for (const auto& r : roots.roots) ++rep.residue_counts[r.residue];
  rep.integral_root_count = static_cast<long>(roots.roots.size());
  rep.nonintegral_count = f.degree() - rep.integral_root_count;
  rep.all_roots_integral = rep.nonintegral_count == 0;
  rep.v_disc = vp_nonzero(discriminant(f), ctx.p);
  for (const auto& [x, n] : rep.residue_counts) rep.cluster_lower_bound += n * (n - 1);
  mpq_class r(rep.integral_root_count);
  rep.cauchy_schwarz_floor = r * r / mpq_class(static_cast<unsigned long>(ctx.p)) - r;
  rep.slack = rep.v_disc - rep.cluster_lower_bound;
  return rep;
}

MetricReport frobenius_metric_check(const mpq_class& alpha, const PadicContext& ctx, int f) {
  if (alpha == 0) throw std::domain_error("alpha must be nonzero");
  if (f < 1) throw std::invalid_argument("residue degree must be >= 1");
  uint64_t p = ctx.p;
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(f));
  unsigned long qi = q.get_ui();
  mpq_class aq;
  mpz_pow_ui(aq.get_num_mpz_t(), alpha.get_num_mpz_t(), qi);
  mpz_pow_ui(aq.get_den_mpz_t(), alpha.get_den_mpz_t(), qi);
  aq.canonicalize();
  MetricReport rep;
  rep.lhs_order = vp(aq - alpha, p);
  long va = *vp(alpha, p);
  rep.rhs_order = 1 - static_cast<long>(qi + 1) * std::max(0L, -va);
  auto pow_p = [p](long e) {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? mpq_class(1, m) : mpq_class(m);
  };
  rep.lhs = rep.lhs_order ? pow_p(*rep.lhs_order) : mpq_class(0);
  rep.rhs = pow_p(rep.rhs_order);
  rep.holds = !rep.lhs_order || *rep.lhs_order >= rep.rhs_order;
  return rep;
}

Acceleration acceleration(uint64_t p, const mpq_class& rho, long lambda) {
  if (rho <= 0) throw std::invalid_argument("rho must be positive");
  Acceleration a;
  mpq_class base = mpq_class(static_cast<unsigned long>(p - 1)) * rho;
  mpq_class pk = 1;
  while (pk * base <= 1) {
    pk *= static_cast<unsigned long>(p);
    ++a.k;
  }
  a.s = pk * rho + mpq_class(std::max(0L, lambda - a.k));
  return a;
}

AccelerationCheck acceleration_brute_check(const mpz_class& g1, const mpz_class& g2, uint64_t p, long rho,
                                           long lambda) {
  if (rho <= 0) throw std::invalid_argument("rho must be positive");
  if (g1 != g2 && vp_nonzero(g1 - g2, p) < rho) {
    throw std::invalid_argument("precondition ord_p(g1 - g2) >= rho violated");
  }
  AccelerationCheck c;
  c.s = acceleration(p, mpq_class(rho), lambda).s;
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(lambda));
  mpz_class a, b;
  mpz_pow_ui(a.get_mpz_t(), g1.get_mpz_t(), e.get_ui());
  mpz_pow_ui(b.get_mpz_t(), g2.get_mpz_t(), e.get_ui());
  mpz_class d = a - b;
  if (d == 0) {
    c.holds = true;
    return c;
  }
  c.order = vp_nonzero(d, p);
  c.holds = mpq_class(*c.order) >= c.s;
  return c;
}

bool irreducibility_certificate(const IntPolynomial& f_in, int max_primes) {
  IntPolynomial f = f_in.primitive_part();
  int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  mpz_class disc = discriminant(f);
  if (disc == 0) return false;
  // allowed[d] true while a factor of degree d is still possible
  std::vector<bool> allowed(static_cast<size_t>(n) + 1, true);
  int used = 0;
  for (uint64_t p = 2; used < max_primes && p < 100000; ++p) {
    if (!is_prime(p)) continue;
    mpz_class P(static_cast<unsigned long>(p));
    if (mpz_divisible_p(disc.get_mpz_t(), P.get_mpz_t())) continue;
    if (mpz_divisible_p(f.leading().get_mpz_t(), P.get_mpz_t())) continue;
    ++used;
    FpFactorization fac = factor_fp(FpPoly::from_int(f, p), kDefaultSeed);
    std::vector<bool> sums(static_cast<size_t>(n) + 1, false);
    sums[0] = true;
    for (const auto& fc : fac.factors) {
      for (int s = n; s >= fc.factor.degree(); --s) {
        if (sums[static_cast<size_t>(s - fc.factor.degree())]) sums[static_cast<size_t>(s)] = true;
      }
    }
    bool any = false;
    for (int d = 1; d < n; ++d) {
      allowed[static_cast<size_t>(d)] = allowed[static_cast<size_t>(d)] && sums[static_cast<size_t>(d)];
      any = any || allowed[static_cast<size_t>(d)];
    }
    if (!any) return true;
  }
  return false;
}

}  // namespace hl
