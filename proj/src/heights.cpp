#include "heightlab/heights.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace hl {

Interval weil_height(const IntPolynomial& f, long precision_bits) {
  if (f.is_zero() || f.degree() < 1) throw std::domain_error("height needs a polynomial of degree >= 1");
  Interval m = mahler_measure(f, precision_bits + 8);
  return log(m) / Interval(static_cast<long>(f.degree()), m.prec());
}

RelativeElement::RelativeElement(IntPolynomial g, std::vector<RatPolynomial> coeffs)
    : base(std::move(g)), rel(std::move(coeffs)) {
  if (base.is_zero() || base.degree() < 1) throw std::invalid_argument("base polynomial must have degree >= 1");
  RatPolynomial G(base);
  for (auto& c : rel) c = rem(c, G);
  while (!rel.empty() && rel.back().is_zero()) rel.pop_back();
  if (rel.size() < 2) throw std::invalid_argument("relative polynomial must have degree >= 1");
  const RatPolynomial& lead = rel.back();
  if (lead.degree() != 0 || lead.c[0] != 1) throw std::invalid_argument("relative polynomial must be monic in x");
}

namespace {

// prod_sigma a(beta_sigma) for a in Q[y]; a may have any degree.
mpq_class norm_of_poly(const IntPolynomial& g, const RatPolynomial& a) {
  if (a.is_zero()) return 0;
  RatPolynomial G(g);
  mpq_class r = resultant(G, a);
  mpq_class lc(g.leading());
  for (int i = 0; i < a.degree(); ++i) r /= lc;
  return r;
}

RatPolynomial specialize_x(const RelativeElement& e, const mpq_class& x0) {
  RatPolynomial out;
  mpq_class pw = 1;
  for (const auto& c : e.rel) {
    out = out + pw * c;
    pw *= x0;
  }
  return out;
}

RatPolynomial specialize_y(const RelativeElement& e, const mpq_class& y0) {
  std::vector<mpq_class> v;
  for (const auto& c : e.rel) v.push_back(c.eval(y0));
  return RatPolynomial(std::move(v));
}

ComplexInterval eval_at(const RatPolynomial& a, const ComplexInterval& z, prec_t P) {
  ComplexInterval r{Interval(0L, P), Interval(0L, P)};
  for (int i = a.degree(); i >= 0; --i) {
    r = r * z + ComplexInterval{Interval(a.c[static_cast<size_t>(i)], P), Interval(0L, P)};
  }
  return r;
}

}  // namespace

mpq_class field_norm(const IntPolynomial& g, const RatPolynomial& a) {
  return norm_of_poly(g, rem(a, RatPolynomial(g)));
}

IntPolynomial norm_minpoly(const RelativeElement& e) {
  int n = e.rel_degree() * e.base_degree();
  std::vector<mpq_class> xs, ys;
  for (int i = 0; i <= n; ++i) {
    mpq_class x0(i);
    xs.push_back(x0);
    ys.push_back(norm_of_poly(e.base, specialize_x(e, x0)));
  }
  RatPolynomial N = interpolate(xs, ys);
  if (N.degree() != n) throw std::logic_error("norm polynomial has unexpected degree");
  return N.clear_denominators().primitive_part();
}

RatPolynomial relative_discriminant(const RelativeElement& e) {
  int m = e.rel_degree();
  int d = e.base_degree();
  if (m == 1) return RatPolynomial({mpq_class(1)});
  int deg_bound = (2 * m - 2) * std::max(d - 1, 0);
  std::vector<mpq_class> ys, vals;
  for (int i = 0; i <= deg_bound; ++i) {
    mpq_class y0(i);
    ys.push_back(y0);
    vals.push_back(discriminant(specialize_y(e, y0)));
  }
  return rem(interpolate(ys, vals), RatPolynomial(e.base));
}

std::vector<ComplexInterval> embedding_roots(const IntPolynomial& g, long target_bits) {
  RootOptions opt;
  opt.target_bits = target_bits;
  CertifiedRoots r = certified_roots(g, opt);
  std::vector<ComplexInterval> out;
  for (size_t i : canonical_order(r)) out.push_back(r.boxes[i]);
  return out;
}

namespace {

CertifiedRoots embedded_roots(const RelativeElement& e, size_t idx, long target_bits) {
  if (idx >= static_cast<size_t>(e.base_degree())) throw std::out_of_range("embedding index out of range");
  if (!is_squarefree(e.base)) throw std::domain_error("base polynomial is not squarefree");
  CoeffOracle oracle = [&e, idx](prec_t P) {
    ComplexInterval beta = embedding_roots(e.base, static_cast<long>(P) - 8)[idx];
    std::vector<ComplexInterval> v;
    for (const auto& c : e.rel) v.push_back(eval_at(c, beta, P));
    return v;
  };
  RootOptions opt;
  opt.target_bits = target_bits;
  opt.real_coefficients = false;
  return certified_roots(oracle, e.rel_degree(), opt);
}

bool rel_width_ok(const Interval& v, long bits) {
  if (v.width().is_zero()) return true;
  if (v.lo().sign() <= 0) return false;
  return v.width() / v.lo() <= ldexp(Real(1.0, 64), -bits);
}

}  // namespace

Interval relative_mahler(const RelativeElement& e, size_t embedding_index, long precision_bits) {
  long target = precision_bits + 16;
  for (int attempt = 0; attempt < 8; ++attempt) {
    CertifiedRoots r = embedded_roots(e, embedding_index, target);
    prec_t P = r.working_prec;
    Interval one(1L, P);
    Interval m = one;
    for (const auto& box : r.boxes) m = m * max(one, abs(box));
    if (rel_width_ok(m, precision_bits)) return m;
    target *= 2;
  }
  throw std::runtime_error("relative Mahler measure did not reach the requested precision");
}

RelativeHeightReport relative_height_decomposition(const RelativeElement& e, long precision_bits) {
  RelativeHeightReport rep;
  int d = e.base_degree(), m = e.rel_degree();
  rep.base_degree = d;
  rep.rel_degree = m;
  prec_t P = static_cast<prec_t>(precision_bits + 64);
  Interval sum(0L, P);
  Interval mI(static_cast<long>(m), P);
  for (int i = 0; i < d; ++i) {
    Interval M = relative_mahler(e, static_cast<size_t>(i), precision_bits + 8);
    Interval h = log(M) / mI;
    rep.rel_mahler.push_back(M);
    rep.rel_height.push_back(h);
    sum = sum + h;
  }
  rep.average = sum / Interval(static_cast<long>(d), P);
  rep.global_height = weil_height(norm_minpoly(e), precision_bits);
  rep.identity_consistent = rep.average.overlaps(rep.global_height);

  rep.norm_rel_disc = field_norm(e.base, relative_discriminant(e));
  if (rep.norm_rel_disc != 0) {
    Interval nd = abs(Interval(rep.norm_rel_disc, P));
    Interval lhs = log(nd) / Interval(2L * d * m * m, P);
    Interval rhs = lhs - log(mI) / mI;
    rep.localglobal_rhs = rhs;
    rep.localglobal_violated = rep.global_height.certainly_lt(rhs);
  }
  return rep;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "inconclusive";
  }
}

InequalityReport relative_mahler_inequality_check(const RelativeElement& e, size_t embedding_index, long max_bits) {
  RatPolynomial D = relative_discriminant(e);
  int m = e.rel_degree();
  InequalityReport rep;
  for (long bits = 64; bits <= max_bits; bits *= 2) {
    prec_t P = static_cast<prec_t>(bits + 64);
    ComplexInterval beta = embedding_roots(e.base, bits + 16)[embedding_index];
    Interval sd = abs(eval_at(D, beta, P));
    if (sd.hi().sign() == 0) throw std::domain_error("relative polynomial is not squarefree");
    Interval M = relative_mahler(e, embedding_index, bits);
    Interval mI(static_cast<long>(m), P);
    rep.rhs = mI * log(mI) + Interval(2L * m - 2, P) * log(M);
    rep.precision_bits = bits;
    if (sd.lo().sign() <= 0) {
      rep.lhs = Interval(Real(-1e300, P), log(Interval(sd.hi(), sd.hi())).hi());
      rep.verdict = Verdict::Inconclusive;
      continue;
    }
    rep.lhs = log(sd);
    if (rep.lhs.certainly_le(rep.rhs)) {
      rep.verdict = Verdict::Holds;
      return rep;
    }
    if (rep.rhs.certainly_lt(rep.lhs)) {
      rep.verdict = Verdict::Fails;
      return rep;
    }
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

std::string factor_rational(const mpq_class& q) {
  if (q == 0) return "0";
  auto factor = [](mpz_class n, std::map<mpz_class, int>& out) {
    n = abs(n);
    for (mpz_class p = 2; p * p <= n && p < 100000; ++p) {
      while (n % p == 0) {
        ++out[p];
        n /= p;
      }
    }
    if (n > 1) ++out[n];
  };
  std::map<mpz_class, int> num, den;
  factor(q.get_num(), num);
  factor(q.get_den(), den);
  auto render = [](const std::map<mpz_class, int>& m) {
    std::string s;
    for (const auto& [p, e] : m) {
      if (!s.empty()) s += " * ";
      s += p.get_str();
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? std::string("1") : s;
  };
  std::string s = q < 0 ? "-" : "";
  s += render(num);
  if (!den.empty()) s += " / " + render(den);
  return s;
}

DiscIdentityReport disc_identity_probe(const RelativeElement& e) {
  DiscIdentityReport rep;
  IntPolynomial f = norm_minpoly(e);
  rep.disc_f = discriminant(f);
  rep.norm_rel_disc = field_norm(e.base, relative_discriminant(e));
  rep.disc_base = e.base_degree() >= 1 ? discriminant(e.base) : mpz_class(1);
  if (e.base_degree() == 1) rep.disc_base = 1;
  if (rep.norm_rel_disc != 0) {
    mpq_class db(rep.disc_base);
    mpq_class sq = db * db * rep.norm_rel_disc;
    mpq_class pm = rep.norm_rel_disc;
    for (int i = 0; i < e.rel_degree(); ++i) pm *= db;
    rep.ratio_square = mpq_class(rep.disc_f) / sq;
    rep.ratio_power_m = mpq_class(rep.disc_f) / pm;
    rep.ratio_square_factored = factor_rational(rep.ratio_square);
    rep.ratio_power_m_factored = factor_rational(rep.ratio_power_m);
  }
  return rep;
}

}  // namespace hl
