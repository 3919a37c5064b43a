#include "heightlab/intpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hl {

IntPolynomial::IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  for (long v : coeffs) c_.emplace_back(v);
  trim();
}

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::monomial(const mpz_class& c, int degree) {
  std::vector<mpz_class> v(static_cast<size_t>(degree) + 1, 0);
  v.back() = c;
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::parse(const std::string& text) {
  std::string body = text.substr(0, text.find('#'));
  std::istringstream in(body);
  std::vector<mpz_class> v;
  std::string tok;
  while (in >> tok) {
    mpz_class z;
    if (tok.front() == '+') tok.erase(0, 1);
    if (tok.empty() || z.set_str(tok, 10) != 0) {
      throw std::invalid_argument("not an integer coefficient: '" + tok + "'");
    }
    v.push_back(z);
  }
  return IntPolynomial(std::move(v));
}

mpz_class IntPolynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return c_[static_cast<size_t>(i)];
}

const mpz_class& IntPolynomial::leading() const {
  if (c_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
  return c_.back();
}

mpz_class IntPolynomial::content() const {
  mpz_class g = 0;
  for (const auto& a : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
  if (is_zero()) return {};
  mpz_class g = content();
  if (leading() < 0) g = -g;
  return divexact(g);
}

IntPolynomial IntPolynomial::derivative() const {
  std::vector<mpz_class> v;
  for (int i = 1; i <= degree(); ++i) v.push_back(c_[i] * i);
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::reversed() const {
  std::vector<mpz_class> v(c_.rbegin(), c_.rend());
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::shifted(const mpz_class& c) const {
  // Horner in the ring Z[x]: f(x + c) = (...(a_n (x+c) + a_{n-1})(x+c) + ...).
  std::vector<mpz_class> v = c_;
  int n = degree();
  for (int i = 0; i < n; ++i) {
    for (int j = n - 1; j >= i; --j) v[j] += c * v[j + 1];
  }
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::scaled_arg(const mpz_class& c) const {
  std::vector<mpz_class> v = c_;
  mpz_class pw = 1;
  for (auto& a : v) {
    a *= pw;
    pw *= c;
  }
  return IntPolynomial(std::move(v));
}

mpz_class IntPolynomial::eval(const mpz_class& x) const {
  mpz_class r = 0;
  for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
  return r;
}

mpq_class IntPolynomial::eval(const mpq_class& x) const {
  mpq_class r = 0;
  for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
  return r;
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ' ';
    s += c_[i].get_str();
  }
  return s;
}

std::string IntPolynomial::pretty() const {
  if (is_zero()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& a = c_[i];
    if (a == 0) continue;
    mpz_class m = abs(a);
    if (s.empty()) {
      if (a < 0) s += "-";
    } else {
      s += a < 0 ? " - " : " + ";
    }
    if (m != 1 || i == 0) s += m.get_str();
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

IntPolynomial IntPolynomial::operator-() const {
  std::vector<mpz_class> v = c_;
  for (auto& a : v) a = -a;
  return IntPolynomial(std::move(v));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<mpz_class> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
  return IntPolynomial(std::move(v));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> v(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return IntPolynomial(std::move(v));
}

IntPolynomial operator*(const mpz_class& s, const IntPolynomial& a) {
  std::vector<mpz_class> v = a.c_;
  for (auto& x : v) x *= s;
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::divexact(const mpz_class& s) const {
  std::vector<mpz_class> v = c_;
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
  return IntPolynomial(std::move(v));
}

IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero polynomial");
  std::vector<mpz_class> r = a.coeffs();
  int db = b.degree();
  const mpz_class& lb = b.leading();
  int e = std::max(a.degree() - db + 1, 0);
  while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
    int dr = static_cast<int>(r.size()) - 1;
    mpz_class lr = r.back();
    for (auto& x : r) x *= lb;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= lr * b.coeffs()[i];
    --e;
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  IntPolynomial out(std::move(r));
  if (e > 0) {
    mpz_class m;
    mpz_pow_ui(m.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
    out = m * out;
  }
  return out;
}

bool exact_quotient(const IntPolynomial& a, const IntPolynomial& b, IntPolynomial& q) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) {
    q = IntPolynomial();
    return true;
  }
  int da = a.degree(), db = b.degree();
  if (da < db) return false;
  std::vector<mpz_class> r = a.coeffs();
  std::vector<mpz_class> qv(static_cast<size_t>(da - db) + 1, 0);
  for (int k = da - db; k >= 0; --k) {
    mpz_class& top = r[static_cast<size_t>(k + db)];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.leading().get_mpz_t())) return false;
    mpz_class t = top / b.leading();
    qv[static_cast<size_t>(k)] = t;
    for (int i = 0; i <= db; ++i) r[static_cast<size_t>(k + i)] -= t * b.coeffs()[i];
  }
  for (const auto& x : r) {
    if (x != 0) return false;
  }
  q = IntPolynomial(std::move(qv));
  return true;
}

IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial x = a.primitive_part(), y = b.primitive_part();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPolynomial r = pseudo_remainder(x, y).primitive_part();
    x = std::move(y);
    y = std::move(r);
  }
  return x.primitive_part();
}

namespace {

mpz_class pow(const mpz_class& b, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

}  // namespace

// Subresultant PRS (Collins), content split off first.
mpz_class resultant(const IntPolynomial& f, const IntPolynomial& g) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of a zero polynomial");
  if (f.degree() == 0) return pow(f.leading(), g.degree());
  if (g.degree() == 0) return pow(g.leading(), f.degree());

  mpz_class ca = f.content(), cb = g.content();
  IntPolynomial A = f.divexact(ca), B = g.divexact(cb);
  mpz_class t = pow(ca, g.degree()) * pow(cb, f.degree());
  int s = 1;
  if (A.degree() < B.degree()) {
    std::swap(A, B);
    if ((A.degree() & 1) && (B.degree() & 1)) s = -1;
  }
  mpz_class gg = 1, h = 1;
  while (true) {
    int delta = A.degree() - B.degree();
    if ((A.degree() & 1) && (B.degree() & 1)) s = -s;
    IntPolynomial R = pseudo_remainder(A, B);
    A = B;
    if (R.is_zero()) return 0;
    B = R.divexact(gg * pow(h, delta));
    gg = A.leading();
    if (delta == 0) {
      // h unchanged: h^(1-0) g^0 = h
    } else {
      mpz_class num = pow(gg, delta);
      mpz_class den = pow(h, delta - 1);
      mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    if (B.degree() == 0) {
      int da = A.degree();
      mpz_class num = pow(B.leading(), da);
      mpz_class den = pow(h, da - 1);
      mpz_class hh;
      mpz_divexact(hh.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      return s * t * hh;
    }
  }
}

mpz_class discriminant(const IntPolynomial& f) {
  if (f.is_zero() || f.degree() < 1) throw std::domain_error("constant polynomial has no discriminant");
  int n = f.degree();
  if (n == 1) return 1;
  mpz_class r = resultant(f, f.derivative());
  mpz_class d;
  mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.leading().get_mpz_t());
  if ((static_cast<long>(n) * (n - 1) / 2) % 2 == 1) d = -d;
  return d;
}

bool is_squarefree(const IntPolynomial& f) {
  if (f.is_zero() || f.degree() < 1) throw std::domain_error("squarefree test needs degree >= 1");
  return gcd(f, f.derivative()).degree() == 0;
}

// Yun's algorithm. Every quotient is exact in Z[x] by Gauss's lemma because
// all divisors are primitive.
std::vector<SquarefreeFactor> squarefree_decomposition(const IntPolynomial& f, mpz_class* unit) {
  if (f.is_zero()) throw std::domain_error("squarefree decomposition of zero");
  std::vector<SquarefreeFactor> out;
  if (f.degree() == 0) {
    if (unit) *unit = f.leading();
    return out;
  }
  IntPolynomial F = f.primitive_part();
  IntPolynomial Fp = F.derivative();
  IntPolynomial a0 = gcd(F, Fp);
  IntPolynomial b, c;
  if (!exact_quotient(F, a0, b) || !exact_quotient(Fp, a0, c)) {
    throw std::logic_error("squarefree decomposition: inexact quotient");
  }
  IntPolynomial d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    IntPolynomial a = gcd(b, d);
    if (a.degree() > 0) out.push_back({a, i});
    IntPolynomial nb, nc;
    if (!exact_quotient(b, a, nb) || !exact_quotient(d, a, nc)) {
      throw std::logic_error("squarefree decomposition: inexact quotient");
    }
    b = std::move(nb);
    c = std::move(nc);
    d = c - b.derivative();
    ++i;
  }
  if (unit) {
    IntPolynomial prod{1};
    for (const auto& sf : out) {
      for (int k = 0; k < sf.multiplicity; ++k) prod = prod * sf.factor;
    }
    *unit = f.leading() / prod.leading();
  }
  return out;
}

IntPolynomial squarefree_part(const IntPolynomial& f) {
  IntPolynomial r{1};
  for (const auto& sf : squarefree_decomposition(f)) r = r * sf.factor;
  return r;
}

// ------------------------------------------------------------ RatPolynomial

RatPolynomial::RatPolynomial(std::vector<mpq_class> coeffs) : c(std::move(coeffs)) { trim(); }

RatPolynomial::RatPolynomial(const IntPolynomial& f) {
  for (const auto& a : f.coeffs()) c.emplace_back(a);
}

void RatPolynomial::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

mpq_class RatPolynomial::eval(const mpq_class& x) const {
  mpq_class r = 0;
  for (int i = degree(); i >= 0; --i) r = r * x + c[static_cast<size_t>(i)];
  return r;
}

IntPolynomial RatPolynomial::clear_denominators(mpz_class* scale) const {
  mpz_class l = 1;
  for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> v;
  for (const auto& q : c) v.push_back(q.get_num() * (l / q.get_den()));
  if (scale) *scale = l;
  return IntPolynomial(std::move(v));
}

RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b) {
  std::vector<mpq_class> v(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) v[i] += b.c[i];
  return RatPolynomial(std::move(v));
}

RatPolynomial operator-(const RatPolynomial& a, const RatPolynomial& b) {
  return a + mpq_class(-1) * b;
}

RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> v(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
  }
  return RatPolynomial(std::move(v));
}

RatPolynomial operator*(const mpq_class& s, const RatPolynomial& a) {
  std::vector<mpq_class> v = a.c;
  for (auto& x : v) x *= s;
  return RatPolynomial(std::move(v));
}

RatPolynomial rem(const RatPolynomial& a, const RatPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("remainder by zero polynomial");
  std::vector<mpq_class> r = a.c;
  int db = b.degree();
  while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
    int dr = static_cast<int>(r.size()) - 1;
    mpq_class t = r.back() / b.c.back();
    for (int i = 0; i <= db; ++i) r[static_cast<size_t>(dr - db + i)] -= t * b.c[static_cast<size_t>(i)];
    r.pop_back();
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  return RatPolynomial(std::move(r));
}

RatPolynomial interpolate(const std::vector<mpq_class>& xs, const std::vector<mpq_class>& ys) {
  size_t n = xs.size();
  std::vector<mpq_class> dd = ys;
  for (size_t j = 1; j < n; ++j) {
    for (size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  }
  RatPolynomial p({dd[n - 1]});
  for (size_t k = n - 1; k-- > 0;) {
    p = p * RatPolynomial({-xs[k], mpq_class(1)}) + RatPolynomial({dd[k]});
  }
  p.trim();
  return p;
}

mpq_class resultant(const RatPolynomial& f, const RatPolynomial& g) {
  mpz_class sf, sg;
  IntPolynomial F = f.clear_denominators(&sf), G = g.clear_denominators(&sg);
  mpz_class den = pow(sf, g.degree()) * pow(sg, f.degree());
  mpq_class r(resultant(F, G), den);
  r.canonicalize();
  return r;
}

mpq_class discriminant(const RatPolynomial& f) {
  mpz_class s;
  IntPolynomial F = f.clear_denominators(&s);
  mpq_class r(discriminant(F), pow(s, 2L * f.degree() - 2));
  r.canonicalize();
  return r;
}

}  // namespace hl
