#include "heightlab/fp.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace hl {

uint64_t fp_pow(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

uint64_t fp_inv(uint64_t a, uint64_t p) {
  if (a % p == 0) throw std::domain_error("inverse of zero in F_p");
  return fp_pow(a, p - 2, p);
}

bool is_prime(uint64_t n) {
  mpz_class z(static_cast<unsigned long>(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

FpPoly::FpPoly(uint64_t p, std::vector<uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  if (p < 2 || p >= (1ULL << 31)) throw std::invalid_argument("F_p modulus out of range");
  for (auto& x : c_) x %= p_;
  trim();
}

FpPoly FpPoly::from_int(const IntPolynomial& f, uint64_t p) {
  std::vector<uint64_t> v;
  mpz_class P(static_cast<unsigned long>(p));
  for (const auto& a : f.coeffs()) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), P.get_mpz_t());
    v.push_back(r.get_ui());
  }
  return FpPoly(p, std::move(v));
}

FpPoly FpPoly::x(uint64_t p) { return FpPoly(p, {0, 1}); }
FpPoly FpPoly::constant(uint64_t p, uint64_t c) { return FpPoly(p, {c}); }

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  uint64_t inv = fp_inv(leading(), p_);
  std::vector<uint64_t> v = c_;
  for (auto& x : v) x = x * inv % p_;
  return FpPoly(p_, std::move(v));
}

FpPoly FpPoly::derivative() const {
  std::vector<uint64_t> v;
  for (int i = 1; i <= degree(); ++i) v.push_back(c_[static_cast<size_t>(i)] * (static_cast<uint64_t>(i) % p_) % p_);
  return FpPoly(p_, std::move(v));
}

IntPolynomial FpPoly::lift() const {
  std::vector<mpz_class> v;
  for (auto x : c_) v.emplace_back(static_cast<unsigned long>(x));
  return IntPolynomial(std::move(v));
}

uint64_t FpPoly::eval(uint64_t x) const {
  uint64_t r = 0;
  for (int i = degree(); i >= 0; --i) r = (r * x + c_[static_cast<size_t>(i)]) % p_;
  return r;
}

std::string FpPoly::to_string() const { return lift().to_string(); }

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  std::vector<uint64_t> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) v[i] = (v[i] + b.c_[i]) % a.p_;
  return FpPoly(a.p_, std::move(v));
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) {
  std::vector<uint64_t> v(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) v[i] = (v[i] + a.p_ - b.c_[i]) % a.p_;
  return FpPoly(a.p_, std::move(v));
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly(a.p_, {});
  std::vector<uint64_t> v(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (!a.c_[i]) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] = (v[i + j] + a.c_[i] * b.c_[j]) % a.p_;
  }
  return FpPoly(a.p_, std::move(v));
}

bool operator<(const FpPoly& a, const FpPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  }
  return false;
}

void divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial over F_p");
  uint64_t p = a.p();
  std::vector<uint64_t> rv = a.coeffs();
  int db = b.degree();
  int dq = a.degree() - db;
  std::vector<uint64_t> qv(dq >= 0 ? static_cast<size_t>(dq) + 1 : 0, 0);
  uint64_t inv = fp_inv(b.leading(), p);
  for (int k = dq; k >= 0; --k) {
    uint64_t t = rv[static_cast<size_t>(k + db)] * inv % p;
    qv[static_cast<size_t>(k)] = t;
    if (!t) continue;
    for (int i = 0; i <= db; ++i) {
      uint64_t& x = rv[static_cast<size_t>(k + i)];
      x = (x + p - t * b.coeff(i) % p) % p;
    }
  }
  if (dq >= 0) rv.resize(static_cast<size_t>(db));
  q = FpPoly(p, std::move(qv));
  r = FpPoly(p, std::move(rv));
}

FpPoly operator%(const FpPoly& a, const FpPoly& b) {
  FpPoly q, r;
  divmod(a, b, q, r);
  return r;
}

FpPoly operator/(const FpPoly& a, const FpPoly& b) {
  FpPoly q, r;
  divmod(a, b, q, r);
  return q;
}

FpPoly gcd(const FpPoly& a, const FpPoly& b) {
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod) {
  FpPoly r = FpPoly::constant(mod.p(), 1) % mod;
  FpPoly b = base % mod;
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = (r * r) % mod;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * b) % mod;
  }
  return r;
}

namespace {

// p-th root of a polynomial whose derivative vanishes.
FpPoly pth_root(const FpPoly& f) {
  std::vector<uint64_t> v;
  uint64_t p = f.p();
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) v.push_back(f.coeff(i));
  return FpPoly(p, std::move(v));
}

void squarefree_fp(const FpPoly& A, std::vector<FpFactor>& out) {
  uint64_t p = A.p();
  int e = 1;
  FpPoly T0 = A.monic();
  while (T0.degree() > 0) {
    FpPoly T = gcd(T0, T0.derivative());
    FpPoly V = T0 / T;
    int k = 0;
    while (V.degree() > 0) {
      ++k;
      if (static_cast<uint64_t>(k) % p == 0) {
        T = T / V;
        ++k;
      }
      FpPoly W = gcd(T, V);
      FpPoly Ak = V / W;
      if (Ak.degree() > 0) out.push_back({Ak.monic(), e * k});
      V = W;
      T = T / V;
    }
    T0 = pth_root(T);
    e *= static_cast<int>(p);
  }
}

void equal_degree(const FpPoly& A, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (A.degree() == d) {
    out.push_back(A.monic());
    return;
  }
  uint64_t p = A.p();
  mpz_class e = 0;
  if (p != 2) {
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(d));
    e = (q - 1) / 2;
  }
  std::uniform_int_distribution<uint64_t> dist(0, p - 1);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<uint64_t> t(static_cast<size_t>(A.degree()));
    for (auto& x : t) x = dist(rng);
    FpPoly T(p, t);
    if (T.degree() < 1) continue;
    FpPoly B;
    if (p != 2) {
      B = gcd(powmod(T, e, A) - FpPoly::constant(p, 1), A);
    } else {
      FpPoly W = T % A, S = W;
      for (int i = 1; i < d; ++i) {
        W = (W * W) % A;
        S = S + W;
      }
      B = gcd(S, A);
    }
    if (B.degree() > 0 && B.degree() < A.degree()) {
      equal_degree(B, d, rng, out);
      equal_degree(A / B, d, rng, out);
      return;
    }
  }
  throw std::runtime_error("equal-degree splitting failed to find a factor");
}

}  // namespace

FpFactorization factor_fp(const FpPoly& f, uint64_t seed) {
  if (f.is_zero()) throw std::domain_error("factorization of the zero polynomial");
  FpFactorization res;
  res.leading = f.leading();
  res.seed = seed;
  std::mt19937_64 rng(seed);
  uint64_t p = f.p();
  std::vector<FpFactor> sqf;
  squarefree_fp(f, sqf);
  for (const auto& [g, mult] : sqf) {
    // distinct-degree
    FpPoly V = g;
    FpPoly X = FpPoly::x(p);
    FpPoly W = X;
    mpz_class P(static_cast<unsigned long>(p));
    int d = 0;
    while (V.degree() > 0) {
      ++d;
      if (2 * d > V.degree()) {
        std::vector<FpPoly> parts;
        equal_degree(V, V.degree(), rng, parts);
        for (auto& q : parts) res.factors.push_back({q, mult});
        break;
      }
      W = powmod(W, P, V);
      FpPoly Ad = gcd(W - X, V);
      if (Ad.degree() > 0) {
        std::vector<FpPoly> parts;
        equal_degree(Ad, d, rng, parts);
        for (auto& q : parts) res.factors.push_back({q, mult});
        V = V / Ad;
        W = W % V;
      }
    }
  }
  std::sort(res.factors.begin(), res.factors.end(), [](const FpFactor& a, const FpFactor& b) {
    if (a.factor == b.factor) return a.multiplicity < b.multiplicity;
    return a.factor < b.factor;
  });
  return res;
}

}  // namespace hl
