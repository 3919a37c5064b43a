#include "heightlab/towers.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <stdexcept>

#include "heightlab/fp.hpp"

namespace hl {

NqCounts nq_counts(const IntPolynomial& f, uint64_t p, int max_power) {
  if (max_power < 1) throw std::invalid_argument("max_power must be at least 1");
  NqCounts out;
  out.p = p;
  out.type = splitting_type(f, PadicContext(p));
  out.certified = out.type.certified;
  for (int m = 1; m <= max_power; ++m) out.by_degree[m] = 0;
  for (const auto& [e, fdeg] : out.type.parts) {
    if (fdeg <= max_power) ++out.by_degree[fdeg];
  }
  return out;
}

mpz_class prime_power(uint64_t p, int m) {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(m));
  return q;
}

std::optional<std::pair<uint64_t, int>> as_prime_power(uint64_t q) {
  if (q < 2) return std::nullopt;
  uint64_t p = q;
  for (uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  int m = 0;
  while (q % p == 0) {
    q /= p;
    ++m;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(p, m);
}

bool witness_holds(const IntPolynomial& f, const RatPolynomial& g, const IntPolynomial& modulus) {
  RatPolynomial F(modulus);
  RatPolynomial acc;
  for (int k = f.degree(); k >= 0; --k) {
    acc = rem(acc * g + RatPolynomial({mpq_class(f.coeff(k))}), F);
  }
  acc.trim();
  return acc.is_zero();
}

void TowerSpec::validate() const {
  if (levels.empty()) throw std::invalid_argument("tower has no levels");
  for (size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].is_zero() || levels[i].degree() < 1) {
      throw std::invalid_argument("tower level " + std::to_string(i) + " has degree < 1");
    }
    if (i > 0 && levels[i].degree() % levels[i - 1].degree() != 0) {
      throw std::invalid_argument("degree of level " + std::to_string(i - 1) + " does not divide degree of level " +
                                  std::to_string(i));
    }
  }
  if (witnesses.size() > levels.size() - 1) {
    throw std::invalid_argument("more witnesses than level inclusions");
  }
  for (size_t i = 0; i < witnesses.size(); ++i) {
    if (witnesses[i] && !witness_holds(levels[i], *witnesses[i], levels[i + 1])) {
      throw std::invalid_argument("embedding witness " + std::to_string(i) + " does not satisfy f_i(g_i) = 0 mod f_{i+1}");
    }
  }
}

namespace {

std::vector<NqCounts> counts_per_level(const TowerSpec& t, uint64_t p, int max_power) {
  std::vector<std::future<NqCounts>> jobs;
  for (const auto& f : t.levels) {
    jobs.push_back(std::async(std::launch::async, [&f, p, max_power] { return nq_counts(f, p, max_power); }));
  }
  std::vector<NqCounts> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::vector<CutoffCheck> cutoff_checks(const TowerSpec& t, const std::vector<NqCounts>& counts, uint64_t p,
                                       int max_power) {
  std::vector<CutoffCheck> out;
  for (int k = 1; k <= max_power; ++k) {
    CutoffCheck c;
    c.p = p;
    c.cutoff = prime_power(p, k);
    for (size_t i = 0; i < counts.size(); ++i) {
      mpq_class w = 0;
      for (int j = 1; j <= k; ++j) w += mpq_class(j * counts[i].by_degree.at(j));
      w /= t.levels[i].degree();
      c.certified = c.certified && counts[i].certified;
      if (!c.weights.empty() && w > c.weights.back()) c.nonincreasing = false;
      c.weights.push_back(w);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

TowerStats psi_estimate(const TowerSpec& t, uint64_t p, int max_power) {
  t.validate();
  TowerStats st;
  st.p = p;
  st.max_power = max_power;
  std::vector<NqCounts> counts = counts_per_level(t, p, max_power);
  st.diagnostic = cutoff_checks(t, counts, p, max_power);
  for (size_t i = 0; i < counts.size(); ++i) {
    LevelStats ls;
    ls.degree = t.levels[i].degree();
    for (const auto& [m, n] : counts[i].by_degree) {
      mpq_class r(n, ls.degree);
      r.canonicalize();
      ls.ratio[m] = r;
    }
    if (!counts[i].certified) st.uncertified_levels.push_back(static_cast<int>(i));
    ls.counts = std::move(counts[i]);
    st.levels.push_back(std::move(ls));
  }
  bool ok = std::all_of(st.diagnostic.begin(), st.diagnostic.end(), [](const CutoffCheck& c) { return c.nonincreasing; });
  st.trend = ok ? "nonincreasing-consistent" : "violated";
  return st;
}

std::vector<CutoffCheck> monotonicity_diagnostic(const TowerSpec& t, uint64_t max_cutoff) {
  t.validate();
  std::vector<CutoffCheck> out;
  for (uint64_t p = 2; p <= max_cutoff; ++p) {
    if (!is_prime(p)) continue;
    int K = 0;
    for (uint64_t q = p; q <= max_cutoff; q *= p) ++K;
    auto counts = counts_per_level(t, p, K);
    auto checks = cutoff_checks(t, counts, p, K);
    out.insert(out.end(), checks.begin(), checks.end());
  }
  return out;
}

std::string to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::BZ: return "bz";
    case BoundVariant::ConjecturePlus1: return "conjecture";
    case BoundVariant::ThmAIntegers: return "thmA";
    case BoundVariant::ThmBMetric: return "thmB";
    case BoundVariant::AlmostSplit: return "almost-split";
    case BoundVariant::AlmostUnramified: return "almost-unramified";
    case BoundVariant::Pottmeyer: return "pottmeyer";
    case BoundVariant::EllipticThm: return "elliptic";
    case BoundVariant::EllipticCorollary: return "elliptic-good";
  }
  return "unknown";
}

BoundVariant parse_variant(const std::string& s) {
  for (auto v : {BoundVariant::BZ, BoundVariant::ConjecturePlus1, BoundVariant::ThmAIntegers, BoundVariant::ThmBMetric,
                 BoundVariant::AlmostSplit, BoundVariant::AlmostUnramified, BoundVariant::Pottmeyer,
                 BoundVariant::EllipticThm, BoundVariant::EllipticCorollary}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown bound variant '" + s + "'");
}

mpq_class parse_decimal(const std::string& raw) {
  std::string s = raw;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw std::invalid_argument("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpq_class q(s, 10);
    q.canonicalize();
    return q;
  }
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(s.substr(epos + 1));
    s = s.substr(0, epos);
  }
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  auto dot = s.find('.');
  std::string digits = s;
  if (dot != std::string::npos) {
    digits = s.substr(0, dot) + s.substr(dot + 1);
    exp10 -= static_cast<long>(s.size() - dot - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("malformed number '" + raw + "'");
  }
  mpq_class q{mpz_class(digits, 10)};
  mpz_class ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) q /= ten;
  else q *= ten;
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

std::map<uint64_t, mpq_class> parse_psi_map(const std::string& s) {
  std::map<uint64_t, mpq_class> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected q:value, got '" + item + "'");
    out[std::stoull(item.substr(0, colon))] = parse_decimal(item.substr(colon + 1));
  }
  return out;
}

namespace {

void check_unit(const mpq_class& x, const std::string& what) {
  if (x < 0 || x > 1) throw std::invalid_argument(what + " must lie in [0, 1]");
}

std::pair<uint64_t, int> require_prime_power(uint64_t q) {
  auto pp = as_prime_power(q);
  if (!pp) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
  return *pp;
}

void require_prime(uint64_t p) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

Interval log_q(uint64_t p, int m, prec_t P) {
  return Interval(static_cast<long>(m), P) * log(Interval(mpz_class(static_cast<unsigned long>(p)), P));
}

Interval iv(uint64_t n, prec_t P) { return Interval(mpz_class(static_cast<unsigned long>(n)), P); }

mpq_class s_value(const Acceleration& a, long lambda) {
  return a.s + mpq_class(std::max(0L, lambda - a.k));
}

}  // namespace

BoundValue eval_bound(const BoundSpec& b, prec_t P) {
  BoundValue out;
  out.value = Interval(0L, P);
  Interval half = Interval(mpq_class(1, 2), P);
  const std::string name = to_string(b.variant);
  for (const auto& [q, v] : b.psi) check_unit(v, "psi_" + std::to_string(q));

  switch (b.variant) {
    case BoundVariant::BZ: {
      if (b.local.empty()) throw std::invalid_argument(name + " needs local data (p, e_p, f_p)");
      Interval lower(0L, P), upper(0L, P);
      for (const auto& [p, e, f] : b.local) {
        require_prime(p);
        if (e < 1 || f < 1) throw std::invalid_argument(name + ": e_p and f_p must be positive");
        if (p > b.cutoff) {
          out.truncated = true;
          continue;
        }
        Interval lp = log_q(p, 1, P);
        Interval qf = Interval(prime_power(p, static_cast<int>(f)), P);
        lower += lp / (Interval(e, P) * (qf + Interval(1L, P)));
        upper += lp / (iv(p, P) - Interval(1L, P));
        ++out.terms;
      }
      out.value = half * lower;
      out.upper = upper;
      out.note = "upper is the totally p-adic sandwich bound";
      break;
    }
    case BoundVariant::ConjecturePlus1:
    case BoundVariant::ThmAIntegers: {
      if (b.psi.empty()) throw std::invalid_argument(name + " needs a psi map q:psi_q");
      Interval sum(0L, P);
      for (const auto& [q, v] : b.psi) {
        auto [p, m] = require_prime_power(q);
        if (q > b.cutoff) {
          out.truncated = true;
          continue;
        }
        Interval den = b.variant == BoundVariant::ThmAIntegers ? iv(q, P) : iv(q, P) + Interval(1L, P);
        sum += Interval(v, P) * log_q(p, m, P) / den;
        ++out.terms;
      }
      out.value = half * sum;
      if (b.variant == BoundVariant::ThmAIntegers) out.note = "holds for algebraic integers";
      break;
    }
    case BoundVariant::ThmBMetric: {
      if (b.psi.empty()) throw std::invalid_argument(name + " needs a psi map with some psi_q > 0");
      bool found = false;
      for (const auto& [q, v] : b.psi) {
        auto [p, m] = require_prime_power(q);
        if (v <= 0) continue;
        if (q > b.cutoff) {
          out.truncated = true;
          continue;
        }
        mpq_class rho = v / 2;
        rho.canonicalize();
        Acceleration a = acceleration(p, rho, 0);
        mpq_class target = mpq_class(2) / v;
        long lambda = 0;
        while (s_value(a, lambda) <= target) ++lambda;
        mpq_class s = s_value(a, lambda);
        Interval lq = log_q(p, m, P);
        Interval den = Interval(prime_power(p, static_cast<int>(lambda)), P) * (iv(q, P) + Interval(1L, P));
        Interval val = lq / den;
        Interval refined = (Interval(s * v, P) * lq - Interval::log2(P)) / den;
        ++out.terms;
        if (!found || out.value.mid() < val.mid()) {
          out.value = val;
          out.q = q;
          out.lambda = lambda;
          out.rho = rho;
          out.s = s;
          out.refined = refined;
          found = true;
        }
      }
      if (!found) throw std::invalid_argument(name + " needs some psi_q > 0 with q <= cutoff");
      out.note = "lambda is the least integer with s(lambda) > 2/psi_q, rho = psi_q/2";
      break;
    }
    case BoundVariant::AlmostSplit: {
      if (b.primes.empty()) throw std::invalid_argument(name + " needs the set S of almost totally split primes");
      Interval sum(0L, P);
      for (uint64_t p : b.primes) {
        require_prime(p);
        if (p > b.cutoff) {
          out.truncated = true;
          continue;
        }
        sum += log_q(p, 1, P) / (iv(p, P) + Interval(1L, P));
        ++out.terms;
      }
      out.value = half * sum;
      break;
    }
    case BoundVariant::AlmostUnramified: {
      if (b.primes.size() != 1) throw std::invalid_argument(name + " needs exactly one prime p");
      if (b.psi.empty()) throw std::invalid_argument(name + " needs psi_{p^f} values");
      uint64_t p = b.primes[0];
      require_prime(p);
      Interval sum(0L, P), alt(0L, P);
      mpq_class hyp = 0;
      Interval lp = log_q(p, 1, P);
      for (const auto& [q, v] : b.psi) {
        auto [pp, f] = require_prime_power(q);
        if (pp != p) throw std::invalid_argument(name + ": psi key " + std::to_string(q) + " is not a power of p");
        hyp += f * v;
        if (q > b.cutoff) {
          out.truncated = true;
          continue;
        }
        Interval w = Interval(mpq_class(f * f * f) * v * v, P) * lp;
        sum += w / iv(q, P);
        alt += w / (iv(q, P) + Interval(1L, P));
        ++out.terms;
      }
      out.value = half * sum;
      out.alternate = half * alt;
      out.hypothesis_sum = hyp;
      out.note = "alternate uses p^f + 1 in the denominator";
      break;
    }
    case BoundVariant::Pottmeyer: {
      if (b.primes.size() != 1) throw std::invalid_argument(name + " needs exactly one prime p");
      uint64_t p = b.primes[0];
      require_prime(p);
      out.value = log(iv(p, P) / Interval(2L, P)) / (iv(p, P) + Interval(1L, P));
      out.terms = 1;
      break;
    }
    case BoundVariant::EllipticThm: {
      if (b.ec.empty()) throw std::invalid_argument(name + " needs q:(xi_q, chi_q) data");
      bool any_chi = false;
      for (const auto& [q, xc] : b.ec) {
        check_unit(xc.first, "xi_" + std::to_string(q));
        check_unit(xc.second, "chi_" + std::to_string(q));
        if (xc.first + xc.second > 1) throw std::invalid_argument("xi_q + chi_q must not exceed 1");
        any_chi = any_chi || xc.second > 0;
      }
      if (any_chi && (!b.c_E || *b.c_E <= 0)) throw std::invalid_argument(name + " needs a positive c_E when chi_q > 0");
      Interval sum(0L, P);
      for (const auto& [q, xc] : b.ec) {
        auto [p, m] = require_prime_power(q);
        if (q > b.cutoff) {
          out.truncated = true;
          continue;
        }
        Interval Q = iv(q, P), one(1L, P);
        Interval good = Interval(6L, P) * (Q + one) / (Q + one + Interval(2L, P) * sqrt(Q)) * Interval(xc.first, P);
        Interval mult = xc.second > 0 ? (Q + one) * Interval(*b.c_E * xc.second, P) : Interval(0L, P);
        sum += (good + mult) * log_q(p, m, P) / (Q + one);
        ++out.terms;
      }
      out.value = sum / Interval(48L, P);
      break;
    }
    case BoundVariant::EllipticCorollary: {
      if (b.psi.empty()) throw std::invalid_argument(name + " needs a psi map over good-reduction primes");
      Interval sum(0L, P);
      for (const auto& [q, v] : b.psi) {
        auto [p, m] = require_prime_power(q);
        if (!b.primes.empty() && std::find(b.primes.begin(), b.primes.end(), p) == b.primes.end()) continue;
        if (q > b.cutoff) {
          out.truncated = true;
          continue;
        }
        Interval Q = iv(q, P);
        sum += Interval(v, P) * log_q(p, m, P) / (Q + Interval(1L, P) + Interval(2L, P) * sqrt(Q));
        ++out.terms;
      }
      out.value = sum / Interval(8L, P);
      out.note = "sum restricted to primes of good reduction";
      break;
    }
  }
  return out;
}

AlmostUnramifiedReport almost_unramified_check(const TowerStats& stats, const mpq_class& tolerance) {
  AlmostUnramifiedReport r;
  r.p = stats.p;
  r.tolerance = tolerance;
  for (const auto& lv : stats.levels) {
    mpq_class s = 0;
    for (const auto& [m, n] : lv.counts.by_degree) s += mpq_class(m * n);
    s /= lv.degree;
    r.sums.push_back(s);
    r.certified = r.certified && lv.counts.certified;
  }
  if (!r.sums.empty()) r.within_tolerance = abs(mpq_class(1 - r.sums.back())) <= tolerance;
  return r;
}

mpq_class compositum_psi_floor(const mpq_class& psi_q, long d) {
  if (psi_q <= 0 || psi_q > 1) throw std::invalid_argument("psi_q must lie in (0, 1]");
  if (d < 1) throw std::invalid_argument("degree d must be at least 1");
  mpq_class r = psi_q / mpq_class(d * d);
  r.canonicalize();
  return r;
}

}  // namespace hl
