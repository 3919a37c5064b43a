#include "heightlab/commands.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "heightlab/padic.hpp"
#include "heightlab/roots.hpp"

namespace hl {

namespace {

using Rng = boost::random::mt19937_64;

Rng make_rng(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(stream),
                    static_cast<uint32_t>(stream >> 32)};
  Rng rng;
  rng.seed(seq);
  return rng;
}

long uniform(Rng& rng, long lo, long hi) { return boost::random::uniform_int_distribution<long>(lo, hi)(rng); }

// Bounded worker pool; results are stored by index so output order never depends on scheduling.
template <class T, class F>
std::vector<T> parallel_map(size_t n, F fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<size_t> next{0};
  size_t workers = std::max<size_t>(1, std::min<size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < n;) {
        try {
          out[i] = fn(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

const json& need(const json& p, const char* key) {
  if (!p.contains(key)) throw std::invalid_argument(std::string("missing parameter '") + key + "'");
  return p.at(key);
}

template <class T>
T get_or(const json& p, const char* key, T fallback) {
  return p.contains(key) ? p.at(key).get<T>() : fallback;
}

mpq_class json_rational(const json& j) {
  if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_decimal(j.get<std::string>());
  if (j.is_number()) return parse_decimal(j.dump());
  throw std::invalid_argument("expected a rational number, got " + j.dump());
}

mpz_class json_integer(const json& j) {
  mpq_class q = json_rational(j);
  if (q.get_den() != 1) throw std::invalid_argument("expected an integer, got " + j.dump());
  return q.get_num();
}

int digits_for(long bits) { return static_cast<int>(std::min<long>(40, std::max<long>(6, bits * 3 / 10))); }

std::vector<IntPolynomial> polys_from_params(const json& p) {
  if (p.contains("poly")) return parse_polynomial_lines(p.at("poly").get<std::string>());
  if (p.contains("file")) return parse_polynomial_lines(read_text_file(p.at("file").get<std::string>()));
  throw std::invalid_argument("expected --poly or --file");
}

json parts_json(const SplittingType& t) {
  json a = json::array();
  for (const auto& [e, f] : t.parts) a.push_back({e, f});
  return a;
}

json rational_map(const std::map<int, mpq_class>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = q_str(v);
  return j;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

long default_precision_bits() {
  if (const char* s = std::getenv("HEIGHTLAB_PRECISION")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 16 && v <= 1 << 16) return v;
  }
  return kDefaultPrecisionBits;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<IntPolynomial> parse_polynomial_lines(const std::string& text) {
  std::vector<IntPolynomial> out;
  std::istringstream in(text);
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    std::string body = line.substr(0, line.find('#'));
    if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      IntPolynomial f = IntPolynomial::parse(body);
      if (f.degree() < 1) throw std::invalid_argument("polynomial must have degree >= 1");
      out.push_back(std::move(f));
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(no) + ": " + e.what());
    }
  }
  if (out.empty()) throw std::invalid_argument("no polynomials in input");
  return out;
}

mpq_class parse_rational(const std::string& s) { return parse_decimal(s); }

RelativeElement parse_relative_element(const json& j) {
  std::vector<mpz_class> base;
  for (const auto& c : need(j, "base")) base.push_back(json_integer(c));
  std::vector<RatPolynomial> rel;
  for (const auto& coeff : need(j, "relpoly")) {
    std::vector<mpq_class> v;
    if (coeff.is_array()) {
      for (const auto& c : coeff) v.push_back(json_rational(c));
    } else {
      v.push_back(json_rational(coeff));
    }
    rel.emplace_back(std::move(v));
  }
  return RelativeElement(IntPolynomial(std::move(base)), std::move(rel));
}

TowerSpec parse_tower(const json& j) {
  TowerSpec t;
  for (const auto& lvl : need(j, "levels")) {
    std::vector<mpz_class> v;
    for (const auto& c : lvl) v.push_back(json_integer(c));
    t.levels.emplace_back(std::move(v));
  }
  if (j.contains("witnesses")) {
    for (const auto& w : j.at("witnesses")) {
      if (w.is_null()) {
        t.witnesses.emplace_back(std::nullopt);
        continue;
      }
      std::vector<mpq_class> v;
      for (const auto& c : w) v.push_back(json_rational(c));
      t.witnesses.emplace_back(RatPolynomial(std::move(v)));
    }
  }
  t.validate();
  return t;
}

EllipticCurve parse_curve(const json& j) {
  const json& a = need(j, "a");
  if (!a.is_array() || a.size() != 5) throw std::invalid_argument("curve needs \"a\": [a1,a2,a3,a4,a6]");
  std::array<mpq_class, 5> c;
  for (size_t i = 0; i < 5; ++i) c[i] = json_rational(a[i]);
  return invariants(c);
}

CurvePoint parse_point(const json& j) {
  if (j.contains("infinity") && j.at("infinity").get<bool>()) return CurvePoint::zero();
  return {false, json_rational(need(j, "x")), json_rational(need(j, "y"))};
}

std::vector<CurveCase> elliptic_corpus() {
  auto pt = [](long x, long y) { return CurvePoint{false, x, y}; };
  std::vector<CurveCase> c = {
      {"37a1 P", {0, 0, 1, -1, 0}, pt(0, 0)},
      {"37a1 2P", {0, 0, 1, -1, 0}, pt(1, 0)},
      {"37a1 5P", {0, 0, 1, -1, 0}, {false, mpq_class(1, 4), mpq_class(-5, 8)}},
      {"43a1", {0, 1, 1, 0, 0}, pt(0, 0)},
      {"53a1", {1, -1, 1, 0, 0}, pt(0, 0)},
      {"57a1", {0, -1, 1, -2, 2}, pt(-1, 1)},
      {"58a1", {1, -1, 0, -1, 1}, pt(0, 1)},
      {"77a1", {0, 0, 1, 2, 0}, pt(2, 3)},
      {"389a1 P", {0, 1, 1, -2, 0}, pt(-1, 1)},
      {"389a1 Q", {0, 1, 1, -2, 0}, pt(0, 0)},
      {"433a1", {1, 0, 0, 0, 1}, pt(0, 1)},
      {"x3-x+1", {0, 0, 0, -1, 1}, pt(-1, 1)},
      {"x3+17 P", {0, 0, 0, 0, 17}, pt(-2, 3)},
      {"x3+17 Q", {0, 0, 0, 0, 17}, pt(-1, 4)},
      {"x3-2", {0, 0, 0, 0, -2}, pt(3, 5)},
      {"x3-2x", {0, 0, 0, -2, 0}, pt(-1, 1)},
      {"x3+5x", {0, 0, 0, 5, 0}, pt(20, 90)},
      {"x3-x2+2x-7", {0, -1, 0, 2, -7}, pt(4, 7)},
      {"x3-2x+4", {0, 0, 0, -2, 4}, pt(3, 5)},
      {"x3-12x+9", {0, 0, 0, -12, 9}, pt(-2, 5)},
  };
  return c;
}

TpadicSample totally_padic_sample(uint64_t p, int degree, uint64_t seed) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  Rng rng = make_rng(seed, 0x7061646963ULL);
  TpadicSample s;
  long range = std::max<long>(4, 2L * degree);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<mpz_class> a;
    while (static_cast<int>(a.size()) < degree) {
      mpz_class v = uniform(rng, -range, range);
      if (std::find(a.begin(), a.end(), v) == a.end()) a.push_back(v);
    }
    std::sort(a.begin(), a.end());
    long emax = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      long e = 0;
      for (size_t j = 0; j < a.size(); ++j) {
        if (i != j) e += vp_nonzero(a[i] - a[j], p);
      }
      emax = std::max(emax, e);
    }
    // Hensel: ord_p f(a_i) >= K > 2 ord_p f'(a_i) gives a distinct Z_p-root near each a_i.
    int K = static_cast<int>(2 * emax + 1);
    IntPolynomial f{1};
    for (const auto& r : a) f = f * IntPolynomial(std::vector<mpz_class>{-r, mpz_class(1)});
    std::vector<mpz_class> h(static_cast<size_t>(degree));
    for (auto& c : h) c = uniform(rng, -3, 3);
    if (h[0] == 0) h[0] = 1;
    f = f + IntPolynomial(std::move(h)) * IntPolynomial::monomial(prime_power(p, K), 0);
    if (degree == 1) {
      mpz_class alpha = -f.coeff(0);
      if (abs(alpha) <= 1) {
        ++s.resamples;
        continue;
      }
    } else if (!irreducibility_certificate(f)) {
      ++s.resamples;
      continue;
    }
    s.f = std::move(f);
    s.roots = std::move(a);
    s.K = K;
    return s;
  }
  throw std::runtime_error("could not sample a certified irreducible polynomial");
}

ResultEnvelope cmd_height(const ExperimentConfig& cfg) {
  auto polys = polys_from_params(cfg.params);
  long bits = cfg.precision_bits;
  json rows = json::array();
  for (size_t i = 0; i < polys.size(); ++i) {
    const auto& f = polys[i];
    json r;
    r["index"] = i;
    r["poly"] = f.to_string();
    r["degree"] = f.degree();
    r["weil_height"] = dec(weil_height(f, bits), digits_for(bits));
    r["mahler_measure"] = dec(mahler_measure(f, bits), digits_for(bits));
    r["house"] = dec(house(f, bits), digits_for(bits));
    rows.push_back(r);
  }
  json payload;
  payload["units"] = "nats";
  payload["results"] = rows;
  return make_envelope(cfg, payload, Status::Ok);
}

ResultEnvelope cmd_mahler(const ExperimentConfig& cfg) {
  auto polys = polys_from_params(cfg.params);
  long bits = cfg.precision_bits;
  auto rows = parallel_map<json>(polys.size(), [&](size_t i) {
    Interval m = mahler_measure(polys[i], bits);
    json r;
    r["index"] = i;
    r["poly"] = polys[i].to_string();
    r["mahler_measure"] = dec(m, digits_for(bits));
    r["log_mahler_measure"] = dec(log(m), digits_for(bits));
    return r;
  });
  json payload;
  payload["results"] = rows;
  return make_envelope(cfg, payload, Status::Ok);
}

ResultEnvelope cmd_rel(const ExperimentConfig& cfg) {
  json in = json::parse(read_text_file(need(cfg.params, "in").get<std::string>()));
  RelativeElement e = parse_relative_element(in);
  long bits = cfg.precision_bits;
  int dg = digits_for(bits);
  RelativeHeightReport r = relative_height_decomposition(e, bits);
  Status st = r.identity_consistent ? Status::Ok : Status::Inconclusive;
  json payload;
  payload["base_degree"] = r.base_degree;
  payload["rel_degree"] = r.rel_degree;
  json emb = json::array();
  for (size_t i = 0; i < r.rel_mahler.size(); ++i) {
    InequalityReport ineq = relative_mahler_inequality_check(e, i);
    if (ineq.verdict == Verdict::Inconclusive) st = worst(st, Status::Inconclusive);
    emb.push_back({{"embedding", i},
                   {"relative_mahler", dec(r.rel_mahler[i], dg)},
                   {"relative_height", dec(r.rel_height[i], dg)},
                   {"disc_inequality", {{"lhs", dec(ineq.lhs, dg)},
                                        {"rhs", dec(ineq.rhs, dg)},
                                        {"verdict", to_string(ineq.verdict)},
                                        {"precision_bits", ineq.precision_bits}}}});
  }
  payload["embeddings"] = emb;
  payload["average_relative_height"] = dec(r.average, dg);
  payload["global_height"] = dec(r.global_height, dg);
  payload["identity_consistent"] = r.identity_consistent;
  payload["norm_relative_discriminant"] = q_str(r.norm_rel_disc);
  payload["localglobal_rhs"] = dec(r.localglobal_rhs, dg);
  payload["localglobal_violated"] = r.localglobal_violated;
  DiscIdentityReport d = disc_identity_probe(e);
  payload["disc_identity"] = {{"disc_f", d.disc_f.get_str()},
                              {"norm_rel_disc", q_str(d.norm_rel_disc)},
                              {"disc_base", d.disc_base.get_str()},
                              {"ratio_square", q_str(d.ratio_square)},
                              {"ratio_power_m", q_str(d.ratio_power_m)},
                              {"ratio_square_factored", d.ratio_square_factored},
                              {"ratio_power_m_factored", d.ratio_power_m_factored}};
  return make_envelope(cfg, payload, st);
}

ResultEnvelope cmd_padic_split(const ExperimentConfig& cfg) {
  auto polys = parse_polynomial_lines(need(cfg.params, "poly").get<std::string>());
  uint64_t p = need(cfg.params, "p").get<uint64_t>();
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  SplittingType t = splitting_type(polys.at(0), PadicContext(p), cfg.seed);
  json payload;
  payload["poly"] = polys[0].to_string();
  payload["p"] = p;
  payload["parts"] = parts_json(t);
  payload["certified"] = t.certified;
  payload["method"] = t.method;
  payload["seed"] = t.seed;
  return make_envelope(cfg, payload, t.certified ? Status::Ok : Status::Uncertified);
}

ResultEnvelope cmd_tower_psi(const ExperimentConfig& cfg) {
  TowerSpec t = parse_tower(json::parse(read_text_file(need(cfg.params, "in").get<std::string>())));
  uint64_t p = need(cfg.params, "p").get<uint64_t>();
  int maxpower = get_or<int>(cfg.params, "maxpower", 4);
  uint64_t cutoff = get_or<uint64_t>(cfg.params, "cutoff", 100);
  TowerStats s = psi_estimate(t, p, maxpower);
  json levels = json::array();
  for (const auto& l : s.levels) {
    json c = json::object();
    for (const auto& [m, n] : l.counts.by_degree) c[std::to_string(m)] = n;
    levels.push_back({{"degree", l.degree},
                      {"counts", c},
                      {"ratio", rational_map(l.ratio)},
                      {"parts", parts_json(l.counts.type)},
                      {"certified", l.counts.certified}});
  }
  auto diag = monotonicity_diagnostic(t, cutoff);
  long bad = 0, unc = 0;
  json failures = json::array();
  for (const auto& c : diag) {
    if (!c.certified) ++unc;
    if (!c.nonincreasing) {
      ++bad;
      json w = json::array();
      for (const auto& x : c.weights) w.push_back(q_str(x));
      failures.push_back({{"p", c.p}, {"cutoff", c.cutoff.get_str()}, {"weights", w}});
    }
  }
  json payload;
  payload["p"] = p;
  payload["max_power"] = maxpower;
  payload["levels"] = levels;
  payload["trend"] = s.trend;
  payload["uncertified_levels"] = s.uncertified_levels;
  payload["monotonicity"] = {{"max_cutoff", cutoff},
                             {"checks", diag.size()},
                             {"violations", bad},
                             {"uncertified", unc},
                             {"failures", failures}};
  Status st = s.uncertified_levels.empty() && unc == 0 ? Status::Ok : Status::Uncertified;
  return make_envelope(cfg, payload, st);
}

ResultEnvelope cmd_bounds_eval(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  BoundSpec b;
  b.variant = parse_variant(need(p, "variant").get<std::string>());
  if (p.contains("psi")) b.psi = parse_psi_map(p.at("psi").get<std::string>());
  if (p.contains("local")) {
    for (const auto& item : split(p.at("local").get<std::string>(), ',')) {
      auto f = split(item, ':');
      if (f.size() != 3) throw std::invalid_argument("local degree entries are p:e:f, got '" + item + "'");
      b.local.push_back({std::stoull(f[0]), std::stol(f[1]), std::stol(f[2])});
    }
  }
  if (p.contains("primes")) {
    for (const auto& item : split(p.at("primes").get<std::string>(), ',')) b.primes.push_back(std::stoull(item));
  }
  if (p.contains("ec")) {
    for (const auto& item : split(p.at("ec").get<std::string>(), ',')) {
      auto f = split(item, ':');
      if (f.size() != 3) throw std::invalid_argument("elliptic stats entries are q:xi:chi, got '" + item + "'");
      b.ec[std::stoull(f[0])] = {parse_decimal(f[1]), parse_decimal(f[2])};
    }
  }
  if (p.contains("cE")) b.c_E = parse_decimal(p.at("cE").get<std::string>());
  if (p.contains("cutoff")) b.cutoff = p.at("cutoff").get<uint64_t>();
  prec_t prec = static_cast<prec_t>(cfg.precision_bits + 64);
  BoundValue v = eval_bound(b, prec);
  int dg = digits_for(cfg.precision_bits);
  json payload;
  payload["variant"] = to_string(b.variant);
  payload["value"] = v.value.mid().to_fixed(dg);
  payload["enclosure"] = dec(v.value, dg);
  payload["units"] = "nats";
  payload["truncation"] = {{"truncated", v.truncated}, {"terms", v.terms}, {"cutoff", b.cutoff}};
  if (v.upper) payload["upper"] = dec(*v.upper, dg);
  if (v.q) payload["q"] = *v.q;
  if (v.lambda) payload["lambda"] = *v.lambda;
  if (v.rho) payload["rho"] = q_str(*v.rho);
  if (v.s) payload["s"] = q_str(*v.s);
  if (v.refined) payload["refined"] = dec(*v.refined, dg);
  if (v.alternate) payload["alternate"] = dec(*v.alternate, dg);
  if (v.hypothesis_sum) payload["hypothesis_sum"] = q_str(*v.hypothesis_sum);
  if (!v.note.empty()) payload["note"] = v.note;
  return make_envelope(cfg, payload, Status::Ok);
}

namespace {

json place_json(const LocalHeightReport& r, int dg) {
  json j;
  j["place"] = r.p == 0 ? json("inf") : json(r.p);
  j["lambda"] = dec(r.lambda, dg);
  if (r.p != 0) {
    j["reduction"] = to_string(r.type);
    j["coefficient_of_log_p"] = q_str(*r.coefficient);
    j["ord_disc"] = r.v_disc;
    j["smooth_reduction"] = r.smooth;
    if (r.alpha) j["alpha"] = q_str(*r.alpha);
    if (r.k_v) j["minus_ord_j"] = r.k_v;
  } else {
    j["series_terms"] = r.series_terms;
    j["error_bound"] = r.error_bound.to_sci(3);
  }
  return j;
}

std::string point_str(const CurvePoint& P) {
  return P.infinity ? "O" : "(" + P.x.get_str() + ", " + P.y.get_str() + ")";
}

}  // namespace

ResultEnvelope cmd_ec_height(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  EllipticCurve E = parse_curve(json::parse(read_text_file(need(p, "curve").get<std::string>())));
  CurvePoint P = parse_point(json::parse(read_text_file(need(p, "point").get<std::string>())));
  if (!on_curve(E, P)) throw std::invalid_argument("point " + point_str(P) + " is not on " + E.label());
  long bits = cfg.precision_bits;
  int dg = digits_for(bits);
  json payload;
  payload["curve"] = E.label();
  payload["point"] = point_str(P);
  payload["kappa"] = kHeightKappa;
  TorsionResult t = is_torsion(E, P);
  payload["torsion"] = {{"torsion", t.torsion}, {"order", t.order}};
  if (P.infinity) {
    payload["canonical_height"] = "0";
    return make_envelope(cfg, payload, Status::Ok);
  }
  CanonicalHeight h = canonical_height(E, P, bits);
  payload["minimal_model"] = h.model.curve.label();
  payload["transform"] = {{"u", q_str(h.model.transform.u)},
                          {"r", q_str(h.model.transform.r)},
                          {"s", q_str(h.model.transform.s)},
                          {"t", q_str(h.model.transform.t)}};
  payload["discriminant"] = h.model.curve.disc.get_str();
  payload["j_invariant"] = q_str(h.model.curve.j);
  payload["canonical_height"] = dec(h.value, dg);
  json places = json::array();
  for (const auto& r : h.places) places.push_back(place_json(r, dg));
  payload["places"] = places;
  if (get_or<bool>(p, "oracle", false) && !t.torsion) {
    OracleResult o = canonical_height_oracle(E, P);
    payload["oracle"] = {{"value", dec(o.value, dg)}, {"doublings", o.doublings}, {"agrees", o.value.overlaps(h.value)}};
  }
  return make_envelope(cfg, payload, Status::Ok);
}

namespace {

struct Check {
  long cases = 0, violations = 0, inconclusive = 0;
  json detail = json::array();
  json summary() const {
    return {{"cases", cases}, {"violations", violations}, {"inconclusive", inconclusive}, {"detail", detail}};
  }
};

// Points m P_1 + n P_2 on one corpus curve, skipping O and repeats up to sign.
std::vector<CurvePoint> curve_points(const EllipticCurve& E, const std::vector<CurvePoint>& gens, Rng& rng,
                                     size_t count) {
  std::vector<CurvePoint> out;
  for (int tries = 0; out.size() < count && tries < 200; ++tries) {
    CurvePoint Q = CurvePoint::zero();
    for (const auto& g : gens) Q = add(E, Q, multiply(E, g, uniform(rng, -3, 3)));
    if (Q.infinity || std::find(out.begin(), out.end(), Q) != out.end()) continue;
    // P and -P together make the point-set comparison an equality.
    if (std::find(out.begin(), out.end(), negate(E, Q)) != out.end()) continue;
    out.push_back(Q);
  }
  return out;
}

}  // namespace

ResultEnvelope cmd_ec_experiment(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  long bits = cfg.precision_bits;
  int dg = digits_for(bits);
  const double tol = get_or<double>(p, "tolerance", 1e-6);
  const long pair_configs = get_or<long>(p, "pairwise_configs", 1000);
  const long bern_vectors = get_or<long>(p, "bernoulli_vectors", 1000);
  const long bern_max_n = get_or<long>(p, "bernoulli_max_n", 100);
  const long hasse_bound = get_or<long>(p, "hasse_bound", 100);
  const long floor_sets = get_or<long>(p, "pointset_samples", 20);
  auto corpus = elliptic_corpus();
  json payload;
  payload["tolerance"] = Real(tol, 53).to_sci(2);

  // Decomposition against the doubling oracle, with reduction coverage.
  std::map<std::string, long> coverage;
  Check oracle;
  auto orows = parallel_map<json>(corpus.size(), [&](size_t i) {
    const auto& c = corpus[i];
    EllipticCurve E = invariants({c.a[0], c.a[1], c.a[2], c.a[3], c.a[4]});
    CanonicalHeight h = canonical_height(E, c.point, bits);
    OracleResult o = canonical_height_oracle(E, c.point, 1e-8, 13);
    Real diff = abs(h.value.mid() - o.value.mid());
    json r;
    r["case"] = c.name;
    r["curve"] = E.label();
    r["point"] = point_str(c.point);
    r["decomposition"] = dec(h.value, dg);
    r["oracle"] = dec(o.value, dg);
    r["abs_diff"] = diff.to_sci(3);
    r["within_tolerance"] = diff.to_double() <= tol;
    json red = json::array();
    for (const auto& pl : h.places) {
      if (pl.p == 0) continue;
      red.push_back({{"p", pl.p}, {"type", to_string(pl.type)}, {"smooth", pl.smooth}});
    }
    r["places"] = red;
    return r;
  });
  for (const auto& r : orows) {
    ++oracle.cases;
    if (!r["within_tolerance"].get<bool>()) ++oracle.violations;
    for (const auto& pl : r["places"]) {
      std::string key = pl["type"].get<std::string>();
      ++coverage[key];
      if (!pl["smooth"].get<bool>()) ++coverage[key + " (singular point)"];
    }
    oracle.detail.push_back(r);
  }
  payload["oracle_match"] = oracle.summary();
  payload["reduction_coverage"] = coverage;

  // Quadraticity for n <= 5 and the parallelogram law.
  Check quad;
  auto qrows = parallel_map<json>(corpus.size(), [&](size_t i) {
    const auto& c = corpus[i];
    EllipticCurve E = invariants({c.a[0], c.a[1], c.a[2], c.a[3], c.a[4]});
    Real h1 = canonical_height(E, c.point, bits).value.mid();
    Real worst_diff(0.0, 64);
    for (long n = 2; n <= 5; ++n) {
      Real hn = canonical_height(E, multiply(E, c.point, n), bits).value.mid();
      Real d = abs(hn - h1 * Real(static_cast<double>(n * n), 64));
      if (d > worst_diff) worst_diff = d;
    }
    return json{{"case", c.name}, {"max_abs_diff", worst_diff.to_sci(3)}, {"ok", worst_diff.to_double() <= tol}};
  });
  for (const auto& r : qrows) {
    ++quad.cases;
    if (!r["ok"].get<bool>()) ++quad.violations;
    quad.detail.push_back(r);
  }
  payload["quadraticity"] = quad.summary();

  Check para;
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (size_t j = i + 1; j < corpus.size(); ++j) {
      if (corpus[i].a != corpus[j].a) continue;
      const auto& c = corpus[i];
      EllipticCurve E = invariants({c.a[0], c.a[1], c.a[2], c.a[3], c.a[4]});
      const CurvePoint &P = corpus[i].point, &Q = corpus[j].point;
      CurvePoint S = add(E, P, Q), D = add(E, P, negate(E, Q));
      auto H = [&](const CurvePoint& X) {
        return X.infinity ? Real(0.0, 64) : canonical_height(E, X, bits).value.mid();
      };
      Real lhs = H(S) + H(D), rhs = (H(P) + H(Q)) * Real(2.0, 64);
      Real d = abs(lhs - rhs);
      ++para.cases;
      bool ok = d.to_double() <= tol;
      if (!ok) ++para.violations;
      para.detail.push_back({{"pair", corpus[i].name + " / " + corpus[j].name}, {"abs_diff", d.to_sci(3)}, {"ok", ok}});
    }
  }
  payload["parallelogram"] = para.summary();

  // Torsion points return zero.
  Check tors;
  std::vector<std::pair<std::array<long, 5>, CurvePoint>> tpts = {
      {{0, 0, 0, 0, 1}, {false, 2, 3}},    {{0, 0, 0, 0, 1}, {false, 0, 1}},   {{0, 0, 0, 0, 1}, {false, -1, 0}},
      {{0, -1, 1, -10, -20}, {false, 5, 5}}, {{0, 0, 0, -1, 0}, {false, 1, 0}}, {{1, 0, 1, 4, -6}, {false, 2, -5}},
  };
  for (const auto& [a, P] : tpts) {
    EllipticCurve E = invariants({a[0], a[1], a[2], a[3], a[4]});
    TorsionResult t = is_torsion(E, P);
    Interval h = canonical_height(E, P, bits).value;
    bool ok = t.torsion && h.mag().to_double() < 1e-8;
    ++tors.cases;
    if (!ok) ++tors.violations;
    tors.detail.push_back({{"curve", E.label()}, {"point", point_str(P)}, {"order", t.order}, {"height", dec(h, dg)}, {"ok", ok}});
  }
  payload["torsion"] = tors.summary();

  // Nonarchimedean pairwise sums against -(N/12) ord(Delta) log p.
  std::map<std::array<long, 5>, std::vector<CurvePoint>> gens;
  for (const auto& c : corpus) gens[c.a].push_back(c.point);
  std::vector<std::array<long, 5>> curves;
  for (const auto& [a, g] : gens) curves.push_back(a);
  Check pair;
  mpq_class min_margin;
  bool have_margin = false;
  auto prow = parallel_map<json>(static_cast<size_t>(pair_configs), [&](size_t k) {
    Rng rng = make_rng(cfg.seed, 1000 + k);
    const auto& a = curves[static_cast<size_t>(uniform(rng, 0, static_cast<long>(curves.size()) - 1))];
    EllipticCurve E = minimal_model(invariants({a[0], a[1], a[2], a[3], a[4]})).curve;
    size_t N = static_cast<size_t>(uniform(rng, 2, 6));
    auto pts = curve_points(E, gens[a], rng, N);
    json out = json::array();
    if (pts.size() < 2) return out;
    for (const auto& q : prime_factors(E.disc.get_num())) {
      PairwiseSum s = pairwise_local_sum(E, pts, q.get_ui(), bits);
      out.push_back({{"p", q.get_ui()},
                     {"N", pts.size()},
                     {"coefficient", q_str(*s.coefficient)},
                     {"floor", q_str(s.floor_coefficient)},
                     {"holds", s.floor_holds}});
    }
    return out;
  });
  for (const auto& rows : prow) {
    for (const auto& r : rows) {
      ++pair.cases;
      if (!r["holds"].get<bool>()) {
        ++pair.violations;
        pair.detail.push_back(r);
      }
      mpq_class m = parse_decimal(r["coefficient"].get<std::string>()) - parse_decimal(r["floor"].get<std::string>());
      if (!have_margin || m < min_margin) min_margin = m;
      have_margin = true;
    }
  }
  json ps = pair.summary();
  ps["configurations"] = pair_configs;
  ps["min_margin_coefficient"] = have_margin ? q_str(min_margin) : "";
  payload["pairwise_nonarch"] = ps;

  // Archimedean pairwise sums: fitted b(E), reported only.
  json fitted = json::array();
  for (const auto& a : curves) {
    EllipticCurve E = minimal_model(invariants({a[0], a[1], a[2], a[3], a[4]})).curve;
    Rng rng = make_rng(cfg.seed, 7);
    auto pts = curve_points(E, gens[a], rng, 4);
    if (pts.size() < 2) continue;
    PairwiseSum s = pairwise_local_sum(E, pts, 0, bits);
    fitted.push_back({{"curve", E.label()}, {"N", pts.size()}, {"sum", dec(s.value, dg)}, {"fitted_b", dec(*s.fitted_b, dg)}});
  }
  payload["archimedean_fitted_b"] = fitted;

  // Bernoulli pair sums against -N/6; equally spaced points give the minimum 1/6 - N/6.
  Check bern;
  auto brow = parallel_map<json>(static_cast<size_t>(bern_vectors), [&](size_t k) {
    Rng rng = make_rng(cfg.seed, 500000 + k);
    long N = uniform(rng, 2, bern_max_n);
    std::vector<mpq_class> t(static_cast<size_t>(N));
    bool spaced = k % 10 == 0;
    for (long i = 0; i < N; ++i) {
      t[static_cast<size_t>(i)] = spaced ? mpq_class(i, N) : mpq_class(uniform(rng, 0, 999), 1000);
      t[static_cast<size_t>(i)].canonicalize();
    }
    mpq_class s = bernoulli_pair_sum(t);
    mpq_class floor(-N, 6);
    return json{{"N", N}, {"sum", q_str(s)}, {"holds", s >= floor}, {"spaced", spaced},
                {"below_minus_N_over_12", s < mpq_class(-N, 12)}};
  });
  long below12 = 0;
  mpq_class min_ratio = 1;
  for (const auto& r : brow) {
    ++bern.cases;
    if (!r["holds"].get<bool>()) {
      ++bern.violations;
      bern.detail.push_back(r);
    }
    if (r["below_minus_N_over_12"].get<bool>()) ++below12;
    mpq_class ratio = parse_decimal(r["sum"].get<std::string>()) / r["N"].get<long>();
    if (ratio < min_ratio) min_ratio = ratio;
  }
  json bs = bern.summary();
  bs["min_sum_over_N"] = q_str(min_ratio);
  bs["cases_below_minus_N_over_12"] = below12;
  payload["bernoulli_pairs"] = bs;

  // Hasse bound over three fixed curves.
  Check hasse;
  for (const auto& a : std::vector<std::array<long, 5>>{{0, 0, 1, -1, 0}, {0, 1, 1, -2, 0}, {0, 0, 0, 0, 17}}) {
    EllipticCurve E = minimal_model(invariants({a[0], a[1], a[2], a[3], a[4]})).curve;
    long primes = 0;
    for (uint64_t q = 2; q <= static_cast<uint64_t>(hasse_bound); ++q) {
      if (!is_prime(q) || *vp(E.disc, q) != 0) continue;
      ++primes;
      ++hasse.cases;
      try {
        count_points_mod_p(E, q);
      } catch (const std::logic_error&) {
        ++hasse.violations;
        hasse.detail.push_back({{"curve", E.label()}, {"p", q}});
      }
    }
    (void)primes;
  }
  payload["hasse"] = hasse.summary();

  // Point-set averages against the pairwise-difference expression.
  Check floors;
  {
    const auto& c = corpus[0];
    EllipticCurve E = invariants({c.a[0], c.a[1], c.a[2], c.a[3], c.a[4]});
    std::vector<CurvePoint> Z = {c.point, multiply(E, c.point, 2), multiply(E, c.point, 3)};
    std::map<uint64_t, std::pair<mpq_class, mpq_class>> st = {{2, {1, 0}}};
    PointsetFloor f = pointset_height_floor(E, Z, st, std::nullopt, bits);
    Interval expect = canonical_height(E, c.point, bits).value * Interval(mpq_class(14, 3), 128);
    bool ok = f.avg_ge_pairwise && abs(f.empirical_avg.mid() - expect.mid()).to_double() <= tol;
    ++floors.cases;
    if (!ok) ++floors.violations;
    floors.detail.push_back({{"set", "{P, 2P, 3P} on 37a1"},
                             {"empirical_avg", dec(f.empirical_avg, dg)},
                             {"expected_14_over_3_h", dec(expect, dg)},
                             {"pairwise", dec(f.pairwise, dg)},
                             {"bound_value", dec(*f.bound_value, dg)},
                             {"ok", ok}});
  }
  auto frows = parallel_map<json>(static_cast<size_t>(floor_sets), [&](size_t k) {
    Rng rng = make_rng(cfg.seed, 900000 + k);
    const auto& a = curves[static_cast<size_t>(uniform(rng, 0, static_cast<long>(curves.size()) - 1))];
    EllipticCurve E = invariants({a[0], a[1], a[2], a[3], a[4]});
    auto pts = curve_points(E, gens[a], rng, static_cast<size_t>(uniform(rng, 2, 5)));
    if (pts.size() < 2) return json();
    PointsetFloor f = pointset_height_floor(E, pts, {}, std::nullopt, bits);
    return json{{"curve", E.label()},
                {"N", pts.size()},
                {"empirical_avg", dec(f.empirical_avg, dg)},
                {"pairwise", dec(f.pairwise, dg)},
                {"ok", f.avg_ge_pairwise}};
  });
  for (const auto& r : frows) {
    if (r.is_null()) continue;
    ++floors.cases;
    if (!r["ok"].get<bool>()) ++floors.violations;
    floors.detail.push_back(r);
  }
  payload["pointset_floor"] = floors.summary();

  bool all = true;
  for (const char* k : {"oracle_match", "quadraticity", "parallelogram", "torsion", "pairwise_nonarch",
                        "bernoulli_pairs", "hasse", "pointset_floor"}) {
    all = all && payload[k]["violations"].get<long>() == 0;
  }
  payload["all_pass"] = all;
  return make_envelope(cfg, payload, all ? Status::Ok : Status::Inconclusive);
}

ResultEnvelope cmd_totally_padic_family(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  uint64_t prime = get_or<uint64_t>(p, "p", 5);
  int cap = get_or<int>(p, "degree_cap", 50);
  long samples = get_or<long>(p, "samples", 200);
  if (!is_prime(prime)) throw std::invalid_argument("p must be prime");
  if (cap < 1) throw std::invalid_argument("degree cap must be >= 1");
  long bits = cfg.precision_bits;
  int dg = digits_for(bits);
  const prec_t prec = static_cast<prec_t>(bits + 64);
  Interval logp = log(Interval(mpz_class(static_cast<unsigned long>(prime)), prec));
  Interval pott = log(Interval(mpq_class(static_cast<long>(prime), 2), prec)) / Interval(static_cast<long>(prime + 1), prec);
  Interval split = logp / Interval(static_cast<long>(2 * (prime + 1)), prec);

  struct Row {
    json j;
    Status st = Status::Ok;
    bool violation = false;
    long resamples = 0;
    Interval h{128};
  };
  auto rows = parallel_map<Row>(static_cast<size_t>(samples), [&](size_t k) {
    Rng rng = make_rng(cfg.seed, k);
    int d = static_cast<int>(uniform(rng, 1, cap));
    TpadicSample s = totally_padic_sample(prime, d, rng());
    Row r;
    r.resamples = s.resamples;
    r.h = weil_height(s.f, bits);
    PadicContext ctx(prime, std::max(20, 2 * s.K + 4));
    QpRoots roots = qp_integral_roots(s.f, ctx);
    bool split_ok = roots.complete && static_cast<int>(roots.roots.size()) == d;
    ClusterReport cl = cluster_bound_report(s.f, ctx);
    bool chain = cl.v_disc >= cl.cluster_lower_bound && cl.cauchy_schwarz_floor <= cl.cluster_lower_bound;
    Verdict v = r.h.certainly_lt(pott) ? Verdict::Fails : pott.certainly_le(r.h) ? Verdict::Holds : Verdict::Inconclusive;
    Interval slack = d > 1 ? log(Interval(static_cast<long>(d), prec)) / Interval(static_cast<long>(d), prec)
                           : Interval(0L, prec);
    bool split_floor = (split - slack).certainly_le(r.h);
    r.violation = v == Verdict::Fails || !chain;
    if (v == Verdict::Inconclusive) r.st = Status::Inconclusive;
    if (!split_ok) r.st = worst(r.st, Status::Uncertified);
    r.j = {{"index", k},
           {"degree", d},
           {"K", s.K},
           {"poly", s.f.to_string()},
           {"height", dec(r.h, dg)},
           {"totally_split_certified", split_ok},
           {"pottmeyer", to_string(v)},
           {"almost_split_with_slack", split_floor},
           {"almost_split_slack", dec(slack, dg)},
           {"ord_disc", cl.v_disc},
           {"cluster_lower_bound", cl.cluster_lower_bound},
           {"cauchy_schwarz_floor", q_str(cl.cauchy_schwarz_floor)},
           {"chain_holds", chain},
           {"resamples", s.resamples}};
    return r;
  });
  Status st = Status::Ok;
  long violations = 0, resamples = 0, split_below = 0;
  json items = json::array();
  Interval hmin(128);
  for (size_t i = 0; i < rows.size(); ++i) {
    st = worst(st, rows[i].st);
    violations += rows[i].violation;
    resamples += rows[i].resamples;
    split_below += !rows[i].j["almost_split_with_slack"].get<bool>();
    if (i == 0 || rows[i].h.mid() < hmin.mid()) hmin = rows[i].h;
    items.push_back(rows[i].j);
  }
  json payload;
  payload["p"] = prime;
  payload["degree_cap"] = cap;
  payload["samples"] = samples;
  payload["pottmeyer_floor"] = dec(pott, dg);
  payload["almost_split_floor"] = dec(split, dg);
  payload["min_height"] = dec(hmin, dg);
  payload["violations"] = violations;
  payload["almost_split_below_with_slack"] = split_below;
  payload["resamples"] = resamples;
  payload["items"] = items;
  return make_envelope(cfg, payload, st);
}

ResultEnvelope cmd_report(const ExperimentConfig& cfg) {
  std::string dir = need(cfg.params, "dir").get<std::string>();
  if (!std::filesystem::is_directory(dir)) throw std::invalid_argument("missing inputs: directory " + dir);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  json rows = json::array();
  json skipped = json::array();
  Status st = Status::Ok;
  for (const auto& f : files) {
    ResultEnvelope env;
    try {
      env = ResultEnvelope::from_json(json::parse(read_text_file(f.string())));
    } catch (const std::exception& e) {
      skipped.push_back({{"file", f.filename().string()}, {"reason", e.what()}});
      continue;
    }
    st = worst(st, env.status);
    const json& pl = env.payload;
    json r = {{"file", f.filename().string()}, {"command", env.command}, {"status", to_string(env.status)}};
    if (env.command == "family tpadic") {
      r["theorem"] = "pottmeyer";
      r["p"] = pl["p"];
      r["bound"] = pl["pottmeyer_floor"]["mid"];
      r["min_observed"] = pl["min_height"]["mid"];
      r["violations"] = pl["violations"];
    } else if (env.command == "bounds eval") {
      r["theorem"] = pl["variant"];
      r["bound"] = pl["value"];
    } else if (env.command == "ec experiment") {
      r["theorem"] = "canonical-height";
      r["violations"] = json(0);
      long v = 0;
      for (const char* k : {"oracle_match", "quadraticity", "parallelogram", "torsion", "pairwise_nonarch",
                            "bernoulli_pairs", "hasse", "pointset_floor"}) {
        v += pl[k]["violations"].get<long>();
      }
      r["violations"] = v;
    } else if (env.command == "tower psi") {
      r["theorem"] = "monotonicity";
      r["violations"] = pl["monotonicity"]["violations"];
    } else {
      r["theorem"] = env.command;
    }
    rows.push_back(r);
  }
  json payload;
  payload["dir"] = dir;
  payload["rows"] = rows;
  payload["skipped"] = skipped;
  if (cfg.params.contains("out")) {
    std::string out = cfg.params.at("out").get<std::string>();
    std::filesystem::create_directories(out);
    const std::vector<std::string> cols = {"theorem", "command", "p", "bound", "min_observed", "violations", "status", "file"};
    auto cell = [](const json& r, const std::string& c) {
      if (!r.contains(c)) return std::string();
      return r[c].is_string() ? r[c].get<std::string>() : r[c].dump();
    };
    std::ofstream md(std::filesystem::path(out) / "report.md", std::ios::binary | std::ios::trunc);
    std::ofstream csv(std::filesystem::path(out) / "report.csv", std::ios::binary | std::ios::trunc);
    md << "|";
    for (const auto& c : cols) md << " " << c << " |";
    md << "\n|";
    for (size_t i = 0; i < cols.size(); ++i) md << " --- |";
    md << "\n";
    for (size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
    csv << "\n";
    for (const auto& r : rows) {
      md << "|";
      for (const auto& c : cols) md << " " << cell(r, c) << " |";
      md << "\n";
      for (size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cell(r, cols[i]);
      csv << "\n";
    }
    payload["written"] = {"report.md", "report.csv"};
  }
  return make_envelope(cfg, payload, st);
}

ResultEnvelope run_command(const ExperimentConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "height") return cmd_height(cfg);
  if (c == "mahler") return cmd_mahler(cfg);
  if (c == "rel") return cmd_rel(cfg);
  if (c == "padic split") return cmd_padic_split(cfg);
  if (c == "tower psi") return cmd_tower_psi(cfg);
  if (c == "bounds eval") return cmd_bounds_eval(cfg);
  if (c == "ec height") return cmd_ec_height(cfg);
  if (c == "ec experiment") return cmd_ec_experiment(cfg);
  if (c == "family tpadic") return cmd_totally_padic_family(cfg);
  if (c == "report") return cmd_report(cfg);
  throw std::invalid_argument("unknown command '" + c + "'");
}

}  // namespace hl
