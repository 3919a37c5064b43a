#pragma once

#include <string>
#include <vector>

#include "heightlab/elliptic.hpp"
#include "heightlab/envelope.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/towers.hpp"

namespace hl {

constexpr long kDefaultPrecisionBits = 64;

// HEIGHTLAB_PRECISION when set and valid, otherwise kDefaultPrecisionBits.
long default_precision_bits();

// Polynomial text format: one polynomial per line; errors carry "line N:".
std::vector<IntPolynomial> parse_polynomial_lines(const std::string& text);
std::string read_text_file(const std::string& path);

RelativeElement parse_relative_element(const json& j);
TowerSpec parse_tower(const json& j);
EllipticCurve parse_curve(const json& j);
CurvePoint parse_point(const json& j);
mpq_class parse_rational(const std::string& s);

struct CurveCase {
  std::string name;
  std::array<long, 5> a;
  CurvePoint point;
};

// Fixed corpus spanning good, split and nonsplit multiplicative, and additive primes.
std::vector<CurveCase> elliptic_corpus();

struct TpadicSample {
  IntPolynomial f;
  std::vector<mpz_class> roots;  // integer centres a_i
  int K = 0;
  long resamples = 0;
};

// Monic f = prod (x - a_i) + p^K h, split completely over Z_p by Hensel and certified irreducible.
TpadicSample totally_padic_sample(uint64_t p, int degree, uint64_t seed);

// Each command reads cfg.params and returns its envelope; errors are thrown.
ResultEnvelope cmd_height(const ExperimentConfig& cfg);
ResultEnvelope cmd_mahler(const ExperimentConfig& cfg);
ResultEnvelope cmd_rel(const ExperimentConfig& cfg);
ResultEnvelope cmd_padic_split(const ExperimentConfig& cfg);
ResultEnvelope cmd_tower_psi(const ExperimentConfig& cfg);
ResultEnvelope cmd_bounds_eval(const ExperimentConfig& cfg);
ResultEnvelope cmd_ec_height(const ExperimentConfig& cfg);
ResultEnvelope cmd_ec_experiment(const ExperimentConfig& cfg);
ResultEnvelope cmd_totally_padic_family(const ExperimentConfig& cfg);
// Aggregates envelopes in params.dir; writes report.md and report.csv to params.out when given.
ResultEnvelope cmd_report(const ExperimentConfig& cfg);

ResultEnvelope run_command(const ExperimentConfig& cfg);

}  // namespace hl
