#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "heightlab/commands.hpp"

using hl::json;

namespace {

struct Common {
  std::optional<long> prec;
  uint64_t seed = 1;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--prec", c.prec, "working precision in bits (default: HEIGHTLAB_PRECISION or 64)");
  app->add_option("--seed", c.seed, "experiment seed");
  app->add_option("--out", c.out, "write the envelope to this directory instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heightlab: heights of algebraic numbers and points on elliptic curves"};
  app.require_subcommand(1);

  Common common;
  json params = json::object();
  std::string command;

  // Options are bound to locals and copied into params after parsing so that
  // only supplied values enter the config hash.
  std::string poly, file, in, variant, psi, local, primes, ec, cE, curve, point, dir, report_out;
  uint64_t p = 0, cutoff = 0;
  int maxpower = 4, degree_cap = 50;
  long samples = 200, pair_configs = 1000, bern_vectors = 1000;
  bool oracle = false;

  auto* height = app.add_subcommand("height", "Weil height, Mahler measure and house");
  height->add_option("--poly", poly, "coefficients, constant term first");
  height->add_option("--file", file, "one polynomial per line");
  add_common(height, common);

  auto* mahler = app.add_subcommand("mahler", "Mahler measure per input line");
  mahler->add_option("--poly", poly);
  mahler->add_option("--file", file);
  add_common(mahler, common);

  auto* rel = app.add_subcommand("rel", "relative heights over a base field");
  rel->add_option("--in", in, "relative element JSON")->required();
  add_common(rel, common);

  auto* padic = app.add_subcommand("padic", "p-adic tools");
  padic->require_subcommand(1);
  auto* psplit = padic->add_subcommand("split", "splitting type of p");
  psplit->add_option("--poly", poly)->required();
  psplit->add_option("--p", p)->required();
  add_common(psplit, common);

  auto* tower = app.add_subcommand("tower", "tower statistics");
  tower->require_subcommand(1);
  auto* tpsi = tower->add_subcommand("psi", "prime ideal ratios along a tower");
  tpsi->add_option("--in", in, "tower JSON")->required();
  tpsi->add_option("--p", p)->required();
  tpsi->add_option("--maxpower", maxpower);
  tpsi->add_option("--cutoff", cutoff, "largest cutoff for the monotonicity check (default 100)");
  add_common(tpsi, common);

  auto* bounds = app.add_subcommand("bounds", "explicit lower bounds");
  bounds->require_subcommand(1);
  auto* beval = bounds->add_subcommand("eval", "evaluate a bound");
  beval->add_option("--variant", variant,
                    "bz | conjecture | thmA | thmB | almost-split | almost-unramified | pottmeyer | elliptic | elliptic-good")
      ->required();
  beval->add_option("--psi", psi, "q:psi list, e.g. 2:1.0,3:0.5");
  beval->add_option("--local", local, "p:e:f list");
  beval->add_option("--primes", primes, "comma separated primes");
  beval->add_option("--ec", ec, "q:xi:chi list");
  beval->add_option("--cE", cE, "constant c_E");
  beval->add_option("--cutoff", cutoff, "series cutoff");
  add_common(beval, common);

  auto* ecg = app.add_subcommand("ec", "elliptic curves over Q");
  ecg->require_subcommand(1);
  auto* eh = ecg->add_subcommand("height", "canonical height with per-place breakdown");
  eh->add_option("--curve", curve, "curve JSON")->required();
  eh->add_option("--point", point, "point JSON")->required();
  eh->add_flag("--oracle", oracle, "cross-check against the doubling limit");
  add_common(eh, common);
  auto* ex = ecg->add_subcommand("experiment", "corpus checks for the canonical height");
  ex->add_option("--pairwise-configs", pair_configs);
  ex->add_option("--bernoulli-vectors", bern_vectors);
  add_common(ex, common);

  auto* family = app.add_subcommand("family", "sampled families");
  family->require_subcommand(1);
  auto* tp = family->add_subcommand("tpadic", "totally p-adic family");
  tp->add_option("--p", p)->default_val(5);
  tp->add_option("--degree-cap", degree_cap);
  tp->add_option("--samples", samples);
  add_common(tp, common);

  auto* report = app.add_subcommand("report", "aggregate envelopes into tables");
  report->add_option("--dir", dir, "directory of envelopes")->required();
  report->add_option("--table-out", report_out, "directory for report.md and report.csv");
  add_common(report, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) params[key] = v;
  };
  if (height->parsed() || mahler->parsed()) {
    command = height->parsed() ? "height" : "mahler";
    set("poly", poly);
    set("file", file);
  } else if (rel->parsed()) {
    command = "rel";
    set("in", in);
  } else if (psplit->parsed()) {
    command = "padic split";
    set("poly", poly);
    params["p"] = p;
  } else if (tpsi->parsed()) {
    command = "tower psi";
    set("in", in);
    params["p"] = p;
    params["maxpower"] = maxpower;
    if (cutoff) params["cutoff"] = cutoff;
  } else if (beval->parsed()) {
    command = "bounds eval";
    set("variant", variant);
    set("psi", psi);
    set("local", local);
    set("primes", primes);
    set("ec", ec);
    set("cE", cE);
    if (cutoff) params["cutoff"] = cutoff;
  } else if (eh->parsed()) {
    command = "ec height";
    set("curve", curve);
    set("point", point);
    if (oracle) params["oracle"] = true;
  } else if (ex->parsed()) {
    command = "ec experiment";
    params["pairwise_configs"] = pair_configs;
    params["bernoulli_vectors"] = bern_vectors;
  } else if (tp->parsed()) {
    command = "family tpadic";
    params["p"] = p;
    params["degree_cap"] = degree_cap;
    params["samples"] = samples;
  } else if (report->parsed()) {
    command = "report";
    set("dir", dir);
    set("out", report_out);
  }

  try {
    hl::ExperimentConfig cfg;
    cfg.command = command;
    cfg.params = params;
    cfg.seed = common.seed;
    cfg.precision_bits = common.prec ? *common.prec : hl::default_precision_bits();
    hl::ResultEnvelope env = hl::run_command(cfg);
    if (common.out.empty()) {
      std::cout << env.dump();
    } else {
      std::cerr << hl::write_envelope(common.out, env) << "\n";
    }
    return hl::exit_code(env.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
