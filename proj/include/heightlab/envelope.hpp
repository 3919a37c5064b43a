#pragma once

#include <json.hpp>

#include <string>

#include "heightlab/real.hpp"

namespace hl {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

enum class Status { Ok, Inconclusive, Uncertified };
std::string to_string(Status s);
Status parse_status(const std::string& s);
int exit_code(Status s);
// Uncertified dominates inconclusive, which dominates ok.
Status worst(Status a, Status b);

struct ExperimentConfig {
  std::string command;
  json params = json::object();
  uint64_t seed = 1;
  long precision_bits = 64;

  json to_json() const;
  std::string hash() const;  // sha256 of the canonical config JSON, hex
};

struct ResultEnvelope {
  std::string command;
  std::string config_hash;
  std::string timestamp;
  json config;
  json payload = json::object();
  Status status = Status::Ok;

  json to_json() const;
  std::string dump() const;  // indent 2, trailing newline
  static ResultEnvelope from_json(const json& j);
};

ResultEnvelope make_envelope(const ExperimentConfig& cfg, json payload, Status status);

// SOURCE_DATE_EPOCH when set, otherwise the Unix epoch, so reruns are byte-identical.
std::string deterministic_timestamp();

// Writes <dir>/<command>-<hash prefix>.json; writes are serialized process-wide.
std::string write_envelope(const std::string& dir, const ResultEnvelope& env);

// Decimal strings with a fixed number of digits.
std::string dec(const Real& r, int digits = 12);
json dec(const Interval& x, int digits = 12);  // {"mid", "rad"}
std::string q_str(const mpq_class& q);

}  // namespace hl
