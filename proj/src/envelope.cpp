#include "heightlab/envelope.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace hl {

std::string to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Inconclusive: return "inconclusive";
    case Status::Uncertified: return "uncertified";
  }
  return "ok";
}

Status parse_status(const std::string& s) {
  if (s == "ok") return Status::Ok;
  if (s == "inconclusive") return Status::Inconclusive;
  if (s == "uncertified") return Status::Uncertified;
  throw std::invalid_argument("unknown status '" + s + "'");
}

int exit_code(Status s) {
  switch (s) {
    case Status::Ok: return 0;
    case Status::Inconclusive: return 2;
    case Status::Uncertified: return 3;
  }
  return 1;
}

Status worst(Status a, Status b) {
  auto rank = [](Status s) { return s == Status::Ok ? 0 : s == Status::Inconclusive ? 1 : 2; };
  return rank(a) >= rank(b) ? a : b;
}

json ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  j["seed"] = seed;
  j["precision_bits"] = precision_bits;
  j["params"] = params;
  return j;
}

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace

std::string ExperimentConfig::hash() const { return sha256_hex(to_json().dump()); }

json ResultEnvelope::to_json() const {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["timestamp"] = timestamp;
  j["config"] = config;
  j["status"] = hl::to_string(status);
  j["payload"] = payload;
  return j;
}

std::string ResultEnvelope::dump() const { return to_json().dump(2) + "\n"; }

ResultEnvelope ResultEnvelope::from_json(const json& j) {
  if (!j.contains("schema") || j.at("schema").get<int>() != kSchemaVersion) {
    throw std::invalid_argument("unsupported envelope schema");
  }
  ResultEnvelope e;
  e.command = j.at("command").get<std::string>();
  e.config_hash = j.at("config_hash").get<std::string>();
  e.timestamp = j.at("timestamp").get<std::string>();
  e.config = j.at("config");
  e.payload = j.at("payload");
  e.status = parse_status(j.at("status").get<std::string>());
  return e;
}

std::string deterministic_timestamp() {
  std::time_t t = 0;
  if (const char* s = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(s, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ResultEnvelope make_envelope(const ExperimentConfig& cfg, json payload, Status status) {
  ResultEnvelope e;
  e.command = cfg.command;
  e.config = cfg.to_json();
  e.config_hash = cfg.hash();
  e.timestamp = deterministic_timestamp();
  e.payload = std::move(payload);
  e.status = status;
  return e;
}

std::string write_envelope(const std::string& dir, const ResultEnvelope& env) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::filesystem::create_directories(dir);
  std::string name = env.command;
  for (char& c : name) {
    if (c == ' ') c = '-';
  }
  std::filesystem::path path = std::filesystem::path(dir) / (name + "-" + env.config_hash.substr(0, 12) + ".json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << env.dump();
  return path.string();
}

std::string dec(const Real& r, int digits) { return r.to_fixed(digits); }

json dec(const Interval& x, int digits) {
  json j;
  j["mid"] = x.mid().to_fixed(digits);
  Real rad = x.width();
  mpfr_div_2ui(rad.get(), rad.get(), 1, MPFR_RNDU);
  j["rad"] = rad.to_sci(3);
  return j;
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

}  // namespace hl
