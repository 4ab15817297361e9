#include "beacon_forge/scenario_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "beacon_forge/error.hpp"

namespace beacon_forge {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorCode::ConfigParse, "unknown key '" + key + "' in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::ConfigParse, std::string("missing key '") + key + "' in " + where);
  return *it;
}

const json& require_object(const json& v, const std::string& where) {
  if (!v.is_object()) fail(ErrorCode::ConfigParse, where + " must be an object");
  return v;
}

std::uint64_t as_u64(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) fail(ErrorCode::ConfigParse, where + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) fail(ErrorCode::ConfigParse, where + " must be a number");
  return v.get<double>();
}

std::uint64_t parse_marker(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (!v.is_string()) fail(ErrorCode::ConfigParse, "marker must be an integer or hex string");
  std::string s = v.get<std::string>();
  if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) s = s.substr(2);
  if (s.empty() || s.size() > 16 || s.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    fail(ErrorCode::ConfigParse, "marker must be a hex string");
  }
  return std::stoull(s, nullptr, 16);
}

Honesty parse_honesty(const json& v) {
  if (!v.is_string()) fail(ErrorCode::ConfigParse, "honesty must be a string");
  const auto s = v.get<std::string>();
  if (s == "honest") return Honesty::Honest;
  if (s == "sabotaged_psrg") return Honesty::SabotagedPsrg;
  if (s == "adaptive_colluder") return Honesty::AdaptiveColluder;
  fail(ErrorCode::ConfigParse, "unknown honesty '" + s + "'");
}

CombinerKind parse_combiner(const json& v) {
  if (!v.is_string()) fail(ErrorCode::ConfigParse, "combiner must be a string");
  const auto s = v.get<std::string>();
  if (s == "xor") return CombinerKind::Xor;
  if (s == "time_sharing") return CombinerKind::TimeSharing;
  if (s == "hash") return CombinerKind::Hash;
  fail(ErrorCode::ConfigParse, "unknown combiner '" + s + "'");
}

AttackKind parse_attack_kind(const json& v) {
  if (!v.is_string()) fail(ErrorCode::ConfigParse, "attack kind must be a string");
  const auto s = v.get<std::string>();
  if (s == "adaptive_target") return AttackKind::AdaptiveTarget;
  if (s == "force_bits") return AttackKind::ForceBits;
  if (s == "bias") return AttackKind::Bias;
  fail(ErrorCode::ConfigParse, "unknown attack kind '" + s + "'");
}

unsigned as_small(const json& v, const std::string& where) {
  const auto x = as_u64(v, where);
  if (x > 1024) fail(ErrorCode::ConfigParse, where + " is out of range");
  return static_cast<unsigned>(x);
}

BeaconSpec parse_beacon(const json& obj, std::size_t id) {
  const std::string where = "beacons[" + std::to_string(id) + "]";
  require_object(obj, where);
  reject_unknown(obj, {"position", "phase_offset", "period", "honesty", "strategy_params"}, where);
  BeaconSpec b;
  b.position = as_real(require(obj, "position", where), where + ".position");
  if (obj.contains("phase_offset")) b.phase_offset = as_real(obj["phase_offset"], where + ".phase_offset");
  b.period = as_real(require(obj, "period", where), where + ".period");
  if (obj.contains("honesty")) b.honesty = parse_honesty(obj["honesty"]);

  json params = obj.contains("strategy_params") ? obj["strategy_params"] : json::object();
  if (params.is_null()) params = json::object();
  const std::string pwhere = where + ".strategy_params";
  require_object(params, pwhere);
  switch (b.honesty) {
    case Honesty::Honest:
      reject_unknown(params, {}, pwhere);
      break;
    case Honesty::SabotagedPsrg:
      reject_unknown(params, {"capture_length", "marker", "reseed_length"}, pwhere);
      if (params.contains("capture_length")) b.sabotage.capture_length = as_u64(params["capture_length"], pwhere);
      if (params.contains("reseed_length")) b.sabotage.reseed_length = as_u64(params["reseed_length"], pwhere);
      if (params.contains("marker")) b.sabotage.marker = parse_marker(params["marker"]);
      break;
    case Honesty::AdaptiveColluder:
      reject_unknown(params, {"target"}, pwhere);
      if (params.contains("target")) {
        const json& t = params["target"];
        if (!t.is_array()) fail(ErrorCode::ConfigParse, pwhere + ".target must be an array");
        for (const json& z : t) b.adaptive.target.push_back(as_u64(z, pwhere + ".target[]"));
      }
      break;
  }
  return b;
}

HashSpec parse_hash_spec(const json& obj) {
  require_object(obj, "hash_spec");
  reject_unknown(obj, {"algorithm", "output_bits", "attack"}, "hash_spec");
  HashSpec h;
  if (obj.contains("algorithm")) {
    if (!obj["algorithm"].is_string()) fail(ErrorCode::ConfigParse, "hash_spec.algorithm must be a string");
    h.algorithm = obj["algorithm"].get<std::string>();
  }
  if (obj.contains("output_bits")) h.output_bits = as_small(obj["output_bits"], "hash_spec.output_bits");
  if (obj.contains("attack") && !obj["attack"].is_null()) {
    const json& a = obj["attack"];
    require_object(a, "hash_spec.attack");
    reject_unknown(a, {"kind", "budget", "mask_bits", "bit_position", "forced_value"}, "hash_spec.attack");
    AttackConfig cfg;
    if (a.contains("kind")) cfg.kind = parse_attack_kind(a["kind"]);
    if (a.contains("budget")) cfg.budget = as_u64(a["budget"], "hash_spec.attack.budget");
    if (a.contains("mask_bits")) cfg.mask_bits = as_small(a["mask_bits"], "hash_spec.attack.mask_bits");
    if (a.contains("bit_position")) cfg.bit_position = as_small(a["bit_position"], "hash_spec.attack.bit_position");
    if (a.contains("forced_value")) cfg.forced_value = as_small(a["forced_value"], "hash_spec.attack.forced_value");
    h.attack = cfg;
  }
  return h;
}

std::string hex_marker(std::uint64_t m) {
  std::ostringstream os;
  os << "0x" << std::hex;
  os.width(10);
  os.fill('0');
  os << m;
  return os.str();
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigParse, std::string("invalid JSON: ") + e.what());
  }
  require_object(doc, "scenario");
  reject_unknown(doc, {"alphabet", "beacons", "length", "combiner", "hash_spec", "master_seed"}, "scenario");

  Scenario s;
  s.alphabet = Alphabet(as_u64(require(doc, "alphabet", "scenario"), "alphabet"));
  const json& beacons = require(doc, "beacons", "scenario");
  if (!beacons.is_array()) fail(ErrorCode::ConfigParse, "beacons must be an array");
  for (std::size_t i = 0; i < beacons.size(); ++i) s.beacons.push_back(parse_beacon(beacons[i], i));
  s.length = as_u64(require(doc, "length", "scenario"), "length");
  s.combiner = parse_combiner(require(doc, "combiner", "scenario"));
  if (doc.contains("hash_spec") && !doc["hash_spec"].is_null()) s.hash_spec = parse_hash_spec(doc["hash_spec"]);
  s.master_seed = as_u64(require(doc, "master_seed", "scenario"), "master_seed");
  return s;
}

ValidatedScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigParse, "cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate_scenario(parse_scenario(buf.str()));
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json doc;
  doc["alphabet"] = s.alphabet.size();
  ordered_json beacons = ordered_json::array();
  for (const BeaconSpec& b : s.beacons) {
    ordered_json o;
    o["position"] = b.position;
    o["phase_offset"] = b.phase_offset;
    o["period"] = b.period;
    o["honesty"] = to_string(b.honesty);
    ordered_json params = ordered_json::object();
    if (b.honesty == Honesty::SabotagedPsrg) {
      params["capture_length"] = b.sabotage.capture_length;
      params["reseed_length"] = b.sabotage.reseed_length;
      if (b.sabotage.marker) params["marker"] = hex_marker(*b.sabotage.marker);
    } else if (b.honesty == Honesty::AdaptiveColluder && !b.adaptive.target.empty()) {
      params["target"] = b.adaptive.target;
    }
    o["strategy_params"] = params;
    beacons.push_back(o);
  }
  doc["beacons"] = beacons;
  doc["length"] = s.length;
  doc["combiner"] = to_string(s.combiner);
  if (s.hash_spec) {
    ordered_json h;
    h["algorithm"] = s.hash_spec->algorithm;
    h["output_bits"] = s.hash_spec->output_bits;
    if (const auto& a = s.hash_spec->attack) {
      ordered_json ao;
      ao["kind"] = to_string(a->kind);
      if (a->budget) ao["budget"] = *a->budget;
      ao["mask_bits"] = a->mask_bits;
      ao["bit_position"] = a->bit_position;
      ao["forced_value"] = a->forced_value;
      h["attack"] = ao;
    }
    doc["hash_spec"] = h;
  } else {
    doc["hash_spec"] = nullptr;
  }
  doc["master_seed"] = s.master_seed;
  return doc.dump(2) + "\n";
}

}  // namespace beacon_forge
