#include "lglab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace lglab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("line " + std::to_string(line) + ": key '" + key +
                       "' expects a finite number, got '" + value + "'");
  }
}

long long parse_count(const std::string& value, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("line " + std::to_string(line) + ": key '" + key +
                       "' expects an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw config_error("line " + std::to_string(line) + ": key '" + key +
                     "' expects true or false, got '" + value + "'");
}

}  // namespace

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Projective:
      return "projective";
    case Protocol::Inm:
      return "inm";
    case Protocol::Ctvm:
    default:
      return "ctvm";
  }
}

const char* bound_mode_name(BoundMode m) {
  return m == BoundMode::Zero ? "zero" : "ctvm_shifted";
}

void ExperimentConfig::validate() const {
  if (!(omega > 0.0)) throw config_error("field omega: must be positive");
  if (!(omega_t > 0.0)) throw config_error("field omega_t: must be positive");
  if (!(times[0] < times[1] && times[1] < times[2])) {
    throw config_error("field times: must be strictly increasing");
  }
  if (times[0] < 0.0) throw config_error("field times: must be nonnegative");
  if (initial.norm2() > 1.0 + 1e-12) {
    throw config_error("field initial: Bloch vector outside the unit ball");
  }
  if (protocol == Protocol::Ctvm) {
    if (!(lambda > 0.0)) {
      throw config_error("field lambda: protocol ctvm requires lambda > 0");
    }
    if (relaxation) {
      throw config_error("field relaxation: not supported with protocol ctvm");
    }
  }
  if (bound_mode == BoundMode::CtvmShifted && !(lambda > 0.0)) {
    throw config_error("field bound_mode: ctvm_shifted requires lambda > 0");
  }
  if (shots && *shots < 1) throw config_error("field shots: must be >= 1");
  if (calibrate_q2 && !relaxation) {
    throw config_error("field relaxation.calibrate_q2: requires relaxation.t1/.t2");
  }
  if (relaxation) relaxation->validate();
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::pair<std::string, int>> kv;
  {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const std::string entry = trim(raw);
      if (entry.empty()) continue;
      const size_t eq = entry.find('=');
      if (eq == std::string::npos) {
        throw config_error("line " + std::to_string(line) + ": expected key = value");
      }
      const std::string key = trim(entry.substr(0, eq));
      const std::string value = trim(entry.substr(eq + 1));
      if (key.empty() || value.empty()) {
        throw config_error("line " + std::to_string(line) + ": expected key = value");
      }
      if (kv.count(key)) {
        throw config_error("line " + std::to_string(line) + ": duplicate key '" + key + "'");
      }
      kv[key] = {value, line};
    }
  }

  static const std::vector<std::string> kKnown = {
      "omega",          "omega_t",
      "times",          "initial.vx",
      "initial.vy",     "initial.vz",
      "protocol",       "lambda",
      "shots",          "seed",
      "bound_mode",     "relaxation.t1",
      "relaxation.t2",  "relaxation.delay",
      "relaxation.equilibrium_z", "relaxation.ancilla",
      "relaxation.calibrate_q2"};
  for (const auto& [key, vl] : kv) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw config_error("line " + std::to_string(vl.second) + ": unknown key '" + key + "'");
    }
  }

  auto get = [&kv](const std::string& key) -> std::optional<std::pair<std::string, int>> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&get](const std::string& key) {
    const auto v = get(key);
    if (!v) throw config_error("missing required key " + key);
    return *v;
  };

  ExperimentConfig cfg;
  {
    const auto [value, line] = require("omega_t");
    cfg.omega_t = parse_double(value, "omega_t", line);
  }
  if (const auto v = get("omega")) cfg.omega = parse_double(v->first, "omega", v->second);
  if (const auto v = get("times")) {
    std::istringstream ts(v->first);
    std::string part;
    std::vector<double> parts;
    while (std::getline(ts, part, ',')) {
      parts.push_back(parse_double(trim(part), "times", v->second));
    }
    if (parts.size() != 3) {
      throw config_error("line " + std::to_string(v->second) +
                         ": times expects three comma-separated multipliers");
    }
    cfg.times = {parts[0], parts[1], parts[2]};
  }
  {
    const auto [vx, lx] = require("initial.vx");
    const auto [vy, ly] = require("initial.vy");
    const auto [vz, lz] = require("initial.vz");
    cfg.initial.vx = parse_double(vx, "initial.vx", lx);
    cfg.initial.vy = parse_double(vy, "initial.vy", ly);
    cfg.initial.vz = parse_double(vz, "initial.vz", lz);
  }
  {
    const auto [value, line] = require("protocol");
    if (value == "projective") {
      cfg.protocol = Protocol::Projective;
    } else if (value == "inm") {
      cfg.protocol = Protocol::Inm;
    } else if (value == "ctvm") {
      cfg.protocol = Protocol::Ctvm;
    } else {
      throw config_error("line " + std::to_string(line) + ": unknown protocol '" + value +
                         "'");
    }
  }
  if (const auto v = get("lambda")) cfg.lambda = parse_double(v->first, "lambda", v->second);
  if (const auto v = get("shots")) {
    cfg.shots = parse_count(v->first, "shots", v->second);
  }
  if (const auto v = get("seed")) {
    cfg.seed = static_cast<std::uint64_t>(parse_count(v->first, "seed", v->second));
  }
  if (const auto v = get("bound_mode")) {
    if (v->first == "zero") {
      cfg.bound_mode = BoundMode::Zero;
    } else if (v->first == "ctvm_shifted") {
      cfg.bound_mode = BoundMode::CtvmShifted;
    } else {
      throw config_error("line " + std::to_string(v->second) + ": unknown bound_mode '" +
                         v->first + "'");
    }
  }

  const bool has_relaxation = get("relaxation.t1") || get("relaxation.t2") ||
                              get("relaxation.delay") || get("relaxation.equilibrium_z") ||
                              get("relaxation.ancilla") || get("relaxation.calibrate_q2");
  if (has_relaxation) {
    noise::RelaxationParams params;
    {
      const auto [value, line] = require("relaxation.t1");
      params.t1 = parse_double(value, "relaxation.t1", line);
    }
    {
      const auto [value, line] = require("relaxation.t2");
      params.t2 = parse_double(value, "relaxation.t2", line);
    }
    if (const auto v = get("relaxation.delay")) {
      params.delay = parse_double(v->first, "relaxation.delay", v->second);
    }
    if (const auto v = get("relaxation.equilibrium_z")) {
      params.equilibrium_z = parse_double(v->first, "relaxation.equilibrium_z", v->second);
    }
    if (const auto v = get("relaxation.ancilla")) {
      params.ancilla_relaxation = parse_bool(v->first, "relaxation.ancilla", v->second);
    }
    if (const auto v = get("relaxation.calibrate_q2")) {
      cfg.calibrate_q2 = parse_double(v->first, "relaxation.calibrate_q2", v->second);
    }
    cfg.relaxation = params;
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace lglab::cli
