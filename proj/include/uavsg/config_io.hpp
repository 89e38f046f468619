#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "uavsg/error.hpp"
#include "uavsg/model.hpp"

namespace uavsg {

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace config_detail

/// Parses a real number; accepts `inf`. Throws ParseError.
inline double parse_real(const std::string& text, const std::string& what) {
  const std::string t = config_detail::trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ParseError(what + ": '" + text + "' is not a number");
  return v;
}

/// Shortest text that parses back to the same double.
inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// A settable configuration key. Densities with a `_per_km2` suffix are
/// converted to per m^2; `p_dbm` to watts.
struct ConfigKey {
  std::string name;
  std::string unit;
  std::function<void(NetworkConfig&, const std::string&)> set;
};

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    auto real = [&k](std::string name, std::string unit, double divisor, double NetworkConfig::*field) {
      k.push_back({name, unit, [=](NetworkConfig& c, const std::string& v) { c.*field = parse_real(v, name) / divisor; }});
    };
    real("lambda_uav", "per m^2", 1.0, &NetworkConfig::lambda_uav);
    real("lambda_uav_per_km2", "per km^2", 1e6, &NetworkConfig::lambda_uav);
    real("lambda_gu", "per m^2", 1.0, &NetworkConfig::lambda_gu);
    real("lambda_gu_per_km2", "per km^2", 1e6, &NetworkConfig::lambda_gu);
    real("hover_radius", "m", 1.0, &NetworkConfig::hover_radius);
    real("h_lower", "m", 1.0, &NetworkConfig::h_lower);
    real("h_upper", "m", 1.0, &NetworkConfig::h_upper);
    real("h_gu", "m", 1.0, &NetworkConfig::h_gu);
    real("alpha", "", 1.0, &NetworkConfig::alpha);
    real("tau", "linear", 1.0, &NetworkConfig::tau);
    real("tx_power", "W", 1.0, &NetworkConfig::tx_power);
    real("half_beamwidth", "rad", 1.0, &NetworkConfig::half_beamwidth);
    real("sim_region_radius", "m", 1.0, &NetworkConfig::sim_region_radius);
    k.push_back({"half_beamwidth_deg", "deg", [](NetworkConfig& c, const std::string& v) {
                   c.half_beamwidth = parse_real(v, "half_beamwidth_deg") * kPi / 180.0;
                 }});
    k.push_back({"p_dbm", "dBm", [](NetworkConfig& c, const std::string& v) { c.tx_power = dbm_to_watts(parse_real(v, "p_dbm")); }});
    k.push_back({"c_t", "bit/s/Hz", [](NetworkConfig& c, const std::string& v) { c.backhaul.c_t = parse_real(v, "c_t"); }});
    k.push_back({"r_m", "m", [](NetworkConfig& c, const std::string& v) { c.backhaul.r_m = parse_real(v, "r_m"); }});
    k.push_back({"r_m_m", "m", [](NetworkConfig& c, const std::string& v) { c.backhaul.r_m = parse_real(v, "r_m_m"); }});
    k.push_back({"eps_bar", "rad", [](NetworkConfig& c, const std::string& v) { c.backhaul.eps_bar = parse_real(v, "eps_bar"); }});
    k.push_back({"altitude_for_beam", "m", [](NetworkConfig& c, const std::string& v) {
                   c.backhaul.altitude_for_beam =
                       config_detail::trim(v) == "auto" ? std::nan("") : parse_real(v, "altitude_for_beam");
                 }});
    k.push_back({"seed", "", [](NetworkConfig& c, const std::string& v) {
                   const std::string t = config_detail::trim(v);
                   std::uint64_t s = 0;
                   const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
                   if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                     throw ParseError("seed: '" + v + "' is not an unsigned integer");
                   c.seed = s;
                 }});
    k.push_back({"pae_c", "", [](NetworkConfig& c, const std::string& v) {
                   if (config_detail::trim(v) == "none")
                     c.pae_c.reset();
                   else
                     c.pae_c = parse_real(v, "pae_c");
                 }});
    k.push_back({"rtna_projection_density", "active|total", [](NetworkConfig& c, const std::string& v) {
                   const std::string t = config_detail::trim(v);
                   if (t == "active")
                     c.rtna_projection_density = ProjectionDensity::active;
                   else if (t == "total")
                     c.rtna_projection_density = ProjectionDensity::total;
                   else
                     throw ParseError("rtna_projection_density: expected active or total, got '" + v + "'");
                 }});
    k.push_back({"altitude_mode", "common|independent", [](NetworkConfig& c, const std::string& v) {
                   const std::string t = config_detail::trim(v);
                   if (t == "common")
                     c.altitude_mode = AltitudeMode::common;
                   else if (t == "independent")
                     c.altitude_mode = AltitudeMode::independent;
                   else
                     throw ParseError("altitude_mode: expected common or independent, got '" + v + "'");
                 }});
    return k;
  }();
  return keys;
}

/// Altitude-difference band keys resolved after all other keys.
inline bool is_dh_key(const std::string& key) { return key == "dh_low_m" || key == "dh_high_m"; }

/// Applies one key to a configuration (no validation).
inline void set_config_value(NetworkConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "dh_low_m") {
    cfg.h_lower = cfg.h_gu + parse_real(value, key);
    return;
  }
  if (key == "dh_high_m") {
    cfg.h_upper = cfg.h_gu + parse_real(value, key);
    return;
  }
  for (const auto& k : config_keys())
    if (k.name == key) {
      k.set(cfg, value);
      return;
    }
  throw ParseError("unknown configuration key '" + key + "'");
}

inline bool is_config_key(const std::string& key) {
  if (is_dh_key(key)) return true;
  for (const auto& k : config_keys())
    if (k.name == key) return true;
  return false;
}

/// Parses `key = value` lines on top of `base`. `#` starts a comment.
inline NetworkConfig parse_config(const std::string& text, const std::string& source = "<string>",
                                  NetworkConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  std::vector<std::pair<std::string, std::string>> dh_keys;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = config_detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    const std::string key = config_detail::trim(body.substr(0, eq));
    const std::string value = config_detail::trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(where + ": missing key");
    if (!is_config_key(key)) throw ParseError(where + ": unknown key '" + key + "'");
    if (seen.count(key)) throw ParseError(where + ": duplicate key '" + key + "'");
    seen[key] = lineno;
    try {
      if (is_dh_key(key))
        dh_keys.emplace_back(key, value);
      else
        set_config_value(base, key, value);
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  for (const char* k : {"h_lower", "h_upper"})
    if (seen.count(k) && seen.count(std::string(k) == "h_lower" ? "dh_low_m" : "dh_high_m"))
      throw ParseError(source + ": both " + std::string(k) + " and its dh_ form given");
  for (const auto& [k, v] : dh_keys) set_config_value(base, k, v);
  try {
    base.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return base;
}

/// Reads and parses a configuration file.
inline NetworkConfig load_config(const std::string& path, NetworkConfig base = {}) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path, base);
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const NetworkConfig& c) {
  std::ostringstream o;
  auto kv = [&o](const char* k, const std::string& v) { o << k << " = " << v << "\n"; };
  kv("lambda_uav", format_real(c.lambda_uav));
  kv("lambda_gu", format_real(c.lambda_gu));
  kv("hover_radius", format_real(c.hover_radius));
  kv("h_gu", format_real(c.h_gu));
  kv("h_lower", format_real(c.h_lower));
  kv("h_upper", format_real(c.h_upper));
  kv("alpha", format_real(c.alpha));
  kv("tau", format_real(c.tau));
  kv("tx_power", format_real(c.tx_power));
  kv("half_beamwidth", format_real(c.half_beamwidth));
  kv("c_t", format_real(c.backhaul.c_t));
  kv("r_m", format_real(c.backhaul.r_m));
  kv("eps_bar", format_real(c.backhaul.eps_bar));
  kv("altitude_for_beam", std::isnan(c.backhaul.altitude_for_beam) ? "auto" : format_real(c.backhaul.altitude_for_beam));
  kv("seed", std::to_string(c.seed));
  kv("sim_region_radius", format_real(c.sim_region_radius));
  kv("pae_c", c.pae_c ? format_real(*c.pae_c) : "none");
  kv("rtna_projection_density", c.rtna_projection_density == ProjectionDensity::active ? "active" : "total");
  kv("altitude_mode", c.altitude_mode == AltitudeMode::common ? "common" : "independent");
  return o.str();
}

}  // namespace uavsg
