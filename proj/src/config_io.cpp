#include "coopsense/config_io.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace coopsense {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ValidationError("bad number for key '" + key + "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ValidationError("bad integer for key '" + key + "': " + v);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ValidationError("bad unsigned integer for key '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("bad boolean for key '" + key + "': " + v);
}

std::vector<std::string> split_csv(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!v.empty() && v.back() == ',') out.push_back("");
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_csv(v)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_csv(v)) out.push_back(parse_int(key, item));
  return out;
}

Vec2 parse_vec2(const std::string& key, const std::string& v) {
  const auto items = parse_double_list(key, v);
  if (items.size() != 2)
    throw ValidationError("key '" + key + "' needs exactly two numbers");
  return {items[0], items[1]};
}

std::vector<Vec2> parse_vec2_list(const std::string& key, const std::string& v) {
  const auto items = parse_double_list(key, v);
  if (items.size() % 2 != 0)
    throw ValidationError("key '" + key + "' needs an even number count");
  std::vector<Vec2> out;
  for (size_t i = 0; i + 1 < items.size(); i += 2)
    out.emplace_back(items[i], items[i + 1]);
  return out;
}

std::vector<Mode> parse_modes(const std::string& key, const std::string& v) {
  std::vector<Mode> out;
  for (const auto& item : split_csv(v)) {
    const auto m = mode_from_name(item);
    if (!m) throw ValidationError("unknown mode for key '" + key + "': " + item);
    out.push_back(*m);
  }
  return out;
}

using Setter = std::function<void(HarnessConfig&, const std::string& key,
                                  const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"carrier_hz", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.ofdm.carrier_hz = parse_double(k, v);
       }},
      {"bandwidth_hz", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.ofdm.bandwidth_hz = parse_double(k, v);
       }},
      {"subcarriers", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.ofdm.subcarriers = parse_int(k, v);
       }},
      {"symbols", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.ofdm.symbols = parse_int(k, v);
       }},
      {"symbol_duration_s", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.ofdm.symbol_duration_s = parse_double(k, v);
       }},
      {"range_min_m", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.grid.range_min_m = parse_double(k, v);
       }},
      {"range_max_m", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.grid.range_max_m = parse_double(k, v);
       }},
      {"range_count", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.grid.range_count = parse_int(k, v);
       }},
      {"velocity_min_mps", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.grid.velocity_min_mps = parse_double(k, v);
       }},
      {"velocity_max_mps", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.grid.velocity_max_mps = parse_double(k, v);
       }},
      {"velocity_count", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.grid.velocity_count = parse_int(k, v);
       }},
      {"location_half_extent", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.location_lattice.half_extent = parse_double(k, v);
       }},
      {"location_spacing", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.location_lattice.spacing = parse_double(k, v);
       }},
      {"location_refine_half_extent", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.location_lattice.refine_half_extent = parse_double(k, v);
       }},
      {"location_refine_spacing", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.location_lattice.refine_spacing = parse_double(k, v);
       }},
      {"velocity_half_extent", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.velocity_lattice.half_extent = parse_double(k, v);
       }},
      {"velocity_spacing", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.velocity_lattice.spacing = parse_double(k, v);
       }},
      {"velocity_refine_half_extent", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.velocity_lattice.refine_half_extent = parse_double(k, v);
       }},
      {"velocity_refine_spacing", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.velocity_lattice.refine_spacing = parse_double(k, v);
       }},
      {"zone_min", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.zone_min = parse_vec2(k, v);
       }},
      {"zone_max", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.zone_max = parse_vec2(k, v);
       }},
      {"target_speed_mps", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.target_speed_mps = parse_double(k, v);
       }},
      {"bs_arc_radius_m", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.bs_arc_radius_m = parse_double(k, v);
       }},
      {"region_center", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.region.center = parse_vec2(k, v);
       }},
      {"region_radius", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.region.radius = parse_double(k, v);
       }},
      {"explicit_bs", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.explicit_bs = parse_vec2_list(k, v);
       }},
      {"gain_magnitudes", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.gain_magnitudes = parse_double_list(k, v);
       }},
      {"snr_dbs", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.snr_dbs = parse_double_list(k, v);
       }},
      {"bs_counts", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.bs_counts = parse_int_list(k, v);
       }},
      {"theta_degs", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.theta_degs = parse_double_list(k, v);
       }},
      {"modes", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.modes = parse_modes(k, v);
       }},
      {"trials", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.trials = parse_int(k, v);
       }},
      {"master_seed", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.master_seed = parse_u64(k, v);
       }},
      {"noiseless", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.noiseless = parse_bool(k, v);
       }},
      {"workers", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.workers = parse_int(k, v);
       }},
      {"fixed_target", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.fixed_target = parse_vec2(k, v);
       }},
      {"fixed_velocity", [](HarnessConfig& c, const std::string& k, const std::string& v) {
         c.fixed_velocity = parse_vec2(k, v);
       }},
  };
  return table;
}

}  // namespace

void apply_config_stream(std::istream& is, HarnessConfig& cfg) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            " has no '='");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ValidationError("config line " + std::to_string(line_no) +
                            " has an empty key");
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ValidationError("unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
}

HarnessConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  HarnessConfig cfg;
  apply_config_stream(in, cfg);
  return cfg;
}

}  // namespace coopsense
