#include "valvelab/presets.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>

#include "valvelab/csv.hpp"
#include "valvelab/error.hpp"

namespace valvelab::plant {

namespace {

constexpr int kPresetCount = 8;
constexpr double kSpread = 0.2;

// Uniform in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double spread(std::mt19937_64& rng) { return 1.0 + kSpread * (2.0 * unit_uniform(rng) - 1.0); }

ValveParams nominal() {
  ValveParams p;
  p.spring_stiffness = 1.0;
  p.spring_rest_angle = 80.0;
  p.motor_gain = 1.0;
  p.viscous_coeff = 0.29;
  p.coulomb_open = 2.0;
  p.coulomb_close = 1.5;
  p.stiction_ratio = 1.3;
  p.angle_min = 0.0;
  p.angle_max = 95.0;
  p.adc_bits = 10;
  p.pwm_levels = 256;
  p.output_noise_std = 0.05;
  return p;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v))
    throw ConfigError("preset key '" + key + "': not a finite number: '" + value + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError("preset key '" + key + "': not an integer: '" + value + "'");
  return v;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (int i = 0; i < kPresetCount; ++i) names.push_back("valve" + std::to_string(i));
  return names;
}

ValveParams builtin_preset(const std::string& name) {
  int index = -1;
  for (int i = 0; i < kPresetCount; ++i)
    if (name == "valve" + std::to_string(i)) index = i;
  if (index < 0) throw ConfigError("unknown valve preset: '" + name + "'");

  ValveParams p = nominal();
  p.rng_seed = 1000 + static_cast<std::uint64_t>(index);
  if (index == 0) {
    p.spring_rest_angle = 90.0;
    p.motor_gain = 2.0;
    return p;
  }
  std::mt19937_64 rng(2024 + static_cast<std::uint64_t>(index));
  const double tau = p.time_constant() * spread(rng);
  p.spring_stiffness *= spread(rng);
  p.motor_gain *= spread(rng);
  p.coulomb_open *= spread(rng);
  p.coulomb_close *= spread(rng);
  p.stiction_ratio = 1.0 + (p.stiction_ratio - 1.0) * spread(rng);
  p.viscous_coeff = tau * p.spring_stiffness;
  return p;
}

std::vector<std::string> parameter_keys() {
  return {"spring_stiffness", "spring_rest_angle", "motor_gain", "viscous_coeff",   "coulomb_open",
          "coulomb_close",    "stiction_ratio",    "angle_min",  "angle_max",       "adc_bits",
          "pwm_levels",       "output_noise_std",  "rng_seed"};
}

void set_parameter(ValveParams& p, const std::string& key, const std::string& value) {
  if (key == "spring_stiffness") p.spring_stiffness = to_double(key, value);
  else if (key == "spring_rest_angle") p.spring_rest_angle = to_double(key, value);
  else if (key == "motor_gain") p.motor_gain = to_double(key, value);
  else if (key == "viscous_coeff") p.viscous_coeff = to_double(key, value);
  else if (key == "coulomb_open") p.coulomb_open = to_double(key, value);
  else if (key == "coulomb_close") p.coulomb_close = to_double(key, value);
  else if (key == "stiction_ratio") p.stiction_ratio = to_double(key, value);
  else if (key == "angle_min") p.angle_min = to_double(key, value);
  else if (key == "angle_max") p.angle_max = to_double(key, value);
  else if (key == "adc_bits") p.adc_bits = static_cast<int>(to_integer(key, value));
  else if (key == "pwm_levels") p.pwm_levels = static_cast<int>(to_integer(key, value));
  else if (key == "output_noise_std") p.output_noise_std = to_double(key, value);
  else if (key == "rng_seed") {
    const long long v = to_integer(key, value);
    if (v < 0) throw ConfigError("preset key 'rng_seed' must be non-negative");
    p.rng_seed = static_cast<std::uint64_t>(v);
  } else {
    throw ConfigError("unknown preset key: '" + key + "'");
  }
}

ValveParams parse_preset(const std::string& text) {
  ValveParams p;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("preset line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_parameter(p, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("preset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    p.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid preset: ") + e.what());
  }
  return p;
}

std::string format_preset(const ValveParams& p) {
  using csv::format_number;
  constexpr int d = 17;
  std::ostringstream out;
  out << "spring_stiffness = " << format_number(p.spring_stiffness, d) << '\n'
      << "spring_rest_angle = " << format_number(p.spring_rest_angle, d) << '\n'
      << "motor_gain = " << format_number(p.motor_gain, d) << '\n'
      << "viscous_coeff = " << format_number(p.viscous_coeff, d) << '\n'
      << "coulomb_open = " << format_number(p.coulomb_open, d) << '\n'
      << "coulomb_close = " << format_number(p.coulomb_close, d) << '\n'
      << "stiction_ratio = " << format_number(p.stiction_ratio, d) << '\n'
      << "angle_min = " << format_number(p.angle_min, d) << '\n'
      << "angle_max = " << format_number(p.angle_max, d) << '\n'
      << "adc_bits = " << p.adc_bits << '\n'
      << "pwm_levels = " << p.pwm_levels << '\n'
      << "output_noise_std = " << format_number(p.output_noise_std, d) << '\n'
      << "rng_seed = " << p.rng_seed << '\n';
  return out.str();
}

ValveParams load_preset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open preset file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_preset(ss.str());
}

ValveParams resolve_preset(const std::string& name_or_path) {
  if (name_or_path.rfind("valve", 0) == 0 && name_or_path.find('/') == std::string::npos &&
      name_or_path.find('.') == std::string::npos)
    return builtin_preset(name_or_path);
  return load_preset_file(name_or_path);
}

}  // namespace valvelab::plant
