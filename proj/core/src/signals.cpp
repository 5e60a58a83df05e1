#include "valvelab/signals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "valvelab/error.hpp"

namespace valvelab::signals {

namespace {

std::uint32_t mask_for(int n) { return n >= 32 ? 0xffffffffu : ((1u << n) - 1u); }

std::uint32_t shift(std::uint32_t state, int n, std::span<const int> taps) {
  std::uint32_t fb = 0;
  for (int t : taps) fb ^= (state >> (t - 1)) & 1u;
  return ((state << 1) | fb) & mask_for(n);
}

std::size_t samples_for(double duration, double ts, const char* what) {
  if (!(ts > 0.0) || !std::isfinite(ts)) throw InputError("sampling period must be positive");
  const double ratio = duration / ts;
  const double rounded = std::round(ratio);
  if (!(duration > 0.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw InputError(std::string(what) + " must be a positive multiple of Ts");
  return static_cast<std::size_t>(rounded);
}

}  // namespace

std::vector<int> default_taps(int n) {
  switch (n) {
    case 2: return {2, 1};
    case 3: return {3, 2};
    case 4: return {4, 3};
    case 5: return {5, 3};
    case 6: return {6, 5};
    case 7: return {7, 6};
    case 8: return {8, 6, 5, 4};
    case 9: return {9, 5};
    case 10: return {10, 7};
    case 11: return {11, 9};
    case 12: return {12, 6, 4, 1};
    case 13: return {13, 4, 3, 1};
    case 14: return {14, 5, 3, 1};
    case 15: return {15, 14};
    case 16: return {16, 15, 13, 4};
    default: throw ConfigError("no default PRBS taps for " + std::to_string(n) + " registers");
  }
}

std::size_t register_period(int n, std::span<const int> taps, std::uint32_t seed) {
  const std::uint32_t start = seed & mask_for(n);
  std::uint32_t s = start;
  std::size_t period = 0;
  const std::size_t limit = (std::size_t{1} << n);
  do {
    s = shift(s, n, taps);
    ++period;
  } while (s != start && period <= limit);
  return period;
}

std::vector<int> PrbsConfig::effective_taps() const { return taps.empty() ? default_taps(n_registers) : taps; }

std::size_t PrbsConfig::period_bits() const { return (std::size_t{1} << n_registers) - 1; }

void PrbsConfig::validate_register() const {
  if (n_registers < 2 || n_registers > 16) throw ConfigError("PRBS needs 2..16 registers");
  if (divider < 1) throw ConfigError("PRBS divider must be >= 1");
  if ((seed & mask_for(n_registers)) == 0) throw ConfigError("PRBS seed must not be all-zero");
  if ((seed & ~mask_for(n_registers)) != 0) throw ConfigError("PRBS seed has bits beyond the register length");
  const auto t = effective_taps();
  for (int tap : t)
    if (tap < 1 || tap > n_registers) throw ConfigError("PRBS tap out of range");
  if (register_period(n_registers, t, seed) != period_bits())
    throw ConfigError("PRBS taps do not give a maximal-length sequence");
  if (!std::isfinite(amplitude) || amplitude < 0.0) throw ConfigError("PRBS amplitude must be non-negative");
}

void PrbsConfig::validate() const {
  validate_register();
  if (!std::isfinite(offset) || offset - amplitude < 0.0 || offset + amplitude > 100.0)
    throw ConfigError("PRBS levels offset +/- amplitude must stay within [0, 100] %");
}

std::vector<std::uint8_t> prbs_bits(const PrbsConfig& cfg) {
  cfg.validate_register();
  const auto taps = cfg.effective_taps();
  std::vector<std::uint8_t> bits;
  bits.reserve(cfg.period_bits());
  std::uint32_t s = cfg.seed;
  for (std::size_t i = 0; i < cfg.period_bits(); ++i) {
    bits.push_back(static_cast<std::uint8_t>((s >> (cfg.n_registers - 1)) & 1u));
    s = shift(s, cfg.n_registers, taps);
  }
  return bits;
}

namespace {

std::vector<double> levels(const PrbsConfig& cfg, std::size_t length, double low, double high) {
  const auto table = prbs_bits(cfg);
  std::vector<double> out;
  out.reserve(length);
  const auto p = static_cast<std::size_t>(cfg.divider);
  for (std::size_t k = 0; k < length; ++k) out.push_back(table[(k / p) % table.size()] ? high : low);
  return out;
}

}  // namespace

std::vector<double> prbs_generate(const PrbsConfig& cfg, std::size_t length) {
  if (length < 1) throw InputError("prbs_generate: length must be >= 1");
  cfg.validate();
  return levels(cfg, length, cfg.offset - cfg.amplitude, cfg.offset + cfg.amplitude);
}

std::vector<double> prbs_excitation(const PrbsConfig& cfg, std::size_t length) {
  if (length == 0) return {};
  return levels(cfg, length, -cfg.amplitude, cfg.amplitude);
}

bool check_prbs_constraint(const PrbsConfig& cfg, double ts, double rise_time) {
  if (!(ts > 0.0)) throw InputError("check_prbs_constraint: Ts must be positive");
  if (!(rise_time >= 0.0)) throw InputError("check_prbs_constraint: rise time must be non-negative");
  return cfg.divider * cfg.n_registers * ts > rise_time;
}

std::vector<double> step_sequence(std::span<const double> levels, double hold, double ts) {
  const std::size_t per = samples_for(hold, ts, "hold");
  std::vector<double> out;
  out.reserve(per * levels.size());
  for (double level : levels) out.insert(out.end(), per, level);
  return out;
}

std::vector<double> up_down_levels(double low, double high, double step) {
  if (!(step > 0.0) || !(high >= low)) throw InputError("up_down_levels: need step > 0 and high >= low");
  const auto n = static_cast<std::size_t>(std::floor((high - low) / step + 1e-9));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(low + step * static_cast<double>(i));
  for (std::size_t i = n; i-- > 0;) out.push_back(low + step * static_cast<double>(i));
  return out;
}

double rise_time(std::span<const double> y, double ts, std::size_t start, std::size_t tail) {
  if (y.size() < start + 2 || tail == 0 || tail > y.size() - start)
    throw InputError("rise_time: response too short");
  const double y0 = y[start];
  double yf = 0.0;
  for (std::size_t i = y.size() - tail; i < y.size(); ++i) yf += y[i];
  yf /= static_cast<double>(tail);
  const double delta = yf - y0;
  if (delta == 0.0) throw InputError("rise_time: response does not move");

  auto crossing = [&](double fraction) {
    const double level = fraction;
    for (std::size_t i = start + 1; i < y.size(); ++i) {
      const double prev = (y[i - 1] - y0) / delta;
      const double cur = (y[i] - y0) / delta;
      if (cur >= level) {
        const double frac = cur == prev ? 0.0 : (level - prev) / (cur - prev);
        return (static_cast<double>(i - 1 - start) + frac) * ts;
      }
    }
    throw InputError("rise_time: response never reaches the 90% level");
  };
  return crossing(0.9) - crossing(0.1);
}

}  // namespace valvelab::signals
