#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace valvelab::signals {

/**
 * Maximal-length PRBS from an Nr-stage Fibonacci shift register.
 *
 * Registers are numbered 1..Nr; the feedback bit is the XOR of the tapped
 * registers and enters register 1, the output is register Nr. Each logical bit
 * is held for `divider` samples. The generated levels are offset +/- amplitude.
 */
struct PrbsConfig {
  int n_registers = 9;
  std::vector<int> taps;        ///< empty: default taps for n_registers
  int divider = 2;              ///< p, samples per PRBS bit
  std::uint32_t seed = 1;       ///< initial register state, bit i-1 is register i
  double offset = 16.0;         ///< PWM %
  double amplitude = 12.0;      ///< PWM %

  /// Throws ConfigError (all-zero seed, non-maximal taps, levels outside [0, 100]).
  void validate() const;
  /// Same checks without the [0, 100] level bound, for zero-mean excitations.
  void validate_register() const;
  std::vector<int> effective_taps() const;
  /// 2^Nr - 1
  std::size_t period_bits() const;
  std::size_t period_samples() const { return period_bits() * static_cast<std::size_t>(divider); }
};

/// Primitive feedback taps for 2 <= Nr <= 16.
std::vector<int> default_taps(int n_registers);

/// Runs the register from `seed` until it repeats; returns the period.
std::size_t register_period(int n_registers, std::span<const int> taps, std::uint32_t seed);

/// One period of logical bits (0/1), precomputed as a table.
std::vector<std::uint8_t> prbs_bits(const PrbsConfig& cfg);

/// Sampled binary sequence offset +/- amplitude of the given length.
std::vector<double> prbs_generate(const PrbsConfig& cfg, std::size_t length);

/// Zero-mean +/- amplitude sequence for injection at the plant input.
std::vector<double> prbs_excitation(const PrbsConfig& cfg, std::size_t length);

/// Longest constant run p * Nr * Ts must exceed the rise time t_R.
bool check_prbs_constraint(const PrbsConfig& cfg, double ts, double rise_time);

/// Piecewise-constant sequence, each level held for hold / Ts samples.
std::vector<double> step_sequence(std::span<const double> levels, double hold, double ts);

/// Levels from `low` up to `high` and back in steps of `step` (high visited once).
std::vector<double> up_down_levels(double low, double high, double step);

/**
 * 10% -> 90% rise time of a step response, with linear interpolation between
 * samples. The step starts at sample `start`; initial and final values are
 * the sample at `start` and the mean of the last `tail` samples.
 */
double rise_time(std::span<const double> y, double ts, std::size_t start = 0, std::size_t tail = 5);

}  // namespace valvelab::signals
