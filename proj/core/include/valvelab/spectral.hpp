#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "valvelab/csv.hpp"
#include "valvelab/polynomial.hpp"

namespace valvelab::spectral {

struct FrequencyResponse {
  std::vector<double> omega;                 ///< rad/s, ascending, in (0, pi/Ts]
  std::vector<std::complex<double>> values;  ///< dimensionless gain
  double ts = 0.0;

  std::size_t size() const { return omega.size(); }
  void validate() const;

  /// omega_rad_s, mag_db, phase_deg
  csv::Table to_table() const;
};

/// 20 log10 |x|, reported as -400 dB for an exact zero.
double to_db(std::complex<double> x);

/// Bins 0..N-1 of the discrete Fourier transform (direct evaluation).
std::vector<std::complex<double>> dft(std::span<const double> x);

/**
 * Empirical transfer function estimate DFT(y)/DFT(u) at bins 1..N/2 after
 * removing the mean of both records. Bins where the input carries no energy
 * (|U| <= 1e-12 N) are omitted.
 */
FrequencyResponse etfe(std::span<const double> u, std::span<const double> y, double ts);

/// Hann taps of odd length `size`, all strictly positive, summing to one.
std::vector<double> hann_weights(std::size_t size);

/**
 * Complex moving average with Hann weights; the window is truncated and
 * renormalized at both ends. size = 1 is the identity.
 */
FrequencyResponse smooth(const FrequencyResponse& fr, std::size_t size);

/// Least-squares slope of 20 log10 |G| against log10 omega over bins in [low, high].
double slope_fit(const FrequencyResponse& fr, double low, double high);

/**
 * First frequency where the magnitude falls 3 dB below its low-frequency
 * level, the mean dB value of the first `reference_bins` bins.
 */
double corner_frequency(const FrequencyResponse& fr, std::size_t reference_bins = 5);

/// Frequency response of num/den (polynomials in q^-1) at the given frequencies.
FrequencyResponse evaluate(const DelayPolynomial& num, const DelayPolynomial& den, std::span<const double> omega,
                           double ts);

}  // namespace valvelab::spectral
