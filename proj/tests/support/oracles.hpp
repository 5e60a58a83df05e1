#pragma once

// Independent reference computations used to check the library.

#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

/// Coefficient convolution of two q^-1 polynomials.
std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b);

/**
 * Roots in z of c0 + c1 z^-1 + ... + cm z^-m (trailing zeros dropped), from
 * the eigenvalues of the companion matrix, sorted by (real, imag).
 */
std::vector<std::complex<double>> roots(std::vector<double> c);

/// Largest distance after pairing each root of `a` with its nearest unused root of `b`.
double root_distance(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b);

/// gain * (1 - e^{-Ts/tau}) q^-1 / (1 - e^{-Ts/tau} q^-1) applied to u, starting from y0.
std::vector<double> zoh_first_order(const std::vector<double>& u, double gain, double tau, double ts, double y0,
                                    double u_offset = 0.0);

/// Bits of an LFSR, counted by brute force: shift left, feedback = XOR of tapped bits (1-based), output bit n.
std::vector<int> lfsr_bits(int n, const std::vector<int>& taps, std::uint32_t seed);

/// Frequency response of (b1 z^-1 + ...)/(1 + a1 z^-1 + ...) at omega (rad/s).
std::complex<double> arx_response(const std::vector<double>& a, const std::vector<double>& b, double omega,
                                  double ts, int delay = 0);

/// Simulates a stable ARX plant by the plain difference equation.
std::vector<double> arx_simulate(const std::vector<double>& a, const std::vector<double>& b,
                                 const std::vector<double>& u, int delay = 0);

}  // namespace oracle
