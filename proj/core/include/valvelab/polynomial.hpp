#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace valvelab {

/**
 * Polynomial in the unit-delay operator q^-1:
 *
 *   P(q^-1) = c0 + c1 q^-1 + ... + cm q^-m
 *
 * Used for plant (A, B), controller (R, S, T, fixed parts) and closed-loop (P)
 * polynomials. Trailing zero coefficients are kept as given so that callers can
 * reason about declared lengths; degree() reports the last nonzero index.
 */
class DelayPolynomial {
 public:
  DelayPolynomial() = default;
  DelayPolynomial(std::initializer_list<double> coefficients);
  explicit DelayPolynomial(std::vector<double> coefficients);

  static DelayPolynomial one() { return DelayPolynomial{1.0}; }
  /// q^-d
  static DelayPolynomial delay(std::size_t d);
  /// 1 - q^-1
  static DelayPolynomial integrator() { return DelayPolynomial{1.0, -1.0}; }
  /// 1 + q^-1, zero gain at half the sampling frequency.
  static DelayPolynomial nyquist_opening() { return DelayPolynomial{1.0, 1.0}; }

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }

  /// Coefficient of q^-k, zero beyond the stored length.
  double operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

  /// Index of the last nonzero coefficient, -1 for the zero polynomial.
  int degree() const noexcept;
  bool is_zero() const noexcept { return degree() < 0; }

  /// Evaluate with q^-1 replaced by `x`.
  double at(double x) const noexcept;
  std::complex<double> at(std::complex<double> x) const noexcept;

  /// Drops trailing zero coefficients.
  DelayPolynomial trimmed() const;

  DelayPolynomial& operator+=(const DelayPolynomial& rhs);
  DelayPolynomial& operator-=(const DelayPolynomial& rhs);
  DelayPolynomial& operator*=(double scale);

  friend DelayPolynomial operator+(DelayPolynomial lhs, const DelayPolynomial& rhs) { return lhs += rhs; }
  friend DelayPolynomial operator-(DelayPolynomial lhs, const DelayPolynomial& rhs) { return lhs -= rhs; }
  friend DelayPolynomial operator*(DelayPolynomial lhs, double scale) { return lhs *= scale; }
  friend DelayPolynomial operator*(double scale, DelayPolynomial rhs) { return rhs *= scale; }
  friend DelayPolynomial operator*(const DelayPolynomial& lhs, const DelayPolynomial& rhs);

  friend bool operator==(const DelayPolynomial& lhs, const DelayPolynomial& rhs) { return lhs.coeffs_ == rhs.coeffs_; }

  /// Largest absolute coefficient difference, treating missing entries as zero.
  friend double max_abs_difference(const DelayPolynomial& lhs, const DelayPolynomial& rhs);

  /// Maps an ARX parameter block a1..an to A = 1 + a1 q^-1 + ... + an q^-n.
  static DelayPolynomial monic_from(const std::vector<double>& tail);

 private:
  std::vector<double> coeffs_;
};

/// Space-separated coefficients with the given number of significant digits.
std::string format_coefficients(const DelayPolynomial& p, int digits = 17);

/// Parses whitespace- or comma-separated coefficients; throws InputError on garbage.
DelayPolynomial parse_coefficients(const std::string& text);

/**
 * e^{-j·pi·x}: the value of q^-1 on the unit circle at normalized frequency
 * x = omega·Ts/pi. Exact at x = 0 and x = 1 so that fixed factors such as
 * 1 - q^-1 and 1 + q^-1 vanish without rounding residue.
 */
std::complex<double> unit_delay_at(double normalized_frequency);

}  // namespace valvelab
