#include "valvelab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "valvelab/error.hpp"

namespace valvelab {

DelayPolynomial::DelayPolynomial(std::initializer_list<double> coefficients) : coeffs_(coefficients) {}

DelayPolynomial::DelayPolynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {}

DelayPolynomial DelayPolynomial::delay(std::size_t d) {
  std::vector<double> c(d + 1, 0.0);
  c[d] = 1.0;
  return DelayPolynomial(std::move(c));
}

DelayPolynomial DelayPolynomial::monic_from(const std::vector<double>& tail) {
  std::vector<double> c;
  c.reserve(tail.size() + 1);
  c.push_back(1.0);
  c.insert(c.end(), tail.begin(), tail.end());
  return DelayPolynomial(std::move(c));
}

int DelayPolynomial::degree() const noexcept {
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (coeffs_[i] != 0.0) return static_cast<int>(i);
  }
  return -1;
}

double DelayPolynomial::at(double x) const noexcept {
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

std::complex<double> DelayPolynomial::at(std::complex<double> x) const noexcept {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

DelayPolynomial DelayPolynomial::trimmed() const {
  const int deg = degree();
  return DelayPolynomial(std::vector<double>(coeffs_.begin(), coeffs_.begin() + (deg + 1)));
}

DelayPolynomial& DelayPolynomial::operator+=(const DelayPolynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

DelayPolynomial& DelayPolynomial::operator-=(const DelayPolynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

DelayPolynomial& DelayPolynomial::operator*=(double scale) {
  for (double& c : coeffs_) c *= scale;
  return *this;
}

DelayPolynomial operator*(const DelayPolynomial& lhs, const DelayPolynomial& rhs) {
  if (lhs.empty() || rhs.empty()) return {};
  std::vector<double> out(lhs.size() + rhs.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < rhs.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
  return DelayPolynomial(std::move(out));
}

double max_abs_difference(const DelayPolynomial& lhs, const DelayPolynomial& rhs) {
  const std::size_t n = std::max(lhs.size(), rhs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  return worst;
}

std::string format_coefficients(const DelayPolynomial& p, int digits) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, p[i]);
    if (i) out += ' ';
    out += buf;
  }
  return out;
}

DelayPolynomial parse_coefficients(const std::string& text) {
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<double> c;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + token + "'");
    }
    if (used != token.size() || !std::isfinite(value)) throw InputError("not a finite number: '" + token + "'");
    c.push_back(value);
  }
  if (c.empty()) throw InputError("no coefficients given");
  return DelayPolynomial(std::move(c));
}

std::complex<double> unit_delay_at(double normalized_frequency) {
  if (normalized_frequency == 0.0) return {1.0, 0.0};
  if (normalized_frequency == 1.0) return {-1.0, 0.0};
  const double angle = std::numbers::pi * normalized_frequency;
  return {std::cos(angle), -std::sin(angle)};
}

}  // namespace valvelab
