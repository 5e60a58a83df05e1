#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

std::vector<std::complex<double>> roots(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  std::vector<std::complex<double>> out;
  if (c.size() < 2) return out;
  const int m = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) companion(0, j) = -c[static_cast<std::size_t>(j + 1)] / c[0];
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  for (int i = 0; i < m; ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

double root_distance(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = b.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

std::vector<double> zoh_first_order(const std::vector<double>& u, double gain, double tau, double ts, double y0,
                                    double u_offset) {
  const double pole = std::exp(-ts / tau);
  std::vector<double> y;
  double x = y0;
  for (double uk : u) {
    y.push_back(x);
    x = pole * x + (1.0 - pole) * (y0 + gain * (uk - u_offset));
  }
  return y;
}

std::vector<int> lfsr_bits(int n, const std::vector<int>& taps, std::uint32_t seed) {
  std::vector<int> reg(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) reg[static_cast<std::size_t>(i)] = (seed >> i) & 1u;
  const auto start = reg;
  std::vector<int> bits;
  do {
    bits.push_back(reg[static_cast<std::size_t>(n - 1)]);
    int fb = 0;
    for (int t : taps) fb ^= reg[static_cast<std::size_t>(t - 1)];
    for (int i = n - 1; i > 0; --i) reg[static_cast<std::size_t>(i)] = reg[static_cast<std::size_t>(i - 1)];
    reg[0] = fb;
  } while (reg != start && bits.size() < (1u << n) + 1);
  return bits;
}

std::complex<double> arx_response(const std::vector<double>& a, const std::vector<double>& b, double omega,
                                  double ts, int delay) {
  const std::complex<double> z1 = std::polar(1.0, -omega * ts);
  std::complex<double> num = 0.0, den = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) den += a[i] * std::pow(z1, static_cast<int>(i + 1));
  for (std::size_t j = 0; j < b.size(); ++j) num += b[j] * std::pow(z1, static_cast<int>(j + 1) + delay);
  return num / den;
}

std::vector<double> arx_simulate(const std::vector<double>& a, const std::vector<double>& b,
                                 const std::vector<double>& u, int delay) {
  std::vector<double> y(u.size(), 0.0);
  for (std::size_t t = 0; t < u.size(); ++t) {
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (t >= i + 1) v -= a[i] * y[t - i - 1];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t lag = j + 1 + static_cast<std::size_t>(delay);
      if (t >= lag) v += b[j] * u[t - lag];
    }
    y[t] = v;
  }
  return y;
}

}  // namespace oracle
