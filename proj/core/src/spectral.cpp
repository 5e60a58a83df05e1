#include "valvelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "valvelab/error.hpp"

namespace valvelab::spectral {

void FrequencyResponse::validate() const {
  if (omega.size() != values.size()) throw InputError("frequency response: length mismatch");
  if (!(ts > 0.0)) throw InputError("frequency response: Ts must be positive");
  const double nyquist = std::numbers::pi / ts;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0) || omega[i] > nyquist * (1.0 + 1e-12))
      throw InputError("frequency response: frequencies must lie in (0, pi/Ts]");
    if (i && !(omega[i] > omega[i - 1])) throw InputError("frequency response: frequencies must ascend");
  }
}

csv::Table FrequencyResponse::to_table() const {
  csv::Table t;
  t.header = {"omega_rad_s", "mag_db", "phase_deg"};
  for (std::size_t i = 0; i < size(); ++i)
    t.rows.push_back({omega[i], to_db(values[i]), std::arg(values[i]) * 180.0 / std::numbers::pi});
  return t;
}

double to_db(std::complex<double> x) {
  const double m = std::abs(x);
  return m == 0.0 ? -400.0 : 20.0 * std::log10(m);
}

std::vector<std::complex<double>> dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    std::size_t idx = 0;
    for (std::size_t t = 0; t < n; ++t) {
      acc += x[t] * twiddle[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    out[k] = acc;
  }
  return out;
}

FrequencyResponse etfe(std::span<const double> u, std::span<const double> y, double ts) {
  if (u.size() != y.size()) throw InputError("etfe: input and output lengths differ");
  if (u.size() < 2) throw InputError("etfe: need at least two samples");
  if (!(ts > 0.0)) throw InputError("etfe: Ts must be positive");

  const auto n = u.size();
  auto centered = [n](std::span<const double> x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    std::vector<double> c(x.begin(), x.end());
    for (double& v : c) v -= mean;
    return c;
  };
  const auto uc = centered(u);
  const auto yc = centered(y);
  const auto U = dft(uc);
  const auto Y = dft(yc);

  FrequencyResponse fr;
  fr.ts = ts;
  const double threshold = 1e-12 * static_cast<double>(n);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    if (std::abs(U[k]) <= threshold) continue;
    fr.omega.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(n) * ts));
    fr.values.push_back(Y[k] / U[k]);
  }
  return fr;
}

std::vector<double> hann_weights(std::size_t size) {
  if (size == 0 || size % 2 == 0) throw InputError("Hann window size must be odd");
  std::vector<double> w(size);
  for (std::size_t j = 0; j < size; ++j)
    w[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j + 1) / static_cast<double>(size + 1));
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

FrequencyResponse smooth(const FrequencyResponse& fr, std::size_t size) {
  fr.validate();
  if (size == 1) return fr;
  if (size < 3 || size % 2 == 0) throw InputError("smooth: window size must be odd and >= 3");
  const auto w = hann_weights(size);
  const auto half = static_cast<std::ptrdiff_t>(size / 2);
  const auto n = static_cast<std::ptrdiff_t>(fr.size());

  FrequencyResponse out;
  out.ts = fr.ts;
  out.omega = fr.omega;
  out.values.resize(fr.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::complex<double> acc{0.0, 0.0};
    double norm = 0.0;
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      const std::ptrdiff_t idx = i + j;
      if (idx < 0 || idx >= n) continue;
      const double wj = w[static_cast<std::size_t>(j + half)];
      acc += wj * fr.values[static_cast<std::size_t>(idx)];
      norm += wj;
    }
    out.values[static_cast<std::size_t>(i)] = acc / norm;
  }
  return out;
}

double slope_fit(const FrequencyResponse& fr, double low, double high) {
  fr.validate();
  if (!(low > 0.0) || !(high > low)) throw InputError("slope_fit: band must satisfy 0 < low < high");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < fr.size(); ++i) {
    if (fr.omega[i] < low || fr.omega[i] > high) continue;
    xs.push_back(std::log10(fr.omega[i]));
    ys.push_back(to_db(fr.values[i]));
  }
  if (xs.size() < 5) throw InputError("slope_fit: fewer than 5 bins in the band");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

double corner_frequency(const FrequencyResponse& fr, std::size_t reference_bins) {
  fr.validate();
  if (reference_bins == 0 || fr.size() <= reference_bins) throw InputError("corner_frequency: too few bins");
  double ref = 0.0;
  for (std::size_t i = 0; i < reference_bins; ++i) ref += to_db(fr.values[i]);
  ref /= static_cast<double>(reference_bins);
  for (std::size_t i = reference_bins; i < fr.size(); ++i) {
    const double db = to_db(fr.values[i]);
    if (db <= ref - 3.0) {
      // interpolate in log frequency between the bracketing bins
      const double prev = to_db(fr.values[i - 1]);
      const double frac = prev == db ? 0.0 : (prev - (ref - 3.0)) / (prev - db);
      const double lw = std::log10(fr.omega[i - 1]) + frac * (std::log10(fr.omega[i]) - std::log10(fr.omega[i - 1]));
      return std::pow(10.0, lw);
    }
  }
  throw InputError("corner_frequency: magnitude never drops 3 dB");
}

FrequencyResponse evaluate(const DelayPolynomial& num, const DelayPolynomial& den, std::span<const double> omega,
                           double ts) {
  FrequencyResponse fr;
  fr.ts = ts;
  fr.omega.assign(omega.begin(), omega.end());
  fr.values.reserve(omega.size());
  const double nyquist = std::numbers::pi / ts;
  for (double w : omega) {
    const auto x = unit_delay_at(w == nyquist ? 1.0 : w / nyquist);
    fr.values.push_back(num.at(x) / den.at(x));
  }
  return fr;
}

}  // namespace valvelab::spectral
