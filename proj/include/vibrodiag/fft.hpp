#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "vibrodiag/error.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

// Amplitude density spectrum of one frame: bins[k] in V/Hz at frequency k*F.
struct Spectrum {
  std::vector<std::complex<double>> bins;
  double bin_width = 0.0;  // F = 1/(N*Ts), Hz
  double ts = 0.0;         // sampling interval, s
};

namespace detail {

// In-place iterative radix-2 transform (decimation in time), no scaling.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Twiddle table: w[j] = exp(-2*pi*i*j/n) for j < n/2.
  std::vector<std::complex<double>> w(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    w[j] = {std::cos(angle), std::sin(angle)};
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[start + j];
        const std::complex<double> v = a[start + j + len / 2] * w[j * stride];
        a[start + j] = u + v;
        a[start + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace detail

// S(kF) = Ts * sum_n x(n*Ts) * exp(-j*2*pi*n*k/N), evaluated with a radix-2
// fast transform. Frame length must be a power of two.
inline Spectrum dft_spectrum(const SignalFrame& frame) {
  const std::size_t n = frame.samples.size();
  if (n < 2 || !is_power_of_two(n)) {
    throw ShapeError("dft_spectrum: frame length must be a power of two >= 2");
  }
  if (!(frame.sample_rate > 0.0)) {
    throw ParameterError("dft_spectrum: sample rate must be positive");
  }

  Spectrum s;
  s.ts = 1.0 / frame.sample_rate;
  s.bin_width = frame.sample_rate / static_cast<double>(n);
  s.bins.assign(frame.samples.begin(), frame.samples.end());
  detail::fft_radix2(s.bins);
  for (auto& b : s.bins) b *= s.ts;
  return s;
}

// Energy spectral density |S(kF)|^2, V^2*s/Hz.
struct EsdSeries {
  std::vector<double> values;
  double bin_width = 0.0;
};

inline EsdSeries esd(const Spectrum& s) {
  EsdSeries out;
  out.bin_width = s.bin_width;
  out.values.reserve(s.bins.size());
  for (const auto& b : s.bins) out.values.push_back(std::norm(b));
  return out;
}

// The k largest one-sided spectral magnitudes |bins[i]|, i in [1, N/2]
// (DC excluded), descending; ties prefer the lower bin index.
inline std::vector<double> top_peaks(const Spectrum& s, std::size_t k = 5) {
  const std::size_t half = s.bins.size() / 2;
  if (k < 1 || k > half) {
    throw ParameterError("top_peaks: k must be in [1, N/2]");
  }

  std::vector<std::pair<double, std::size_t>> mags;
  mags.reserve(half);
  for (std::size_t i = 1; i <= half; ++i) {
    mags.emplace_back(std::abs(s.bins[i]), i);
  }
  std::partial_sort(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });

  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = mags[i].first;
  return out;
}

}  // namespace vibrodiag
