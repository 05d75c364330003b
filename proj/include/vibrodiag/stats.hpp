#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vibrodiag/error.hpp"

namespace vibrodiag {

// Summary-table row for one signal: count, mean, std (N-1), min, quartiles, max.
struct DescriptiveSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

namespace detail {

// Quantile by linear interpolation at h = (n-1)p between order statistics.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

inline double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace detail

inline DescriptiveSummary describe(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw InsufficientDataError("describe: need at least 2 samples");

  DescriptiveSummary out;
  out.count = n;
  out.mean = detail::mean_of(samples);

  double ssq = 0.0;
  for (double v : samples) {
    const double d = v - out.mean;
    ssq += d * d;
  }
  out.std = std::sqrt(ssq / static_cast<double>(n - 1));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  out.min = sorted.front();
  out.max = sorted.back();
  out.q25 = detail::quantile_sorted(sorted, 0.25);
  out.q50 = detail::quantile_sorted(sorted, 0.50);
  out.q75 = detail::quantile_sorted(sorted, 0.75);
  return out;
}

// Normalized autocorrelation estimate; values[l] is the correlation at lag l.
// values[0] is exactly 1 by construction (population-variance normalizer).
struct AcfSeries {
  std::vector<double> values;
};

inline AcfSeries acf(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (n < 2) throw InsufficientDataError("acf: need at least 2 samples");
  if (max_lag > n - 2) throw ParameterError("acf: max_lag out of range");

  const double mean = detail::mean_of(x);

  // N * var_pop(x) == sum of squared deviations, so normalizing by the raw
  // sum keeps acf(0) == 1 exactly.
  double denom = 0.0;
  for (double v : x) {
    const double d = v - mean;
    denom += d * d;
  }
  if (denom == 0.0) throw DegenerateSignalError("acf: constant signal");

  AcfSeries out;
  out.values.resize(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      s += (x[i + lag] - mean) * (x[i] - mean);
    }
    out.values[lag] = s / denom;
  }
  return out;
}

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
};

// Equal-width histogram over [min, max]; the last bin is right-closed.
inline std::vector<HistogramBin> histogram(std::span<const double> samples,
                                           std::size_t bins = 50) {
  if (samples.empty()) throw InsufficientDataError("histogram: empty input");
  if (bins == 0) throw ParameterError("histogram: need at least one bin");

  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(bins);

  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + width * static_cast<double>(b);
    out[b].right = (b + 1 == bins) ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : samples) {
    std::size_t b;
    if (width == 0.0) {
      b = 0;
    } else {
      b = static_cast<std::size_t>((v - lo) / width);
      if (b >= bins) b = bins - 1;
    }
    out[b].count += 1;
  }
  return out;
}

}  // namespace vibrodiag
