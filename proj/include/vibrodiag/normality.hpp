#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vibrodiag/error.hpp"

namespace vibrodiag {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Inverse standard-normal CDF, Wichura's PPND16 rational approximation
// (relative error below 1e-15 over the full open interval).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("normal_quantile: p must be in (0, 1)");
  }

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }

  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-9) * r +
              1.84631831751005468180e-6) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return (q < 0.0) ? -value : value;
}

struct NormalityResult {
  double w_statistic = 0.0;
  double p_value = 0.0;
};

// Shapiro-Wilk W test with Royston's approximation for the coefficients and
// the p-value transform. Valid for 3 <= n <= 5000.
inline NormalityResult shapiro_wilk(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3 || n > 5000) {
    throw ParameterError("shapiro_wilk: sample size must be in [3, 5000]");
  }

  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  if (x.back() - x.front() == 0.0) {
    throw DegenerateSignalError("shapiro_wilk: constant input");
  }

  const double nd = static_cast<double>(n);

  // Expected normal order statistics (Blom scores) and their squared norm.
  std::vector<double> m(n);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (nd + 0.25));
    summ2 += m[i] * m[i];
  }

  // Coefficient vector a: polynomial-corrected at the extremes, rescaled in
  // the middle so that a stays unit-norm.
  std::vector<double> a(n, 0.0);
  if (n == 3) {
    a[0] = -std::sqrt(0.5);
    a[2] = std::sqrt(0.5);
  } else {
    const double rsn = 1.0 / std::sqrt(nd);
    const double c_last = m[n - 1] / std::sqrt(summ2);
    const double a_last =
        c_last + rsn * (0.221157 +
                        rsn * (-0.147981 +
                               rsn * (-2.071190 + rsn * (4.434685 + rsn * -2.706056))));
    std::size_t i1;
    double phi;
    if (n > 5) {
      const double c_last2 = m[n - 2] / std::sqrt(summ2);
      const double a_last2 =
          c_last2 + rsn * (0.042981 +
                           rsn * (-0.293762 +
                                  rsn * (-1.752461 + rsn * (5.682633 + rsn * -3.582633))));
      i1 = 3;
      phi = (summ2 - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
            (1.0 - 2.0 * a_last * a_last - 2.0 * a_last2 * a_last2);
      a[n - 2] = a_last2;
      a[1] = -a_last2;
    } else {
      i1 = 2;
      phi = (summ2 - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * a_last * a_last);
    }
    a[n - 1] = a_last;
    a[0] = -a_last;
    const double inv_sqrt_phi = 1.0 / std::sqrt(phi);
    for (std::size_t i = i1 - 1; i < n - i1 + 1; ++i) {
      a[i] = m[i] * inv_sqrt_phi;
    }
  }

  double xbar = 0.0;
  for (double v : x) xbar += v;
  xbar /= nd;

  double ssq = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - xbar;
    ssq += d * d;
    sax += a[i] * x[i];
  }

  double one_minus_w = (ssq - sax * sax) / ssq;
  if (one_minus_w < 0.0) one_minus_w = 0.0;
  const double w = 1.0 - one_minus_w;

  NormalityResult result;
  result.w_statistic = w;

  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;   // 6/pi
    constexpr double stqr = 1.04719755119660;  // asin(sqrt(3/4))
    double p = pi6 * (std::asin(std::sqrt(w)) - stqr);
    result.p_value = std::clamp(p, 0.0, 1.0);
    return result;
  }

  double z;
  if (n <= 11) {
    const double gamma = 0.459 * nd - 2.273;
    const double g = -std::log(gamma - std::log1p(-w));
    const double mu = 0.5440 + nd * (-0.39978 + nd * (0.025054 + nd * -6.714e-4));
    const double sigma = std::exp(1.3822 + nd * (-0.77857 + nd * (0.062767 + nd * -2.0322e-3)));
    z = (g - mu) / sigma;
  } else {
    const double ln_n = std::log(nd);
    const double g = std::log1p(-w);
    const double mu = -1.5861 + ln_n * (-0.31082 + ln_n * (-0.083751 + ln_n * 3.8915e-3));
    const double sigma = std::exp(-0.4803 + ln_n * (-0.082676 + ln_n * 3.0302e-3));
    z = (g - mu) / sigma;
  }
  result.p_value = std::clamp(normal_cdf(-z), 0.0, 1.0);
  return result;
}

// One point per sample: (theoretical standard-normal quantile, ordered value).
struct QqSeries {
  std::vector<std::pair<double, double>> points;
};

// Normal Q-Q data with Blom plotting positions (i - 0.375)/(n + 0.25).
inline QqSeries qq_points(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw InsufficientDataError("qq_points: need at least 3 samples");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  QqSeries out;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = (static_cast<double>(i + 1) - 0.375) / (static_cast<double>(n) + 0.25);
    out.points.emplace_back(normal_quantile(pos), sorted[i]);
  }
  return out;
}

}  // namespace vibrodiag
