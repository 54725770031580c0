#pragma once

// Baseline special functions. Everything else in the library treats these as
// ground truth, so they favour accuracy over speed: regularized incomplete
// gamma values are computed directly (never as ratios of huge numbers), with
// the e^{-z} z^a / Gamma(a+1) prefactor assembled in log space from a
// cancellation-free Stirling remainder.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "covert/error.hpp"

namespace covert {

/// Pair of complementary regularized incomplete gamma values,
/// lower = gamma(a,z)/Gamma(a) and upper = Gamma(a,z)/Gamma(a).
/// The smaller of the two is always computed directly, so both carry full
/// relative precision in their tails.
struct GammaPair {
  double lower;
  double upper;
};

namespace detail {

inline constexpr double kSeriesTolerance = 1e-15;

// log(1+x) - x without cancellation near zero.
inline double log1pmx(double x) {
  if (std::abs(x) < 0.25) {
    // -x^2/2 + x^3/3 - ...
    double term = x;
    double sum = 0.0;
    for (int k = 2; k < 200; ++k) {
      term *= -x;
      const double add = term / k;
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::log1p(x) - x;
}

// lgamma(a+1) - (a+1/2) ln a + a - ln(2 pi)/2, the Stirling remainder.
inline double stirling_remainder(double a) {
  if (a >= 10.0) {
    const double r = 1.0 / a;
    const double r2 = r * r;
    return r * (1.0 / 12 -
                r2 * (1.0 / 360 -
                      r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 * (1.0 / 1188 - r2 * 691.0 / 360360)))));
  }
  return std::lgamma(a + 1.0) - (a + 0.5) * std::log(a) + a - 0.5 * std::log(2.0 * std::numbers::pi);
}

// ln( z^a e^{-z} / Gamma(a+1) ), accurate for a up to ~1e7.
inline double log_gamma_prefactor(double a, double z) {
  if (z == 0.0) return -INFINITY;
  if (a < 10.0) return a * std::log(z) - z - std::lgamma(a + 1.0);
  const double t = (z - a) / a;
  return a * log1pmx(t) - 0.5 * std::log(2.0 * std::numbers::pi * a) - stirling_remainder(a);
}

// Series and continued fraction both need O(sqrt(a)) terms near the
// transition z ~ a, so the hard cap scales with the shape.
inline int iteration_cap(double a) { return 500 + static_cast<int>(20.0 * std::sqrt(a)); }

inline void check_gamma_args(double a, double z) {
  if (!std::isfinite(a) || !std::isfinite(z)) throw DomainError("incomplete gamma: non-finite argument");
  if (!(a > 0.0)) throw DomainError("incomplete gamma: shape must be positive");
  if (!(z >= 0.0)) throw DomainError("incomplete gamma: argument must be nonnegative");
}

// gamma(a,z)/Gamma(a) by the power series, valid for z < a + 1.
inline double lower_gamma_series(double a, double z) {
  const double log_pref = log_gamma_prefactor(a, z);
  double term = 1.0;
  double sum = 1.0;
  const int cap = iteration_cap(a);
  for (int k = 1; k <= cap; ++k) {
    term *= z / (a + k);
    sum += term;
    if (term < kSeriesTolerance * sum) return std::exp(log_pref + std::log(sum));
  }
  throw AccuracyError("incomplete gamma series did not converge");
}

// Gamma(a,z)/Gamma(a) by the Legendre continued fraction (modified Lentz),
// valid for z >= a + 1.
inline double upper_gamma_fraction(double a, double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  const int cap = iteration_cap(a);
  for (int i = 1; i <= cap; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kSeriesTolerance) {
      // Gamma(a,z)/Gamma(a) = a * [z^a e^{-z}/Gamma(a+1)] * CF
      return std::exp(log_gamma_prefactor(a, z) + std::log(a * h));
    }
  }
  throw AccuracyError("incomplete gamma continued fraction did not converge");
}

}  // namespace detail

/// Both regularized incomplete gamma functions at (a, z).
inline GammaPair incomplete_gamma(double a, double z) {
  detail::check_gamma_args(a, z);
  if (z == 0.0) return {0.0, 1.0};
  if (z < a + 1.0) {
    const double p = detail::lower_gamma_series(a, z);
    return {p, 1.0 - p};
  }
  const double q = detail::upper_gamma_fraction(a, z);
  return {1.0 - q, q};
}

/// P(a,z) = gamma(a,z)/Gamma(a).
inline double reg_lower_gamma(double a, double z) { return incomplete_gamma(a, z).lower; }

/// Q(a,z) = Gamma(a,z)/Gamma(a).
inline double reg_upper_gamma(double a, double z) { return incomplete_gamma(a, z).upper; }

/// CDF of the central chi-square distribution with n degrees of freedom.
inline double chi2_cdf(std::int64_t n, double x) {
  if (n < 1) throw DomainError("chi2_cdf: degrees of freedom must be >= 1");
  return reg_lower_gamma(0.5 * static_cast<double>(n), 0.5 * x);
}

inline double erfc(double x) {
  if (!std::isfinite(x)) throw DomainError("erfc: non-finite argument");
  return std::erfc(x);
}

/// Standard normal tail probability Q(x) = P(Z > x).
inline double normal_q(double x) { return 0.5 * covert::erfc(x / std::numbers::sqrt2); }

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Inverse of the normal tail: returns x with Q(x) = p.
inline double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("q_inv: p must lie in (0,1)");

  // Rational starting point for the lower-tail quantile (Acklam), then
  // Newton on Q itself.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double lower_quantile;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    lower_quantile = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                     ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    lower_quantile = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
                     (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    lower_quantile = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                     ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  double x = -lower_quantile;
  for (int i = 0; i < 50; ++i) {
    const double step = (normal_q(x) - p) / normal_pdf(x);
    x += step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace covert
