#pragma once

// Independent ground truth for the TVD:
//  * tvd_quadrature integrates the radial density difference over the
//    acceptance ball of the likelihood ratio test;
//  * simulate_test runs that test on sampled ||z||^2 and estimates
//    1 - (alpha + beta).

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "covert/channel.hpp"
#include "covert/error.hpp"
#include "covert/numerics.hpp"
#include "covert/tvd.hpp"

namespace covert {

/// Squared radius R^2 at which the two Gaussian densities cross:
/// R^2 = n sigma2 (1+theta) ln(1+theta)/theta.
inline double lrt_threshold(const ChannelPoint& point) {
  point.validate();
  if (point.theta == 0.0) throw DomainError("lrt_threshold: identical hypotheses, no test");
  return 2.0 * point.sigma2 * fg(point).f;
}

struct DetectionEstimate {
  double alpha_hat = 0.0;  // P0(||z||^2 > R^2)
  double beta_hat = 0.0;   // P1(||z||^2 <= R^2)
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double std_err = 0.0;    // of 1 - (alpha_hat + beta_hat)

  double tvd_hat() const { return 1.0 - (alpha_hat + beta_hat); }
};

inline constexpr int kMonteCarloShards = 64;

namespace detail {

using Engine = std::mt19937_64;

// Open-interval uniform from the top 53 bits.
inline double uniform01(Engine& eng) { return ((eng() >> 11) + 0.5) * 0x1.0p-53; }

// Box-Muller, one variate per call so the stream layout stays trivial.
inline double std_normal(Engine& eng) {
  const double u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang gamma(shape, 1). Hand-written rather than
// std::gamma_distribution so streams are identical across standard libraries.
inline double gamma_variate(Engine& eng, double shape) {
  if (shape < 1.0) {
    const double g = gamma_variate(eng, shape + 1.0);
    return g * std::pow(uniform01(eng), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = std_normal(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline Engine shard_engine(std::uint64_t seed, int shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard), 0x636f76u};
  return Engine(seq);
}

struct ShardCounts {
  std::int64_t false_alarms = 0;
  std::int64_t misses = 0;
};

}  // namespace detail

/// Runs the threshold test ||z||^2 <= threshold => H0 on m draws per
/// hypothesis. Samples are split into a fixed number of shards with their
/// own seeded streams, so the result depends only on (point, m, seed).
inline DetectionEstimate simulate_test(const ChannelPoint& point, std::int64_t m, std::uint64_t seed,
                                       std::optional<double> threshold = std::nullopt) {
  point.validate();
  detail::require(m >= 1, "sample count must be positive");
  const double r2 = threshold ? *threshold : lrt_threshold(point);
  detail::require(std::isfinite(r2) && r2 >= 0.0, "threshold must be finite and nonnegative");

  const double shape = point.half_n();
  const double scale0 = 2.0 * point.sigma2;
  const double scale1 = 2.0 * point.sigma1_sq();

  std::vector<int> shards(kMonteCarloShards);
  for (int s = 0; s < kMonteCarloShards; ++s) shards[s] = s;
  const auto counts = parallel_map(shards, [&](int s) {
    const std::int64_t lo = m * s / kMonteCarloShards;
    const std::int64_t hi = m * (s + 1) / kMonteCarloShards;
    auto eng = detail::shard_engine(seed, s);
    detail::ShardCounts c;
    for (std::int64_t i = lo; i < hi; ++i) {
      if (scale0 * detail::gamma_variate(eng, shape) > r2) ++c.false_alarms;
      if (scale1 * detail::gamma_variate(eng, shape) <= r2) ++c.misses;
    }
    return c;
  });

  std::int64_t fa = 0, miss = 0;
  for (const auto& c : counts) {
    fa += c.false_alarms;
    miss += c.misses;
  }
  DetectionEstimate out;
  out.samples = m;
  out.seed = seed;
  const double mm = static_cast<double>(m);
  out.alpha_hat = fa / mm;
  out.beta_hat = miss / mm;
  out.std_err = std::sqrt((out.alpha_hat * (1.0 - out.alpha_hat) + out.beta_hat * (1.0 - out.beta_hat)) / mm);
  return out;
}

inline constexpr double kQuadratureTolerance = 1e-10;

/// TVD as the integral over the acceptance ball of the density difference,
/// in the radial variable u = r / (sqrt(2) sigma):
///   V = int_0^{sqrt f} 2u/Gamma(n/2) [u^{n-2} e^{-u^2} - (1+theta)^{-n/2} u^{n-2} e^{-u^2/(1+theta)}] du.
inline TvdEvaluation tvd_quadrature(const ChannelPoint& point) {
  point.validate();
  TvdEvaluation out;
  out.method = TvdMethod::quadrature;
  if (point.theta == 0.0) return out;

  const double a = point.half_n();
  const double t = point.theta;
  const double log1p_t = std::log1p(t);
  const double shrink = t / (1.0 + t);
  const double lg = std::lgamma(a);
  const double upper = std::sqrt(fg(point).f);

  // e^A - e^B with A >= B on the whole range, so the difference is
  // e^A (1 - e^{B-A}) and never cancels catastrophically.
  auto integrand = [&](double u) -> double {
    if (u <= 0.0) return 0.0;
    const double s = u * u;
    const double log_a = std::log(2.0) + (2.0 * a - 1.0) * std::log(u) - s - lg;
    const double b_minus_a = s * shrink - a * log1p_t;
    return std::exp(log_a) * -std::expm1(std::min(b_minus_a, 0.0));
  };

  // The mass sits within a few units of sqrt(a) in u.
  const double lower = std::max(0.0, std::sqrt(a) - 40.0);
  constexpr int panels = 16;
  double value = 0.0, error = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = lower + (upper - lower) * i / panels;
    const double hi = lower + (upper - lower) * (i + 1) / panels;
    double err = 0.0;
    value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, lo, hi, 15, 1e-12, &err);
    error += err;
  }
  if (!(error <= kQuadratureTolerance) || !std::isfinite(value)) {
    throw AccuracyError("radial quadrature did not reach its tolerance");
  }
  out.value = std::clamp(value, 0.0, 1.0);
  out.complement = 1.0 - out.value;
  out.err_estimate = error;
  return out;
}

}  // namespace covert
