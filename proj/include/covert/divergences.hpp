#pragma once

// Divergences between the adversary's two hypotheses,
//   P0 = N(0, sigma2 I_n)   and   P1 = N(0, sigma2 (1+theta) I_n),
// and the total variation bounds built from them.

#include <cmath>
#include <numbers>

#include "covert/channel.hpp"
#include "covert/error.hpp"
#include "covert/special_fn.hpp"

namespace covert {

enum class Units { bits, nats };

struct KlPair {
  double kl_fwd = 0.0;  // D(P1 || P0)
  double kl_rev = 0.0;  // D(P0 || P1)
};

/// Divergence values and TVD bounds at one operating point. KL values are in
/// bits; every TVD bound uses natural-log KL internally.
struct BoundsReport {
  double kl_fwd = 0.0;
  double kl_rev = 0.0;
  double hellinger_sq = 0.0;     // also the lower bound on TVD
  double pinsker_upper = 0.0;    // sqrt(D(P1||P0)/2)
  double pinsker_rev_upper = 0.0;  // sqrt(D(P0||P1)/2)
  double sason_upper = 0.0;      // sqrt(1 - (1 - H^2)^2)
  double sqrt2h_upper = 0.0;     // sqrt(2) H
  double kl_exp_upper = 0.0;     // sqrt(1 - exp(-D)), with the smaller KL

  double lower() const { return hellinger_sq; }
};

namespace detail {

inline void check_point(const ChannelPoint& point) { point.validate(); }

// Natural-log divergences. D(P1||P0) = (n/2)[theta - ln(1+theta)] and
// D(P0||P1) = (n/2)[ln(1+theta) + 1/(1+theta) - 1], both written through
// log1p(x) - x so small theta keeps full relative precision.
inline KlPair kl_nats(const ChannelPoint& point) {
  const double half = point.half_n();
  const double t = point.theta;
  const double lm = log1pmx(t);
  return {-half * lm, half * (lm + t * t / (1.0 + t))};
}

}  // namespace detail

inline KlPair kl_divergences(const ChannelPoint& point, Units units = Units::bits) {
  detail::check_point(point);
  auto kl = detail::kl_nats(point);
  if (units == Units::bits) {
    kl.kl_fwd *= std::numbers::log2e;
    kl.kl_rev *= std::numbers::log2e;
  }
  return kl;
}

/// Squared Hellinger distance 1 - (4(1+theta)/(2+theta)^2)^{n/4}.
inline double hellinger_sq(const ChannelPoint& point) {
  detail::check_point(point);
  // base = 1 - theta^2/(2+theta)^2
  const double r = point.theta / (2.0 + point.theta);
  const double log_base = std::log1p(-r * r);
  return -std::expm1(0.25 * static_cast<double>(point.n) * log_base);
}

inline BoundsReport tvd_bounds(const ChannelPoint& point) {
  detail::check_point(point);
  const KlPair nats = detail::kl_nats(point);
  const double h2 = hellinger_sq(point);

  BoundsReport out;
  out.kl_fwd = nats.kl_fwd * std::numbers::log2e;
  out.kl_rev = nats.kl_rev * std::numbers::log2e;
  out.hellinger_sq = h2;
  out.pinsker_upper = std::sqrt(0.5 * nats.kl_fwd);
  out.pinsker_rev_upper = std::sqrt(0.5 * nats.kl_rev);
  // 1 - (1-h2)^2 = h2 (2 - h2)
  out.sason_upper = std::sqrt(h2 * (2.0 - h2));
  out.sqrt2h_upper = std::numbers::sqrt2 * std::sqrt(h2);
  out.kl_exp_upper = std::sqrt(-std::expm1(-std::min(nats.kl_fwd, nats.kl_rev)));
  return out;
}

/// Lower bound V >= (1 - beta)/ln(1/beta) * D(P0||P1) for a caller-chosen
/// beta in (0,1).
inline double kl_beta_lower_bound(const ChannelPoint& point, double beta) {
  detail::check_point(point);
  detail::require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
  const double d = detail::kl_nats(point).kl_rev;
  return (1.0 - beta) / -std::log(beta) * d;
}

}  // namespace covert
