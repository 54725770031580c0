#pragma once

// Normal-approximation throughput bounds (bits) for the AWGN channel under a
// maximal power constraint, and the covert bounds obtained by substituting
// the sufficient / necessary powers. O(1) remainders are dropped and O(log n)
// remainders are taken as (1/2) log2 n; every report says so in `note`.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "covert/covert_power.hpp"
#include "covert/error.hpp"
#include "covert/numerics.hpp"
#include "covert/special_fn.hpp"

namespace covert {

enum class ThroughputKind { achievability_na, converse_na, covert_suf, covert_nec, achievability_full };

inline std::string_view kind_name(ThroughputKind k) {
  switch (k) {
    case ThroughputKind::achievability_na: return "achievability-NA";
    case ThroughputKind::converse_na: return "converse-NA";
    case ThroughputKind::covert_suf: return "covert-suf";
    case ThroughputKind::covert_nec: return "covert-nec";
    case ThroughputKind::achievability_full: return "achievability-full";
  }
  return "unknown";
}

inline constexpr std::string_view kResidualNote = "O(1) terms set to 0; O(log n) residual taken as 0.5*log2(n)";

/// log2 M split into its terms: bits = term_first + term_second + term_logn + term_other.
struct ThroughputReport {
  double bits = 0.0;
  double term_first = 0.0;
  double term_second = 0.0;
  double term_logn = 0.0;
  double term_other = 0.0;
  double eps = 0.0;
  ThroughputKind kind = ThroughputKind::converse_na;
  std::string note{kResidualNote};
  // Achievability only: whether 2 B_mu / sqrt(n) < eps, i.e. whether the
  // Berry-Esseen based bound is actually in force at this n.
  bool regime_ok = true;
  // achievability_full only.
  double r_star = std::numeric_limits<double>::quiet_NaN();
  double tau0 = std::numeric_limits<double>::quiet_NaN();
  double b_mu = std::numeric_limits<double>::quiet_NaN();

  void total() { bits = term_first + term_second + term_logn + term_other; }
};

inline double capacity_bits(double p) { return 0.5 * std::log1p(p) * std::numbers::log2e; }

/// Channel dispersion (bits^2): (log2 e)^2/2 * (1 - 1/(1+P)^2).
inline double dispersion_bits(double p) {
  const double l = std::numbers::log2e;
  return 0.5 * l * l * p * (p + 2.0) / ((1.0 + p) * (1.0 + p));
}

namespace detail {

inline void check_throughput_args(std::int64_t n, double eps, double p) {
  require(n >= 1, "blocklength must be >= 1");
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  require(std::isfinite(p) && p >= 0.0, "power must be nonnegative");
}

inline void check_mu(double mu) { require(mu > 0.0 && mu < 1.0, "mu must lie in (0,1)"); }

inline double half_log2n(std::int64_t n) { return 0.5 * std::log2(static_cast<double>(n)); }

}  // namespace detail

inline ThroughputReport converse_na(std::int64_t n, double eps, double p) {
  detail::check_throughput_args(n, eps, p);
  const double nn = static_cast<double>(n);
  ThroughputReport r;
  r.kind = ThroughputKind::converse_na;
  r.eps = eps;
  r.term_first = nn * capacity_bits(p);
  r.term_second = -std::sqrt(nn * dispersion_bits(p)) * q_inv(eps);
  r.term_logn = detail::half_log2n(n);
  r.total();
  return r;
}

/// Probability that an iid N(0, mu P) vector lands in the shell
/// mu^2 n P <= ||x||^2 <= n P.
inline double truncation_mass(std::int64_t n, double mu) {
  detail::require(n >= 1, "blocklength must be >= 1");
  detail::check_mu(mu);
  const double a = 0.5 * static_cast<double>(n);
  const double nn = static_cast<double>(n);
  const GammaPair outer = incomplete_gamma(a, 0.5 * nn / mu);
  const GammaPair inner = incomplete_gamma(a, 0.5 * nn * mu);
  return std::clamp(1.0 - outer.upper - inner.lower, 0.0, 1.0);
}

inline constexpr int kHermiteOrder = 127;

inline constexpr int kHermiteCheckOrder = 95;

inline const HermiteRule& hermite_rule(int order) {
  if (order == kHermiteOrder) {
    static const HermiteRule cached = gauss_hermite(kHermiteOrder);
    return cached;
  }
  if (order == kHermiteCheckOrder) {
    static const HermiteRule cached = gauss_hermite(kHermiteCheckOrder);
    return cached;
  }
  thread_local HermiteRule rule;
  rule = gauss_hermite(order);
  return rule;
}

/// T_mu(P,R) = E| log2(e)/(2(1+mu P)) [mu P + 2 sqrt(R) Z - mu P Z^2] |^3.
inline double t_mu(double p, double r, double mu, int order = kHermiteOrder) {
  detail::require(p >= 0.0 && r >= 0.0, "power arguments must be nonnegative");
  detail::check_mu(mu);
  const double mp = mu * p;
  const double k = std::numbers::log2e / (2.0 * (1.0 + mp));
  const double sr = 2.0 * std::sqrt(r);
  auto h = [&](double z) {
    const double v = k * (mp + sr * z - mp * z * z);
    return std::abs(v * v * v);
  };
  const double value = normal_expectation(hermite_rule(order), h);
  if (order == kHermiteOrder) {
    // |.|^3 has kinks at the roots of the quadratic, so convergence is only
    // algebraic; the 127-point error is a small fraction of this gap.
    const double coarse = normal_expectation(hermite_rule(kHermiteCheckOrder), h);
    if (std::abs(value - coarse) > 1e-4 * value + 1e-300) {
      throw AccuracyError("Gauss-Hermite evaluation of T_mu has not converged");
    }
  }
  return value;
}

/// Vhat_mu(P,R) = V(P) (2R + P^2)/(2P + P^2).
inline double v_hat(double p, double r) {
  if (p == 0.0) return 0.0;
  return dispersion_bits(p) * (2.0 * r + p * p) / (2.0 * p + p * p);
}

inline double b_mu(double p, double r, double mu) {
  const double v = v_hat(p, r);
  if (v == 0.0) return 0.0;
  return 6.0 * t_mu(p, r, mu) / std::pow(v, 1.5);
}

/// Simplified achievability bound at a given tau0 in (0, eps).
inline ThroughputReport achievability_na(std::int64_t n, double eps, double p, double mu, double tau0) {
  detail::check_throughput_args(n, eps, p);
  detail::check_mu(mu);
  detail::require(tau0 > 0.0 && tau0 < eps, "tau0 must lie in (0, eps)");
  const double nn = static_cast<double>(n);
  const double mp = mu * p;

  ThroughputReport r;
  r.kind = ThroughputKind::achievability_na;
  r.eps = eps;
  r.term_first = nn * capacity_bits(mp);
  r.term_second = -std::sqrt(nn * dispersion_bits(mp)) * q_inv(eps);
  r.term_logn = detail::half_log2n(n);
  const double delta = truncation_mass(n, mu);
  r.term_other = std::log2(tau0) + (delta > 0.0 ? std::log2(delta) : -std::numeric_limits<double>::infinity());
  r.total();
  const double b = b_mu(p, mp, mu);
  r.b_mu = b;
  r.regime_ok = 2.0 * b / std::sqrt(nn) < eps;
  return r;
}

namespace detail {

struct AchievabilityTerms {
  double first = 0.0;
  double second = 0.0;
  double other_without_tau0 = 0.0;
  double b = 0.0;
  bool valid = false;
};

inline AchievabilityTerms achievability_terms(std::int64_t n, double eps, double p, double mu, double r,
                                              double log2_delta) {
  const double nn = static_cast<double>(n);
  const double mp = mu * p;
  AchievabilityTerms t;
  t.b = b_mu(p, r, mu);
  const double arg = 1.0 - eps + 2.0 * t.b / std::sqrt(nn);
  if (!(arg > 0.0 && arg < 1.0)) return t;
  const double v = v_hat(p, r);
  t.first = nn * capacity_bits(mp) + nn * (r - mp) * std::numbers::log2e / (2.0 * (1.0 + mp));
  t.second = std::sqrt(nn * v) * q_inv(arg);
  const double inner = (v > 0.0 ? 2.0 / std::sqrt(2.0 * std::numbers::pi * v) : 0.0) + 4.0 * t.b;
  t.other_without_tau0 = log2_delta - (inner > 0.0 ? std::log2(inner) : 0.0);
  t.valid = std::isfinite(t.first + t.second + t.other_without_tau0);
  return t;
}

}  // namespace detail

/// Full achievability bound: maximize over R in [mu^2 P, P] and over tau0 on
/// a 50-point log grid in (1e-6 eps, eps) subject to tau0 <= B_mu/sqrt(n).
inline ThroughputReport achievability_full(std::int64_t n, double eps, double p, double mu) {
  detail::check_throughput_args(n, eps, p);
  detail::check_mu(mu);
  detail::require(p > 0.0, "achievability_full requires positive power");
  const double nn = static_cast<double>(n);
  const double delta = truncation_mass(n, mu);
  const double log2_delta = delta > 0.0 ? std::log2(delta) : -std::numeric_limits<double>::infinity();

  auto objective = [&](double r) {
    const auto t = detail::achievability_terms(n, eps, p, mu, r, log2_delta);
    return t.valid ? t.first + t.second + t.other_without_tau0 : -std::numeric_limits<double>::infinity();
  };

  // Coarse scan to locate the valid region, then golden-section/Brent refine.
  const double lo = mu * mu * p;
  const double hi = p;
  constexpr int scan = 200;
  int best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan; ++i) {
    const double v = objective(lo + (hi - lo) * i / scan);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best < 0) {
    throw RegimeError("no R in [mu^2 P, P] satisfies 2 B_mu / sqrt(n) < eps", static_cast<double>(n));
  }
  const double left = lo + (hi - lo) * std::max(0, best - 1) / scan;
  const double right = lo + (hi - lo) * std::min(scan, best + 1) / scan;
  const auto [r_star, neg] = boost::math::tools::brent_find_minima(
      [&](double r) {
        const double v = objective(r);
        return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
      },
      left, right, 40);
  const double refined = -neg > best_val ? r_star : lo + (hi - lo) * best / scan;
  const auto terms = detail::achievability_terms(n, eps, p, mu, refined, log2_delta);

  // sup over tau0: log tau0 is increasing, so take the largest admissible grid point.
  const double tau_cap = terms.b / std::sqrt(nn);
  double tau0 = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 50; ++i) {
    // open interval (1e-6 eps, eps): interior log-spaced points
    const double t = eps * std::pow(1e-6, 1.0 - (i + 1.0) / 51.0);
    if (t <= tau_cap) tau0 = t;
  }
  if (!std::isfinite(tau0)) throw RegimeError("no tau0 on the grid satisfies tau0 <= B_mu/sqrt(n)", tau_cap);

  ThroughputReport r;
  r.kind = ThroughputKind::achievability_full;
  r.eps = eps;
  r.term_first = terms.first;
  r.term_second = terms.second;
  r.term_logn = detail::half_log2n(n);
  r.term_other = terms.other_without_tau0 + std::log2(tau0);
  r.total();
  r.r_star = refined;
  r.tau0 = tau0;
  r.b_mu = terms.b;
  r.regime_ok = true;
  return r;
}

/// Covert throughput bounds with the sufficient (achievability side) and
/// necessary (converse side) powers:
///   nec = n log2(eta_nec) - sqrt(n log2(e)^2/2 (1 - eta_suf^-2)) Q^-1(eps)
///   suf = n log2(eta_suf) - sqrt(n log2(e)^2/2 (1 - eta_nec^-2)) Q^-1(eps)
inline std::pair<ThroughputReport, ThroughputReport> covert_throughput_bounds(std::int64_t n, double eps,
                                                                              double delta) {
  detail::require(n >= 1, "blocklength must be >= 1");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
  const CovertBudget b = CovertBudget::make(n, delta);
  const double nn = static_cast<double>(n);
  const double l2e = std::numbers::log2e;
  // log2((1+lambda)/(1-lambda)) and 1 - ((1-lambda)/(1+lambda))^2 = 4 lambda/(1+lambda)^2
  auto log2_eta = [&](double lam) { return (std::log1p(lam) - std::log1p(-lam)) * l2e; };
  auto one_minus_inv_sq = [](double lam) { return 4.0 * lam / ((1.0 + lam) * (1.0 + lam)); };
  const double q = q_inv(eps);

  ThroughputReport nec;
  nec.kind = ThroughputKind::covert_nec;
  nec.eps = eps;
  nec.term_first = nn * log2_eta(b.lambda);
  nec.term_second = -std::sqrt(0.5 * nn * l2e * l2e * one_minus_inv_sq(b.lambda1)) * q;
  nec.term_logn = detail::half_log2n(n);
  nec.total();

  ThroughputReport suf;
  suf.kind = ThroughputKind::covert_suf;
  suf.eps = eps;
  suf.term_first = nn * log2_eta(b.lambda1);
  suf.term_second = -std::sqrt(0.5 * nn * l2e * l2e * one_minus_inv_sq(b.lambda)) * q;
  suf.term_logn = detail::half_log2n(n);
  suf.total();
  return {suf, nec};
}

}  // namespace covert
