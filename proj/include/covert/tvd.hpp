#pragma once

// Total variation distance between the adversary's hypotheses. With
// a = n/2 the optimal test compares ||z||^2 to R^2, and
//
//   V_T = P(a, f) - P(a, g),   f = R^2/(2 sigma2),  g = R^2/(2 sigma2 (1+theta)).
//
// tvd_exact evaluates that directly; tvd_series evaluates the two expansion
// based approximations (transition regime for theta <= n^-1/2, linear
// argument regime above it).

#include <cmath>
#include <numbers>
#include <string_view>

#include "covert/channel.hpp"
#include "covert/error.hpp"
#include "covert/gamma_expansions.hpp"
#include "covert/special_fn.hpp"

namespace covert {

/// Incomplete-gamma arguments with the diagnostics x = f/(n/2) - 1 and
/// y = 1 - g/(n/2).
struct FgPair {
  double f = 0.0;
  double g = 0.0;
  double x = 0.0;
  double y = 0.0;
};

enum class TvdMethod { exact_gamma, series_high_tau, series_low_tau, quadrature, monte_carlo };

inline std::string_view method_name(TvdMethod m) {
  switch (m) {
    case TvdMethod::exact_gamma: return "exact-gamma";
    case TvdMethod::series_high_tau: return "series-high-tau";
    case TvdMethod::series_low_tau: return "series-low-tau";
    case TvdMethod::quadrature: return "quadrature";
    case TvdMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

struct TvdEvaluation {
  double value = 0.0;
  double complement = 1.0;  // 1 - value, computed without cancellation where possible
  TvdMethod method = TvdMethod::exact_gamma;
  int terms_used = 0;
  double err_estimate = 0.0;
};

inline constexpr double kExactTvdPrecision = 1e-12;

inline FgPair fg(const ChannelPoint& point) {
  point.validate();
  const double half = point.half_n();
  const double t = point.theta;
  if (t == 0.0) return {half, half, 0.0, 0.0};
  const double l = std::log1p(t);
  const double lm = detail::log1pmx(t);
  FgPair out;
  out.g = half * l / t;
  out.f = out.g * (1.0 + t);
  // (1+t) ln(1+t)/t - 1 and 1 - ln(1+t)/t without cancellation
  out.x = (lm + t * l) / t;
  out.y = -lm / t;
  return out;
}

/// Effective scaling exponent tau = -ln(theta)/ln(n).
inline double effective_tau(const ChannelPoint& point) {
  detail::require(point.n >= 2 && point.theta > 0.0, "effective_tau needs n >= 2 and theta > 0");
  return -std::log(point.theta) / std::log(static_cast<double>(point.n));
}

inline TvdEvaluation tvd_exact(const ChannelPoint& point) {
  const FgPair p = fg(point);
  TvdEvaluation out;
  out.method = TvdMethod::exact_gamma;
  out.terms_used = 0;
  out.err_estimate = kExactTvdPrecision;
  if (point.theta == 0.0) return out;
  const double a = point.half_n();
  const GammaPair at_f = incomplete_gamma(a, p.f);
  const GammaPair at_g = incomplete_gamma(a, p.g);
  out.value = std::clamp(at_f.lower - at_g.lower, 0.0, 1.0);
  out.complement = std::clamp(at_f.upper + at_g.lower, 0.0, 1.0);
  return out;
}

/// ln of e^{-z + n/2} (z/(n/2))^{n/2} for z = f and z = g. The two agree
/// exactly because f - g = (n/2) ln(1+theta) and f/g = 1 + theta.
struct FgPrefactorLogs {
  double log_f = 0.0;
  double log_g = 0.0;
};

inline FgPrefactorLogs fg_prefactor_logs(const ChannelPoint& point) {
  const FgPair p = fg(point);
  const double half = point.half_n();
  return {half * detail::log1pmx(p.x), half * detail::log1pmx(-p.y)};
}

/// Series approximation of the TVD with expansion order K; err_estimate is
/// the distance to tvd_exact.
inline TvdEvaluation tvd_series(const ChannelPoint& point, int order = kDefaultExpansionOrder) {
  point.validate();
  detail::require(point.theta > 0.0, "tvd_series requires theta > 0");
  detail::require(point.n >= 100, "tvd_series requires n >= 100");

  const FgPair p = fg(point);
  const double half = point.half_n();
  const double a = half - 1.0;
  // The series are built on the leading Stirling form of ln Gamma(n/2).
  const double log_gamma_half = stirling_gamma_halfn(point.n);

  TvdEvaluation out;
  if (effective_tau(point) >= 0.5) {
    out.method = TvdMethod::series_high_tau;
    const double guard = std::pow(a, 2.0 / 3.0);
    if (std::abs(p.f - a) > guard) throw RegimeError("transition expansion: f too far from n/2 - 1", p.f);
    if (std::abs(p.g - a) > guard) throw RegimeError("transition expansion: g too far from n/2 - 1", p.g);
    const auto d = transition_coeffs(a, order);
    const auto phi_g = phi_transition(a, p.g, order);
    const auto phi_f = phi_transition(a, p.f, order);
    double sum = 0.0;
    for (int k = 0; k <= order; ++k) sum += d[k] * (phi_g.values[k] - phi_f.values[k]);
    // e^{-a} a^{a+1} / Gamma(a+1)
    const double log_pref = -a + (a + 1.0) * std::log(a) - log_gamma_half;
    out.value = std::exp(log_pref) * sum;
    out.complement = 1.0 - out.value;
    out.terms_used = order + 1;
  } else {
    out.method = TvdMethod::series_low_tau;
    if (!(p.g < a)) throw RegimeError("lower expansion needs g < n/2 - 1", p.g);
    if (!(p.f > a)) throw RegimeError("upper expansion needs f > n/2 - 1", p.f);
    // 1/Gamma(n/2) times e^{-n/2} (n/2)^{n/2}
    const double log_norm = -half + half * std::log(half) - log_gamma_half;
    const FgPrefactorLogs logs = fg_prefactor_logs(point);

    const auto coeffs = coeffs_c(a, order);
    // Upper tail at f: sum_k c*_k / (f - a)^{k+1}
    detail::TruncatedSum upper(Truncation::smallest_term);
    const double wf = p.f - a;
    double inv_pow = 1.0 / wf;
    for (int k = 0; k <= order; ++k) {
      if (!upper.add(coeffs.c_star[k] * inv_pow)) break;
      inv_pow /= wf;
    }
    upper.finish();
    // Lower tail at g: sum_k c_k Phi_k(g - a), Phi_k from its closed-form
    // sum (k!/(a-g)^{k+1} minus the e^{g-a} correction) via the stable
    // recurrence.
    const auto phi = phi_linear(a, p.g, order);
    detail::TruncatedSum lower(Truncation::smallest_term);
    for (int k = 0; k <= order; ++k) {
      if (!lower.add(coeffs.c[k] * phi.values[k])) break;
    }
    lower.finish();

    const double tail_f = std::exp(log_norm + logs.log_f) * upper.sum();
    const double tail_g = std::exp(log_norm + logs.log_g) * lower.sum();
    out.complement = tail_f + tail_g;
    out.value = 1.0 - out.complement;
    out.terms_used = upper.count() + lower.count();
  }
  out.err_estimate = std::abs(out.value - tvd_exact(point).value);
  return out;
}

}  // namespace covert
