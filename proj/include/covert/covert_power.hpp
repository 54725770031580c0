#pragma once

// Power levels for a TVD budget delta. With eta = 1 + theta,
//   H^2(theta) = delta           <=>  eta = (1 - 2y + sqrt(1-4y))/(2y),   y  = (1-delta)^{4/n}/4
//   sason(theta) = delta         <=>  same with                           y0 = (1-delta^2)^{2/n}/4
// Writing lambda = sqrt(1-4y) the root simplifies to theta = 2 lambda/(1-lambda),
// which is the form used below (no cancellation as delta -> 0).

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "covert/channel.hpp"
#include "covert/error.hpp"
#include "covert/tvd.hpp"

namespace covert {

struct CovertBudget {
  double delta = 0.0;
  std::int64_t n = 1;
  double y = 0.25;
  double y0 = 0.25;
  double lambda = 0.0;
  double lambda1 = 0.0;

  static CovertBudget make(std::int64_t n, double delta) {
    detail::require(n >= 1, "blocklength must be >= 1");
    detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    CovertBudget b;
    b.n = n;
    b.delta = delta;
    const double nn = static_cast<double>(n);
    // 1 - 4y = 1 - (1-delta)^{4/n}
    const double lam_sq = -std::expm1(4.0 / nn * std::log1p(-delta));
    const double lam1_sq = -std::expm1(2.0 / nn * std::log1p(-delta * delta));
    b.lambda = std::sqrt(lam_sq);
    b.lambda1 = std::sqrt(lam1_sq);
    b.y = 0.25 * (1.0 - lam_sq);
    b.y0 = 0.25 * (1.0 - lam1_sq);
    return b;
  }

  /// eta = 1 + theta at the necessary / sufficient power.
  double eta_nec() const { return (1.0 + lambda) / (1.0 - lambda); }
  double eta_suf() const { return (1.0 + lambda1) / (1.0 - lambda1); }
  double theta_nec() const { return 2.0 * lambda / (1.0 - lambda); }
  double theta_suf() const { return 2.0 * lambda1 / (1.0 - lambda1); }
};

struct PowerInterval {
  double p_suf = 0.0;
  double p_exact = 0.0;
  double p_nec = 0.0;
};

inline constexpr double kPowerRelTolerance = 1e-10;

namespace detail {
inline void check_sigma2(double sigma2) {
  require(std::isfinite(sigma2) && sigma2 > 0.0, "noise variance must be positive");
}
}  // namespace detail

/// Necessary power: the TVD lower bound H^2 reaches delta here.
inline double p_nec(std::int64_t n, double delta, double sigma2 = 1.0) {
  detail::check_sigma2(sigma2);
  return CovertBudget::make(n, delta).theta_nec() * sigma2;
}

/// Sufficient power: the Sason upper bound reaches delta here.
inline double p_suf(std::int64_t n, double delta, double sigma2 = 1.0) {
  detail::check_sigma2(sigma2);
  return CovertBudget::make(n, delta).theta_suf() * sigma2;
}

/// The power at which the exact TVD equals delta, found by bisection inside
/// [p_suf, p_nec].
inline PowerInterval p_exact(std::int64_t n, double delta, double sigma2 = 1.0) {
  detail::check_sigma2(sigma2);
  const CovertBudget budget = CovertBudget::make(n, delta);
  const double lo = budget.theta_suf();
  const double hi = budget.theta_nec();
  auto excess = [&](double theta) { return tvd_exact(ChannelPoint{n, sigma2, theta}).value - delta; };

  const double f_lo = excess(lo);
  const double f_hi = excess(hi);
  // Tolerate rounding at the bracket ends; anything larger means the bounds
  // failed to sandwich the exact TVD.
  constexpr double slack = 1e-12;
  if (f_lo > slack || f_hi < -slack) {
    throw ConsistencyError("exact TVD is not bracketed by the sufficient and necessary powers");
  }

  PowerInterval out{lo * sigma2, 0.0, hi * sigma2};
  if (f_lo >= 0.0) {
    out.p_exact = out.p_suf;
  } else if (f_hi <= 0.0) {
    out.p_exact = out.p_nec;
  } else {
    auto tol = [](double a, double b) { return std::abs(b - a) <= kPowerRelTolerance * std::abs(b); };
    const auto [a, b] = boost::math::tools::bisect(excess, lo, hi, tol);
    out.p_exact = 0.5 * (a + b) * sigma2;
  }
  return out;
}

}  // namespace covert
