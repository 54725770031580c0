#pragma once

// TVD along scaling laws theta_n = n^-tau and least-squares rate fits:
//   tau < 1/2:  1 - V_T ~ c exp(-k n^{1-2tau}), fit ln(-ln(1-V_T)) against ln n
//   tau > 1/2:  V_T ~ c n^{s}, s in [1-2tau, (1-2tau)/2], fit ln V_T against ln n

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "covert/channel.hpp"
#include "covert/divergences.hpp"
#include "covert/error.hpp"
#include "covert/numerics.hpp"
#include "covert/tvd.hpp"

namespace covert {

enum class GridKind { log, linear };

struct ScalingPoint {
  std::int64_t n = 0;
  double tvd = 0.0;
  double complement = 1.0;  // 1 - tvd, kept separately for precision near 1
};

struct ScalingSeries {
  double tau = 0.0;
  std::vector<ScalingPoint> points;
  GridKind grid_kind = GridKind::log;
};

enum class FitTransform { log_neg_log_complement, log_log };

struct RateFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  FitTransform transform = FitTransform::log_log;
  // Range the exponent is expected in: 1-2tau for tau < 1/2,
  // [1-2tau, (1-2tau)/2] for tau > 1/2.
  double expected_low = 0.0;
  double expected_high = 0.0;

  bool conclusive() const { return r_squared >= 0.99; }
};

inline constexpr double kConclusiveRSquared = 0.99;

/// `points` integers log-spaced over [n_min, n_max], rounded and deduplicated.
inline std::vector<std::int64_t> log_grid(std::int64_t n_min, std::int64_t n_max, int points) {
  detail::require(n_min >= 1 && n_max >= n_min, "grid needs 1 <= n_min <= n_max");
  detail::require(points >= 1, "grid needs at least one point");
  std::vector<std::int64_t> out;
  const double l0 = std::log(static_cast<double>(n_min));
  const double l1 = std::log(static_cast<double>(n_max));
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const auto n = static_cast<std::int64_t>(std::llround(std::exp(l0 + (l1 - l0) * frac)));
    if (out.empty() || n > out.back()) out.push_back(std::clamp(n, n_min, n_max));
  }
  return out;
}

inline std::vector<std::int64_t> linear_grid(std::int64_t n_min, std::int64_t n_max, int points) {
  detail::require(n_min >= 1 && n_max >= n_min, "grid needs 1 <= n_min <= n_max");
  detail::require(points >= 1, "grid needs at least one point");
  std::vector<std::int64_t> out;
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const auto n = static_cast<std::int64_t>(std::llround(n_min + (n_max - n_min) * frac));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

/// Exact TVD at theta = n^-tau for every n of the grid, evaluated in parallel
/// and returned in grid order.
inline ScalingSeries sweep_tvd(double tau, const std::vector<std::int64_t>& n_grid,
                               GridKind kind = GridKind::log) {
  detail::require(tau > 0.0 && tau < 1.0, "tau must lie in (0,1)");
  detail::require(!n_grid.empty(), "grid must be nonempty");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    detail::require(n_grid[i] > n_grid[i - 1], "grid must be strictly increasing");
  }
  ScalingSeries out;
  out.tau = tau;
  out.grid_kind = kind;
  out.points = parallel_map(n_grid, [tau](std::int64_t n) {
    const TvdEvaluation e = tvd_exact(ChannelPoint::from_tau(n, tau));
    return ScalingPoint{n, e.value, e.complement};
  });
  return out;
}

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace detail

inline RateFit fit_rate(const ScalingSeries& series) {
  const auto& pts = series.points;
  if (pts.size() < 6) throw FitError("rate fit needs at least 6 points");
  if (series.tau == 0.5) throw FitError("tau = 1/2 is the stationary regime; there is no rate to fit");
  const bool rising = series.tau < 0.5;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const bool ok = rising ? pts[i].complement < pts[i - 1].complement : pts[i].tvd < pts[i - 1].tvd;
    if (!ok) throw FitError("series is not strictly monotone");
  }

  std::vector<double> x, y;
  for (const auto& p : pts) {
    x.push_back(std::log(static_cast<double>(p.n)));
    if (rising) {
      if (!(p.complement > 0.0 && p.complement < 1.0)) throw FitError("1 - tvd outside (0,1)");
      y.push_back(std::log(-std::log(p.complement)));
    } else {
      if (!(p.tvd > 0.0)) throw FitError("tvd must be positive for a log fit");
      y.push_back(std::log(p.tvd));
    }
  }
  const auto line = detail::least_squares(x, y);
  RateFit fit;
  fit.exponent = line.slope;
  fit.prefactor = std::exp(line.intercept);
  fit.r_squared = line.r_squared;
  fit.transform = rising ? FitTransform::log_neg_log_complement : FitTransform::log_log;
  const double s = 1.0 - 2.0 * series.tau;
  fit.expected_low = s;
  fit.expected_high = rising ? s : 0.5 * s;
  return fit;
}

/// Spread max - min of the exact TVD at theta = c n^{-1/2} over the grid.
inline double stationarity_check(const std::vector<std::int64_t>& n_grid, double c) {
  detail::require(!n_grid.empty(), "grid must be nonempty");
  detail::require(c > 0.0 && std::isfinite(c), "c must be positive");
  const auto values = parallel_map(n_grid, [c](std::int64_t n) {
    return tvd_exact(ChannelPoint{n, 1.0, c / std::sqrt(static_cast<double>(n))}).value;
  });
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

/// D(P0||P1) in nats over its small-theta asymptote (n/4) theta^2.
inline double kl_rev_ratio(const ChannelPoint& point) {
  detail::require(point.theta > 0.0, "kl_rev_ratio requires theta > 0");
  const double d = kl_divergences(point, Units::nats).kl_rev;
  return d / (0.25 * static_cast<double>(point.n) * point.theta * point.theta);
}

}  // namespace covert
