#pragma once

// Test-side reference computations. Deliberately independent of the library:
// plain adaptive Gauss-Legendre quadrature, direct sums and bisection in long double.

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using Real = long double;

namespace detail {

struct LegendreRule {
  std::vector<Real> x, w;
};

// 20-point Gauss-Legendre on [-1,1], nodes by Newton on the Legendre recurrence.
inline const LegendreRule& legendre20() {
  static const LegendreRule rule = [] {
    constexpr int n = 20;
    LegendreRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
      Real z = std::cos(std::numbers::pi_v<Real> * (i + 0.75L) / (n + 0.5L));
      Real dp = 0;
      for (int it = 0; it < 100; ++it) {
        Real p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const Real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        const Real dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-21L) break;
      }
      r.x[i] = z;
      r.w[i] = 2 / ((1 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

inline Real panel(const std::function<Real(Real)>& f, Real a, Real b) {
  const auto& r = legendre20();
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  Real sum = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i) sum += r.w[i] * f(mid + half * r.x[i]);
  return half * sum;
}

inline Real adapt(const std::function<Real(Real)>& f, Real a, Real b, Real whole, Real tol, int depth) {
  const Real m = (a + b) / 2;
  const Real left = panel(f, a, m);
  const Real right = panel(f, m, b);
  const Real delta = left + right - whole;
  // Below this the difference is roundoff, not truncation error. Integrands
  // like exp(500 ln t - t) carry ~1e-16 relative noise even in long double.
  const Real floor = 4096 * std::numeric_limits<Real>::epsilon() * (std::fabs(left) + std::fabs(right));
  if (std::fabs(delta) <= std::max(tol, floor)) return left + right;
  if (depth <= 0) throw std::runtime_error("oracle quadrature: depth exhausted");
  return adapt(f, a, m, left, tol / 2, depth - 1) + adapt(f, m, b, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Legendre quadrature to a relative tolerance, split into
/// `pieces` panels first so narrow peaks are never missed.
inline Real integrate(const std::function<Real(Real)>& f, Real a, Real b, Real rel_tol = 1e-15L, int pieces = 16) {
  const Real h = (b - a) / pieces;
  std::vector<Real> wholes(pieces);
  Real scale = 0;
  for (int i = 0; i < pieces; ++i) {
    wholes[i] = detail::panel(f, a + i * h, i + 1 == pieces ? b : a + (i + 1) * h);
    scale += std::fabs(wholes[i]);
  }
  const Real tol = rel_tol * scale + std::numeric_limits<Real>::min();
  Real total = 0;
  for (int i = 0; i < pieces; ++i) {
    const Real lo = a + i * h;
    const Real hi = i + 1 == pieces ? b : lo + h;
    total += detail::adapt(f, lo, hi, wholes[i], tol / pieces, 40);
  }
  return total;
}

/// P(a,z) by quadrature of the normalized gamma density.
inline Real reg_lower_gamma(Real a, Real z) {
  if (z <= 0) return 0;
  const Real lg = std::lgamma(a);
  auto density = [&](Real t) -> Real {
    if (t <= 0) return a < 1 ? 0 : (a == 1 ? 1 : 0);
    return std::exp((a - 1) * std::log(t) - t - lg);
  };
  if (a < 1) {
    // t = u^{1/a} removes the endpoint singularity: dt = (1/a) u^{1/a - 1} du
    const Real zu = std::pow(z, a);
    auto g = [&](Real u) -> Real {
      if (u <= 0) return std::exp(-lg) / a;
      const Real t = std::pow(u, 1 / a);
      return std::exp(-t - lg) / a;
    };
    return integrate(g, 0, zu);
  }
  // Integrate only where the density matters.
  const Real lo = std::max<Real>(0, a - 40 * std::sqrt(a) - 40);
  return integrate(density, std::min(lo, z), z, 1e-15L, 64);
}

inline Real erfc(Real x) {
  if (x < 0) return 2 - erfc(-x);
  auto g = [](Real t) { return 2 / std::sqrt(std::numbers::pi_v<Real>) * std::exp(-t * t); };
  return integrate(g, x, x + 40);
}

inline Real normal_q(Real x) { return erfc(x / std::numbers::sqrt2_v<Real>) / 2; }

/// Root of a monotone function on [lo, hi] by plain bisection.
inline Real bisect(const std::function<Real(Real)>& f, Real lo, Real hi, int iterations = 200) {
  Real flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const Real mid = (lo + hi) / 2;
    const Real fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

/// c_k(a) straight from its defining sum.
inline Real coeff_c(Real a, int k) {
  Real sum = 0;
  Real rising = 1;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) rising *= (-a + j - 1) / j;
    sum += rising * std::pow(a, static_cast<Real>(k - j)) / std::tgamma(static_cast<Real>(k - j + 1));
  }
  return sum;
}

/// Taylor coefficients of exp(a[ln(1+s) - s + s^2/2]) by series composition.
inline std::vector<Real> transition_taylor(Real a, int order) {
  // h(s) = a sum_{m>=3} (-1)^{m+1} s^m / m
  std::vector<Real> h(order + 1, 0);
  for (int m = 3; m <= order; ++m) h[m] = a * ((m % 2) ? 1 : -1) / m;
  // exp of a power series: e' = h' e
  std::vector<Real> e(order + 1, 0);
  e[0] = 1;
  for (int k = 1; k <= order; ++k) {
    Real acc = 0;
    for (int m = 1; m <= k; ++m) acc += m * h[m] * e[k - m];
    e[k] = acc / k;
  }
  return e;
}

/// Phi_k(w) = int_0^1 s^k e^{ws} ds.
inline Real phi_linear(Real w, int k) {
  return integrate([&](Real s) { return std::pow(s, static_cast<Real>(k)) * std::exp(w * s); }, 0, 1);
}

/// Phi_k(a,z) = int_{(z-a)/a}^inf s^k e^{-a s^2/2} ds.
inline Real phi_transition(Real a, Real z, int k) {
  const Real lo = (z - a) / a;
  const Real hi = std::max<Real>(lo, 0) + 60 / std::sqrt(a);
  return integrate([&](Real s) { return std::pow(s, static_cast<Real>(k)) * std::exp(-a * s * s / 2); }, lo, hi);
}

/// TVD between the adversary's hypotheses as the radial integral of the
/// density difference over the acceptance ball.
inline Real tvd_radial(long n, Real theta) {
  if (theta == 0) return 0;
  const Real half = n / 2.0L;
  const Real f = half * (1 + 1 / theta) * std::log1p(theta);
  const Real g = half * std::log1p(theta) / theta;
  return reg_lower_gamma(half, f) - reg_lower_gamma(half, g);
}

}  // namespace oracle
