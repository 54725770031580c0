#pragma once

// Asymptotic and convergent expansions of the incomplete gamma functions in
// the three regimes that matter for the adversary's TVD:
//
//   lower:      gamma(a+1,z) = e^{-z} z^{a+1} sum_k c_k(a)  Phi_k(z-a),   z < a
//   upper:      Gamma(a+1,z) ~ e^{-z} z^{a+1} sum_k c*_k(a) / (z-a)^{k+1}, z > a
//   transition: Gamma(a+1,z) ~ e^{-a} a^{a+1} sum_k d_k(a)  Phi_k(a,z),   |z-a| <= a^{2/3}
//
// All results are returned regularized by Gamma(a+1). Regime conditions are
// hard preconditions; choosing a regime is the caller's job.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "covert/error.hpp"
#include "covert/special_fn.hpp"

namespace covert {

inline constexpr int kMaxExpansionOrder = 60;
inline constexpr int kDefaultExpansionOrder = 20;

/// Coefficients c_k(a) of the linear-argument expansions and their scaled
/// companions c*_k(a) = (-1)^k k! c_k(a).
struct ExpansionCoeffs {
  double a = 0.0;
  int order = 0;
  std::vector<double> c;
  std::vector<double> c_star;
};

enum class PhiRegime { linear_argument, transition };

struct PhiSequence {
  std::vector<double> values;
  PhiRegime regime = PhiRegime::linear_argument;
  double a = 0.0;
  double z = 0.0;
  // Linear regime only: the closed-form sum evaluated independently of the
  // recurrence, and the largest relative gap between the two.
  std::vector<double> closed_form;
  double max_rel_discrepancy = 0.0;
  // |Phi_K| |z-a|^{K+1} / K!, which tends to 1 as |z-a| grows (linear regime).
  double decay_ratio = 0.0;
};

enum class Truncation {
  fixed,          // sum exactly K+1 terms
  smallest_term,  // stop before the first pair of terms larger than the previous pair
};

/// A truncated expansion value (regularized) with truncation bookkeeping.
struct SeriesValue {
  double value = 0.0;
  int terms_used = 0;
  double last_term = 0.0;  // magnitude of the last term included, same scale as value
};

namespace detail {

inline void check_order(int order) {
  if (order < 0) throw DomainError("expansion order must be nonnegative");
  if (order > kMaxExpansionOrder) throw OrderError("expansion order above 60 overflows k! c_k");
}

inline void check_shape(double a) {
  if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("expansion shape must be positive and finite");
}

// c_k(a) = sum_j (-a)_j / j! * a^{k-j} / (k-j)!, used directly only to seed
// the recurrence.
inline double defining_sum_coeff(double a, int k) {
  double sum = 0.0;
  double rising = 1.0;  // (-a)_j / j!
  for (int j = 0; j <= k; ++j) {
    if (j > 0) rising *= (-a + j - 1) / j;
    sum += rising * std::pow(a, k - j) / std::tgamma(k - j + 1.0);
  }
  return sum;
}

// Accumulates series terms under a truncation policy. Odd and even terms of
// these expansions differ in magnitude by a factor ~sqrt(a), so the smallest
// term test compares consecutive pairs rather than single terms.
class TruncatedSum {
 public:
  explicit TruncatedSum(Truncation policy) : policy_(policy) {}

  // Returns false once the series should stop; the rejected term (and any
  // pending partner) is not included.
  bool add(double term) {
    if (policy_ == Truncation::fixed) {
      commit(term);
      return true;
    }
    if (!has_pending_) {
      pending_ = term;
      has_pending_ = true;
      return true;
    }
    const double pair = pending_ + term;
    has_pending_ = false;
    if (last_pair_ >= 0.0 && std::abs(pair) > last_pair_) {
      stopped_ = true;
      return false;
    }
    last_pair_ = std::abs(pair);
    commit(pending_);
    commit(term);
    return true;
  }

  // Includes a dangling unpaired term if it is no larger than the last pair.
  void finish() {
    if (has_pending_ && !stopped_ && (last_pair_ < 0.0 || std::abs(pending_) <= last_pair_)) commit(pending_);
    has_pending_ = false;
  }

  double sum() const { return sum_; }
  int count() const { return count_; }
  double last_nonzero() const { return last_nonzero_; }

 private:
  void commit(double term) {
    sum_ += term;
    ++count_;
    if (term != 0.0) last_nonzero_ = std::abs(term);
  }

  Truncation policy_;
  double sum_ = 0.0;
  int count_ = 0;
  double last_nonzero_ = 0.0;
  double pending_ = 0.0;
  bool has_pending_ = false;
  bool stopped_ = false;
  double last_pair_ = -1.0;
};

// e^{-z} z^{a+1} / Gamma(a+1)
inline double lower_prefactor(double a, double z) { return z * std::exp(log_gamma_prefactor(a, z)); }

// Closed form of Phi_k(w), w = z - a, rearranged into a positive or
// decreasing tail sum wherever the literal form would cancel.
inline double phi_linear_closed(double w, int k) {
  const double x = -w;  // a - z
  if (std::abs(x) < k + 1.0) {
    // k!/x^{k+1} [1 - e^{-x} e_k(x)] = e^{-x} sum_{j>=0} k! x^j / (k+1+j)!
    double t = 1.0 / (k + 1.0);
    double sum = t;
    for (int j = 0; j < 10000; ++j) {
      t *= x / (k + 2.0 + j);
      sum += t;
      if (std::abs(t) <= 1e-17 * std::abs(sum)) break;
    }
    return std::exp(-x) * sum;
  }
  // k!/x^{k+1} - e^{-x} sum_{j=0}^k k! / ((k-j)! x^{j+1})
  double lead = 1.0 / x;
  for (int i = 1; i <= k; ++i) lead *= i / x;
  double inner = 0.0;
  double t = 1.0 / x;  // k!/((k-j)! x^{j+1}) at j = 0
  for (int j = 0; j <= k; ++j) {
    inner += t;
    t *= (k - j) / x;
  }
  return lead - std::exp(-x) * inner;
}

}  // namespace detail

/// c_k(a) for k = 0..order from c_{k+1} = [k c_k - a c_{k-1}]/(k+1), and
/// c*_k(a) from its own recurrence, cross-checked against (-1)^k k! c_k.
inline ExpansionCoeffs coeffs_c(double a, int order) {
  detail::check_shape(a);
  detail::check_order(order);
  ExpansionCoeffs out;
  out.a = a;
  out.order = order;
  out.c.resize(order + 1);
  out.c_star.resize(order + 1);

  out.c[0] = detail::defining_sum_coeff(a, 0);
  if (order >= 1) out.c[1] = detail::defining_sum_coeff(a, 1);
  for (int k = 1; k < order; ++k) out.c[k + 1] = (k * out.c[k] - a * out.c[k - 1]) / (k + 1);

  out.c_star[0] = out.c[0];
  if (order >= 1) out.c_star[1] = -out.c[1];
  for (int k = 1; k < order; ++k) out.c_star[k + 1] = -k * (out.c_star[k] + a * out.c_star[k - 1]);

  // Rounding scale: the same recurrence run on magnitudes.
  double scale_prev = 1.0, scale = 0.0, factorial = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k >= 2) {
      const double next = ((k - 1) * scale + a * scale_prev) / k;
      scale_prev = scale;
      scale = next;
    } else if (k == 1) {
      scale = a;
    }
    if (k > 0) factorial *= k;
    const double k_scale = k == 0 ? 1.0 : scale;
    const double expected = (k % 2 == 0 ? 1.0 : -1.0) * factorial * out.c[k];
    if (std::abs(out.c_star[k] - expected) > 1e-10 * factorial * k_scale + 1e-300) {
      throw ConsistencyError("c*_k recurrence disagrees with (-1)^k k! c_k");
    }
  }
  return out;
}

/// Coefficients of the transition-point expansion: d_0 = 1, d_1 = d_2 = 0,
/// d_{k+1} = [a d_{k-2} - k d_k]/(k+1) for k >= 2. They are the Taylor
/// coefficients of exp(a[ln(1+s) - s + s^2/2]).
inline std::vector<double> transition_coeffs(double a, int order) {
  detail::check_shape(a);
  detail::check_order(order);
  std::vector<double> d(order + 1, 0.0);
  d[0] = 1.0;
  for (int k = 2; k < order; ++k) d[k + 1] = (a * d[k - 2] - k * d[k]) / (k + 1);
  return d;
}

/// Phi_k(z-a) = int_0^1 s^k e^{(z-a)s} ds for k = 0..order.
///
/// The recurrence Phi_k = [e^{z-a} - k Phi_{k-1}]/(z-a) is run forward for
/// k < |z-a| and backward (Miller) above it, which keeps it stable in both
/// directions; the closed-form sum is evaluated alongside as a check.
inline PhiSequence phi_linear(double a, double z, int order) {
  detail::check_shape(a);
  detail::check_order(order);
  if (!std::isfinite(z) || !(z > 0.0)) throw DomainError("phi_linear: z must be positive");
  const double w = z - a;
  if (w == 0.0) throw RegimeError("phi_linear is singular at z = a; use the transition regime", z);
  if (w > 700.0) throw DomainError("phi_linear: z - a too large, e^{z-a} overflows");

  PhiSequence out;
  out.regime = PhiRegime::linear_argument;
  out.a = a;
  out.z = z;
  out.values.assign(order + 1, 0.0);
  const double ew = std::exp(w);
  const double aw = std::abs(w);

  const int forward_count = std::min(order + 1, static_cast<int>(std::ceil(aw)));
  if (forward_count > 0) {
    out.values[0] = std::expm1(w) / w;
    for (int k = 1; k < forward_count; ++k) out.values[k] = (ew - k * out.values[k - 1]) / w;
  }
  if (forward_count <= order) {
    int top = order;
    double damping = 1.0;
    while ((damping > 1e-20 || top < order + 8) && top < order + 5000) {
      ++top;
      damping *= aw / top;
    }
    double phi = ew / (top + 1.0 + w);
    for (int k = top; k > forward_count; --k) {
      phi = (ew - w * phi) / k;  // now Phi_{k-1}
      if (k - 1 <= order) out.values[k - 1] = phi;
    }
  }

  out.closed_form.resize(order + 1);
  for (int k = 0; k <= order; ++k) {
    out.closed_form[k] = detail::phi_linear_closed(w, k);
    const double denom = std::max(std::abs(out.closed_form[k]), 1e-300);
    out.max_rel_discrepancy =
        std::max(out.max_rel_discrepancy, std::abs(out.values[k] - out.closed_form[k]) / denom);
  }
  if (out.max_rel_discrepancy > 1e-8) {
    throw ConsistencyError("phi_linear recurrence and closed form disagree");
  }

  const double last = std::abs(out.values[order]);
  out.decay_ratio =
      last > 0.0 ? std::exp(std::log(last) + (order + 1) * std::log(aw) - std::lgamma(order + 1.0)) : 0.0;
  return out;
}

/// Phi_k(a,z) = int_{(z-a)/a}^inf s^k e^{-a s^2/2} ds for k = 0..order.
inline PhiSequence phi_transition(double a, double z, int order) {
  detail::check_shape(a);
  detail::check_order(order);
  if (!std::isfinite(z) || !(z > 0.0)) throw DomainError("phi_transition: z must be positive");

  PhiSequence out;
  out.regime = PhiRegime::transition;
  out.a = a;
  out.z = z;
  out.values.assign(order + 1, 0.0);
  const double u = z - a;
  const double gauss = std::exp(-u * u / (2.0 * a));
  const double s0 = u / a;
  out.values[0] = std::sqrt(std::numbers::pi / (2.0 * a)) * covert::erfc(u / std::sqrt(2.0 * a));
  if (order >= 1) out.values[1] = gauss / a;
  double s_pow = s0;  // s0^{k-1}
  for (int k = 2; k <= order; ++k) {
    out.values[k] = ((k - 1) * out.values[k - 2] + s_pow * gauss) / a;
    s_pow *= s0;
  }
  return out;
}

/// gamma(a+1,z)/Gamma(a+1) from the linear-argument expansion, z < a.
inline SeriesValue gamma_series_lower(double a, double z, int order = kDefaultExpansionOrder,
                                      Truncation policy = Truncation::fixed) {
  detail::check_shape(a);
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("gamma_series_lower: z must be nonnegative");
  if (!(z < a)) throw RegimeError("gamma_series_lower requires z < a", z);
  if (z == 0.0) return {0.0, 1, 0.0};

  const auto coeffs = coeffs_c(a, order);
  const auto phi = phi_linear(a, z, order);
  detail::TruncatedSum sum(policy);
  for (int k = 0; k <= order; ++k) {
    if (!sum.add(coeffs.c[k] * phi.values[k])) break;
  }
  sum.finish();
  const double pref = detail::lower_prefactor(a, z);
  return {pref * sum.sum(), sum.count(), pref * sum.last_nonzero()};
}

/// Gamma(a+1,z)/Gamma(a+1) from the divergent large-(z-a) expansion, z > a.
/// Truncated at the smallest term by default.
inline SeriesValue gamma_series_upper(double a, double z, int order = kDefaultExpansionOrder,
                                      Truncation policy = Truncation::smallest_term) {
  detail::check_shape(a);
  if (!std::isfinite(z)) throw DomainError("gamma_series_upper: z must be finite");
  if (!(z > a)) throw RegimeError("gamma_series_upper requires z > a", z);

  const auto coeffs = coeffs_c(a, order);
  const double w = z - a;
  detail::TruncatedSum sum(policy);
  double inv_pow = 1.0 / w;
  for (int k = 0; k <= order; ++k) {
    if (!sum.add(coeffs.c_star[k] * inv_pow)) break;
    inv_pow /= w;
  }
  sum.finish();
  const double pref = detail::lower_prefactor(a, z);
  return {pref * sum.sum(), sum.count(), pref * sum.last_nonzero()};
}

/// Gamma(a+1,z)/Gamma(a+1) from the transition-point expansion,
/// |z - a| <= a^{2/3}.
inline SeriesValue gamma_series_transition(double a, double z, int order = kDefaultExpansionOrder) {
  detail::check_shape(a);
  if (!std::isfinite(z) || !(z > 0.0)) throw DomainError("gamma_series_transition: z must be positive");
  if (std::abs(z - a) > std::pow(a, 2.0 / 3.0)) {
    throw RegimeError("gamma_series_transition requires |z - a| <= a^(2/3)", z);
  }
  const auto d = transition_coeffs(a, order);
  const auto phi = phi_transition(a, z, order);
  double sum = 0.0;
  double last = 0.0;
  for (int k = 0; k <= order; ++k) {
    const double t = d[k] * phi.values[k];
    sum += t;
    if (t != 0.0) last = std::abs(t);
  }
  // e^{-a} a^{a+1} / Gamma(a+1)
  const double pref = a * std::exp(detail::log_gamma_prefactor(a, a));
  return {pref * sum, order + 1, pref * last};
}

/// Leading Stirling asymptotic of ln Gamma(n/2), obtained from Legendre's
/// duplication formula: Gamma(n/2) ~ sqrt(4 pi / n) e^{-n/2} (n/2)^{n/2}.
inline double stirling_gamma_halfn(std::int64_t n) {
  if (n < 2) throw DomainError("stirling_gamma_halfn requires n >= 2");
  const double half = 0.5 * static_cast<double>(n);
  return -half + half * std::log(half) + 0.5 * std::log(4.0 * std::numbers::pi / static_cast<double>(n));
}

}  // namespace covert
