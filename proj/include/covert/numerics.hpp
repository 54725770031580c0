#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <thread>
#include <vector>

#include "covert/error.hpp"

namespace covert {

/// Nodes and weights of the n-point Gauss-Hermite rule for weight e^{-x^2}.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the orthonormal Hermite recurrence, from the usual
/// asymptotic initial guesses. Cached per order by the caller if needed.
inline HermiteRule gauss_hermite(int order) {
  detail::require(order >= 1 && order <= 150, "Gauss-Hermite order must be in [1, 150]");
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const int m = (order + 1) / 2;
  HermiteRule rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * order) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 3e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw AccuracyError("Gauss-Hermite node iteration did not converge");
    rule.nodes[i] = z;
    rule.nodes[order - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[order - 1 - i] = rule.weights[i];
  }
  if (order % 2 == 1) rule.nodes[m - 1] = 0.0;
  return rule;
}

/// E[h(Z)] for standard normal Z under a Gauss-Hermite rule.
template <class F>
double normal_expectation(const HermiteRule& rule, F&& h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * h(std::numbers::sqrt2 * rule.nodes[i]);
  }
  return sum / std::sqrt(std::numbers::pi);
}

/// Number of worker threads used by the parallel helpers.
inline unsigned worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// out[i] = fn(in[i]), evaluated on up to worker_count() threads. The result
/// order is the input order regardless of scheduling; the first exception
/// (by index) is rethrown.
template <class T, class F>
auto parallel_map(const std::vector<T>& in, F fn) -> std::vector<decltype(fn(in[0]))> {
  using R = decltype(fn(in[0]));
  std::vector<R> out(in.size());
  std::vector<std::exception_ptr> errors(in.size());
  const std::size_t workers = std::min<std::size_t>(worker_count(), in.size());
  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < in.size(); i += workers) {
      try {
        out[i] = fn(in[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace covert
