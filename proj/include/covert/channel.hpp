#pragma once

#include <cmath>
#include <cstdint>

#include "covert/error.hpp"

namespace covert {

/// Operating point of the adversary's observation: n channel uses of noise
/// variance sigma2, with the transmitter (when active) adding per-symbol
/// power theta * sigma2.
struct ChannelPoint {
  std::int64_t n = 1;
  double sigma2 = 1.0;
  double theta = 0.0;

  /// snr following the scaling law theta = n^-tau.
  static ChannelPoint from_tau(std::int64_t n, double tau, double sigma2 = 1.0) {
    detail::require(n >= 1, "blocklength must be >= 1");
    detail::require(std::isfinite(tau), "tau must be finite");
    return ChannelPoint{n, sigma2, std::pow(static_cast<double>(n), -tau)};
  }

  double half_n() const { return 0.5 * static_cast<double>(n); }
  double power() const { return theta * sigma2; }
  double sigma1_sq() const { return sigma2 * (1.0 + theta); }

  void validate() const {
    detail::require(n >= 1, "blocklength must be >= 1");
    detail::require(std::isfinite(sigma2) && sigma2 > 0.0, "noise variance must be positive");
    detail::require(std::isfinite(theta) && theta >= 0.0, "snr must be nonnegative");
  }
};

}  // namespace covert
