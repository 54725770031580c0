#include <gtest/gtest.h>

#include <cmath>

#include "covert/tvd.hpp"
#include "oracles.hpp"

using namespace covert;

TEST(Fg, ZeroSnrLimit) {
  const auto p = fg({1000, 1.0, 0.0});
  EXPECT_EQ(p.f, 500.0);
  EXPECT_EQ(p.g, 500.0);
  const auto tiny = fg({1000, 1.0, 1e-12});
  EXPECT_NEAR(tiny.f, 500.0, 1e-9);
  EXPECT_NEAR(tiny.g, 500.0, 1e-9);
}

TEST(Fg, UnitSnr) {
  const auto p = fg({1000, 1.0, 1.0});
  EXPECT_NEAR(p.f, 1000.0 * std::log(2.0), 1e-12);
  EXPECT_NEAR(p.g, 500.0 * std::log(2.0), 1e-12);
}

TEST(Fg, Identities) {
  for (std::int64_t n : {2, 100, 100000}) {
    for (double t : {1e-6, 1e-3, 0.2, 5.0}) {
      const auto p = fg({n, 1.0, t});
      const double half = 0.5 * n;
      EXPECT_NEAR(p.f / p.g, 1.0 + t, 1e-12 * (1.0 + t));
      // f - g = (n/2) ln(1+theta); the subtraction itself costs digits when theta is small.
      EXPECT_NEAR(p.f - p.g, half * std::log1p(t), 4e-16 * p.f);
      EXPECT_LT(p.g, half);
      EXPECT_GT(p.f, half);
      EXPECT_NEAR(p.x, p.f / half - 1.0, 1e-12);
      EXPECT_NEAR(p.y, 1.0 - p.g / half, 1e-12);
    }
  }
  EXPECT_THROW(fg({10, 1.0, -1.0}), DomainError);
}

TEST(TvdExact, ZeroSnr) { EXPECT_EQ(tvd_exact({100, 1.0, 0.0}).value, 0.0); }

TEST(TvdExact, TwoDimensionsClosedForm) {
  const auto e = tvd_exact({2, 1.0, 1.0});
  EXPECT_NEAR(e.value, 0.25, 1e-12);
  EXPECT_EQ(e.method, TvdMethod::exact_gamma);
}

TEST(TvdExact, MatchesRadialOracle) {
  for (std::int64_t n : {10, 500}) {
    const double t = std::pow(static_cast<double>(n), -0.5);
    EXPECT_NEAR(tvd_exact({n, 1.0, t}).value, static_cast<double>(oracle::tvd_radial(n, t)), 1e-9);
  }
}

TEST(TvdExact, ComplementCarriesPrecision) {
  const auto e = tvd_exact(ChannelPoint::from_tau(100000, 0.2));
  EXPECT_EQ(e.value, 1.0);
  EXPECT_GT(e.complement, 0.0);
  EXPECT_LT(e.complement, 1e-20);
  // The complement is exact to working precision, not a rounding residue.
  const auto fgv = fg(ChannelPoint::from_tau(100000, 0.2));
  const double expected = reg_upper_gamma(50000.0, fgv.f) + reg_lower_gamma(50000.0, fgv.g);
  EXPECT_NEAR(e.complement, expected, 1e-12 * expected);
}

TEST(TvdExact, MonotoneInSnrAndBlocklength) {
  for (std::int64_t n : {10, 100, 1000, 10000}) {
    double prev = 0.0;
    for (double t : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0}) {
      const double v = tvd_exact({n, 1.0, t}).value;
      if (v == 1.0) break;  // saturated in double precision
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
  for (double t : {1e-3, 1e-2, 1e-1}) {
    double prev = 0.0;
    for (std::int64_t n : {10, 100, 1000, 10000}) {
      const double v = tvd_exact({n, 1.0, t}).value;
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(TvdSeries, HighTauBranch) {
  const auto p = ChannelPoint::from_tau(1000, 0.6);
  const auto s = tvd_series(p, 20);
  EXPECT_EQ(s.method, TvdMethod::series_high_tau);
  const double exact = tvd_exact(p).value;
  EXPECT_NEAR(s.value, exact, 1e-2 * exact);
  EXPECT_NEAR(s.err_estimate, std::abs(s.value - exact), 1e-15);
}

TEST(TvdSeries, DispatchAtHalfGoesHigh) {
  // ln(1/16)/ln(256) is exactly 1/2 in binary floating point.
  EXPECT_EQ(effective_tau({256, 1.0, 0.0625}), 0.5);
  EXPECT_EQ(tvd_series({256, 1.0, 0.0625}, 20).method, TvdMethod::series_high_tau);
  EXPECT_EQ(tvd_series({256, 1.0, 0.0626}, 20).method, TvdMethod::series_low_tau);
}

TEST(TvdSeries, LowTauBranchAtLargeN) {
  const auto p = ChannelPoint::from_tau(10000, 0.3);
  const auto s = tvd_series(p, 20);
  EXPECT_EQ(s.method, TvdMethod::series_low_tau);
  EXPECT_NEAR(s.value, tvd_exact(p).value, 1e-3);
}

TEST(TvdSeries, LowTauAtTwoThousand) {
  // The expansion is asymptotic in (n/2 - g)/sqrt(n/2), about 1.5 here, so
  // its accuracy is limited; the exact value is well below 0.99.
  const auto p = ChannelPoint::from_tau(2000, 0.3);
  const double exact = tvd_exact(p).value;
  EXPECT_NEAR(exact, 0.8762, 1e-4);
  EXPECT_NEAR(tvd_series(p, 20).value, exact, 5e-2);
}

TEST(TvdSeries, CollapsesAsSnrVanishes) {
  EXPECT_NEAR(tvd_series({1000, 1.0, 1e-9}, 20).value, 0.0, 1e-6);
}

TEST(TvdSeries, Preconditions) {
  EXPECT_THROW(tvd_series({50, 1.0, 0.1}, 20), DomainError);
  EXPECT_THROW(tvd_series({1000, 1.0, 0.0}, 20), DomainError);
}

TEST(TvdPrefactors, IdentityHoldsInLogSpace) {
  for (std::int64_t n : {1000, 10000}) {
    const auto logs = fg_prefactor_logs(ChannelPoint::from_tau(n, 0.3));
    EXPECT_NEAR(logs.log_f - logs.log_g, 0.0, 1e-9);
  }
}
