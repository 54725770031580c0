// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   covert_acceptance [path/to/covert_cli]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "covert/covert.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace covert;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Runs a criterion body; an exception counts as a failure with its message.
void check(int id, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    verdict(id, ok, detail);
  } catch (const std::exception& e) {
    verdict(id, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::int64_t> kOracleGrid{2, 10, 100, 500, 1000, 2000};
const std::vector<double> kOracleTaus{0.3, 0.5, 0.8};

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  return detail::least_squares(x, y).slope;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  check(1, [] {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (auto n : kOracleGrid) {
      for (double tau : kOracleTaus) {
        const auto pt = ChannelPoint::from_tau(n, tau);
        worst = std::max(worst, std::abs(tvd_exact(pt).value - tvd_quadrature(pt).value));
      }
    }
    const double secs = seconds_since(t0);
    return std::pair{worst <= 1e-8 && secs < 10.0,
                     "max |exact - quadrature| = " + fmt("%.3g", worst) + " (<= 1e-8), " + fmt("%.2f", secs) +
                         " s (< 10 s)"};
  });

  check(2, [] {
    const double v = tvd_exact({2, 1.0, 1.0}).value;
    return std::pair{std::abs(v - 0.25) <= 1e-12, "tvd_exact(n=2, theta=1) = " + fmt("%.17g", v)};
  });

  check(3, [] {
    const auto t0 = std::chrono::steady_clock::now();
    const ChannelPoint pt{500, 1.0, 0.1};
    const auto est = simulate_test(pt, 1'000'000, 42);
    const double secs = seconds_since(t0);
    const double gap = std::abs(tvd_exact(pt).value - est.tvd_hat());
    return std::pair{gap <= 4.0 * est.std_err && secs < 30.0,
                     "|exact - (1 - alpha - beta)| = " + fmt("%.3g", gap) + " vs 4 se = " +
                         fmt("%.3g", 4.0 * est.std_err) + ", " + fmt("%.2f", secs) + " s (< 30 s)"};
  });

  check(4, [] {
    double worst_high = 0.0, worst_low = 0.0;
    std::string detail;
    for (std::int64_t n : {500, 1000, 2000}) {
      for (double tau : {0.5, 0.6, 0.8}) {
        const auto pt = ChannelPoint::from_tau(n, tau);
        const auto s = tvd_series(pt, 20);
        if (s.method != TvdMethod::series_high_tau) throw std::runtime_error("high-tau point dispatched low");
        const double exact = tvd_exact(pt).value;
        worst_high = std::max(worst_high, std::abs(s.value - exact) / exact);
      }
    }
    for (std::int64_t n : {1000, 2000, 5000}) {
      const auto pt = ChannelPoint::from_tau(n, 0.3);
      const double err = std::abs(tvd_series(pt, 20).value - tvd_exact(pt).value);
      worst_low = std::max(worst_low, err);
      detail += " n=" + std::to_string(n) + ":" + fmt("%.3g", err);
    }
    return std::pair{worst_high <= 1e-2 && worst_low <= 1e-2,
                     "high-tau max rel err " + fmt("%.3g", worst_high) + " (<= 1e-2); low-tau abs err" + detail +
                         " (<= 1e-2)"};
  });

  check(5, [] {
    constexpr double slack = 1e-15;
    int violations = 0, points = 0;
    for (auto n : kOracleGrid) {
      for (double tau : kOracleTaus) {
        const auto pt = ChannelPoint::from_tau(n, tau);
        const auto b = tvd_bounds(pt);
        const double v = tvd_exact(pt).value;
        ++points;
        bool ok = b.hellinger_sq <= v + slack && v <= b.sason_upper + slack &&
                  b.sason_upper <= b.sqrt2h_upper + slack && v <= b.pinsker_upper + slack &&
                  v <= b.kl_exp_upper + slack;
        if (tau > 0.5) ok = ok && b.sason_upper <= b.pinsker_upper + slack;
        if (!ok) ++violations;
      }
    }
    return std::pair{violations == 0, std::to_string(violations) + " of " + std::to_string(points) +
                                          " grid points violate the bound ordering"};
  });

  check(6, [] {
    int violations = 0;
    double worst_closed = 0.0;
    for (std::int64_t n : {500, 1000, 2000, 5000}) {
      for (double d : {0.01, 0.05, 0.1, 0.3}) {
        const auto iv = p_exact(n, d);
        if (!(iv.p_suf <= iv.p_exact && iv.p_exact <= iv.p_nec)) ++violations;
        if (!(tvd_exact({n, 1.0, iv.p_suf}).value <= d + 1e-12)) ++violations;
        if (!(tvd_exact({n, 1.0, iv.p_nec}).value >= d - 1e-12)) ++violations;
        // Independent inversions of H^2 = d and sqrt(1 - (1 - H^2)^2) = d.
        auto h2 = [n](oracle::Real t) {
          return 1 - std::pow(4 * (1 + t) / ((2 + t) * (2 + t)), static_cast<oracle::Real>(n) / 4);
        };
        const auto nec = oracle::bisect([&](oracle::Real t) { return h2(t) - d; }, 0, 10);
        const auto suf = oracle::bisect(
            [&](oracle::Real t) {
              const auto h = h2(t);
              return std::sqrt(1 - (1 - h) * (1 - h)) - d;
            },
            0, 10);
        worst_closed = std::max({worst_closed, std::abs(iv.p_nec / static_cast<double>(nec) - 1.0),
                                 std::abs(iv.p_suf / static_cast<double>(suf) - 1.0)});
      }
    }
    return std::pair{violations == 0 && worst_closed <= 1e-9,
                     std::to_string(violations) + " sandwich violations; closed forms vs bisection max rel " +
                         fmt("%.3g", worst_closed) + " (<= 1e-9)"};
  });

  check(7, [] {
    bool ok = true;
    std::string detail;
    for (double tau : {0.2, 0.3, 0.4}) {
      const auto fit = fit_rate(sweep_tvd(tau, log_grid(1000, 100000, 12)));
      const double expected = 1.0 - 2.0 * tau;
      const bool slope_ok = std::abs(fit.exponent - expected) <= 0.05;
      const bool r2_ok = fit.r_squared >= 0.999;
      const bool pref_ok = fit.prefactor >= 0.125 && fit.prefactor <= 0.5;
      ok = ok && slope_ok && r2_ok && pref_ok;
      detail += " tau=" + fmt("%.1f", tau) + ": slope " + fmt("%.4f", fit.exponent) + " (want " +
                fmt("%.1f", expected) + "), r2 " + fmt("%.5f", fit.r_squared) + ", prefactor " +
                fmt("%.4f", fit.prefactor) + ";";
    }
    return std::pair{ok, "slope 1-2tau +-0.05, r2 >= 0.999, prefactor in [1/8, 1/2]:" + detail};
  });

  check(8, [] {
    bool ok = true;
    std::string detail;
    for (double tau : {0.6, 0.7, 0.8}) {
      const auto fit = fit_rate(sweep_tvd(tau, log_grid(1000, 100000, 12)));
      const double lo = 1.0 - 2.0 * tau - 0.05;
      const double hi = 0.5 * (1.0 - 2.0 * tau) + 0.05;
      ok = ok && fit.exponent >= lo && fit.exponent <= hi;
      detail += " tau=" + fmt("%.1f", tau) + ": " + fmt("%.4f", fit.exponent) + " in [" + fmt("%.2f", lo) + ", " +
                fmt("%.2f", hi) + "];";
    }
    return std::pair{ok, "fitted slope of ln TVD:" + detail};
  });

  check(9, [] {
    const double spread = stationarity_check(log_grid(1000, 1'000'000, 12), 1.0);
    return std::pair{spread <= 0.05, "TVD spread at theta = n^-1/2 over [1e3, 1e6] = " + fmt("%.4f", spread) +
                                         " (<= 0.05)"};
  });

  check(10, [] {
    std::vector<double> x, nec1, nec2, suf1, suf2;
    bool ordered = true;
    for (std::int64_t n : log_grid(1000, 1'000'000, 12)) {
      const auto [suf, nec] = covert_throughput_bounds(n, 1e-3, 0.1);
      ordered = ordered && suf.bits <= nec.bits;
      x.push_back(std::log(static_cast<double>(n)));
      nec1.push_back(std::log(nec.term_first));
      nec2.push_back(std::log(-nec.term_second));
      suf1.push_back(std::log(suf.term_first));
      suf2.push_back(std::log(-suf.term_second));
    }
    const double s[4] = {slope_of(x, nec1), slope_of(x, nec2), slope_of(x, suf1), slope_of(x, suf2)};
    const bool ok = ordered && std::abs(s[0] - 0.5) <= 0.05 && std::abs(s[1] - 0.25) <= 0.05 &&
                    std::abs(s[2] - 0.5) <= 0.05 && std::abs(s[3] - 0.25) <= 0.05;
    return std::pair{ok, "exponents nec " + fmt("%.4f", s[0]) + "/" + fmt("%.4f", s[1]) + ", suf " +
                             fmt("%.4f", s[2]) + "/" + fmt("%.4f", s[3]) + " (want 0.50/0.25 +-0.05); suf <= nec " +
                             (ordered ? "everywhere" : "violated")};
  });

  check(11, [] {
    double c_star_err = 0.0;
    for (double a : {10.0, 100.0, 1000.0}) {
      const auto c = coeffs_c(a, 15);
      double fact = 1.0;
      for (int k = 0; k <= 15; ++k) {
        if (k > 0) fact *= k;
        const double expected = (k % 2 ? -1.0 : 1.0) * fact * c.c[k];
        if (expected != 0.0) c_star_err = std::max(c_star_err, std::abs(c.c_star[k] / expected - 1.0));
      }
    }
    double phi_err = 0.0;
    for (double gap : {5.0, 50.0, 500.0}) {
      phi_err = std::max(phi_err, phi_linear(1000.0, 1000.0 - gap, 20).max_rel_discrepancy);
    }
    const double stirling = std::abs(std::exp(stirling_gamma_halfn(10000) - std::lgamma(5000.0)) - 1.0);
    double prefactor = 0.0;
    for (std::int64_t n : {1000, 10000}) {
      const auto v = fg(ChannelPoint::from_tau(n, 0.3));
      const oracle::Real half = n / 2.0L;
      const oracle::Real lf = half * std::log(static_cast<oracle::Real>(v.f)) - v.f;
      const oracle::Real lg = half * std::log(static_cast<oracle::Real>(v.g)) - v.g;
      prefactor = std::max(prefactor, static_cast<double>(std::fabs(lf - lg)));
    }
    const bool ok = c_star_err <= 1e-12 && phi_err <= 1e-10 && stirling <= 1e-4 && prefactor <= 1e-9;
    return std::pair{ok, "c* rel " + fmt("%.2g", c_star_err) + " (<= 1e-12), phi rel " + fmt("%.2g", phi_err) +
                             " (<= 1e-10), Stirling |ratio-1| " + fmt("%.2g", stirling) +
                             " (<= 1e-4), prefactor log gap " + fmt("%.2g", prefactor) + " (<= 1e-9)"};
  });

  check(12, [&cli] {
    if (cli.empty()) throw std::runtime_error("no CLI path given");
    const fs::path root = fs::temp_directory_path() / ("covert_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const auto t0 = std::chrono::steady_clock::now();
    for (const char* run : {"a", "b"}) {
      const std::string cmd =
          "\"" + cli + "\" figures --seed 20240601 --output-dir \"" + (root / run).string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) throw std::runtime_error("figures command failed");
    }
    const double secs = seconds_since(t0);
    int files = 0, differing = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
      ++files;
      const fs::path other = root / "b" / entry.path().filename();
      if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) ++differing;
    }
    const bool same_count = std::distance(fs::directory_iterator(root / "b"), fs::directory_iterator{}) == files;
    fs::remove_all(root);
    return std::pair{files >= 7 && differing == 0 && same_count && secs < 120.0,
                     std::to_string(files) + " files, " + std::to_string(differing) + " differ between runs, " +
                         fmt("%.2f", secs) + " s for both runs (< 120 s)"};
  });

  return failures == 0 ? 0 : 1;
}
