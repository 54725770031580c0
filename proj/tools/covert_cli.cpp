// covert_cli: command-line front end for the covert TVD library.
//
//   covert_cli tvd --n 2 --theta 1
//   covert_cli sweep --tau 0.5 --n-min 1000 --n-max 100000 --points 12 --format csv
//   covert_cli figures --output-dir out --seed 7
//
// Exit codes: 0 ok, 1 I/O failure, 2 usage, 3 domain/regime, 4 accuracy/consistency/fit.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covert/covert.hpp"

namespace fs = std::filesystem;
using namespace covert;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match header");
    rows.push_back(std::move(row));
  }
};

std::string format_double(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& c) {
  struct Visit {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v, 17); }
    std::string operator()(const std::string& v) const { return csv_field(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visit{}, c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

// nlohmann serializes doubles with the shortest round-tripping representation.
// Non-finite values have no JSON literal and become null.
void write_json(std::ostream& os, const std::string& command, const Table& t) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              obj[t.columns[i]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
            } else {
              obj[t.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

fs::path resolve_output(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("COVERT_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  return p;
}

void emit(const std::string& command, const Table& t, const std::string& format, const std::string& output) {
  auto write = [&](std::ostream& os) {
    if (format == "json") {
      write_json(os, command, t);
    } else {
      write_csv(os, t);
    }
  };
  if (output.empty()) {
    write(std::cout);
    return;
  }
  const fs::path p = resolve_output(output);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot open " + p.string() + " for writing");
  write(os);
  if (!os) throw IoError("write to " + p.string() + " failed");
}

// --theta / --tau resolution shared by the point commands.
struct PointArgs {
  std::int64_t n = 0;
  double sigma2 = 1.0;
  std::optional<double> theta;
  std::optional<double> tau;

  void add_to(CLI::App* app) {
    app->add_option("--n", n, "blocklength")->required();
    app->add_option("--sigma2", sigma2, "noise variance")->capture_default_str();
    auto* t = app->add_option("--theta", theta, "snr p/sigma^2");
    auto* u = app->add_option("--tau", tau, "snr exponent, theta = n^-tau");
    t->excludes(u);
  }

  ChannelPoint point() const {
    if (!theta && !tau) throw UsageError("one of --theta or --tau is required");
    ChannelPoint p;
    if (theta) {
      p = ChannelPoint{n, sigma2, *theta};
    } else {
      p = ChannelPoint::from_tau(n, *tau, sigma2);
    }
    p.validate();
    return p;
  }

  double tau_or_nan() const { return tau ? *tau : kNaN; }
};

std::vector<std::int64_t> make_grid(const std::string& kind, std::int64_t lo, std::int64_t hi, int points) {
  return kind == "linear" ? linear_grid(lo, hi, points) : log_grid(lo, hi, points);
}

// ---- commands --------------------------------------------------------------

struct Options {
  std::string format = "csv";
  std::string output;
};

void run_tvd(const PointArgs& args, const std::string& method, const Options& opt, bool text) {
  const ChannelPoint pt = args.point();
  std::vector<TvdEvaluation> evals;
  if (method == "exact" || method == "all") evals.push_back(tvd_exact(pt));
  if (method == "series" || method == "all") evals.push_back(tvd_series(pt));
  if (method == "quadrature" || method == "all") evals.push_back(tvd_quadrature(pt));

  if (text) {
    std::ostringstream os;
    for (const auto& e : evals) {
      if (evals.size() > 1) os << method_name(e.method) << ' ';
      os << format_double(e.value, 15) << '\n';
    }
    if (opt.output.empty()) {
      std::cout << os.str();
    } else {
      const fs::path p = resolve_output(opt.output);
      std::ofstream f(p, std::ios::binary);
      if (!(f << os.str())) throw IoError("cannot write " + p.string());
    }
    return;
  }
  Table t{{"n", "sigma2", "theta", "tau", "method", "tvd", "complement", "terms_used", "err_estimate"}, {}};
  for (const auto& e : evals) {
    t.add({pt.n, pt.sigma2, pt.theta, args.tau_or_nan(), std::string(method_name(e.method)), e.value, e.complement,
           static_cast<std::int64_t>(e.terms_used), e.err_estimate});
  }
  emit("tvd", t, opt.format, opt.output);
}

void run_bounds(const PointArgs& args, const Options& opt) {
  const ChannelPoint pt = args.point();
  const auto b = tvd_bounds(pt);
  const auto e = tvd_exact(pt);
  Table t{{"n", "sigma2", "theta", "tau", "tvd_exact", "hellinger_sq", "sqrt2h_upper", "sason_upper", "pinsker_upper",
           "pinsker_rev_upper", "kl_exp_upper", "kl_fwd_bits", "kl_rev_bits"},
          {}};
  t.add({pt.n, pt.sigma2, pt.theta, args.tau_or_nan(), e.value, b.hellinger_sq, b.sqrt2h_upper, b.sason_upper,
         b.pinsker_upper, b.pinsker_rev_upper, b.kl_exp_upper, b.kl_fwd, b.kl_rev});
  emit("bounds", t, opt.format, opt.output);
}

void run_power(std::int64_t n, double delta, double sigma2, const Options& opt) {
  const auto iv = p_exact(n, delta, sigma2);
  Table t{{"n", "delta", "sigma2", "p_suf", "p_exact", "p_nec"}, {}};
  t.add({n, delta, sigma2, iv.p_suf, iv.p_exact, iv.p_nec});
  emit("power", t, opt.format, opt.output);
}

struct ThroughputArgs {
  std::int64_t n = 0;
  double eps = 1e-3;
  std::string kind = "converse";
  double power = kNaN;
  double mu = 0.8;
  double tau0 = 1e-4;
  double delta = kNaN;
};

void run_throughput(const ThroughputArgs& a, const Options& opt) {
  const bool needs_power = a.kind != "covert";
  if (needs_power && std::isnan(a.power)) throw UsageError("--power is required for --kind " + a.kind);
  if (!needs_power && std::isnan(a.delta)) throw UsageError("--delta is required for --kind covert");

  std::vector<ThroughputReport> reports;
  if (a.kind == "converse") {
    reports.push_back(converse_na(a.n, a.eps, a.power));
  } else if (a.kind == "achievability") {
    reports.push_back(achievability_na(a.n, a.eps, a.power, a.mu, a.tau0));
  } else if (a.kind == "achievability-full") {
    reports.push_back(achievability_full(a.n, a.eps, a.power, a.mu));
  } else {
    const auto [suf, nec] = covert_throughput_bounds(a.n, a.eps, a.delta);
    reports.push_back(suf);
    reports.push_back(nec);
  }
  const bool uses_mu = a.kind == "achievability" || a.kind == "achievability-full";
  Table t{{"n", "eps", "power", "mu", "tau0", "delta", "kind", "bits", "term_first", "term_second", "term_logn",
           "term_other", "regime_ok", "r_star", "tau0_used", "b_mu", "note"},
          {}};
  for (const auto& r : reports) {
    t.add({a.n, a.eps, needs_power ? a.power : kNaN, uses_mu ? a.mu : kNaN, a.kind == "achievability" ? a.tau0 : kNaN,
           needs_power ? kNaN : a.delta, std::string(kind_name(r.kind)), r.bits, r.term_first, r.term_second,
           r.term_logn, r.term_other, r.regime_ok, r.r_star, a.kind == "achievability" ? a.tau0 : r.tau0, r.b_mu,
           r.note});
  }
  emit("throughput", t, opt.format, opt.output);
}

struct GridArgs {
  double tau = kNaN;
  std::int64_t n_min = 1000;
  std::int64_t n_max = 100000;
  int points = 12;
  std::string grid = "log";

  void add_to(CLI::App* app) {
    app->add_option("--tau", tau, "snr exponent")->required();
    app->add_option("--n-min", n_min, "smallest blocklength")->capture_default_str();
    app->add_option("--n-max", n_max, "largest blocklength")->capture_default_str();
    app->add_option("--points", points, "grid points")->capture_default_str();
    app->add_option("--grid", grid, "grid spacing")->check(CLI::IsMember({"log", "linear"}))->capture_default_str();
  }

  std::vector<std::int64_t> n_grid() const { return make_grid(grid, n_min, n_max, points); }
};

void run_sweep(const GridArgs& g, const Options& opt) {
  const auto series = sweep_tvd(g.tau, g.n_grid(), g.grid == "linear" ? GridKind::linear : GridKind::log);
  Table t{{"n", "theta", "tvd_exact"}, {}};
  for (const auto& p : series.points) {
    t.add({p.n, ChannelPoint::from_tau(p.n, g.tau).theta, p.tvd});
  }
  emit("sweep", t, opt.format, opt.output);
}

void run_fit(const GridArgs& g, const Options& opt) {
  const auto series = sweep_tvd(g.tau, g.n_grid(), g.grid == "linear" ? GridKind::linear : GridKind::log);
  const auto fit = fit_rate(series);
  const double tol = 0.05;
  const bool in_range = fit.exponent >= fit.expected_low - tol && fit.exponent <= fit.expected_high + tol;
  Table t{{"tau", "n_min", "n_max", "points", "grid", "transform", "exponent", "prefactor", "r_squared",
           "expected_low", "expected_high", "in_range", "conclusive"},
          {}};
  t.add({g.tau, g.n_min, g.n_max, static_cast<std::int64_t>(series.points.size()), g.grid,
         std::string(fit.transform == FitTransform::log_log ? "log-log" : "log-neg-log-complement"), fit.exponent,
         fit.prefactor, fit.r_squared, fit.expected_low, fit.expected_high, in_range, fit.conclusive()});
  emit("fit-rate", t, opt.format, opt.output);
}

void run_mc(const PointArgs& args, std::int64_t m, std::uint64_t seed, std::optional<double> threshold,
            const Options& opt) {
  const ChannelPoint pt = args.point();
  const double r2 = threshold ? *threshold : lrt_threshold(pt);
  const auto est = simulate_test(pt, m, seed, r2);
  const double exact = tvd_exact(pt).value;
  Table t{{"n", "sigma2", "theta", "tau", "m", "seed", "threshold", "alpha_hat", "beta_hat", "tvd_hat", "std_err",
           "tvd_exact"},
          {}};
  t.add({pt.n, pt.sigma2, pt.theta, args.tau_or_nan(), m, std::to_string(seed), r2, est.alpha_hat, est.beta_hat,
         est.tvd_hat(), est.std_err, exact});
  emit("mc", t, opt.format, opt.output);
}

// ---- figures ---------------------------------------------------------------

Table power_vs_n(double delta) {
  Table t{{"delta", "n", "p_suf", "p_exact", "p_nec"}, {}};
  const auto grid = log_grid(100, 10000, 25);
  const auto rows = parallel_map(grid, [delta](std::int64_t n) { return p_exact(n, delta); });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.add({delta, grid[i], rows[i].p_suf, rows[i].p_exact, rows[i].p_nec});
  }
  return t;
}

Table power_vs_delta(std::int64_t n) {
  Table t{{"n", "delta", "p_suf", "p_exact", "p_nec"}, {}};
  std::vector<double> deltas;
  constexpr int points = 25;
  for (int i = 0; i < points; ++i) deltas.push_back(1e-3 * std::pow(500.0, static_cast<double>(i) / (points - 1)));
  const auto rows = parallel_map(deltas, [n](double d) { return p_exact(n, d); });
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    t.add({n, deltas[i], rows[i].p_suf, rows[i].p_exact, rows[i].p_nec});
  }
  return t;
}

Table tvd_vs_n() {
  Table t{{"tau", "n", "theta", "tvd_exact"}, {}};
  const auto grid = log_grid(100, 1000000, 30);
  for (double tau : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8}) {
    for (const auto& p : sweep_tvd(tau, grid).points) {
      t.add({tau, p.n, ChannelPoint::from_tau(p.n, tau).theta, p.tvd});
    }
  }
  return t;
}

struct BoundsRow {
  double tvd, hellinger_sq, sason, pinsker, series;
};

Table bounds_vs_n(double tau) {
  const bool low = tau < 0.5;
  Table t{{"tau", "n", "theta", "tvd_exact", low ? "hellinger_sq" : "pinsker_upper", "sason_upper",
           low ? "tvd_series_low_tau" : "tvd_series_high_tau"},
          {}};
  const auto grid = log_grid(1000, 100000, 20);
  const auto rows = parallel_map(grid, [tau](std::int64_t n) {
    const auto pt = ChannelPoint::from_tau(n, tau);
    const auto b = tvd_bounds(pt);
    return BoundsRow{tvd_exact(pt).value, b.hellinger_sq, b.sason_upper, b.pinsker_upper, tvd_series(pt).value};
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& r = rows[i];
    t.add({tau, grid[i], ChannelPoint::from_tau(grid[i], tau).theta, r.tvd, low ? r.hellinger_sq : r.pinsker, r.sason,
           r.series});
  }
  return t;
}

Table mc_vs_n(std::uint64_t seed) {
  constexpr double tau = 0.5;
  constexpr std::int64_t m = 100000;
  Table t{{"seed", "m", "tau", "n", "theta", "tvd_exact", "tvd_hat", "std_err"}, {}};
  for (std::int64_t n : {100, 200, 500, 1000, 2000}) {
    const auto pt = ChannelPoint::from_tau(n, tau);
    const auto est = simulate_test(pt, m, seed);
    t.add({std::to_string(seed), m, tau, n, pt.theta, tvd_exact(pt).value, est.tvd_hat(), est.std_err});
  }
  return t;
}

void run_figures(const std::string& dir_flag, const std::string& format, std::optional<std::uint64_t> seed) {
  std::string dir = dir_flag;
  if (dir.empty()) {
    const char* env = std::getenv("COVERT_OUTPUT_DIR");
    dir = env && *env ? env : ".";
  }
  fs::create_directories(dir);
  const std::string ext = format == "json" ? ".json" : ".csv";
  auto save = [&](const std::string& name, const Table& t) {
    const fs::path p = fs::path(dir) / (name + ext);
    emit("figures/" + name, t, format, p.string());
    std::cout << p.string() << '\n';
  };
  save("fig2", power_vs_n(0.1));
  save("fig3", power_vs_n(0.01));
  save("fig6", power_vs_delta(2000));
  save("fig7", tvd_vs_n());
  save("fig8", bounds_vs_n(0.3));
  save("fig9", bounds_vs_n(0.7));
  if (seed) save("fig_mc", mc_vs_n(*seed));
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "covert_cli: " << kind << ": " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total variation distance, covert power and throughput for the AWGN channel"};
  app.require_subcommand(1);

  Options opt;
  auto add_io = [&opt](CLI::App* sub, bool allow_text) {
    std::vector<std::string> formats{"csv", "json"};
    if (allow_text) formats.push_back("text");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("--output", opt.output, "output file (default stdout)");
  };

  PointArgs point;
  std::string method = "exact";
  auto* tvd = app.add_subcommand("tvd", "TVD at one (n, theta)");
  point.add_to(tvd);
  tvd->add_option("--method", method, "evaluation route")
      ->check(CLI::IsMember({"exact", "series", "quadrature", "all"}))
      ->capture_default_str();
  add_io(tvd, true);

  auto* bounds = app.add_subcommand("bounds", "TVD with its divergence bounds");
  point.add_to(bounds);
  add_io(bounds, false);

  std::int64_t power_n = 0;
  double delta = kNaN, sigma2 = 1.0;
  auto* power = app.add_subcommand("power", "sufficient, exact and necessary power for a TVD budget");
  power->add_option("--n", power_n, "blocklength")->required();
  power->add_option("--delta", delta, "TVD budget")->required();
  power->add_option("--sigma2", sigma2, "noise variance")->capture_default_str();
  add_io(power, false);

  ThroughputArgs tp;
  auto* throughput = app.add_subcommand("throughput", "normal-approximation throughput bounds in bits");
  throughput->add_option("--n", tp.n, "blocklength")->required();
  throughput->add_option("--eps", tp.eps, "decoding error probability")->capture_default_str();
  throughput->add_option("--kind", tp.kind, "bound")
      ->check(CLI::IsMember({"converse", "achievability", "achievability-full", "covert"}))
      ->capture_default_str();
  throughput->add_option("--power", tp.power, "signal power P");
  throughput->add_option("--mu", tp.mu, "codeword shell parameter")->capture_default_str();
  throughput->add_option("--tau0", tp.tau0, "tau0 for --kind achievability")->capture_default_str();
  throughput->add_option("--delta", tp.delta, "TVD budget for --kind covert");
  add_io(throughput, false);

  GridArgs grid;
  auto* sweep = app.add_subcommand("sweep", "exact TVD along theta = n^-tau");
  grid.add_to(sweep);
  add_io(sweep, false);

  auto* fit = app.add_subcommand("fit-rate", "rate fit of the TVD along theta = n^-tau");
  grid.add_to(fit);
  add_io(fit, false);

  std::int64_t m = 1000000;
  std::uint64_t seed = 1;
  std::optional<double> threshold;
  auto* mc = app.add_subcommand("mc", "Monte Carlo likelihood ratio test");
  point.add_to(mc);
  mc->add_option("--m", m, "samples per hypothesis")->capture_default_str();
  mc->add_option("--seed", seed, "RNG seed")->capture_default_str();
  mc->add_option("--threshold", threshold, "squared-radius threshold (default: likelihood ratio test)");
  add_io(mc, false);

  std::string out_dir;
  std::optional<std::uint64_t> fig_seed;
  auto* figures = app.add_subcommand("figures", "write every figure data file");
  figures->add_option("--output-dir", out_dir, "directory (default $COVERT_OUTPUT_DIR or .)");
  figures->add_option("--seed", fig_seed, "seed; enables the Monte Carlo figure");
  figures->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "covert_cli: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (tvd->parsed()) {
      const bool text = tvd->count("--format") == 0 || opt.format == "text";
      run_tvd(point, method, opt, text);
    } else if (bounds->parsed()) {
      run_bounds(point, opt);
    } else if (power->parsed()) {
      run_power(power_n, delta, sigma2, opt);
    } else if (throughput->parsed()) {
      run_throughput(tp, opt);
    } else if (sweep->parsed()) {
      run_sweep(grid, opt);
    } else if (fit->parsed()) {
      run_fit(grid, opt);
    } else if (mc->parsed()) {
      run_mc(point, m, seed, threshold, opt);
    } else if (figures->parsed()) {
      run_figures(out_dir, opt.format, fig_seed);
    }
  } catch (const UsageError& e) {
    return report("usage", e, 2);
  } catch (const DomainError& e) {
    return report("domain error", e, 3);
  } catch (const RegimeError& e) {
    return report("regime error", e, 3);
  } catch (const OrderError& e) {
    return report("domain error", e, 3);
  } catch (const AccuracyError& e) {
    return report("accuracy error", e, 4);
  } catch (const ConsistencyError& e) {
    return report("consistency error", e, 4);
  } catch (const FitError& e) {
    return report("fit error", e, 4);
  } catch (const IoError& e) {
    return report("io error", e, 1);
  } catch (const fs::filesystem_error& e) {
    return report("io error", e, 1);
  }
  return 0;
}
