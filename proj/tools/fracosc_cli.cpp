// Command-line front end. Exit status: 0 success, 1 I/O or internal failure,
// 2 usage error, 3 domain or regime error from the library.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "fracosc/fracosc.h"

namespace {

using nlohmann::json;
using fracosc::cli::Table;
using fracosc::cli::UsageError;

constexpr double kPi = 3.14159265358979323846;

class LibraryError : public std::runtime_error {
 public:
  LibraryError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

void check(int status) {
  if (status != FRACOSC_OK) throw LibraryError(status, fracosc_last_error());
}

struct ProcessDeleter {
  void operator()(fracosc_process* p) const { fracosc_process_destroy(p); }
};
struct ExpansionDeleter {
  void operator()(fracosc_expansion* e) const { fracosc_expansion_destroy(e); }
};
struct PathDeleter {
  void operator()(fracosc_path* p) const { fracosc_path_destroy(p); }
};
using Process = std::unique_ptr<fracosc_process, ProcessDeleter>;
using Expansion = std::unique_ptr<fracosc_expansion, ExpansionDeleter>;
using Path = std::unique_ptr<fracosc_path, PathDeleter>;

template <class F>
double value_of(F&& f) {
  double out = 0.0;
  check(f(&out));
  return out;
}

template <class F>
Expansion expansion_of(F&& f) {
  fracosc_expansion* e = nullptr;
  check(f(&e));
  return Expansion(e);
}

template <class F>
Path path_of(F&& f) {
  fracosc_path* p = nullptr;
  check(f(&p));
  return Path(p);
}

struct Tolerances {
  fracosc_quadrature quad{};
  Tolerances() { fracosc_quadrature_default(&quad); }
};

struct ProcessArgs {
  std::optional<double> alpha, gamma;
  double lambda = 1.0;
};

Process make_process(const ProcessArgs& a, const Tolerances& tol) {
  if (!a.alpha || !a.gamma) throw UsageError("--alpha and --gamma are required");
  fracosc_process* p = nullptr;
  check(fracosc_process_create(*a.alpha, *a.gamma, a.lambda, &p));
  Process owned(p);
  check(fracosc_process_set_quadrature(p, &tol.quad));
  return owned;
}

// Throws the library's GeneralizedOnly error before any grid work starts.
void require_finite_variance(const fracosc_process* p) { value_of([&](double* o) { return fracosc_variance(p, o); }); }

struct Output {
  Table table;
  json data = json::object();
  std::vector<std::string> warnings;
};

json expansion_json(const fracosc_expansion* e) {
  size_t n = 0;
  check(fracosc_expansion_size(e, &n));
  json terms = json::array();
  for (size_t i = 0; i < n; ++i) {
    double c = 0.0, pw = 0.0;
    int lp = 0;
    check(fracosc_expansion_term(e, i, &c, &pw, &lp));
    terms.push_back({{"coeff", c}, {"power", pw}, {"log_power", lp}});
  }
  double rate = 0.0;
  check(fracosc_expansion_exp_rate(e, &rate));
  return {{"terms", terms},
          {"exp_rate", rate},
          {"order", fracosc_expansion_order_tag(e)},
          {"validity", fracosc_expansion_validity(e)}};
}

// Evaluates row(i) for every grid point in parallel, keeping grid order.
Table grid_table(std::vector<std::string> columns, const std::vector<double>& grid,
                 const std::function<std::vector<double>(double)>& row) {
  Table t;
  t.columns = std::move(columns);
  t.rows.resize(grid.size());
  fracosc::cli::parallel_for(grid.size(), [&](std::size_t i) { t.rows[i] = row(grid[i]); });
  return t;
}

struct PathArgs {
  ProcessArgs process;
  int n = 1024;
  double dt = 0.01;
  std::uint64_t seed = 0;
  std::string method = "circulant";
  std::optional<double> fbm;
  std::optional<double> beta;
  int modes = 64;
  bool no_fallback = false;
};

Path simulate_path(const PathArgs& a, const Tolerances& tol, Output& out) {
  Path path;
  if (a.fbm) {
    path = path_of([&](fracosc_path** o) { return fracosc_sample_fbm(*a.fbm, a.n, a.dt, a.seed, o); });
  } else if (a.method == "fourier") {
    if (!a.beta) throw UsageError("--method fourier needs --beta");
    const auto p = make_process(a.process, tol);
    path = path_of(
        [&](fracosc_path** o) { return fracosc_sample_thermal(p.get(), *a.beta, a.modes, a.n, a.seed, o); });
  } else {
    const auto p = make_process(a.process, tol);
    fracosc_sample_options opt;
    fracosc_sample_options_default(&opt);
    opt.allow_fallback = a.no_fallback ? 0 : 1;
    const int method = a.method == "spectral" ? FRACOSC_SPECTRAL : FRACOSC_CIRCULANT;
    path = path_of(
        [&](fracosc_path** o) { return fracosc_sample_path(p.get(), a.n, a.dt, a.seed, method, &opt, o); });
  }
  const std::string warning = fracosc_path_warning(path.get());
  if (!warning.empty()) out.warnings.push_back(warning);
  int method = 0, fallback = 0;
  double bias = 0.0;
  check(fracosc_path_method(path.get(), &method));
  check(fracosc_path_fallback(path.get(), &fallback));
  check(fracosc_path_variance_bias(path.get(), &bias));
  static const char* names[] = {"circulant", "spectral", "fourier"};
  out.data["path"] = {{"method", names[method]},
                      {"fallback", fallback != 0},
                      {"variance_bias", bias},
                      {"seed", a.seed},
                      {"dt", value_of([&](double* o) { return fracosc_path_dt(path.get(), o); })}};
  return path;
}

void add_process_options(CLI::App* sub, ProcessArgs& a, bool required) {
  auto* alpha = sub->add_option("--alpha", a.alpha, "Riesz exponent alpha in (0, 1]");
  auto* gamma = sub->add_option("--gamma", a.gamma, "spectral power gamma > 0");
  if (required) {
    alpha->required();
    gamma->required();
  }
  sub->add_option("--lambda", a.lambda, "spectral scale lambda > 0")->capture_default_str();
}

void add_path_options(CLI::App* sub, PathArgs& a) {
  add_process_options(sub, a.process, false);
  sub->add_option("--n", a.n, "number of samples")->capture_default_str();
  sub->add_option("--dt", a.dt, "sample spacing")->capture_default_str();
  sub->add_option("--seed", a.seed, "random stream seed")->capture_default_str();
  sub->add_option("--method", a.method, "circulant, spectral or fourier (periodic thermal path)")
      ->check(CLI::IsMember({"circulant", "spectral", "fourier"}))
      ->capture_default_str();
  sub->add_option("--fbm", a.fbm, "sample fractional Brownian motion with this Hurst index instead");
  sub->add_option("--beta", a.beta, "period of the thermal path (method fourier)");
  sub->add_option("--modes", a.modes, "Matsubara modes of the thermal path")->capture_default_str();
  sub->add_flag("--no-fallback", a.no_fallback, "fail instead of falling back to spectral synthesis");
}

// ---------------------------------------------------------------- subcommands

struct CovarianceCmd {
  ProcessArgs process;
  std::string t_grid;
  std::string route = "auto";
  std::optional<double> beta;
  int modes = 4096;
  double thermal_tol = 1e-8;
  std::optional<double> tau1, tau2;

  void add(CLI::App* sub) {
    add_process_options(sub, process, true);
    sub->add_option("--t-grid", t_grid, "lags lo:step:hi")->required();
    sub->add_option("--route", route, "auto, closed, laplace or structure")
        ->check(CLI::IsMember({"auto", "closed", "laplace", "structure"}))
        ->capture_default_str();
    sub->add_option("--beta", beta, "also the thermal two-point function at inverse temperature beta");
    sub->add_option("--modes", modes, "Matsubara modes summed exactly")->capture_default_str();
    sub->add_option("--thermal-tol", thermal_tol, "tail error budget of the Matsubara sum")->capture_default_str();
    sub->add_option("--tau1", tau1, "also the relaxation covariance at auxiliary times tau1, tau2");
    sub->add_option("--tau2", tau2);
  }

  Output run(const Tolerances& tol) {
    if (tau1.has_value() != tau2.has_value()) throw UsageError("--tau1 and --tau2 go together");
    const auto grid = fracosc::cli::parse_grid(t_grid);
    const auto p = make_process(process, tol);
    require_finite_variance(p.get());
    static const std::map<std::string, int> routes = {{"auto", FRACOSC_ROUTE_AUTO},
                                                      {"closed", FRACOSC_ROUTE_CLOSED_FORM},
                                                      {"laplace", FRACOSC_ROUTE_LAPLACE},
                                                      {"structure", FRACOSC_ROUTE_STRUCTURE_FUNCTION}};
    const int r = routes.at(route);
    std::vector<std::string> cols = {"t", "C"};
    if (beta) cols.push_back("C_thermal");
    if (tau1) cols.push_back("C_relax");
    Output out;
    out.table = grid_table(cols, grid, [&](double t) {
      std::vector<double> row = {t, value_of([&](double* o) { return fracosc_covariance_route(p.get(), t, r, o); })};
      if (beta) {
        row.push_back(value_of(
            [&](double* o) { return fracosc_thermal_covariance(p.get(), *beta, t, modes, thermal_tol, o); }));
      }
      if (tau1) {
        row.push_back(
            value_of([&](double* o) { return fracosc_relaxation_covariance(p.get(), t, *tau1, *tau2, o); }));
      }
      return row;
    });
    return out;
  }
};

struct Sigma2Cmd {
  ProcessArgs process;
  std::string t_grid;

  void add(CLI::App* sub) {
    add_process_options(sub, process, true);
    sub->add_option("--t-grid", t_grid, "lags lo:step:hi")->required();
  }

  Output run(const Tolerances& tol) {
    const auto grid = fracosc::cli::parse_grid(t_grid);
    const auto p = make_process(process, tol);
    require_finite_variance(p.get());
    const auto e = expansion_of([&](fracosc_expansion** o) { return fracosc_sigma2_small_t(p.get(), o); });
    Output out;
    out.data["small_t"] = expansion_json(e.get());
    out.table = grid_table({"t", "sigma2", "leading", "ratio"}, grid, [&](double t) {
      const double s = value_of([&](double* o) { return fracosc_structure_function(p.get(), t, o); });
      const double lead = value_of([&](double* o) { return fracosc_expansion_evaluate(e.get(), t, 1, o); });
      return std::vector<double>{t, s, lead, s / lead};
    });
    return out;
  }
};

struct AsymptCmd {
  ProcessArgs process;
  std::string kind = "small";
  int terms = 1;
  std::string t_grid;

  void add(CLI::App* sub) {
    add_process_options(sub, process, true);
    sub->add_option("--kind", kind, "small (structure function) or large (covariance)")
        ->check(CLI::IsMember({"small", "large"}))
        ->capture_default_str();
    sub->add_option("--terms", terms, "terms of the large-t series")->capture_default_str();
    sub->add_option("--t-grid", t_grid, "compare with the exact function on lo:step:hi");
  }

  Output run(const Tolerances& tol) {
    const auto p = make_process(process, tol);
    require_finite_variance(p.get());
    const bool small = kind == "small";
    const auto e = expansion_of([&](fracosc_expansion** o) {
      return small ? fracosc_sigma2_small_t(p.get(), o) : fracosc_covariance_large_t(p.get(), terms, o);
    });
    Output out;
    out.data["expansion"] = expansion_json(e.get());
    if (t_grid.empty()) {
      out.table.columns = {"index", "coeff", "power", "log_power"};
      for (const auto& term : out.data["expansion"]["terms"]) {
        out.table.rows.push_back({static_cast<double>(out.table.rows.size()), term["coeff"].get<double>(),
                                  term["power"].get<double>(), static_cast<double>(term["log_power"].get<int>())});
      }
      return out;
    }
    const auto grid = fracosc::cli::parse_grid(t_grid);
    out.table = grid_table({"t", "exact", "expansion", "ratio"}, grid, [&](double t) {
      const double exact = value_of([&](double* o) {
        return small ? fracosc_structure_function(p.get(), t, o) : fracosc_covariance(p.get(), t, o);
      });
      const double approx = value_of([&](double* o) { return fracosc_expansion_evaluate(e.get(), t, -1, o); });
      return std::vector<double>{t, exact, approx, exact / approx};
    });
    return out;
  }
};

struct SimulateCmd {
  PathArgs path;

  void add(CLI::App* sub) { add_path_options(sub, path); }

  Output run(const Tolerances& tol) {
    Output out;
    const auto p = simulate_path(path, tol, out);
    size_t n = 0;
    check(fracosc_path_size(p.get(), &n));
    const double dt = value_of([&](double* o) { return fracosc_path_dt(p.get(), o); });
    const double* v = fracosc_path_values(p.get());
    out.table.columns = {"t", "value"};
    for (size_t i = 0; i < n; ++i) out.table.rows.push_back({static_cast<double>(i) * dt, v[i]});
    return out;
  }
};

struct VariogramCmd {
  PathArgs path;
  std::string input;
  int max_lag = 64;
  int fit_lo = 0;
  int fit_hi = -1;

  void add(CLI::App* sub) {
    add_path_options(sub, path);
    sub->add_option("--input", input, "CSV path with columns t,value instead of simulating");
    sub->add_option("--max-lag", max_lag, "largest lag, in samples")->capture_default_str();
    sub->add_option("--fit-lo", fit_lo, "first lag index of the Hurst fit")->capture_default_str();
    sub->add_option("--fit-hi", fit_hi, "last lag index of the Hurst fit (default max-lag - 1)")
        ->capture_default_str();
  }

  Path load(Output& out, const Tolerances& tol) {
    if (input.empty()) return simulate_path(path, tol, out);
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open input '" + input + "'");
    const auto t = fracosc::cli::read_csv(in);
    const auto col = [&](const std::string& name) {
      const auto it = std::find(t.columns.begin(), t.columns.end(), name);
      if (it == t.columns.end()) throw UsageError("input '" + input + "' has no column '" + name + "'");
      return static_cast<std::size_t>(it - t.columns.begin());
    };
    const auto tc = col("t"), vc = col("value");
    if (t.rows.size() < 2) throw UsageError("input '" + input + "' needs at least 2 rows");
    std::vector<double> values;
    for (const auto& row : t.rows) values.push_back(row[vc]);
    const double dt = t.rows[1][tc] - t.rows[0][tc];
    return path_of([&](fracosc_path** o) { return fracosc_path_from_values(values.data(), values.size(), dt, o); });
  }

  Output run(const Tolerances& tol) {
    Output out;
    const auto p = load(out, tol);
    if (max_lag < 1) throw UsageError("--max-lag must be at least 1");
    std::vector<double> lags(max_lag), est(max_lag);
    std::vector<long> counts(max_lag);
    check(fracosc_variogram(p.get(), max_lag, lags.data(), est.data(), counts.data()));
    const bool theory = path.process.alpha && path.process.gamma && !path.fbm;
    Process proc;
    if (theory) proc = make_process(path.process, tol);
    const double dt = value_of([&](double* o) { return fracosc_path_dt(p.get(), o); });
    out.table.columns = {"lag", "estimate", "count"};
    if (theory) {
      out.table.columns.push_back("sigma2");
      out.table.columns.push_back("std_error");
    }
    out.table.rows.resize(max_lag);
    fracosc::cli::parallel_for(max_lag, [&](std::size_t i) {
      std::vector<double> row = {lags[i], est[i], static_cast<double>(counts[i])};
      if (theory) {
        row.push_back(value_of([&](double* o) { return fracosc_structure_function(proc.get(), lags[i], o); }));
        row.push_back(value_of([&](double* o) {
          return fracosc_variogram_standard_error(proc.get(), dt, static_cast<int>(i) + 1, counts[i], o);
        }));
      }
      out.table.rows[i] = std::move(row);
    });
    const int hi = fit_hi < 0 ? max_lag - 1 : fit_hi;
    double H = 0.0, se = 0.0;
    check(fracosc_estimate_hurst(lags.data(), est.data(), lags.size(), fit_lo, hi, &H, &se));
    out.data["hurst"] = {{"H", H}, {"std_error", se}, {"fit_lo", fit_lo}, {"fit_hi", hi}};
    std::cerr << "hurst estimate: " << fracosc::cli::format_number(H) << " +- " << fracosc::cli::format_number(se)
              << '\n';
    return out;
  }
};

struct MsdCmd {
  ProcessArgs process;
  std::string t_grid;
  double chi = 1.0;
  double t_max = 1e4;
  std::optional<double> kT;

  void add(CLI::App* sub) {
    add_process_options(sub, process, true);
    sub->add_option("--t-grid", t_grid, "times lo:step:hi")->required();
    sub->add_option("--chi", chi, "order of the fractional displacement, 1 for the plain MSD")
        ->capture_default_str();
    sub->add_option("--t-max", t_max, "largest admissible time")->capture_default_str();
    sub->add_option("--kT", kT, "also the effective diffusion coefficient D(t) at this temperature");
  }

  Output run(const Tolerances& tol) {
    const auto grid = fracosc::cli::parse_grid(t_grid);
    const auto p = make_process(process, tol);
    require_finite_variance(p.get());
    std::vector<std::string> cols = {"t", "msd"};
    if (kT) cols.push_back("D_eff");
    Output out;
    out.table = grid_table(cols, grid, [&](double t) {
      std::vector<double> row = {t, value_of([&](double* o) {
                                   return chi == 1.0 ? fracosc_msd_velocity(p.get(), t, o)
                                                     : fracosc_msd_fractional(p.get(), chi, t_max, t, o);
                                 })};
      if (kT) row.push_back(value_of([&](double* o) { return fracosc_effective_diffusion(p.get(), *kT, t, o); }));
      return row;
    });
    return out;
  }
};

struct CasimirCmd {
  double alpha = 0.0, gamma = 0.0, beta = 0.0, m = 0.0, mu = 1.0;
  double lambda_tol = 1e-9;
  std::string expansion = "none";
  int terms = 6;

  void add(CLI::App* sub) {
    sub->add_option("--alpha", alpha, "Riesz exponent alpha in (0, 1]")->required();
    sub->add_option("--gamma", gamma, "operator power gamma > 0")->required();
    sub->add_option("--beta", beta, "inverse temperature")->required();
    sub->add_option("--m", m, "mass")->required();
    sub->add_option("--mu", mu, "normalization scale")->capture_default_str();
    sub->add_option("--lambda-tol", lambda_tol, "tolerance on 1/(2 alpha) being an integer")->capture_default_str();
    sub->add_option("--expansion", expansion, "none, low (in T) or high (in beta)")
        ->check(CLI::IsMember({"none", "low", "high"}))
        ->capture_default_str();
    sub->add_option("--terms", terms, "series terms of the expansion")->capture_default_str();
  }

  Output run(const Tolerances&) {
    const fracosc_thermal_params th{beta, m, mu};
    fracosc_free_energy_result r{};
    check(fracosc_free_energy(&th, alpha, gamma, lambda_tol, &r));
    Output out;
    if (r.warning[0] != '\0') out.warnings.emplace_back(r.warning);
    out.data = {{"zeta0", r.zeta0},
                {"zeta0_prime", r.zeta0_prime},
                {"F", r.F},
                {"counterterm", r.counterterm},
                {"F_ren", r.F_ren},
                {"lambda_branch",
                 {{"in_lambda", r.lambda_branch.in_lambda != 0}, {"u", r.lambda_branch.u}, {"sign", r.lambda_branch.sign}}}};
    if (r.has_F_ren_lambda_branch) out.data["F_ren_lambda_branch"] = r.F_ren_lambda_branch;
    out.table.columns = {"alpha", "gamma", "beta", "m", "mu", "zeta0", "zeta0_prime", "F", "counterterm", "F_ren"};
    std::vector<double> row = {alpha, gamma, beta, m, mu, r.zeta0, r.zeta0_prime, r.F, r.counterterm, r.F_ren};
    if (expansion != "none") {
      const bool low = expansion == "low";
      const auto e = expansion_of([&](fracosc_expansion** o) {
        return low ? fracosc_free_energy_low_t(&th, alpha, gamma, terms, o)
                   : fracosc_free_energy_high_t(&th, alpha, gamma, terms, o);
      });
      const double x = low ? 1.0 / beta : beta;
      const double value = value_of([&](double* o) { return fracosc_expansion_evaluate(e.get(), x, -1, o); });
      out.data["expansion"] = expansion_json(e.get());
      out.data["expansion"]["variable"] = low ? "T" : "beta";
      out.data["expansion"]["value"] = value;
      out.table.columns.push_back("F_ren_expansion");
      row.push_back(value);
    }
    out.table.rows.push_back(std::move(row));
    return out;
  }
};

struct SweepCmd {
  std::string alpha_grid, bm_grid;
  double gamma = 1.0, m = 1.0, mu = 1.0;

  void add(CLI::App* sub) {
    sub->add_option("--alpha-grid", alpha_grid, "alpha values lo:step:hi")->required();
    sub->add_option("--bm-grid", bm_grid, "beta m^{1/alpha} values lo:step:hi")->required();
    sub->add_option("--gamma", gamma, "operator power gamma > 0")->capture_default_str();
    sub->add_option("--m", m, "mass")->capture_default_str();
    sub->add_option("--mu", mu, "normalization scale")->capture_default_str();
  }

  Output run(const Tolerances&) {
    const auto alphas = fracosc::cli::parse_grid(alpha_grid);
    const auto bms = fracosc::cli::parse_grid(bm_grid);
    const std::size_t n = alphas.size() * bms.size();
    Output out;
    out.table.columns = {"alpha", "gamma", "beta", "m", "beta_m_scaled", "F", "F_ren"};
    out.table.rows.resize(n);
    std::vector<std::string> warnings(n);
    fracosc::cli::parallel_for(n, [&](std::size_t i) {
      const double alpha = alphas[i / bms.size()], bm = bms[i % bms.size()];
      const fracosc_thermal_params th{bm / std::pow(m, 1.0 / alpha), m, mu};
      fracosc_free_energy_result r{};
      check(fracosc_free_energy(&th, alpha, gamma, 0.0, &r));
      out.table.rows[i] = {alpha, gamma, th.beta, m, bm, r.F, r.F_ren};
      warnings[i] = r.warning;
    });
    for (const auto& w : warnings) {
      if (!w.empty() && std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) {
        out.warnings.push_back(w);
      }
    }
    return out;
  }
};

struct Check {
  std::string name;
  double value, reference, tolerance;
  bool relative;

  double error() const {
    const double d = std::abs(value - reference);
    return relative ? d / std::abs(reference) : d;
  }
  bool passed() const { return std::isfinite(value) && error() <= tolerance; }
};

struct SelftestCmd {
  void add(CLI::App*) {}

  static std::vector<Check> checks() {
    Tolerances tol;
    const auto proc = [&](double a, double g, double l) { return make_process({a, g, l}, tol); };
    std::vector<Check> c;
    {
      const auto p = proc(1.0, 1.0, 2.0);
      c.push_back({"OU covariance e^{-lambda t}/(2 lambda)",
                   value_of([&](double* o) { return fracosc_covariance(p.get(), 1.0, o); }),
                   std::exp(-2.0) / 4.0, 1e-12, true});
    }
    {
      const auto p = proc(1.0, 1.5, 1.0);
      c.push_back({"alpha = 1 Bessel form against spectral quadrature",
                   value_of([&](double* o) {
                     return fracosc_covariance_route(p.get(), 0.7, FRACOSC_ROUTE_STRUCTURE_FUNCTION, o);
                   }),
                   value_of([&](double* o) { return fracosc_covariance_closed_alpha1(1.5, 1.0, 0.7, o); }), 1e-9,
                   true});
    }
    {
      const auto p = proc(0.75, 1.4, 1.0);
      c.push_back({"Laplace route against structure-function route",
                   value_of([&](double* o) { return fracosc_covariance_route(p.get(), 0.5, FRACOSC_ROUTE_LAPLACE, o); }),
                   value_of([&](double* o) {
                     return fracosc_covariance_route(p.get(), 0.5, FRACOSC_ROUTE_STRUCTURE_FUNCTION, o);
                   }),
                   1e-8, true});
      c.push_back({"variance formula against C(0)", value_of([&](double* o) { return fracosc_variance(p.get(), o); }),
                   value_of([&](double* o) { return fracosc_covariance(p.get(), 0.0, o); }), 1e-10, true});
      const double c0 = value_of([&](double* o) { return fracosc_covariance(p.get(), 0.0, o); });
      const double ct = value_of([&](double* o) { return fracosc_covariance(p.get(), 0.3, o); });
      c.push_back({"structure function against 2(C(0) - C(t))",
                   value_of([&](double* o) { return fracosc_structure_function(p.get(), 0.3, o); }), 2.0 * (c0 - ct),
                   1e-9, true});
      const auto a = proc(1.0, 1.0, 1.0);
      c.push_back({"thermal covariance at beta = 1e3 against covariance",
                   value_of([&](double* o) { return fracosc_thermal_covariance(a.get(), 1e3, 1.0, 4096, 1e-8, o); }),
                   std::exp(-1.0) / 2.0, 1e-4, false});
    }
    {
      const auto p = proc(0.6, 1.0, 1.0);
      const auto e = expansion_of([&](fracosc_expansion** o) { return fracosc_sigma2_small_t(p.get(), o); });
      c.push_back({"small-t structure function against its leading term",
                   value_of([&](double* o) { return fracosc_structure_function(p.get(), 1e-4, o); }),
                   value_of([&](double* o) { return fracosc_expansion_evaluate(e.get(), 1e-4, 1, o); }), 0.02, true});
    }
    {
      const auto p = proc(0.8, 1.0, 1.0);
      double B = 0.0, nf = 0.0;
      check(fracosc_fd_coefficient(p.get(), 2.0, &B, &nf));
      c.push_back({"fluctuation-dissipation round trip",
                   value_of([&](double* o) { return fracosc_equipartition_variance(p.get(), B, o); }),
                   std::pow(2.0, 0.8), 1e-12, true});
      c.push_back({"fractional MSD at chi = 1 against velocity MSD",
                   value_of([&](double* o) { return fracosc_msd_fractional(p.get(), 1.0, 1e4, 5.0, o); }),
                   value_of([&](double* o) { return fracosc_msd_velocity(p.get(), 5.0, o); }), 1e-8, true});
    }
    {
      double jacobi = 0.0;
      for (int n = 1; n < 10; ++n) jacobi += std::exp(-kPi * kPi * n * n / 0.5);
      jacobi *= 2.0 * std::sqrt(kPi / 0.5);
      c.push_back({"heat kernel remainder against Jacobi inversion",
                   value_of([&](double* o) { return fracosc_heat_remainder(0.5, 1.0, 1.0, o); }), jacobi, 1e-14,
                   false});
      const fracosc_thermal_params th{2.0, 1.0, 1.0};
      fracosc_free_energy_result r{};
      check(fracosc_free_energy(&th, 1.0, 1.0, 0.0, &r));
      c.push_back({"zeta-route free energy against log(2 sinh(beta m/2))/beta", r.F,
                   0.5 * std::log(2.0 * std::sinh(1.0)), 1e-10, true});
      const fracosc_thermal_params hot{0.1, 1.0, 1.0};
      check(fracosc_free_energy(&hot, 0.6, 1.0, 0.0, &r));
      const auto e =
          expansion_of([&](fracosc_expansion** o) { return fracosc_free_energy_high_t(&hot, 0.6, 1.0, 20, o); });
      c.push_back({"high-temperature series against zeta route",
                   value_of([&](double* o) { return fracosc_expansion_evaluate(e.get(), 0.1, -1, o); }), r.F_ren,
                   1e-6, true});
    }
    {
      const auto p = proc(0.75, 1.4, 1.0);
      const auto a = path_of(
          [&](fracosc_path** o) { return fracosc_sample_path(p.get(), 512, 0.5, 7, FRACOSC_CIRCULANT, nullptr, o); });
      const auto b = path_of(
          [&](fracosc_path** o) { return fracosc_sample_path(p.get(), 512, 0.5, 7, FRACOSC_CIRCULANT, nullptr, o); });
      const bool same = std::equal(fracosc_path_values(a.get()), fracosc_path_values(a.get()) + 512,
                                   fracosc_path_values(b.get()));
      c.push_back({"fixed-seed paths are identical", same ? 0.0 : 1.0, 0.0, 0.0, false});
      Table t{{"t", "value"}, {}};
      for (int i = 0; i < 512; ++i) t.rows.push_back({i * 0.5, fracosc_path_values(a.get())[i]});
      std::stringstream ss;
      fracosc::cli::write_csv(ss, t);
      const auto back = fracosc::cli::read_csv(ss);
      c.push_back({"CSV round trip is bit-identical", back.rows == t.rows ? 0.0 : 1.0, 0.0, 0.0, false});
    }
    return c;
  }

  Output run(const Tolerances&) {
    Output out;
    const auto cs = checks();
    out.table.columns = {"index", "passed", "error", "tolerance"};
    out.data["checks"] = json::array();
    int failed = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& k = cs[i];
      out.table.rows.push_back({static_cast<double>(i), k.passed() ? 1.0 : 0.0, k.error(), k.tolerance});
      out.data["checks"].push_back(
          {{"name", k.name}, {"passed", k.passed()}, {"error", k.error()}, {"tolerance", k.tolerance}});
      std::cerr << (k.passed() ? "PASS " : "FAIL ") << k.name << " (error " << k.error() << ", tolerance "
                << k.tolerance << ")\n";
      failed += k.passed() ? 0 : 1;
    }
    out.data["failed"] = failed;
    return out;
  }
};

// ---------------------------------------------------------------- plumbing

struct Subcommand {
  CLI::App* app;
  std::string default_format;
  bool uses_quadrature;
  std::function<Output(const Tolerances&)> run;
};

std::optional<json> parse_number_json(const std::string& s) {
  long long i = 0;
  const auto [iptr, iec] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (iec == std::errc() && iptr == s.data() + s.size() && !s.empty()) return json(i);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return json(x);
  return std::nullopt;
}

json resolved_config(const std::string& name, CLI::App* sub) {
  json params = json::object(), tolerances = json::object();
  json config = {{"subcommand", name}};
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string key = opt->get_single_name();
    if (key == "help" || key == "h") continue;
    json value;
    if (opt->get_expected_min() == 0) {
      value = opt->count() > 0;
    } else if (opt->count() > 0) {
      const std::string s = opt->results().back();
      value = parse_number_json(s).value_or(json(s));
    } else if (!opt->get_default_str().empty()) {
      value = parse_number_json(opt->get_default_str()).value_or(json(opt->get_default_str()));
    } else {
      continue;
    }
    if (key == "output" || key == "format") {
      config[key] = value;
    } else if (key == "abs-tol" || key == "rel-tol" || key == "max-subdivisions") {
      tolerances[key] = value;
    } else {
      params[key] = value;
    }
  }
  config["params"] = params;
  if (!tolerances.empty()) config["tolerances"] = tolerances;
  return config;
}

std::string config_token(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw UsageError("config entry '" + where + "' must be a number, string or boolean");
}

void append_config_option(std::vector<std::string>& tokens, const std::string& key, const json& v) {
  if (v.is_null()) return;
  if (v.is_boolean()) {
    if (v.get<bool>()) tokens.push_back("--" + key);
    return;
  }
  tokens.push_back("--" + key);
  tokens.push_back(config_token(v, key));
}

// Replaces "--config FILE" by the subcommand and options it names. Options
// given on the command line come later and so take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& names) {
  std::string file;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      file = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (file.empty()) return args;
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open config '" + file + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + file + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config '" + file + "' must hold a JSON object");
  auto sub_pos = std::find_if(args.begin() + 1, args.end(),
                              [&](const std::string& a) { return std::count(names.begin(), names.end(), a) > 0; });
  if (cfg.contains("subcommand")) {
    const auto name = cfg["subcommand"].get<std::string>();
    if (sub_pos == args.end()) {
      sub_pos = args.insert(args.begin() + 1, name);
    } else if (*sub_pos != name) {
      throw UsageError("config names subcommand '" + name + "' but the command line names '" + *sub_pos + "'");
    }
  } else if (sub_pos == args.end()) {
    throw UsageError("config '" + file + "' has no subcommand and none is given");
  }
  std::vector<std::string> tokens;
  for (const char* key : {"output", "format"}) {
    if (cfg.contains(key)) append_config_option(tokens, key, cfg[key]);
  }
  for (const char* section : {"params", "tolerances"}) {
    if (!cfg.contains(section)) continue;
    if (!cfg[section].is_object()) throw UsageError(std::string("config '") + section + "' must be an object");
    for (const auto& [key, v] : cfg[section].items()) append_config_option(tokens, key, v);
  }
  args.insert(sub_pos + 1, tokens.begin(), tokens.end());
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Fractional oscillator process: covariances, expansions, simulation and Casimir free energy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fracosc_version());
  app.add_option("--config", "JSON run configuration (the \"config\" object of a JSON output)");

  Tolerances tol;
  std::string output = "-";
  std::string format;

  CovarianceCmd covariance;
  Sigma2Cmd sigma2;
  AsymptCmd asympt;
  SimulateCmd simulate;
  VariogramCmd variogram;
  MsdCmd msd;
  CasimirCmd casimir;
  SweepCmd sweep;
  SelftestCmd selftest;

  std::map<std::string, Subcommand> subs;
  const auto reg = [&](const std::string& name, const std::string& help, auto& cmd, const std::string& fmt,
                       bool quad) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd.add(sub);
    sub->add_option("-o,--output", output, "output file, - for standard output")->capture_default_str();
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (quad) {
      sub->add_option("--abs-tol", tol.quad.abs_tol, "quadrature absolute tolerance")->capture_default_str();
      sub->add_option("--rel-tol", tol.quad.rel_tol, "quadrature relative tolerance")->capture_default_str();
      sub->add_option("--max-subdivisions", tol.quad.max_subdivisions, "quadrature subdivision cap")
          ->capture_default_str();
    }
    for (CLI::Option* opt : sub->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    subs[name] = {sub, fmt, quad, [&cmd](const Tolerances& t) { return cmd.run(t); }};
  };
  reg("covariance", "covariance C(t), optionally thermal and relaxation forms", covariance, "csv", true);
  reg("sigma2", "structure function sigma^2(t) with its leading small-t term", sigma2, "csv", true);
  reg("asympt", "small-t or large-t expansion terms, optionally against the exact function", asympt, "csv", true);
  reg("simulate", "sample path of the process, of fBm or of the periodic thermal process", simulate, "csv", true);
  reg("variogram", "empirical variogram and Hurst estimate of a simulated or given path", variogram, "csv", true);
  reg("msd", "mean square displacement and effective diffusion", msd, "csv", true);
  reg("casimir", "zeta-regularized Casimir free energy", casimir, "json", false);
  reg("sweep", "F and F_ren over a grid of alpha and beta m^{1/alpha}", sweep, "csv", false);
  reg("selftest", "cross-representation consistency checks", selftest, "csv", false);

  std::vector<std::string> names;
  for (const auto& [name, s] : subs) names.push_back(name);
  std::vector<std::string> args(argv, argv + argc);
  args = expand_config(args, names);
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto selected = app.get_subcommands().front();
  const auto& sub = subs.at(selected->get_name());
  if (format.empty()) format = sub.default_format;
  Output out = sub.run(tol);

  json config = resolved_config(selected->get_name(), selected);
  config["format"] = format;
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';

  std::ofstream file;
  if (output != "-") {
    file.open(output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output '" + output + "'");
  }
  std::ostream& os = output == "-" ? std::cout : file;
  if (format == "json") {
    json data = out.data;
    data["columns"] = out.table.columns;
    data["rows"] = out.table.rows;
    json doc = {{"config", config}, {"warnings", out.warnings}, {"data", data}};
    os << doc.dump(2) << '\n';
  } else {
    fracosc::cli::write_csv(os, out.table);
  }
  os.flush();
  if (!os) throw std::runtime_error("writing output '" + output + "' failed");
  if (selected->get_name() == "selftest" && out.data["failed"].get<int>() > 0) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "fracosc: usage error: " << e.what() << '\n';
    return 2;
  } catch (const LibraryError& e) {
    std::cerr << "fracosc: " << fracosc_status_string(e.status()) << ": " << e.what() << '\n';
    return e.status() == FRACOSC_E_INVALID_ARGUMENT || e.status() == FRACOSC_E_INTERNAL ? 1 : 3;
  } catch (const std::exception& e) {
    std::cerr << "fracosc: error: " << e.what() << '\n';
    return 1;
  }
}
