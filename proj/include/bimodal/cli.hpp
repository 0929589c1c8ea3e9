#ifndef BIMODAL_CLI_HPP
#define BIMODAL_CLI_HPP

// Command-line front end. Everything lives in this header so that tests can
// drive the commands in-process through bimodal::cli::run().
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bimodal/bivariate.hpp"
#include "bimodal/distribution.hpp"
#include "bimodal/fit.hpp"
#include "bimodal/process.hpp"
#include "bimodal/random.hpp"

namespace bimodal::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_data = 3;
inline constexpr int exit_numerical = 4;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g: round-trips every double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON number, or null when not finite.
inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

// ---------------------------------------------------------------------------
// Fit results
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const FitResult& r) {
  return nlohmann::json{{"mu", json_number(r.theta_hat.mu())},
                        {"sigma", json_number(r.theta_hat.sigma())},
                        {"alpha", json_number(r.theta_hat.alpha())},
                        {"loglik", json_number(r.loglik)},
                        {"score_sup_norm", json_number(r.score_sup_norm)},
                        {"fisher_info_alpha", json_number(r.fisher_info_alpha)},
                        {"se_alpha", json_number(r.se_alpha)},
                        {"iterations", r.iterations},
                        {"converged", r.converged}};
}

// ---------------------------------------------------------------------------
// Monte Carlo study
// ---------------------------------------------------------------------------

struct MCStudyConfig {
  std::vector<std::size_t> n_values{10, 75, 250, 600};
  double mu = 0.5;
  double sigma = 1.0;
  std::vector<double> alpha_values{-2.0, -0.5, 0.8, 3.0};
  std::size_t replications = 1000;
  std::uint64_t master_seed = 20211;
  std::size_t workers = 1;

  void validate() const {
    if (n_values.empty() || alpha_values.empty()) throw usage_error("mc-study: empty grid");
    for (auto n : n_values) {
      if (n < 3) throw usage_error("mc-study: sample sizes must be at least 3");
    }
    if (replications < 1) throw usage_error("mc-study: replications must be positive");
    if (workers < 1) throw usage_error("mc-study: workers must be positive");
    if (!(sigma > 0.0)) throw usage_error("mc-study: sigma must be positive");
  }
};

struct MCStudyRow {
  double alpha_true;
  std::size_t n;
  double bias_mu, bias_sigma, bias_alpha;
  double rmse_mu, rmse_sigma, rmse_alpha;
  std::size_t n_converged;
};

inline const char* mc_study_header = "alpha_true,n,bias_mu,bias_sigma,bias_alpha,rmse_mu,rmse_sigma,rmse_alpha,n_converged";

struct ReplicationOutcome {
  double mu, sigma, alpha;
  bool converged;
};

/// Newton first; a fixed-point polish from Newton's end point when Newton
/// stalls.
inline ReplicationOutcome fit_replication(const std::vector<double>& data) {
  try {
    FitResult r = mle_newton(data);
    if (!r.converged) {
      FitConfig polish;
      polish.init = Manual{r.theta_hat};
      polish.max_iter = 5000;
      FitResult fp = mle_fixed_point(data, polish);
      if (fp.converged || fp.loglik > r.loglik) r = fp;
    }
    return {r.theta_hat.mu(), r.theta_hat.sigma(), r.theta_hat.alpha(), r.converged};
  } catch (const std::exception&) {
    return {0.0, 0.0, 0.0, false};
  }
}

/// Simulates and fits every (alpha, n, replication) cell. Replication seeds
/// come from derive_seed(master, {alpha index, n index, replication}) and
/// results are merged by index, so the output does not depend on the worker
/// count. Bias and RMSE are taken over converged fits; alpha is compared with
/// |alpha_true| because fits return the canonical non-negative sign.
inline std::vector<MCStudyRow> run_mc_study(const MCStudyConfig& config) {
  config.validate();
  const std::size_t na = config.alpha_values.size(), nn = config.n_values.size(), nr = config.replications;
  const std::size_t total = na * nn * nr;
  std::vector<ReplicationOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t task = next.fetch_add(1); task < total; task = next.fetch_add(1)) {
      const std::size_t ai = task / (nn * nr);
      const std::size_t ni = (task / nr) % nn;
      const std::size_t rep = task % nr;
      const BNParams truth(config.mu, config.sigma, config.alpha_values[ai]);
      Rng rng = make_rng(config.master_seed, {ai, ni, rep});
      outcomes[task] = fit_replication(sample(truth, rng, config.n_values[ni]));
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::min(config.workers, total); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<MCStudyRow> rows;
  for (std::size_t ai = 0; ai < na; ++ai) {
    for (std::size_t ni = 0; ni < nn; ++ni) {
      const double a_true = config.alpha_values[ai];
      MCStudyRow row{a_true, config.n_values[ni], 0, 0, 0, 0, 0, 0, 0};
      for (std::size_t rep = 0; rep < nr; ++rep) {
        const auto& o = outcomes[(ai * nn + ni) * nr + rep];
        if (!o.converged) continue;
        ++row.n_converged;
        const double dm = o.mu - config.mu, ds = o.sigma - config.sigma, da = o.alpha - std::abs(a_true);
        row.bias_mu += dm;
        row.bias_sigma += ds;
        row.bias_alpha += da;
        row.rmse_mu += dm * dm;
        row.rmse_sigma += ds * ds;
        row.rmse_alpha += da * da;
      }
      const double k = static_cast<double>(row.n_converged);
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.bias_mu = k > 0 ? row.bias_mu / k : nan;
      row.bias_sigma = k > 0 ? row.bias_sigma / k : nan;
      row.bias_alpha = k > 0 ? row.bias_alpha / k : nan;
      row.rmse_mu = k > 0 ? std::sqrt(row.rmse_mu / k) : nan;
      row.rmse_sigma = k > 0 ? std::sqrt(row.rmse_sigma / k) : nan;
      row.rmse_alpha = k > 0 ? std::sqrt(row.rmse_alpha / k) : nan;
      rows.push_back(row);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const MCStudyRow& a, const MCStudyRow& b) {
    return a.alpha_true != b.alpha_true ? a.alpha_true < b.alpha_true : a.n < b.n;
  });
  return rows;
}

inline std::string mc_study_csv(const std::vector<MCStudyRow>& rows) {
  std::ostringstream os;
  os << mc_study_header << '\n';
  for (const auto& r : rows) {
    os << format_double(r.alpha_true) << ',' << r.n << ',' << format_double(r.bias_mu) << ','
       << format_double(r.bias_sigma) << ',' << format_double(r.bias_alpha) << ',' << format_double(r.rmse_mu)
       << ',' << format_double(r.rmse_sigma) << ',' << format_double(r.rmse_alpha) << ',' << r.n_converged << '\n';
  }
  return os.str();
}

inline nlohmann::json mc_study_json(const std::vector<MCStudyRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"alpha_true", r.alpha_true},
                   {"n", r.n},
                   {"bias_mu", json_number(r.bias_mu)},
                   {"bias_sigma", json_number(r.bias_sigma)},
                   {"bias_alpha", json_number(r.bias_alpha)},
                   {"rmse_mu", json_number(r.rmse_mu)},
                   {"rmse_sigma", json_number(r.rmse_sigma)},
                   {"rmse_alpha", json_number(r.rmse_alpha)},
                   {"n_converged", r.n_converged}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Input / output helpers
// ---------------------------------------------------------------------------

/// Reads a one-column CSV whose header is `x`.
inline std::vector<double> read_x_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open input file: " + path);
  std::string line;
  std::vector<double> xs;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line == "x") continue;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(line, &pos);
      if (pos != line.size() || !std::isfinite(v)) throw std::invalid_argument("bad");
      xs.push_back(v);
    } catch (const std::exception&) {
      throw data_error("line " + std::to_string(lineno) + ": not a finite number: " + line);
    }
  }
  return xs;
}

inline void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw data_error("cannot write output file: " + output);
  f << text;
  if (!f) throw data_error("write failed: " + output);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return os.str();
  }

  [[nodiscard]] std::string json() const {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o;
      for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
      arr.push_back(o);
    }
    return arr.dump(2) + "\n";
  }

  [[nodiscard]] std::string render(const std::string& format) const { return format == "json" ? json() : csv(); }
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct GlobalOptions {
  std::uint64_t seed = 20211;
  std::size_t workers = 1;
  std::string output;
  std::string format = "csv";
};

inline nlohmann::json modes_json(const ModeSet& m) {
  nlohmann::json j{{"kind", m.kind == Modality::Bimodal ? "bimodal" : "unimodal"}, {"modes", m.modes}};
  j["antimode"] = m.antimode ? nlohmann::json(*m.antimode) : nlohmann::json(nullptr);
  return j;
}

struct EvalArgs {
  double mu = 0.0, sigma = 1.0, alpha = 0.0;
  std::string what = "pdf";
  std::optional<double> x, q;
};

inline std::string cmd_eval(const EvalArgs& a) {
  const BNParams p(a.mu, a.sigma, a.alpha);
  auto need_x = [&]() {
    if (!a.x) throw usage_error("--x is required for --what " + a.what);
    return *a.x;
  };
  nlohmann::json j{{"what", a.what}};
  if (a.what == "pdf") {
    j["x"] = need_x();
    j["value"] = pdf(p, *a.x);
  } else if (a.what == "logpdf") {
    j["x"] = need_x();
    j["value"] = log_pdf(p, *a.x);
  } else if (a.what == "cdf") {
    j["x"] = need_x();
    j["value"] = cdf(p, *a.x);
  } else if (a.what == "hazard") {
    j["x"] = need_x();
    j["value"] = hazard(p, *a.x);
  } else if (a.what == "quantile") {
    if (!a.q) throw usage_error("--q is required for --what quantile");
    if (!(*a.q > 0.0 && *a.q < 1.0)) throw usage_error("--q must lie in (0, 1)");
    j["q"] = *a.q;
    j["value"] = quantile(p, *a.q);
  } else if (a.what == "modes") {
    j["value"] = modes_json(modes(p));
  } else if (a.what == "moments") {
    j["value"] = {{"mean", mean(p)},
                  {"variance", variance(p)},
                  {"skewness", skewness(p)},
                  {"kurtosis", std_moment(p, 4)},
                  {"fourth_central_over_sigma4", fourth_central_over_sigma4(p)},
                  {"mad", mad(p)},
                  {"entropy", entropy(p)},
                  {"entropy_published", entropy_published(p)}};
  } else {
    throw usage_error("unknown --what: " + a.what);
  }
  return j.dump() + "\n";
}

struct SampleArgs {
  double mu = 0.0, sigma = 1.0, alpha = 0.0;
  long long n = 0;
};

inline std::string cmd_sample(const SampleArgs& a, const GlobalOptions& g) {
  if (a.n < 1) throw usage_error("--n must be at least 1");
  const BNParams p(a.mu, a.sigma, a.alpha);
  Rng rng = make_rng(g.seed);
  const auto xs = sample(p, rng, static_cast<std::size_t>(a.n));
  std::string s = "x\n";
  s.reserve(xs.size() * 24);
  for (double x : xs) {
    s += format_double(x);
    s += '\n';
  }
  return s;
}

struct FitArgs {
  std::string input;
  std::vector<std::string> fix;
  std::string method = "newton";
  std::string init = "moment";
  double level = 0.95;
  int max_iter = 500;
  double tol = 1e-10;
};

inline FitConfig fit_config_from(const FitArgs& a) {
  FitConfig c;
  c.max_iter = a.max_iter;
  c.tol = a.tol;
  if (a.init == "grid") {
    c.init = GridScan{};
  } else if (a.init != "moment") {
    throw usage_error("--init must be moment or grid");
  }
  for (const auto& f : a.fix) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw usage_error("--fix expects name=value, got " + f);
    const std::string name = f.substr(0, eq);
    double v = 0.0;
    try {
      v = std::stod(f.substr(eq + 1));
    } catch (const std::exception&) {
      throw usage_error("--fix value is not a number: " + f);
    }
    std::size_t idx = 0;
    if (name == "mu") {
      idx = kMu;
    } else if (name == "sigma") {
      idx = kSigma;
      if (!(v > 0.0)) throw usage_error("--fix sigma must be positive");
    } else if (name == "alpha") {
      idx = kAlpha;
    } else {
      throw usage_error("--fix name must be mu, sigma or alpha");
    }
    c.estimate_mask[idx] = false;
    c.fixed_values[idx] = v;
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  return c;
}

inline std::string cmd_fit(const FitArgs& a) {
  const FitConfig config = fit_config_from(a);
  if (a.method != "newton" && a.method != "fixed-point") throw usage_error("--method must be newton or fixed-point");
  const auto data = read_x_column(a.input);
  if (data.empty()) throw usage_error("input file has no observations: " + a.input);
  nlohmann::json j;
  try {
    const FitResult r = a.method == "newton" ? mle_newton(data, config) : mle_fixed_point(data, config);
    j = to_json(r);
    if (config.estimate_mask[kAlpha] && r.fisher_info_alpha > 1e-12) {
      const auto [lo, hi] = asymptotic_ci_alpha(r.theta_hat.alpha(), data.size(), a.level);
      j["ci_alpha"] = {{"level", a.level}, {"lower", lo}, {"upper", hi}};
    }
  } catch (const std::invalid_argument& e) {
    // degenerate data: report, do not fit
    j = {{"converged", false}, {"error", e.what()}};
    throw data_error(j.dump());
  }
  return j.dump() + "\n";
}

struct BivarArgs {
  BBNParams p;
  std::string what = "pdf2";
  std::optional<double> x1, x2;
  long long n = 1000;
};

inline std::string cmd_bivar(const BivarArgs& a, const GlobalOptions& g) {
  try {
    a.p.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  nlohmann::json j{{"what", a.what}};
  if (a.what == "pdf2") {
    if (!a.x1 || !a.x2) throw usage_error("--x1 and --x2 are required for pdf2");
    j["value"] = pdf2(a.p, *a.x1, *a.x2);
  } else if (a.what == "cov") {
    const double derived = covariance(a.p), published = covariance_published(a.p);
    j["value"] = derived;
    j["published"] = published;
    j["discrepancy"] = derived - published;
  } else if (a.what == "corr") {
    const double derived = correlation(a.p), published = correlation_published(a.p);
    j["value"] = derived;
    j["published"] = published;
    j["discrepancy"] = derived - published;
  } else if (a.what == "condmean") {
    if (!a.x2) throw usage_error("--x2 is required for condmean");
    j["x2"] = *a.x2;
    j["value"] = conditional_mean_x1_given_x2(a.p, *a.x2);
    j["published"] = conditional_mean_x1_given_x2_published(a.p, *a.x2);
  } else if (a.what == "marginals") {
    const auto m1 = marginal_x1(a.p), m2 = marginal_x2(a.p);
    j["x1"] = {{"mu", m1.mu()}, {"sigma", m1.sigma()}, {"alpha", m1.alpha()}};
    j["x2"] = {{"mu", m2.mu()}, {"sigma", m2.sigma()}, {"alpha", m2.alpha()}};
    j["x1_published"] = {{"mu", a.p.mu1}, {"sigma", a.p.sigma1}, {"alpha", a.p.alpha}};
  } else if (a.what == "sample2") {
    if (a.n < 1) throw usage_error("--n must be at least 1");
    Rng rng = make_rng(g.seed);
    const auto pts = sample2(a.p, rng, static_cast<std::size_t>(a.n));
    Table t{{"x1", "x2"}, {}};
    for (const auto& [u, v] : pts) t.rows.push_back({format_double(u), format_double(v)});
    return t.render(g.format);
  } else {
    throw usage_error("unknown --what: " + a.what);
  }
  return j.dump() + "\n";
}

struct ProcessArgs {
  std::string experiment;
  std::string dependence;
  double alpha = 2.0;
  double mu = 0.0;
  double rho = 0.0;
  std::string sigma_fn = "gauss";
  std::vector<double> T_values{1, 2, 5, 10, 20};
  double step = 0.05;
  std::size_t paths = 2000;
  double r = 2.0;
  std::vector<std::size_t> n_values{10, 50};
  std::size_t replications = 10000;
  double mu_y = 1.0, sigma_x = 1.0, sigma_y = 2.0;
};

inline std::string cmd_process(const ProcessArgs& a, const GlobalOptions& g) {
  if (a.dependence.empty()) throw usage_error("--dependence is required (comonotone, independent, shared-sign)");
  const auto dep = parse_dependence(a.dependence);
  if (!dep) throw usage_error("unknown --dependence: " + a.dependence);
  Table t{{"experiment", "param", "value"}, {}};
  auto add = [&t](const std::string& e, const std::string& p, double v) { t.rows.push_back({e, p, format_double(v)}); };

  if (a.experiment == "ergodicity") {
    ProcessSpec spec;
    const double mu = a.mu;
    spec.mu_fn = [mu](double) { return mu; };
    if (a.sigma_fn == "gauss") {
      spec.sigma_fn = [](double s) { return std::exp(-s * s); };
    } else if (a.sigma_fn == "const") {
      spec.sigma_fn = [](double) { return 1.0; };
    } else {
      throw usage_error("--sigma-fn must be gauss or const");
    }
    spec.alpha = a.alpha;
    spec.dependence = *dep;
    for (double T : a.T_values) {
      if (!(T > 0.0)) throw usage_error("--T-values must be positive");
    }
    const std::uint64_t seed = derive_seed(g.seed, {0x6572676fULL});
    for (double T : a.T_values) {
      const auto est = empirical_temporal_mean_variance(spec, T, a.step, a.paths, seed, 3);
      const std::string param = format_double(T);
      add("ergodicity.var_temporal_mean", param, est.value);
      add("ergodicity.closed_form", param, mean_ergodicity_var(spec, T, a.rho));
      add("ergodicity.sigma_time_average", param, sigma_time_average(spec, T));
      add("ergodicity.var_temporal_variance", param,
          empirical_temporal_variance_functional(spec, T, est.step, a.paths, seed));
    }
  } else if (a.experiment == "pqd") {
    const BNParams px(a.mu, a.sigma_x, a.alpha), py(a.mu_y, a.sigma_y, a.alpha);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= 56; ++i) {
      for (int j = 0; j <= 56; ++j) {
        const double h = pqd_gap(px, py, -6.0 + 0.25 * i, -6.0 + 0.25 * j);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
      }
    }
    add("pqd.min_gap", "grid[-6,8]^2/0.25", lo);
    add("pqd.max_gap", "grid[-6,8]^2/0.25", hi);
  } else if (a.experiment == "clt") {
    TriangularArraySpec spec;
    spec.r = a.r;
    spec.alpha = a.alpha;
    spec.n_values = a.n_values;
    spec.replications = a.replications;
    spec.dependence = *dep;
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw usage_error(e.what());
    }
    const std::string d = to_string(*dep);
    for (const auto& row : triangular_sum_experiment(spec, g.seed)) {
      const std::string n = std::to_string(row.n);
      add("clt." + d + ".ks_normal", n, row.ks_normal);
      add("clt." + d + ".ks_scaled_bn", n, row.ks_scaled_bn);
      add("clt.ks_critical_1pct", n, ks::critical_value(spec.replications, 0.01));
      const auto c = check_triangular_conditions(spec, row.n, 1);
      add("clt.min_sigma2", n, c.min_sigma2);
      add("clt.max_row_sum", n, c.max_row_sum);
    }
  } else {
    throw usage_error("--experiment must be ergodicity, pqd or clt");
  }
  return t.render(g.format);
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bimodal normal distribution toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "Output file (default: standard output)");
  app.add_option("--format", g.format, "Tabular output format")->check(CLI::IsMember({"csv", "json"}));

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate the univariate law");
  eval->add_option("--mu", ea.mu);
  eval->add_option("--sigma", ea.sigma);
  eval->add_option("--alpha", ea.alpha);
  eval->add_option("--what", ea.what)
      ->check(CLI::IsMember({"pdf", "logpdf", "cdf", "quantile", "hazard", "modes", "moments"}));
  eval->add_option("--x", ea.x);
  eval->add_option("--q", ea.q);

  SampleArgs sa;
  auto* samp = app.add_subcommand("sample", "Draw a sample (CSV column x)");
  samp->add_option("--mu", sa.mu);
  samp->add_option("--sigma", sa.sigma);
  samp->add_option("--alpha", sa.alpha);
  samp->add_option("--n", sa.n)->required();

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit of a CSV column x");
  fit->add_option("--input", fa.input)->required();
  fit->add_option("--fix", fa.fix, "Hold a parameter fixed: mu=..., sigma=..., alpha=...");
  fit->add_option("--method", fa.method)->check(CLI::IsMember({"newton", "fixed-point"}));
  fit->add_option("--init", fa.init)->check(CLI::IsMember({"moment", "grid"}));
  fit->add_option("--level", fa.level, "Confidence level for the alpha interval");
  fit->add_option("--max-iter", fa.max_iter);
  fit->add_option("--tol", fa.tol);

  MCStudyConfig mc;
  auto* mcs = app.add_subcommand("mc-study", "Monte Carlo bias/RMSE study of the MLE");
  mcs->add_option("--n-values", mc.n_values)->delimiter(',');
  mcs->add_option("--alpha-values", mc.alpha_values)->delimiter(',');
  mcs->add_option("--mu", mc.mu);
  mcs->add_option("--sigma", mc.sigma);
  mcs->add_option("--replications", mc.replications);

  BivarArgs ba;
  auto* biv = app.add_subcommand("bivar", "Bivariate law queries");
  biv->add_option("--mu1", ba.p.mu1);
  biv->add_option("--mu2", ba.p.mu2);
  biv->add_option("--sigma1", ba.p.sigma1);
  biv->add_option("--sigma2", ba.p.sigma2);
  biv->add_option("--alpha", ba.p.alpha);
  biv->add_option("--rho", ba.p.rho);
  biv->add_option("--what", ba.what)
      ->check(CLI::IsMember({"pdf2", "cov", "corr", "condmean", "marginals", "sample2"}));
  biv->add_option("--x1", ba.x1);
  biv->add_option("--x2", ba.x2);
  biv->add_option("--n", ba.n);

  ProcessArgs pa;
  auto* proc = app.add_subcommand("process", "Process experiments (CSV experiment,param,value)");
  proc->add_option("--experiment", pa.experiment)->required()->check(CLI::IsMember({"ergodicity", "pqd", "clt"}));
  proc->add_option("--dependence", pa.dependence, "comonotone | independent | shared-sign")->required();
  proc->add_option("--alpha", pa.alpha);
  proc->add_option("--mu", pa.mu);
  proc->add_option("--rho", pa.rho);
  proc->add_option("--sigma-fn", pa.sigma_fn)->check(CLI::IsMember({"gauss", "const"}));
  proc->add_option("--T-values", pa.T_values)->delimiter(',');
  proc->add_option("--step", pa.step);
  proc->add_option("--paths", pa.paths);
  proc->add_option("--r", pa.r);
  proc->add_option("--n-values", pa.n_values)->delimiter(',');
  proc->add_option("--replications", pa.replications);
  proc->add_option("--mu-y", pa.mu_y);
  proc->add_option("--sigma-x", pa.sigma_x);
  proc->add_option("--sigma-y", pa.sigma_y);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    std::string text;
    if (*eval) {
      text = cmd_eval(ea);
    } else if (*samp) {
      text = cmd_sample(sa, g);
    } else if (*fit) {
      text = cmd_fit(fa);
    } else if (*mcs) {
      mc.master_seed = g.seed;
      mc.workers = g.workers;
      const auto rows = run_mc_study(mc);
      text = g.format == "json" ? mc_study_json(rows).dump(2) + "\n" : mc_study_csv(rows);
    } else if (*biv) {
      text = cmd_bivar(ba, g);
    } else if (*proc) {
      text = cmd_process(pa, g);
    }
    emit(text, g.output, out);
    return exit_ok;
  } catch (const usage_error& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const data_error& e) {
    err << "data error: " << e.what() << '\n';
    return exit_data;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace bimodal::cli

#endif  // BIMODAL_CLI_HPP
