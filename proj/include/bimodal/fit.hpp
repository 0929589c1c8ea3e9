#ifndef BIMODAL_FIT_HPP
#define BIMODAL_FIT_HPP

// Maximum-likelihood estimation for BN samples: likelihood, score, two
// independent solvers (cyclic fixed point and safeguarded Newton), profile
// solvers, Fisher information for alpha and the asymptotic interval.
//
// alpha is kept in [0, inf) throughout: the likelihood is even in alpha.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "bimodal/distribution.hpp"
#include "bimodal/numerics.hpp"

namespace bimodal {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

enum Coord : std::size_t { kMu = 0, kSigma = 1, kAlpha = 2 };

struct MomentMatch {};
struct GridScan {};
struct Manual {
  BNParams start;
};
using FitInit = std::variant<MomentMatch, GridScan, Manual>;

struct FitConfig {
  std::array<bool, 3> estimate_mask{true, true, true};   // mu, sigma, alpha
  std::array<std::optional<double>, 3> fixed_values{};   // used where the mask is false
  FitInit init = MomentMatch{};
  int max_iter = 500;
  double tol = 1e-10;  // sup-norm of the per-observation score over free coordinates

  void validate() const {
    if (!(estimate_mask[0] || estimate_mask[1] || estimate_mask[2])) {
      throw std::invalid_argument("FitConfig: at least one parameter must be free");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("FitConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("FitConfig: max_iter must be at least 1");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!estimate_mask[i] && !fixed_values[i]) {
        throw std::invalid_argument("FitConfig: a fixed parameter needs a value");
      }
    }
  }

  /// mu and sigma fixed, alpha free.
  static FitConfig alpha_only(double mu, double sigma) {
    FitConfig c;
    c.estimate_mask = {false, false, true};
    c.fixed_values = {mu, sigma, std::nullopt};
    return c;
  }
};

struct FitResult {
  BNParams theta_hat{0.0, 1.0, 0.0};
  double loglik = 0.0;
  double score_sup_norm = 0.0;
  double fisher_info_alpha = 0.0;
  double se_alpha = std::numeric_limits<double>::quiet_NaN();  // NaN when unavailable
  int iterations = 0;
  bool converged = false;
  int fallback_steps = 0;  // Newton only: gradient / fixed-point substitutions
  std::vector<std::pair<int, double>> trace;  // (iteration, loglik)
};

// ---------------------------------------------------------------------------
// Likelihood and derivatives
// ---------------------------------------------------------------------------

inline void require_data(std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("empty data");
  for (double x : data) {
    if (!std::isfinite(x)) throw std::invalid_argument("data must be finite");
  }
}

/// Sum of log_pdf over the data, constant included.
inline double log_likelihood(const BNParams& theta, std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("log_likelihood: empty data");
  double s = 0.0;
  for (double x : data) s += log_pdf(theta, x);
  return s;
}

/// Gradient of the log-likelihood in (mu, sigma, alpha):
///   d/dmu    = (n/sigma)(xbar - mu)/sigma - (alpha/sigma) sum tanh(alpha z_i)
///   d/dsigma = -n/sigma + (1/sigma) sum z_i^2 - (alpha/sigma) sum z_i tanh(alpha z_i)
///   d/dalpha = -alpha n + sum z_i tanh(alpha z_i)
inline Vec3 score(const BNParams& theta, std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("score: empty data");
  const double s = theta.sigma(), a = theta.alpha();
  const double n = static_cast<double>(data.size());
  double sum_z = 0.0, sum_t = 0.0, sum_z2 = 0.0, sum_zt = 0.0;
  for (double x : data) {
    const double z = theta.standardize(x);
    const double t = std::tanh(a * z);
    sum_z += z;
    sum_t += t;
    sum_z2 += z * z;
    sum_zt += z * t;
  }
  return {sum_z / s - a / s * sum_t, -n / s + sum_z2 / s - a / s * sum_zt, -a * n + sum_zt};
}

/// Hessian of the log-likelihood in (mu, sigma, alpha).
inline Mat3 hessian(const BNParams& theta, std::span<const double> data) {
  const double s = theta.sigma(), a = theta.alpha();
  const double s2 = s * s;
  Mat3 h{};
  for (double x : data) {
    const double z = theta.standardize(x);
    const double t = std::tanh(a * z);
    const double sech2 = 1.0 - t * t;
    const double dz = z - a * t;
    h[0][0] += -(1.0 - a * a * sech2) / s2;
    h[0][1] += (-dz - z * (1.0 - a * a * sech2)) / s2;
    h[0][2] += -(t + a * z * sech2) / s;
    h[1][1] += (1.0 - 3.0 * z * z + 2.0 * a * z * t + a * a * z * z * sech2) / s2;
    h[1][2] += -(z * t + a * z * z * sech2) / s;
    h[2][2] += -1.0 + z * z * sech2;
  }
  h[1][0] = h[0][1];
  h[2][0] = h[0][2];
  h[2][1] = h[1][2];
  return h;
}

// ---------------------------------------------------------------------------
// Fisher information and asymptotic interval for alpha
// ---------------------------------------------------------------------------

/// I(alpha) = 1 - exp(-alpha^2/2) E_Phi[Z^2 sech(alpha Z)], Gauss-Hermite of
/// order 64. sech has poles at +-i pi / (2 alpha), so the rule's error grows
/// with alpha: about 1e-6 absolute for alpha in [1.5, 3]. Equal to
/// 1 - E[Z_X^2 sech^2(alpha Z_X)] under the BN law since cosh sech^2 = sech.
inline double fisher_info_alpha(double alpha) {
  const double a = std::abs(alpha);
  if (a < 0.25) {
    // 1 - (...) cancels to O(alpha^2) here; average the squared score over
    // the two mixture components instead, which stays positive
    auto sq = [a](double z) {
      double s = 0.0;
      for (double shift : {a, -a}) {
        const double u = z + shift;
        const double v = -a + u * std::tanh(a * u);
        s += 0.5 * v * v;
      }
      return s;
    };
    return numerics::expect_std_normal(sq, numerics::default_hermite_rule());
  }
  auto g = [a](double z) {
    const double c = std::cosh(a * z);
    return std::isfinite(c) ? z * z / c : 0.0;
  };
  const double e = numerics::expect_std_normal(g, numerics::default_hermite_rule());
  return 1.0 - std::exp(-0.5 * a * a) * e;
}

/// Upper (1 + level)/2 quantile of the standard normal.
inline double normal_two_sided_quantile(double level) {
  return quantile(BNParams(0.0, 1.0, 0.0), 0.5 * (1.0 + level));
}

/// alpha_hat -+ z_{(1+level)/2} / sqrt(n I(alpha_hat)), lower end clipped at 0.
inline std::pair<double, double> asymptotic_ci_alpha(double alpha_hat, std::size_t n, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("asymptotic_ci_alpha: level must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("asymptotic_ci_alpha: n must be positive");
  const double a = std::abs(alpha_hat);
  const double info = fisher_info_alpha(a);
  if (!(info > 1e-12)) {
    throw numerical_error(
        "asymptotic_ci_alpha: Fisher information vanishes at alpha_hat = 0; the normal "
        "approximation does not apply on the boundary of the parameter space");
  }
  const double half = normal_two_sided_quantile(level) / std::sqrt(static_cast<double>(n) * info);
  return {std::max(0.0, a - half), a + half};
}

// ---------------------------------------------------------------------------
// Profile solvers
// ---------------------------------------------------------------------------

inline constexpr double profile_alpha_cap = 50.0;

/// Non-negative root of -alpha n + sum z_i tanh(alpha z_i) with mu, sigma
/// known. The right side is concave in alpha >= 0 and vanishes at 0, so a
/// positive root exists iff mean z^2 > 1; otherwise 0 is returned.
inline double profile_alpha_mle(std::span<const double> data, double mu, double sigma) {
  require_data(data);
  const BNParams base(mu, sigma, 0.0);
  std::vector<double> z(data.size());
  std::transform(data.begin(), data.end(), z.begin(), [&](double x) { return base.standardize(x); });
  const double n = static_cast<double>(z.size());
  auto h = [&](double a) {
    double s = 0.0;
    for (double zi : z) s += zi * std::tanh(a * zi);
    return s / n - a;
  };
  double m2 = 0.0;
  for (double zi : z) m2 += zi * zi;
  m2 /= n;
  if (m2 <= 1.0) return 0.0;
  double lo = 1e-6;
  while (h(lo) <= 0.0) {
    lo *= 0.01;
    if (lo < 1e-300) return 0.0;
  }
  double hi = 1.0;
  while (h(hi) > 0.0) {
    hi *= 2.0;
    if (hi > profile_alpha_cap) {
      throw numerical_error("profile_alpha_mle: no sign change for alpha up to 50");
    }
  }
  return numerics::find_root(h, numerics::make_bracket(h, lo, hi));
}

/// Root in mu of the mu-score with sigma, alpha known. Any mu more than
/// |alpha| sigma below the smallest observation makes the score positive
/// (mirror image above the largest), so the bracket below always holds.
inline double profile_mu_mle(std::span<const double> data, double sigma, double alpha) {
  require_data(data);
  if (!(sigma > 0.0)) throw std::invalid_argument("profile_mu_mle: sigma must be positive");
  const double n = static_cast<double>(data.size());
  const double xbar = std::accumulate(data.begin(), data.end(), 0.0) / n;
  auto g = [&](double mu) {
    double st = 0.0;
    for (double x : data) st += std::tanh(alpha * (x - mu) / sigma);
    return (xbar - mu) / sigma - alpha * st / n;
  };
  const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
  double pad = sigma * (std::abs(alpha) + 1.0);
  double lo = std::min(*mn, xbar) - pad;
  double hi = std::max(*mx, xbar) + pad;
  for (int k = 0; k < 60 && !(g(lo) >= 0.0 && g(hi) <= 0.0); ++k) {
    pad *= 2.0;
    lo = std::min(*mn, xbar) - pad;
    hi = std::max(*mx, xbar) + pad;
  }
  auto bracket = numerics::make_bracket(g, lo, hi);
  if (!bracket.valid()) throw numerical_error("profile_mu_mle: bracket cap exceeded");
  return numerics::find_root(g, bracket);
}

// ---------------------------------------------------------------------------
// Full fitters
// ---------------------------------------------------------------------------

namespace detail {

struct Moments {
  double mean, m2, m4;
};

inline Moments central_moments(std::span<const double> data, double center) {
  double m2 = 0.0, m4 = 0.0;
  for (double x : data) {
    const double d = (x - center) * (x - center);
    m2 += d;
    m4 += d * d;
  }
  const double n = static_cast<double>(data.size());
  return {center, m2 / n, m4 / n};
}

/// Solves m4/m2^2 = (a^4 + 6a^2 + 3)/(1 + a^2)^2 for a in [0, 10]. The right
/// side falls monotonically from 3 (a = 0) towards 1; falls back to 1 when the
/// sample kurtosis is at least 3.
inline double alpha_from_kurtosis(double kurt) {
  auto ratio = [](double a) {
    const double a2 = a * a;
    return (a2 * a2 + 6.0 * a2 + 3.0) / ((1.0 + a2) * (1.0 + a2));
  };
  if (!std::isfinite(kurt) || kurt >= 3.0) return 1.0;
  if (kurt <= ratio(10.0)) return 10.0;
  auto f = [&](double a) { return ratio(a) - kurt; };
  return numerics::find_root(f, numerics::make_bracket(f, 0.0, 10.0));
}

inline double value_or(const FitConfig& c, std::size_t i, double free_value) {
  return c.estimate_mask[i] ? free_value : *c.fixed_values[i];
}

inline BNParams initial_params(std::span<const double> data, const FitConfig& config) {
  const double n = static_cast<double>(data.size());
  const double xbar = std::accumulate(data.begin(), data.end(), 0.0) / n;
  if (const auto* m = std::get_if<Manual>(&config.init)) {
    return BNParams(value_or(config, kMu, m->start.mu()), value_or(config, kSigma, m->start.sigma()),
                    value_or(config, kAlpha, std::abs(m->start.alpha())));
  }
  const double mu0 = value_or(config, kMu, xbar);
  const auto mom = central_moments(data, mu0);
  if (!(mom.m2 > 0.0)) throw std::invalid_argument("degenerate data: zero spread");
  if (std::holds_alternative<GridScan>(config.init)) {
    BNParams best(mu0, value_or(config, kSigma, std::sqrt(mom.m2)), value_or(config, kAlpha, 0.0));
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 120; ++k) {
      const double a = value_or(config, kAlpha, 0.05 * k);
      const double s = value_or(config, kSigma, std::sqrt(mom.m2 / (1.0 + a * a)));
      const BNParams cand(mu0, s, a);
      const double ll = log_likelihood(cand, data);
      if (ll > best_ll) {
        best_ll = ll;
        best = cand;
      }
    }
    return best;
  }
  double a0 = config.estimate_mask[kAlpha] ? alpha_from_kurtosis(mom.m4 / (mom.m2 * mom.m2))
                                           : std::abs(*config.fixed_values[kAlpha]);
  // alpha = 0 is a stationary point of the alpha score; start away from it
  if (config.estimate_mask[kAlpha] && a0 < 1e-3) a0 = 1e-3;
  const double s0 = value_or(config, kSigma, std::sqrt(mom.m2 / (1.0 + a0 * a0)));
  return BNParams(mu0, s0, a0);
}

inline void check_fit_data(std::span<const double> data, const FitConfig& config) {
  require_data(data);
  config.validate();
  const bool all_free = config.estimate_mask[0] && config.estimate_mask[1] && config.estimate_mask[2];
  if (all_free && data.size() < 3) throw std::invalid_argument("degenerate data: need at least 3 observations");
  const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
  if (*mn == *mx && (config.estimate_mask[kSigma] || config.estimate_mask[kAlpha])) {
    throw std::invalid_argument("degenerate data: all observations identical");
  }
}

inline double score_norm(const Vec3& g, const FitConfig& config, double n) {
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (config.estimate_mask[i]) m = std::max(m, std::abs(g[i]) / n);
  }
  return m;
}

inline void finalize(FitResult& r, std::span<const double> data, const FitConfig& config) {
  r.theta_hat = canonical(r.theta_hat);
  r.loglik = log_likelihood(r.theta_hat, data);
  r.score_sup_norm = score_norm(score(r.theta_hat, data), config, static_cast<double>(data.size()));
  r.fisher_info_alpha = fisher_info_alpha(r.theta_hat.alpha());
  if (config.estimate_mask[kAlpha] && r.fisher_info_alpha > 1e-12) {
    r.se_alpha = 1.0 / std::sqrt(static_cast<double>(data.size()) * r.fisher_info_alpha);
  } else {
    r.se_alpha = std::numeric_limits<double>::quiet_NaN();
  }
}

/// One conditional-maximisation sweep of the likelihood equations with the
/// posterior weights t_i = tanh(alpha z_i) evaluated at the current
/// iterate:
///   mu      = xbar - alpha sigma mean(t)
///   sigma^2 = mean((x - mu)^2) / (1 + alpha^2)
///   alpha   = mean(z t)
/// When sigma and alpha are both free the last two are solved together
/// (alpha sigma = mean((x - mu) t)), which makes each sweep an EM step and
/// the likelihood non-decreasing.
inline BNParams fixed_point_sweep(const BNParams& theta, std::span<const double> data, const FitConfig& config) {
  const double n = static_cast<double>(data.size());
  double mu = theta.mu(), sigma = theta.sigma(), alpha = theta.alpha();
  std::vector<double> t(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) t[i] = std::tanh(alpha * theta.standardize(data[i]));
  const double tbar = std::accumulate(t.begin(), t.end(), 0.0) / n;
  double xbar = 0.0, xt = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    xbar += data[i];
    xt += data[i] * t[i];
  }
  xbar /= n;
  xt /= n;
  const bool fm = config.estimate_mask[kMu], fs = config.estimate_mask[kSigma], fa = config.estimate_mask[kAlpha];

  if (fm && fa) {
    // joint in (mu, delta = alpha sigma)
    double delta = (xt - xbar * tbar) / std::max(1.0 - tbar * tbar, 1e-300);
    delta = std::max(delta, 0.0);
    mu = xbar - delta * tbar;
    if (fs) {
      double m2 = 0.0;
      for (double x : data) m2 += (x - mu) * (x - mu);
      m2 /= n;
      sigma = std::sqrt(std::max(m2 - delta * delta, 1e-300));
    }
    alpha = delta / sigma;
    return BNParams(mu, sigma, alpha);
  }
  if (fm) mu = xbar - alpha * sigma * tbar;
  double m2 = 0.0, c = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double d = data[i] - mu;
    m2 += d * d;
    c += d * t[i];
  }
  m2 /= n;
  c /= n;
  if (fs && fa) {
    const double delta = std::max(c, 0.0);
    sigma = std::sqrt(std::max(m2 - delta * delta, 1e-300));
    alpha = delta / sigma;
  } else if (fa) {
    alpha = std::max(c, 0.0) / sigma;
  } else if (fs) {
    // sigma^2 + alpha c sigma - m2 = 0
    sigma = 0.5 * (-alpha * c + std::sqrt(alpha * alpha * c * c + 4.0 * m2));
  }
  return BNParams(mu, sigma, alpha);
}

/// Solves (-H) d = g for the free block via Cholesky; nullopt unless -H is
/// positive definite there.
inline std::optional<Vec3> newton_direction(const Mat3& h, const Vec3& g, const FitConfig& config) {
  std::array<std::size_t, 3> idx{};
  std::size_t k = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (config.estimate_mask[i]) idx[k++] = i;
  }
  double a[3][3]{}, b[3]{};
  for (std::size_t i = 0; i < k; ++i) {
    b[i] = g[idx[i]];
    for (std::size_t j = 0; j < k; ++j) a[i][j] = -h[idx[i]][idx[j]];
  }
  double l[3][3]{};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t m = 0; m < j; ++m) s -= l[i][m] * l[j][m];
      if (i == j) {
        if (!(s > 0.0)) return std::nullopt;
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  double y[3]{}, x[3]{};
  for (std::size_t i = 0; i < k; ++i) {
    double s = b[i];
    for (std::size_t m = 0; m < i; ++m) s -= l[i][m] * y[m];
    y[i] = s / l[i][i];
  }
  for (std::size_t ii = k; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t m = ii + 1; m < k; ++m) s -= l[m][ii] * x[m];
    x[ii] = s / l[ii][ii];
  }
  Vec3 d{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < k; ++i) d[idx[i]] = x[i];
  return d;
}

inline std::optional<BNParams> stepped(const BNParams& theta, const Vec3& d, double step) {
  const double mu = theta.mu() + step * d[kMu];
  const double sigma = theta.sigma() + step * d[kSigma];
  const double alpha = theta.alpha() + step * d[kAlpha];
  if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(alpha)) return std::nullopt;
  return BNParams(mu, sigma, std::abs(alpha));
}

}  // namespace detail

/// Cyclic fixed-point iteration of the likelihood equations (see
/// detail::fixed_point_sweep). Returns the last iterate with
/// converged = false when max_iter is reached.
inline FitResult mle_fixed_point(std::span<const double> data, const FitConfig& config = {}) {
  detail::check_fit_data(data, config);
  const double n = static_cast<double>(data.size());
  BNParams theta = canonical(detail::initial_params(data, config));
  FitResult r;
  r.trace.emplace_back(0, log_likelihood(theta, data));
  for (int it = 1; it <= config.max_iter; ++it) {
    if (detail::score_norm(score(theta, data), config, n) <= config.tol) {
      r.converged = true;
      r.iterations = it - 1;
      break;
    }
    theta = detail::fixed_point_sweep(theta, data, config);
    r.iterations = it;
    r.trace.emplace_back(it, log_likelihood(theta, data));
  }
  r.theta_hat = theta;
  detail::finalize(r, data, config);
  if (!r.converged) r.converged = r.score_sup_norm <= config.tol;
  return r;
}

/// Newton's method on the score system with a backtracking line search on
/// the log-likelihood. When the Hessian block is not negative definite the
/// step falls back to steepest ascent; when the line search fails it falls
/// back to a fixed-point sweep. The log-likelihood trace is non-decreasing
/// up to rounding of the sum (1e-12 relative).
inline FitResult mle_newton(std::span<const double> data, const FitConfig& config = {}) {
  detail::check_fit_data(data, config);
  const double n = static_cast<double>(data.size());
  BNParams theta = canonical(detail::initial_params(data, config));
  double ll = log_likelihood(theta, data);
  FitResult r;
  r.trace.emplace_back(0, ll);
  for (int it = 1; it <= config.max_iter; ++it) {
    const Vec3 g = score(theta, data);
    if (detail::score_norm(g, config, n) <= config.tol) {
      r.converged = true;
      r.iterations = it - 1;
      break;
    }
    Vec3 gm{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < 3; ++i) gm[i] = config.estimate_mask[i] ? g[i] : 0.0;
    auto dir = detail::newton_direction(hessian(theta, data), gm, config);
    bool newton = dir.has_value();
    Vec3 d = newton ? *dir : gm;
    if (!newton) {
      ++r.fallback_steps;
      // scale the gradient step to at most unit length in each coordinate
      double norm = 0.0;
      for (double v : d) norm = std::max(norm, std::abs(v));
      const double scale = std::max(norm, 1.0);
      for (double& v : d) v /= scale;
    }
    const double slack = 1e-12 * (1.0 + std::abs(ll));
    bool accepted = false;
    double step = 1.0;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      const auto cand = detail::stepped(theta, d, step);
      if (!cand) continue;
      const double cand_ll = log_likelihood(*cand, data);
      if (cand_ll >= ll - slack) {
        theta = *cand;
        ll = cand_ll;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      ++r.fallback_steps;
      const BNParams next = detail::fixed_point_sweep(theta, data, config);
      const double next_ll = log_likelihood(next, data);
      if (next_ll < ll - slack) {
        r.iterations = it;
        break;
      }
      theta = next;
      ll = next_ll;
    }
    r.iterations = it;
    r.trace.emplace_back(it, ll);
  }
  r.theta_hat = theta;
  detail::finalize(r, data, config);
  if (!r.converged) r.converged = r.score_sup_norm <= config.tol;
  return r;
}

}  // namespace bimodal

#endif  // BIMODAL_FIT_HPP
