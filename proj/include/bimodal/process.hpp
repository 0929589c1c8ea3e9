#ifndef BIMODAL_PROCESS_HPP
#define BIMODAL_PROCESS_HPP

// Time-indexed BN processes X_t ~ BN(mu_t, sigma_t, alpha) and the
// experiment apparatus built on them: quadrant-dependence gaps, temporal
// means and ergodicity reports, and the triangular-array sum harness.
//
// The joint law across time is not determined by the marginals, so every
// generator names its dependence structure explicitly:
//   Comonotone        X_t = mu_t + sigma_t (Z + A), one (Z, A) per path
//   IndependentShocks fresh (Z_t, A_t) at every index
//   SharedSign        one A per path, fresh Z_t at every index

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bimodal/distribution.hpp"
#include "bimodal/ks.hpp"
#include "bimodal/numerics.hpp"
#include "bimodal/random.hpp"

namespace bimodal {

enum class Dependence { Comonotone, IndependentShocks, SharedSign };

inline std::string to_string(Dependence d) {
  switch (d) {
    case Dependence::Comonotone: return "comonotone";
    case Dependence::IndependentShocks: return "independent";
    case Dependence::SharedSign: return "shared-sign";
  }
  return "unknown";
}

inline std::optional<Dependence> parse_dependence(const std::string& s) {
  if (s == "comonotone") return Dependence::Comonotone;
  if (s == "independent") return Dependence::IndependentShocks;
  if (s == "shared-sign") return Dependence::SharedSign;
  return std::nullopt;
}

struct ProcessSpec {
  std::function<double(double)> mu_fn = [](double) { return 0.0; };
  std::function<double(double)> sigma_fn = [](double) { return 1.0; };
  double alpha = 0.0;
  Dependence dependence = Dependence::Comonotone;

  [[nodiscard]] BNParams marginal(double t) const {
    const double s = sigma_fn(t);
    if (!(s > 0.0)) throw std::invalid_argument("ProcessSpec: sigma_fn must be positive");
    return BNParams(mu_fn(t), s, alpha);
  }
};

struct TriangularArraySpec {
  double r = 2.0;  // sigma_{n,k} = r^{-k}
  std::function<double(std::size_t)> mu_rule = [](std::size_t) { return 0.0; };
  double alpha = 0.0;
  std::vector<std::size_t> n_values{10, 50};
  std::size_t replications = 1000;
  Dependence dependence = Dependence::IndependentShocks;

  void validate() const {
    if (!(r > 1.0)) throw std::invalid_argument("TriangularArraySpec: r must exceed 1");
    if (replications < 1) throw std::invalid_argument("TriangularArraySpec: replications must be positive");
  }
  [[nodiscard]] double sigma(std::size_t k) const { return std::pow(r, -static_cast<double>(k)); }
};

struct ErgodicityReport {
  std::vector<double> T_values;
  std::vector<double> var_temporal_mean;   // empirical, across simulated paths
  std::vector<double> closed_form_values;  // mean_ergodicity_var
};

// ---------------------------------------------------------------------------
// Quadrant dependence
// ---------------------------------------------------------------------------

/// H(x, y) = P(X <= x, Y <= y) - P(X <= x) P(Y <= y) for the comonotone pair
/// X = muX + sigmaX (Z + A), Y = muY + sigmaY (Z + A):
///   1/2 [Phi(m - a) + Phi(m + a)] - 1/4 [Phi(u - a) + Phi(u + a)][Phi(v - a) + Phi(v + a)],
/// u, v the standardised arguments and m = min(u, v).
inline double pqd_gap(const BNParams& px, const BNParams& py, double x, double y) {
  if (px.alpha() != py.alpha()) throw std::invalid_argument("pqd_gap: both laws must share alpha");
  const double a = px.alpha();
  const double u = px.standardize(x);
  const double v = py.standardize(y);
  const double m = std::min(u, v);
  using numerics::std_normal_cdf;
  const double joint = 0.5 * (std_normal_cdf(m - a) + std_normal_cdf(m + a));
  const double fx = 0.5 * (std_normal_cdf(u - a) + std_normal_cdf(u + a));
  const double fy = 0.5 * (std_normal_cdf(v - a) + std_normal_cdf(v + a));
  return joint - fx * fy;
}

// ---------------------------------------------------------------------------
// Paths and temporal averages
// ---------------------------------------------------------------------------

namespace detail {

struct Shock {
  double z;
  double a;
};

inline Shock draw_shock(double alpha, Rng& rng, std::normal_distribution<double>& normal) {
  const double z = normal(rng);
  const double a = (rng() >> 63) ? alpha : -alpha;
  return {z, a};
}

}  // namespace detail

/// One path of the process at the given times.
inline std::vector<double> simulate_process(const ProcessSpec& spec, std::span<const double> times, Rng& rng) {
  if (times.empty()) throw std::invalid_argument("simulate_process: no times");
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto shared = detail::draw_shock(spec.alpha, rng, normal);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    const BNParams p = spec.marginal(t);
    double z = shared.z, a = shared.a;
    if (spec.dependence == Dependence::IndependentShocks) {
      const auto s = detail::draw_shock(spec.alpha, rng, normal);
      z = s.z;
      a = s.a;
    } else if (spec.dependence == Dependence::SharedSign) {
      z = normal(rng);
    }
    out.push_back(p.mu() + p.sigma() * (z + a));
  }
  return out;
}

/// (1/2T) integral_{-T}^{T} X_t dt by the trapezoid rule over the path's
/// span [t_0, t_last], with 2T = t_last - t_0.
inline double temporal_mean(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("temporal_mean: size mismatch");
  if (times.size() < 2) throw std::invalid_argument("temporal_mean: need at least two points");
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(dt > 0.0)) throw std::invalid_argument("temporal_mean: times must be strictly increasing");
    integral += 0.5 * dt * (values[i] + values[i - 1]);
  }
  return integral / (times.back() - times.front());
}

/// Evenly spaced grid on [-T, T] with spacing at most `step`.
inline std::vector<double> symmetric_grid(double T, double step) {
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * T / step - 1e-9));
  std::vector<double> g(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) g[i] = -T + 2.0 * T * static_cast<double>(i) / static_cast<double>(cells);
  return g;
}

/// (1/2T) integral_{-T}^{T} sigma_t dt by adaptive quadrature.
inline double sigma_time_average(const ProcessSpec& spec, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("sigma_time_average: T must be positive");
  return numerics::adaptive_quad([&](double t) { return spec.sigma_fn(t); }, -T, T, 1e-13) / (2.0 * T);
}

/// [rho (1 + alpha^2) + (1 - rho^2) alpha] ((1/2T) integral sigma_t dt)^2, the
/// temporal-mean variance implied by the published covariance form. Requires
/// a time-constant mean (checked on a grid over [-T, T]).
inline double mean_ergodicity_var(const ProcessSpec& spec, double T, double rho) {
  if (!(T > 0.0)) throw std::invalid_argument("mean_ergodicity_var: T must be positive");
  const double m0 = spec.mu_fn(-T);
  for (int i = 1; i <= 256; ++i) {
    const double t = -T + 2.0 * T * i / 256.0;
    if (spec.mu_fn(t) != m0) throw std::invalid_argument("mean_ergodicity_var: mean must not depend on time");
  }
  const double a = spec.alpha;
  const double factor = rho * (1.0 + a * a) + (1.0 - rho * rho) * a;
  const double avg = sigma_time_average(spec, T);
  return factor * avg * avg;
}

namespace detail {

inline double sample_variance(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (n - 1.0);
}

template <class Functional>
double temporal_functional_variance(const ProcessSpec& spec, double T, double step, std::size_t paths,
                                    std::uint64_t seed, Functional&& functional) {
  const auto grid = symmetric_grid(T, step);
  std::vector<double> stats(paths);
  for (std::size_t k = 0; k < paths; ++k) {
    Rng rng = make_rng(seed, {k});
    const auto path = simulate_process(spec, grid, rng);
    stats[k] = functional(grid, path);
  }
  return sample_variance(stats);
}

}  // namespace detail

struct DiscretizedEstimate {
  double value;
  double step;
  bool stable;  // last halving moved the value by less than 1%
};

/// Variance across `paths` simulated paths of the trapezoid temporal mean on
/// [-T, T]. Starts at `step` and halves it (same path seeds) until the
/// estimate moves by less than 1%, at most `max_halvings` times.
inline DiscretizedEstimate empirical_temporal_mean_variance(const ProcessSpec& spec, double T, double step,
                                                            std::size_t paths, std::uint64_t seed,
                                                            int max_halvings = 6) {
  if (paths < 2) throw std::invalid_argument("empirical_temporal_mean_variance: need at least two paths");
  auto functional = [](std::span<const double> g, std::span<const double> x) { return temporal_mean(g, x); };
  double prev = detail::temporal_functional_variance(spec, T, step, paths, seed, functional);
  for (int h = 0; h < max_halvings; ++h) {
    step *= 0.5;
    const double next = detail::temporal_functional_variance(spec, T, step, paths, seed, functional);
    const bool stable = std::abs(next - prev) <= 0.01 * std::abs(prev);
    prev = next;
    if (stable) return {next, step, true};
  }
  return {prev, step, false};
}

/// Variance across paths of (1/2T) integral (X_t - mu)^2 dt: the empirical
/// counterpart of the variance-ergodicity functional, for which no closed
/// form is available. Fixed step, no refinement.
inline double empirical_temporal_variance_functional(const ProcessSpec& spec, double T, double step,
                                                     std::size_t paths, std::uint64_t seed) {
  auto functional = [&spec](std::span<const double> g, std::span<const double> x) {
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - spec.mu_fn(g[i]);
      sq[i] = d * d;
    }
    return temporal_mean(g, sq);
  };
  return detail::temporal_functional_variance(spec, T, step, paths, seed, functional);
}

inline ErgodicityReport ergodicity_report(const ProcessSpec& spec, std::span<const double> T_values, double rho,
                                          double step, std::size_t paths, std::uint64_t seed) {
  ErgodicityReport r;
  for (double T : T_values) {
    r.T_values.push_back(T);
    r.var_temporal_mean.push_back(empirical_temporal_mean_variance(spec, T, step, paths, seed).value);
    r.closed_form_values.push_back(mean_ergodicity_var(spec, T, rho));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Triangular arrays
// ---------------------------------------------------------------------------

struct TriangularConditions {
  std::size_t n;
  std::size_t l;
  double min_sigma2;       // min_j sigma_{n,j}^2
  double max_sigma3;       // max_j sigma_{n,j}^3
  double max_row_sum;      // max_j sum_k sigma_{n,j} sigma_{n,k}
  double row_sum_bound;    // 1 / (r - 1)
  double max_tail_sum;     // max_j sum_{|k-j| >= l} sigma_{n,j} sigma_{n,k}
  double tail_envelope;    // 2 sum_{m >= l} r^{-m}
  bool within_bounds;      // row and tail sums under their envelopes
};

inline TriangularConditions check_triangular_conditions(const TriangularArraySpec& spec, std::size_t n,
                                                        std::size_t l) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("check_triangular_conditions: n must be positive");
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = spec.sigma(k + 1);
  TriangularConditions c{n, l, 0.0, 0.0, 0.0, 1.0 / (spec.r - 1.0), 0.0, 0.0, true};
  c.min_sigma2 = s.back() * s.back();
  c.max_sigma3 = s.front() * s.front() * s.front();
  const double total = std::accumulate(s.begin(), s.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    c.max_row_sum = std::max(c.max_row_sum, s[j] * total);
    double tail = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t gap = j > k ? j - k : k - j;
      if (gap >= l) tail += s[j] * s[k];
    }
    c.max_tail_sum = std::max(c.max_tail_sum, tail);
  }
  c.tail_envelope = 2.0 * std::pow(spec.r, -static_cast<double>(l)) * spec.r / (spec.r - 1.0);
  c.within_bounds = c.max_row_sum <= c.row_sum_bound && c.max_tail_sum <= c.tail_envelope;
  return c;
}

struct TriangularRow {
  std::size_t n;
  Dependence dependence;
  double ks_normal;     // standardised S_n against N(0, 1)
  double ks_scaled_bn;  // against BN(0, 1/sqrt(1 + alpha^2), alpha), the exact comonotone law
};

/// For each n: simulate S_n = sum_{j <= n} (X_{n,j} - mu_{n,j}) over the
/// replications, divide by the empirical standard deviation and measure the
/// KS distance to the two reference laws.
inline std::vector<TriangularRow> triangular_sum_experiment(const TriangularArraySpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<TriangularRow> rows;
  const double a = spec.alpha;
  const BNParams scaled_bn(0.0, 1.0 / std::sqrt(1.0 + a * a), a);
  for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
    const std::size_t n = spec.n_values[ni];
    std::vector<double> sums(spec.replications);
    for (std::size_t rep = 0; rep < spec.replications; ++rep) {
      Rng rng = make_rng(seed, {0x7472ULL, n, rep});
      std::normal_distribution<double> normal(0.0, 1.0);
      const auto shared = detail::draw_shock(a, rng, normal);
      double s = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        double z = shared.z, sh = shared.a;
        if (spec.dependence == Dependence::IndependentShocks) {
          const auto fresh = detail::draw_shock(a, rng, normal);
          z = fresh.z;
          sh = fresh.a;
        } else if (spec.dependence == Dependence::SharedSign) {
          z = normal(rng);
        }
        const double mu = spec.mu_rule(j);
        const double x = mu + spec.sigma(j) * (z + sh);
        s += x - mu;
      }
      sums[rep] = s;
    }
    double sd = 0.0;
    for (double v : sums) sd += v * v;
    sd = std::sqrt(sd / static_cast<double>(sums.size()));
    for (double& v : sums) v /= sd;
    rows.push_back({n, spec.dependence,
                    ks::statistic(sums, [](double x) { return numerics::std_normal_cdf(x); }),
                    ks::statistic(sums, [&](double x) { return cdf(scaled_bn, x); })});
  }
  return rows;
}

}  // namespace bimodal

#endif  // BIMODAL_PROCESS_HPP
