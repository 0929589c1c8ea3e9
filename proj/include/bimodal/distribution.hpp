#ifndef BIMODAL_DISTRIBUTION_HPP
#define BIMODAL_DISTRIBUTION_HPP

// The univariate bimodal normal law BN(mu, sigma, alpha):
//
//   f(x) = exp(-z^2/2 - alpha^2/2) cosh(alpha z) / (sigma sqrt(2 pi)),
//   z = (x - mu) / sigma,
//
// equivalently the equal-weight mixture of N(mu + alpha sigma, sigma^2) and
// N(mu - alpha sigma, sigma^2). The law is even in alpha.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bimodal/numerics.hpp"
#include "bimodal/random.hpp"

namespace bimodal {

class BNParams {
 public:
  BNParams(double mu, double sigma, double alpha) : mu_(mu), sigma_(sigma), alpha_(alpha) {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(alpha)) {
      throw std::invalid_argument("BNParams: parameters must be finite");
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("BNParams: sigma must be positive");
  }

  [[nodiscard]] double mu() const { return mu_; }
  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] double alpha() const { return alpha_; }

  /// Standardised coordinate z = (x - mu) / sigma.
  [[nodiscard]] double standardize(double x) const { return (x - mu_) / sigma_; }

  friend bool operator==(const BNParams&, const BNParams&) = default;

 private:
  double mu_;
  double sigma_;
  double alpha_;
};

/// Same law with alpha replaced by |alpha|.
inline BNParams canonical(const BNParams& p) { return {p.mu(), p.sigma(), std::abs(p.alpha())}; }

struct BNMixture {
  double weight = 0.5;
  double loc_plus;
  double loc_minus;
  double scale;
};

enum class Modality { Unimodal, Bimodal };

struct ModeSet {
  Modality kind;
  std::vector<double> modes;      // ascending; one entry when unimodal
  std::optional<double> antimode; // present iff bimodal, equal to mu
};

// ---------------------------------------------------------------------------
// Density, distribution and hazard
// ---------------------------------------------------------------------------

inline double log_pdf(const BNParams& p, double x) {
  const double z = p.standardize(x);
  const double a = p.alpha();
  return -std::log(p.sigma()) - numerics::log_sqrt_2pi - 0.5 * z * z - 0.5 * a * a +
         numerics::log_cosh(a * z);
}

inline double pdf(const BNParams& p, double x) { return std::exp(log_pdf(p, x)); }

inline double cdf(const BNParams& p, double x) {
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  const double z = p.standardize(x);
  const double a = p.alpha();
  return 0.5 * (numerics::std_normal_cdf(z - a) + numerics::std_normal_cdf(z + a));
}

inline double survival(const BNParams& p, double x) {
  if (x == -std::numeric_limits<double>::infinity()) return 1.0;
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  const double z = p.standardize(x);
  const double a = p.alpha();
  return 0.5 * (numerics::std_normal_cdf(a - z) + numerics::std_normal_cdf(-a - z));
}

inline double hazard(const BNParams& p, double x) {
  const double s = survival(p, x);
  if (!(s > 0.0)) throw numerical_error("hazard: survival underflows to zero at this x");
  return pdf(p, x) / s;
}

inline double quantile(const BNParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q must lie in (0, 1)");
  if (q == 0.5) return p.mu();
  auto f = [&](double x) { return cdf(p, x) - q; };
  double half = p.sigma() * (std::abs(p.alpha()) + 10.0);
  double lo = p.mu() - half;
  double hi = p.mu() + half;
  while (f(lo) > 0.0) {
    half *= 2.0;
    lo = p.mu() - half;
  }
  while (f(hi) < 0.0) {
    half *= 2.0;
    hi = p.mu() + half;
  }
  return numerics::find_root(f, numerics::make_bracket(f, lo, hi));
}

// ---------------------------------------------------------------------------
// Representations and sampling
// ---------------------------------------------------------------------------

inline BNMixture mixture_decomposition(const BNParams& p) {
  const double shift = p.alpha() * p.sigma();
  return BNMixture{0.5, p.mu() + shift, p.mu() - shift, p.sigma()};
}

inline double mixture_pdf(const BNMixture& m, double x) {
  const double zp = (x - m.loc_plus) / m.scale;
  const double zm = (x - m.loc_minus) / m.scale;
  return m.weight * (numerics::std_normal_pdf(zp) + numerics::std_normal_pdf(zm)) / m.scale;
}

/// One draw mu + sigma (Z + A), Z ~ N(0,1), A = +-alpha with probability 1/2.
inline double sample_one(const BNParams& p, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z = normal(rng);
  const double a = (rng() >> 63) ? p.alpha() : -p.alpha();
  return p.mu() + p.sigma() * (z + a);
}

inline std::vector<double> sample(const BNParams& p, Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample: n must be positive");
  std::vector<double> out;
  out.reserve(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = normal(rng);
    const double a = (rng() >> 63) ? p.alpha() : -p.alpha();
    out.push_back(p.mu() + p.sigma() * (z + a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generating functions and summary quantities
// ---------------------------------------------------------------------------

inline double mgf(const BNParams& p, double t) {
  const double s = p.sigma();
  return std::exp(p.mu() * t + 0.5 * s * s * t * t) * std::cosh(p.alpha() * s * t);
}

/// Characteristic function as (real, imaginary). cosh(i x) = cos x.
inline std::pair<double, double> cf_real_form(const BNParams& p, double t) {
  const double s = p.sigma();
  const double mod = std::exp(-0.5 * s * s * t * t) * std::cos(p.alpha() * s * t);
  return {mod * std::cos(p.mu() * t), mod * std::sin(p.mu() * t)};
}

inline double mean(const BNParams& p) { return p.mu(); }

inline double variance(const BNParams& p) {
  const double a = p.alpha();
  return p.sigma() * p.sigma() * (1.0 + a * a);
}

inline double skewness(const BNParams&) { return 0.0; }

/// Mean absolute deviation about the mean, [2 phi(alpha) + alpha erf(alpha/sqrt2)] sigma.
/// alpha erf(alpha/sqrt2) is even, so the expression needs no |alpha|.
inline double mad(const BNParams& p) {
  const double a = p.alpha();
  return (2.0 * numerics::std_normal_pdf(a) + a * numerics::erf(a / std::numbers::sqrt2)) * p.sigma();
}

/// E[((X - mu) / sqrt(Var X))^n].
inline double std_moment(const BNParams& p, int n) {
  if (n < 0) throw std::invalid_argument("std_moment: n must be non-negative");
  if (n % 2 == 1) return 0.0;
  const double a = p.alpha();
  // sum over even k of C(n,k) alpha^(n-k) E[Z^k], E[Z^k] = 2^(-k/2) k!/(k/2)! = (k-1)!!
  double sum = 0.0;
  double binom = 1.0;       // C(n, k)
  double normal_moment = 1.0;  // (k-1)!!
  for (int k = 0; k <= n; k += 2) {
    if (k > 0) {
      binom *= static_cast<double>(n - k + 2) * (n - k + 1) / (static_cast<double>(k - 1) * k);
      normal_moment *= (k - 1);
    }
    sum += binom * std::pow(a, n - k) * normal_moment;
  }
  return sum / std::pow(1.0 + a * a, 0.5 * n);
}

inline constexpr int raw_moment_max_order = 12;

/// E[X^n] from the two-component normal moments written with Kummer's 1F1.
/// Both branches have a non-positive integer first argument, so the series
/// is a finite polynomial with terms of one sign.
inline double raw_moment(const BNParams& p, int n) {
  if (n < 0 || n > raw_moment_max_order) {
    throw std::invalid_argument("raw_moment: order outside the supported range [0, 12]");
  }
  if (n == 0) return 1.0;
  const double s = p.sigma();
  const double up = p.mu() + p.alpha() * s;
  const double um = p.mu() - p.alpha() * s;
  const double xp = -up * up / (2.0 * s * s);
  const double xm = -um * um / (2.0 * s * s);
  if (n % 2 == 0) {
    const double c = std::pow(s, n) * std::pow(2.0, (n - 2) / 2.0) * std::tgamma((n + 1) / 2.0) /
                     numerics::sqrt_pi;
    return c * (numerics::kummer_1f1(-n / 2.0, 0.5, xp) + numerics::kummer_1f1(-n / 2.0, 0.5, xm));
  }
  const double c = std::pow(s, n - 1) * std::pow(2.0, (n - 1) / 2.0) * std::tgamma(n / 2.0 + 1.0) /
                   numerics::sqrt_pi;
  return c * (up * numerics::kummer_1f1((1.0 - n) / 2.0, 1.5, xp) +
              um * numerics::kummer_1f1((1.0 - n) / 2.0, 1.5, xm));
}

/// alpha^4 + 6 alpha^2 + 3, which is E[(X - mu)^4] / sigma^4. It is not the
/// variance-standardised kurtosis; that is std_moment(p, 4).
inline double fourth_central_over_sigma4(const BNParams& p) {
  const double a2 = p.alpha() * p.alpha();
  return a2 * (a2 + 6.0) + 3.0;
}

/// Shannon entropy,
///   log sqrt(2 pi sigma^2) + (2 alpha^2 + 1)/2 - E[log cosh(alpha Z_X)],
/// Z_X ~ BN(0, 1, alpha), the expectation by adaptive quadrature.
inline double entropy(const BNParams& p) {
  const double a = std::abs(p.alpha());
  const double base = std::log(p.sigma()) + numerics::log_sqrt_2pi + (2.0 * a * a + 1.0) / 2.0;
  if (a == 0.0) return base;
  const BNParams standard(0.0, 1.0, a);
  auto integrand = [&](double z) { return pdf(standard, z) * numerics::log_cosh(a * z); };
  // even integrand: twice the half-line integral
  const double e = 2.0 * numerics::adaptive_quad_breaks(integrand, 0.0, std::numeric_limits<double>::infinity(),
                                                        {a}, 1e-13);
  return base - e;
}

/// The published closed form
///   log sqrt(2 pi sigma^2) + (2 alpha^2 + 1)/2 - exp(-alpha^2/2) (exp(2 alpha^2) + 1)/2.
/// Kept as a reference value only: it disagrees with the definition (at
/// alpha = 0 it is one nat short of the normal entropy).
inline double entropy_published(const BNParams& p) {
  const double a2 = p.alpha() * p.alpha();
  return std::log(p.sigma()) + numerics::log_sqrt_2pi + (2.0 * a2 + 1.0) / 2.0 -
         std::exp(-a2 / 2.0) / 2.0 * (std::exp(2.0 * a2) + 1.0);
}

// ---------------------------------------------------------------------------
// Modes
// ---------------------------------------------------------------------------

inline constexpr double mode_bracket_epsilon = 1e-8;

/// Critical points solve z = alpha tanh(alpha z). For |alpha| <= 1 the only
/// solution is z = 0; otherwise the positive root lies in (eps, |alpha|] and
/// the negative one mirrors it, with the antimode at mu.
inline ModeSet modes(const BNParams& p) {
  const double a = std::abs(p.alpha());
  if (a <= 1.0) return ModeSet{Modality::Unimodal, {p.mu()}, std::nullopt};
  auto g = [a](double z) { return a * std::tanh(a * z) - z; };
  const double z = numerics::find_root(g, numerics::make_bracket(g, mode_bracket_epsilon, a));
  const double delta = p.sigma() * z;
  return ModeSet{Modality::Bimodal, {p.mu() - delta, p.mu() + delta}, p.mu()};
}

}  // namespace bimodal

#endif  // BIMODAL_DISTRIBUTION_HPP
