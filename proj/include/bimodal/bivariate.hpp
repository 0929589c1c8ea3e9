#ifndef BIMODAL_BIVARIATE_HPP
#define BIMODAL_BIVARIATE_HPP

// Bivariate BN law with density
//
//   exp(alpha^2 (rho^2 - 2)/2) / (sigma1 sigma2) phi(z1, z2; rho)
//       cosh(alpha z1 + alpha (1 - rho) z2).
//
// Completing the square shows it is the equal-weight mixture of the
// (sigma1, sigma2, rho) bivariate normal centred at
// (mu1 +- sigma1 alpha (1 + rho - rho^2), mu2 +- sigma2 alpha). The derived
// marginal, conditional-mean and covariance forms below all follow from that
// mixture; the published closed forms are kept under *_published names.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bimodal/distribution.hpp"
#include "bimodal/numerics.hpp"
#include "bimodal/random.hpp"

namespace bimodal {

struct BBNParams {
  double mu1 = 0.0, mu2 = 0.0;
  double sigma1 = 1.0, sigma2 = 1.0;
  double alpha = 0.0;
  double rho = 0.0;

  void validate() const {
    for (double v : {mu1, mu2, sigma1, sigma2, alpha, rho}) {
      if (!std::isfinite(v)) throw std::invalid_argument("BBNParams: parameters must be finite");
    }
    if (!(sigma1 > 0.0 && sigma2 > 0.0)) throw std::invalid_argument("BBNParams: scales must be positive");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("BBNParams: |rho| must be below 1");
  }
};

struct BBNMixture {
  double weight = 0.5;
  double shift1;  // alpha (1 + rho - rho^2), in units of sigma1
  double shift2;  // alpha, in units of sigma2
  double rho;
  std::array<double, 2> mean_plus;
  std::array<double, 2> mean_minus;
  std::array<std::array<double, 2>, 2> covariance;
};

inline double bbn_shift1(const BBNParams& p) { return p.alpha * (1.0 + p.rho - p.rho * p.rho); }

inline double log_pdf2(const BBNParams& p, double x1, double x2) {
  p.validate();
  const double z1 = (x1 - p.mu1) / p.sigma1;
  const double z2 = (x2 - p.mu2) / p.sigma2;
  const double r = p.rho;
  const double one_minus = 1.0 - r * r;
  const double quad = (z1 * z1 - 2.0 * r * z1 * z2 + z2 * z2) / (2.0 * one_minus);
  const double log_phi2 = -std::log(2.0 * std::numbers::pi) - 0.5 * std::log(one_minus) - quad;
  return p.alpha * p.alpha * (r * r - 2.0) / 2.0 - std::log(p.sigma1 * p.sigma2) + log_phi2 +
         numerics::log_cosh(p.alpha * z1 + p.alpha * (1.0 - r) * z2);
}

inline double pdf2(const BBNParams& p, double x1, double x2) { return std::exp(log_pdf2(p, x1, x2)); }

/// X2 ~ BN(mu2, sigma2, alpha).
inline BNParams marginal_x2(const BBNParams& p) { return BNParams(p.mu2, p.sigma2, p.alpha); }

/// X1 ~ BN(mu1, sigma1, alpha (1 + rho - rho^2)).
inline BNParams marginal_x1(const BBNParams& p) { return BNParams(p.mu1, p.sigma1, bbn_shift1(p)); }

/// Published marginal claim X1 ~ BN(mu1, sigma1, alpha); exact only at rho = 0.
inline BNParams marginal_x1_published(const BBNParams& p) { return BNParams(p.mu1, p.sigma1, p.alpha); }

/// E[X1 | X2 = x2] = mu1 + rho sigma1 z2 + sigma1 alpha (1 - rho^2) tanh(alpha z2).
inline double conditional_mean_x1_given_x2(const BBNParams& p, double x2) {
  const double z2 = (x2 - p.mu2) / p.sigma2;
  return p.mu1 + p.rho * p.sigma1 * z2 + p.sigma1 * p.alpha * (1.0 - p.rho * p.rho) * std::tanh(p.alpha * z2);
}

/// Published display, without the leading alpha on the tanh term.
inline double conditional_mean_x1_given_x2_published(const BBNParams& p, double x2) {
  const double z2 = (x2 - p.mu2) / p.sigma2;
  return p.mu1 + p.rho * p.sigma1 * z2 + p.sigma1 * (1.0 - p.rho * p.rho) * std::tanh(p.alpha * z2);
}

/// sigma1 sigma2 [rho + alpha^2 (1 + rho - rho^2)].
inline double covariance(const BBNParams& p) {
  return p.sigma1 * p.sigma2 * (p.rho + p.alpha * p.alpha * (1.0 + p.rho - p.rho * p.rho));
}

/// sigma1 sigma2 [rho (1 + alpha^2) + (1 - rho^2) alpha], the published form.
inline double covariance_published(const BBNParams& p) {
  return p.sigma1 * p.sigma2 * (p.rho * (1.0 + p.alpha * p.alpha) + (1.0 - p.rho * p.rho) * p.alpha);
}

inline std::array<std::array<double, 2>, 2> covariance_matrix(const BBNParams& p) {
  const double v1 = variance(marginal_x1(p));
  const double v2 = variance(marginal_x2(p));
  const double c = covariance(p);
  return {{{v1, c}, {c, v2}}};
}

/// Published matrix: both variances sigma_i^2 (1 + alpha^2), off-diagonal from covariance_published.
inline std::array<std::array<double, 2>, 2> covariance_matrix_published(const BBNParams& p) {
  const double a2 = p.alpha * p.alpha;
  const double c = covariance_published(p);
  return {{{p.sigma1 * p.sigma1 * (1.0 + a2), c}, {c, p.sigma2 * p.sigma2 * (1.0 + a2)}}};
}

inline double correlation(const BBNParams& p) {
  const auto m = covariance_matrix(p);
  return m[0][1] / std::sqrt(m[0][0] * m[1][1]);
}

inline double correlation_published(const BBNParams& p) {
  const double a2 = p.alpha * p.alpha;
  return (p.rho * (1.0 + a2) + (1.0 - p.rho * p.rho) * p.alpha) / (1.0 + a2);
}

inline double mixture2_pdf(const BBNMixture& m, double x1, double x2) {
  const double s1 = std::sqrt(m.covariance[0][0]);
  const double s2 = std::sqrt(m.covariance[1][1]);
  const double r = m.rho;
  auto component = [&](const std::array<double, 2>& c) {
    const double z1 = (x1 - c[0]) / s1;
    const double z2 = (x2 - c[1]) / s2;
    const double q = (z1 * z1 - 2.0 * r * z1 * z2 + z2 * z2) / (2.0 * (1.0 - r * r));
    return std::exp(-q) / (2.0 * std::numbers::pi * s1 * s2 * std::sqrt(1.0 - r * r));
  };
  return m.weight * (component(m.mean_plus) + component(m.mean_minus));
}

inline constexpr double mixture2_gate_tol = 1e-12;

/// Two-component representation. Construction re-checks it against pdf2 on
/// a 41 x 41 grid spanning the bulk of the law and throws if they differ by
/// more than 1e-12 anywhere.
inline BBNMixture mixture2(const BBNParams& p) {
  p.validate();
  const double k1 = bbn_shift1(p);
  const double k2 = p.alpha;
  BBNMixture m{0.5,
               k1,
               k2,
               p.rho,
               {p.mu1 + p.sigma1 * k1, p.mu2 + p.sigma2 * k2},
               {p.mu1 - p.sigma1 * k1, p.mu2 - p.sigma2 * k2},
               {{{p.sigma1 * p.sigma1, p.rho * p.sigma1 * p.sigma2}, {p.rho * p.sigma1 * p.sigma2, p.sigma2 * p.sigma2}}}};
  const double h1 = p.sigma1 * (std::abs(k1) + 4.0);
  const double h2 = p.sigma2 * (std::abs(k2) + 4.0);
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double x1 = p.mu1 - h1 + 2.0 * h1 * i / 40.0;
      const double x2 = p.mu2 - h2 + 2.0 * h2 * j / 40.0;
      if (std::abs(mixture2_pdf(m, x1, x2) - pdf2(p, x1, x2)) > mixture2_gate_tol) {
        throw numerical_error("mixture2: mixture representation disagrees with the density");
      }
    }
  }
  return m;
}

/// Fair coin picks the component, then a correlated normal pair is drawn
/// around its mean.
inline std::vector<std::pair<double, double>> sample2(const BBNParams& p, Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample2: n must be positive");
  const BBNMixture m = mixture2(p);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double c = std::sqrt(1.0 - p.rho * p.rho);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = normal(rng);
    const double u2 = normal(rng);
    const bool plus = (rng() >> 63) != 0;
    const auto& centre = plus ? m.mean_plus : m.mean_minus;
    const double z2 = u2;
    const double z1 = p.rho * u2 + c * u1;
    out.emplace_back(centre[0] + p.sigma1 * z1, centre[1] + p.sigma2 * z2);
  }
  return out;
}

}  // namespace bimodal

#endif  // BIMODAL_BIVARIATE_HPP
