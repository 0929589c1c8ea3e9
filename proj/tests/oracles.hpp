#ifndef BIMODAL_TESTS_ORACLES_HPP
#define BIMODAL_TESTS_ORACLES_HPP

// Reference integrators written independently of the library code paths.
// The trapezoid rule converges geometrically for smooth integrands that
// decay like a Gaussian, so a fine uniform grid over a wide window is an
// accurate oracle for integrals over the whole line.

#include <cmath>
#include <cstddef>

namespace oracle {

template <class F>
double trapezoid(F&& f, double lo, double hi, double h) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
  const double step = (hi - lo) / static_cast<double>(n);
  double s = 0.5 * (f(lo) + f(hi));
  for (std::size_t i = 1; i < n; ++i) s += f(lo + step * static_cast<double>(i));
  return s * step;
}

/// Window mu +- sigma (|alpha| + 14) holds everything above 1e-40.
template <class F>
double whole_line(F&& f, double mu, double sigma, double alpha, double h_over_sigma = 0.01) {
  const double half = sigma * (std::abs(alpha) + 14.0);
  return trapezoid(f, mu - half, mu + half, sigma * h_over_sigma);
}

template <class F>
double plane(F&& f, double c1, double h1, double c2, double h2, double step1, double step2) {
  const auto n1 = static_cast<std::size_t>(std::ceil(2.0 * h1 / step1));
  const auto n2 = static_cast<std::size_t>(std::ceil(2.0 * h2 / step2));
  const double d1 = 2.0 * h1 / static_cast<double>(n1);
  const double d2 = 2.0 * h2 / static_cast<double>(n2);
  double s = 0.0;
  for (std::size_t i = 0; i <= n1; ++i) {
    const double x1 = c1 - h1 + d1 * static_cast<double>(i);
    const double w1 = (i == 0 || i == n1) ? 0.5 : 1.0;
    for (std::size_t j = 0; j <= n2; ++j) {
      const double x2 = c2 - h2 + d2 * static_cast<double>(j);
      const double w2 = (j == 0 || j == n2) ? 0.5 : 1.0;
      s += w1 * w2 * f(x1, x2);
    }
  }
  return s * d1 * d2;
}

/// Central difference with step h scaled to the argument.
template <class F>
double derivative(F&& f, double x, double h = 1e-5) {
  const double step = h * (1.0 + std::abs(x));
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace oracle

#endif  // BIMODAL_TESTS_ORACLES_HPP
