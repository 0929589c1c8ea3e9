#ifndef BIMODAL_KS_HPP
#define BIMODAL_KS_HPP

// One-sample Kolmogorov-Smirnov helpers used by the process experiments and
// the test suites.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace bimodal::ks {

/// sup_x |F_n(x) - F(x)| for the empirical CDF of `sample`.
template <class Cdf>
double statistic(std::span<const double> sample, Cdf&& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks::statistic: empty sample");
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Asymptotic critical value c(level)/sqrt(n) of the one-sample statistic;
/// c = 1.63 at the 1% level, 1.36 at 5%, 1.95 at 0.1%.
inline double critical_value(std::size_t n, double level = 0.01) {
  const double c = std::sqrt(-0.5 * std::log(level / 2.0));
  return c / std::sqrt(static_cast<double>(n));
}

/// P(K > lambda) for the Kolmogorov limiting distribution.
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

}  // namespace bimodal::ks

#endif  // BIMODAL_KS_HPP
