#ifndef BIMODAL_NUMERICS_HPP
#define BIMODAL_NUMERICS_HPP

// Special functions, quadrature and root finding shared by every other
// header in the library. Also hosts the brute-force oracles (adaptive
// quadrature, dense-grid argmax) that the tests use to adjudicate closed
// forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bimodal {

/// Raised when an iterative method cannot reach its accuracy target.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace numerics {

inline constexpr double sqrt_pi = 1.7724538509055160273;
inline constexpr double inv_sqrt_2pi = 0.39894228040143267794;
inline constexpr double log_sqrt_2pi = 0.91893853320467274178;

inline double erf(double x) { return std::erf(x); }

inline double std_normal_pdf(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

/// Phi(x) = (1 + erf(x / sqrt 2)) / 2, evaluated through erfc so the lower
/// tail keeps relative accuracy.
inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

/// log(cosh(t)) without overflow.
inline double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// ---------------------------------------------------------------------------
// Kummer's confluent hypergeometric function 1F1(a; b; x)
// ---------------------------------------------------------------------------

inline constexpr int kummer_max_terms = 10000;

/// Ascending series with the term-ratio recurrence
///   t_{k+1} = t_k (a + k) x / ((b + k)(k + 1)).
/// Terminates exactly when a is a non-positive integer. Intended for the
/// moderate arguments met by the raw-moment formula; cancellation grows with
/// |x| for negative x, so callers keep |x| modest.
inline double kummer_1f1(double a, double b, double x) {
  if (b <= 0.0 && b == std::floor(b)) {
    throw std::invalid_argument("kummer_1f1: b must not be zero or a negative integer");
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < kummer_max_terms; ++k) {
    const double ak = a + k;
    if (ak == 0.0) return sum;  // polynomial case
    term *= ak * x / ((b + k) * (k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    if (!std::isfinite(sum)) break;
  }
  throw numerical_error("kummer_1f1: series did not converge; reduce |x|");
}

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature
// ---------------------------------------------------------------------------

/// Abscissae and positive weights of a quadrature rule. Nodes increase
/// strictly.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

namespace detail {

/// Eigenvalues of the symmetric tridiagonal matrix with zero diagonal and
/// off-diagonal e[0..n-2], by implicit QL with Wilkinson shifts. Ascending.
inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> e) {
  const std::size_t n = e.size() + 1;
  std::vector<double> d(n, 0.0);
  e.push_back(0.0);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw numerical_error("gauss_hermite: eigenvalue iteration failed");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace detail

/// Physicists' Gauss-Hermite rule (weight e^{-x^2}) of order n, 1 <= n <= 256.
/// Nodes start from the eigenvalues of the Jacobi matrix and are polished by
/// Newton steps on the orthonormal Hermite recurrence, which also yields the
/// weights 2 / (sqrt(2n) p_{n-1}(x))^2.
inline QuadratureRule gauss_hermite(int n) {
  if (n < 1 || n > 256) throw std::invalid_argument("gauss_hermite: order must be in [1, 256]");
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
  std::vector<double> x = detail::tridiagonal_eigenvalues(off);
  std::vector<double> w(n);
  auto recurrence = [n, pim4](double z, double& p_n, double& p_nm1) {
    double p1 = pim4, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
    }
    p_n = p1;
    p_nm1 = p2;
  };
  for (int i = n / 2; i < n; ++i) {
    double z = x[i];
    double p = 0.0, q = 0.0;
    for (int it = 0; it < 10; ++it) {
      recurrence(z, p, q);
      const double step = p / (std::sqrt(2.0 * n) * q);
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    recurrence(z, p, q);
    const double pp = std::sqrt(2.0 * n) * q;
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return QuadratureRule{std::move(x), std::move(w)};
}

/// E_Phi[g(Z)], Z ~ N(0,1), as (1/sqrt pi) sum w_i g(sqrt2 x_i).
template <class F>
double expect_std_normal(F&& g, const QuadratureRule& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    s += rule.weights[i] * g(std::numbers::sqrt2 * rule.nodes[i]);
  }
  return s / sqrt_pi;
}

/// Default rule for E_Phi[.] evaluations (order 64), built once.
inline const QuadratureRule& default_hermite_rule() {
  static const QuadratureRule rule = gauss_hermite(64);
  return rule;
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

struct RootBracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;

  [[nodiscard]] bool valid() const {
    return lo < hi && std::isfinite(f_lo) && std::isfinite(f_hi) && f_lo * f_hi <= 0.0;
  }
};

template <class F>
RootBracket make_bracket(F&& f, double lo, double hi) {
  return RootBracket{lo, hi, f(lo), f(hi)};
}

/// Bracket width at which find_root stops by default.
inline double default_root_tol(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

/// Brent's method: inverse quadratic / secant steps, falling back to
/// bisection whenever the interpolated point leaves the bracket or progress
/// stalls. Stops once the bracket is narrower than `tol` (a non-positive
/// tol selects 1e-12 max(1, |x|)).
template <class F>
double find_root(F&& f, const RootBracket& bracket, double tol = 0.0) {
  if (!bracket.valid()) throw std::invalid_argument("find_root: invalid bracket");
  double a = bracket.lo, b = bracket.hi;
  double fa = bracket.f_lo, fb = bracket.f_hi;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, d = b - a;
  bool bisected = true;
  for (int it = 0; it < 500; ++it) {
    const double width_tol = tol > 0.0 ? tol : default_root_tol(b);
    if (std::abs(b - a) <= width_tol) return b;
    double s;
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double lo = std::min((3.0 * a + b) / 4.0, b);
    const double hi = std::max((3.0 * a + b) / 4.0, b);
    const bool out_of_range = !(s > lo && s < hi);
    const bool slow = bisected ? std::abs(s - b) >= std::abs(b - c) / 2.0
                               : std::abs(s - b) >= std::abs(c - d) / 2.0;
    const bool tiny = bisected ? std::abs(b - c) < width_tol : std::abs(c - d) < width_tol;
    if (out_of_range || slow || tiny) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    const double fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if (fs == 0.0) return s;
    if (fa * fs < 0.0) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  throw numerical_error("find_root: iteration limit reached");
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature
// ---------------------------------------------------------------------------

namespace detail {

// 15-point Kronrod nodes on [0, 1] (symmetric), with embedded 7-point Gauss.
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * gk_wk[7];
  double rg = fc * gk_wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * gk_x[j];
    const double s = f(c - dx) + f(c + dx);
    rk += gk_wk[j] * s;
    if (j % 2 == 1) rg += gk_wg[j / 2] * s;
  }
  return Segment{a, b, rk * h, std::abs((rk - rg) * h)};
}

}  // namespace detail

inline constexpr int adaptive_quad_max_segments = 4000;

/// Integral of f over [a, b]; a and b may be infinite. Infinite ranges are
/// mapped to finite ones by x = tan(u) (doubly infinite) or x = a + tan(u)
/// / x = b - tan(u) (half-infinite). Subdivides the segment with the largest
/// Kronrod-Gauss discrepancy until the summed discrepancy is at most
/// max(tol, tol |I|).
template <class F>
double adaptive_quad(F&& f, double a, double b, double tol = 1e-10) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_quad(f, b, a, tol);
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  const double half_pi = std::numbers::pi / 2.0;

  std::function<double(double)> g;
  double ua = a, ub = b;
  if (lo_inf && hi_inf) {
    g = [&f](double u) {
      const double t = std::tan(u), c = std::cos(u);
      return f(t) / (c * c);
    };
    ua = -half_pi;
    ub = half_pi;
  } else if (hi_inf) {
    g = [&f, a](double u) {
      const double t = std::tan(u), c = std::cos(u);
      return f(a + t) / (c * c);
    };
    ua = 0.0;
    ub = half_pi;
  } else if (lo_inf) {
    g = [&f, b](double u) {
      const double t = std::tan(u), c = std::cos(u);
      return f(b - t) / (c * c);
    };
    ua = 0.0;
    ub = half_pi;
  } else {
    g = [&f](double x) { return f(x); };
  }
  // The transformed integrand is evaluated strictly inside (ua, ub); at the
  // open ends it vanishes for the Gaussian-tailed integrands used here.
  auto safe = [&g, lo_inf, hi_inf, ua, ub](double u) {
    if ((lo_inf || hi_inf) && (u <= ua || u >= ub)) return 0.0;
    const double v = g(u);
    return std::isfinite(v) ? v : 0.0;
  };

  std::priority_queue<detail::Segment> heap;
  // start from a few panels so narrow peaks are not missed
  const int initial = (lo_inf || hi_inf) ? 8 : 1;
  double total = 0.0, err = 0.0;
  for (int i = 0; i < initial; ++i) {
    const double l = ua + (ub - ua) * i / initial;
    const double r = ua + (ub - ua) * (i + 1) / initial;
    auto seg = detail::gk15(safe, l, r);
    total += seg.value;
    err += seg.error;
    heap.push(seg);
  }
  int segments = initial;
  while (err > std::max(tol, tol * std::abs(total))) {
    if (segments >= adaptive_quad_max_segments) {
      throw numerical_error("adaptive_quad: tolerance not achieved within subdivision budget");
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15(safe, worst.a, mid);
    auto right = detail::gk15(safe, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
    if (err <= std::max(tol, tol * std::abs(total))) {
      // re-sum to shed accumulated cancellation in the running totals
      double t = 0.0, e = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        t += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      total = t;
      err = e;
    }
  }
  return total;
}

/// Integral over a finite-or-infinite range split at the given interior
/// break points (sorted). Useful for bimodal integrands whose mass sits away
/// from the origin of the tan map.
template <class F>
double adaptive_quad_breaks(F&& f, double a, double b, std::vector<double> breaks, double tol = 1e-10) {
  std::sort(breaks.begin(), breaks.end());
  double s = 0.0;
  double left = a;
  for (double p : breaks) {
    if (p <= left || p >= b) continue;
    s += adaptive_quad(f, left, p, tol);
    left = p;
  }
  s += adaptive_quad(f, left, b, tol);
  return s;
}

// ---------------------------------------------------------------------------
// Dense-grid argmax oracle
// ---------------------------------------------------------------------------

/// Evaluates f on lo, lo + step, ..., hi and returns the midpoint between the
/// first and last grid points attaining the maximum. On a flat top the
/// maximisers form a plateau and its centre is the best grid estimate.
template <class F>
double grid_argmax(F&& f, double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("grid_argmax: bad grid");
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  double best = -std::numeric_limits<double>::infinity();
  long long first = 0, last = 0;
  for (long long k = 0; k <= count; ++k) {
    const double v = f(lo + static_cast<double>(k) * step);
    if (v > best) {
      best = v;
      first = last = k;
    } else if (v == best) {
      last = k;
    }
  }
  return lo + 0.5 * static_cast<double>(first + last) * step;
}

}  // namespace numerics
}  // namespace bimodal

#endif  // BIMODAL_NUMERICS_HPP
