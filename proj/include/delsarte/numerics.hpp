#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "delsarte/errors.hpp"

namespace delsarte {

/// Exact rational number. GMP keeps every result of arithmetic in lowest
/// terms with a positive denominator; values built from a raw numerator
/// and denominator must go through `make_rational`.
using Rational = mpq_class;
using Integer = mpz_class;

/// Tolerance used by every root finder and quadrature call unless the
/// caller passes its own.
inline constexpr double kDefaultTolerance = 1e-9;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

/// log2|z| for arbitrarily large integers; -inf at zero.
inline double log2_abs(const Integer& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

inline double log2_abs(const Rational& q) {
  return log2_abs(q.get_num()) - log2_abs(q.get_den());
}

inline int sign(const Rational& q) { return sgn(q); }

// ---------------------------------------------------------------------------
// Binomial coefficients

/// Exact C(n, k); zero outside 0 <= k <= n.
inline Integer binomial_integer(long n, long k) {
  if (n < 0) throw DomainError("binomial: n must be nonnegative");
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

inline Rational binomial(long n, long k) {
  return Rational(binomial_integer(n, k));
}

/// log2 C(n, k) through lgamma; -inf outside the support.
inline double log2_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) /
         std::numbers::ln2;
}

// ---------------------------------------------------------------------------
// Entropy functions (binary alphabet, arbitrary logarithm base)

inline double log_base(double x, double base) {
  return std::log(x) / std::log(base);
}

namespace detail {
inline void check_base(double base) {
  if (!(base > 1.0)) throw DomainError("entropy: base must exceed 1");
}
// -x log_b(y) with the convention 0 * log 0 = 0
inline double xlogy(double x, double y, double base) {
  if (x == 0.0) return 0.0;
  return -x * log_base(y, base);
}
}  // namespace detail

/// H_b(x) = -x log_b x - (1-x) log_b(1-x).
inline double entropy(double x, double base = std::numbers::e) {
  detail::check_base(base);
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("entropy: x outside [0,1]");
  return detail::xlogy(x, x, base) + detail::xlogy(1.0 - x, 1.0 - x, base);
}

inline double entropy2(double x) { return entropy(x, 2.0); }

/// T_b(x, y) = -x log_b y - (1-x) log_b(1-y), the binary mixed entropy.
inline double mixed_entropy(double x, double y, double base = std::numbers::e) {
  detail::check_base(base);
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("mixed_entropy: x outside [0,1]");
  if (!(y > 0.0 && y < 1.0))
    throw DomainError("mixed_entropy: y outside (0,1)");
  return detail::xlogy(x, y, base) + detail::xlogy(1.0 - x, 1.0 - y, base);
}

/// The unique x in [0, 1/2] with entropy(x, base) == y. Bisection runs until
/// the bracket stops shrinking in double precision.
inline double inverse_entropy(double y, double base = std::numbers::e) {
  detail::check_base(base);
  const double top = entropy(0.5, base);
  if (!(y >= 0.0 && y <= top * (1.0 + 1e-15)))
    throw DomainError("inverse_entropy: y outside [0, H(1/2)]");
  if (y <= 0.0) return 0.0;
  if (y >= top) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (entropy(mid, base) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double inverse_entropy2(double y) { return inverse_entropy(y, 2.0); }

// ---------------------------------------------------------------------------
// Root finding

/// Bisection on a sign-changing bracket. Returns the midpoint of the final
/// bracket, whose width is at most `tol` (or cannot shrink further).
template <class F>
double bisect_root(F&& f, double lo, double hi,
                   double tol = kDefaultTolerance) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw BracketError("bisect_root: f(lo) and f(hi) have the same sign");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
};

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Nodes never touch
/// the endpoints and cluster doubly exponentially towards them, so
/// integrable algebraic endpoint singularities (1/sqrt, log) need no
/// special treatment. Each level halves the step; the difference between
/// successive levels is the error estimate, compared against
/// tol * max(1, |I|).
template <class F>
QuadratureResult integrate_detailed(F&& f, double a, double b,
                                    double tol = kDefaultTolerance,
                                    int max_levels = 12) {
  if (!(a <= b)) throw DomainError("integrate: requires a <= b");
  QuadratureResult out;
  if (a == b) return out;
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  constexpr double kTMax = 4.0;
  const double half = 0.5 * (b - a);

  // Contribution of the node pair at +-t, weight excluded the step h.
  auto pair_sum = [&](double t) {
    const double u = kHalfPi * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = kHalfPi * std::cosh(t) / (ch * ch);
    // Distance from the nearer endpoint, computed without cancellation.
    const double gap = (b - a) / (1.0 + std::exp(2.0 * std::fabs(u)));
    double s = 0.0;
    // f(x) or f(x, b - x); the second form gets b - x without rounding
    // near b, for integrands singular at the right end.
    auto take = [&](double x, double to_b) {
      double fx;
      if constexpr (std::is_invocable_v<F&, double, double>)
        fx = f(x, to_b);
      else
        fx = f(x);
      if (std::isfinite(fx)) return fx;
      if (t > 2.5) return 0.0;  // negligible weight next to the endpoint
      throw DomainError("integrate: integrand not finite inside the interval");
    };
    if (t == 0.0) return w * take(a + half, half);
    if (gap <= 0.0) return 0.0;
    s += take(a + gap, (b - a) - gap);
    s += take(b - gap, gap);
    return w * s;
  };

  double h = 1.0;
  double sum = 0.0;
  for (double t = 0.0; t <= kTMax; t += h) sum += pair_sum(t);
  double estimate = sum * h * half;
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= kTMax; t += 2.0 * h) add += pair_sum(t);
    sum += add;
    const double next = sum * h * half;
    out.error_estimate = std::fabs(next - estimate);
    out.levels = level;
    estimate = next;
    if (level >= 3 &&
        out.error_estimate <= tol * std::max(1.0, std::fabs(estimate))) {
      out.value = estimate;
      return out;
    }
  }
  throw ConvergenceError("integrate: no convergence within the level limit");
}

template <class F>
double integrate(F&& f, double a, double b, double tol = kDefaultTolerance) {
  return integrate_detailed(std::forward<F>(f), a, b, tol).value;
}

// ---------------------------------------------------------------------------
// One-dimensional optimisation

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a minimum of a unimodal f on [lo, hi].
template <class F>
Extremum golden_section_min(F&& f, double lo, double hi, double tol = 1e-10) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    if (c >= d) break;
  }
  Extremum best{c, fc};
  if (fd < best.value) best = {d, fd};
  for (double x : {lo, hi, 0.5 * (a + b)}) {
    const double fx = f(x);
    if (fx < best.value) best = {x, fx};
  }
  return best;
}

/// Uniform grid with `grid_points` samples, then golden-section refinement
/// on the two cells around the best sample.
template <class F>
Extremum grid_refine_min(F&& f, double lo, double hi, int grid_points,
                         double tol = 1e-10) {
  if (grid_points < 2) grid_points = 2;
  const double step = (hi - lo) / (grid_points - 1);
  int best_i = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + step * i;
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double a = lo + step * std::max(0, best_i - 1);
  const double b = std::min(hi, lo + step * std::min(grid_points - 1, best_i + 1));
  Extremum refined = golden_section_min(f, a, b, tol);
  const double x0 = (best_i == grid_points - 1) ? hi : lo + step * best_i;
  if (best_v < refined.value) refined = {x0, best_v};
  return refined;
}

template <class F>
Extremum grid_refine_max(F&& f, double lo, double hi, int grid_points,
                         double tol = 1e-10) {
  Extremum e = grid_refine_min([&](double x) { return -f(x); }, lo, hi,
                               grid_points, tol);
  e.value = -e.value;
  return e;
}

}  // namespace delsarte
