#pragma once

// Krawtchouk, Hahn and Jacobi polynomials: exact (or log-scaled) point
// values, extremal zeros, and the limiting exponents of each family between
// its extremal zero and the end of the orthogonality interval.

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "delsarte/errors.hpp"
#include "delsarte/numerics.hpp"

namespace delsarte {

// ---------------------------------------------------------------------------
// Krawtchouk polynomials of the binary Hamming space H^n

struct KrawtchoukFamily {
  long n = 0;
};

namespace detail {
inline void check_krawtchouk(long n, long k) {
  if (n < 0) throw DomainError("krawtchouk: n must be nonnegative");
  if (k < 0 || k > n) throw DomainError("krawtchouk: k outside [0, n]");
}
}  // namespace detail

/// K_0(x), ..., K_kmax(x) at a rational point x, by the three-term
/// recurrence (j+1) K_{j+1} = (n - 2x) K_j - (n - j + 1) K_{j-1}.
inline std::vector<Rational> krawtchouk_column(long n, long kmax,
                                               const Rational& x) {
  detail::check_krawtchouk(n, kmax);
  std::vector<Rational> k(static_cast<std::size_t>(kmax) + 1);
  k[0] = 1;
  if (kmax >= 1) k[1] = n - 2 * x;
  for (long j = 1; j < kmax; ++j) {
    k[j + 1] = ((n - 2 * x) * k[j] - Rational(n - j + 1) * k[j - 1]) / (j + 1);
  }
  return k;
}

/// Integer-only variant of the recurrence for integer abscissae; every
/// division is exact.
inline std::vector<Integer> krawtchouk_column_integer(long n, long kmax,
                                                      long x) {
  detail::check_krawtchouk(n, kmax);
  std::vector<Integer> k(static_cast<std::size_t>(kmax) + 1);
  k[0] = 1;
  const Integer lin = n - 2 * x;
  if (kmax >= 1) k[1] = lin;
  for (long j = 1; j < kmax; ++j) {
    Integer t = lin * k[j] - Integer(n - j + 1) * k[j - 1];
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(),
                    static_cast<unsigned long>(j + 1));
    k[j + 1] = std::move(t);
  }
  return k;
}

inline Integer krawtchouk_integer(long n, long k, long x) {
  detail::check_krawtchouk(n, k);
  if (x < 0 || x > n) throw DomainError("krawtchouk: x outside [0, n]");
  return krawtchouk_column_integer(n, k, x)[k];
}

/// Exact K_k(x) of H^n.
inline Rational krawtchouk(long n, long k, long x) {
  return Rational(krawtchouk_integer(n, k, x));
}

inline Rational krawtchouk(long n, long k, const Rational& x) {
  return krawtchouk_column(n, k, x)[k];
}

/// (n+1) x (n+1) matrix with entry [i][k] = K_k(i).
inline std::vector<std::vector<Integer>> krawtchouk_matrix(long n) {
  std::vector<std::vector<Integer>> m(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) m[i] = krawtchouk_column_integer(n, n, i);
  return m;
}

/// Smallest zero of K_k. Each unit interval [i, i+1] holds at most one zero
/// of K_k, so an exact sign sweep over the integers brackets the first
/// root; it is then refined by exact bisection on dyadic rationals.
inline double smallest_zero_krawtchouk(long n, long k) {
  detail::check_krawtchouk(n, k);
  if (k < 1) throw DomainError("smallest_zero_krawtchouk: k must be >= 1");
  int prev = 1;  // K_k(0) = C(n,k) > 0
  for (long i = 1; i <= n; ++i) {
    const int s = sgn(krawtchouk_integer(n, k, i));
    if (s == 0) return static_cast<double>(i);
    if (s != prev) {
      Rational lo(i - 1), hi(i);
      for (int it = 0; it < 60; ++it) {
        Rational mid = (lo + hi) / 2;
        const int sm = sgn(krawtchouk(n, k, mid));
        if (sm == 0) return to_double(mid);
        if (sm == prev)
          lo = mid;
        else
          hi = mid;
      }
      return to_double((lo + hi) / 2);
    }
  }
  throw BracketError("smallest_zero_krawtchouk: no sign change found");
}

// ---------------------------------------------------------------------------
// Hahn polynomials of the Johnson space J^{n,v}

/// Q_k^v is normalised by Q_k(0) = m_k = C(n,k) - C(n,k-1), the dual
/// eigenvalues of the Johnson scheme. The Delsarte inequalities and the
/// Johnson LP optimum are invariant under positive rescaling of each Q_k,
/// only the reported dual coefficients depend on this choice.
struct HahnFamily {
  long n = 0;
  long v = 0;
  static constexpr const char* normalization = "Q_k(0)=C(n,k)-C(n,k-1)";
};

namespace detail {
inline void check_hahn(long n, long v, long k) {
  if (v < 0 || 2 * v > n) throw DomainError("hahn: requires 0 <= v <= n/2");
  if (k < 0 || k > v) throw DomainError("hahn: k outside [0, v]");
}
}  // namespace detail

inline Integer hahn_multiplicity(long n, long k) {
  return binomial_integer(n, k) - (k >= 1 ? binomial_integer(n, k - 1) : Integer(0));
}

/// Q_0(x), ..., Q_kmax(x) at rational x. The unit-normalised polynomials
/// obey -x q_k = A_k q_{k+1} - (A_k + C_k) q_k + C_k q_{k-1} with
///   A_k = (k-n-1)(k+v-n)(v-k) / ((2k-n-1)(2k-n)),
///   C_k = k(k+v-n-1)(k-v-1) / ((2k-n-2)(2k-n-1)),
/// which is the Hahn recurrence with parameters (v-n-1, -v-1, N = v).
inline std::vector<Rational> hahn_column(long n, long v, long kmax,
                                         const Rational& x) {
  detail::check_hahn(n, v, kmax);
  std::vector<Rational> q(static_cast<std::size_t>(kmax) + 1);
  q[0] = 1;
  for (long k = 0; k < kmax; ++k) {
    const Rational a = make_rational(Integer(k - n - 1) * (k + v - n) * (v - k),
                                     Integer(2 * k - n - 1) * (2 * k - n));
    const Rational c =
        k == 0 ? Rational(0)
               : make_rational(Integer(k) * (k + v - n - 1) * (k - v - 1),
                               Integer(2 * k - n - 2) * (2 * k - n - 1));
    Rational next = (a + c - x) * q[k];
    if (k > 0) next -= c * q[k - 1];
    q[k + 1] = next / a;
  }
  for (long k = 0; k <= kmax; ++k) q[k] *= Rational(hahn_multiplicity(n, k));
  return q;
}

/// Exact Q_k^v(i).
inline Rational hahn(long n, long v, long k, long i) {
  detail::check_hahn(n, v, k);
  if (i < 0 || i > v) throw DomainError("hahn: i outside [0, v]");
  return hahn_column(n, v, k, Rational(i))[k];
}

/// Orthogonality weight mu(i) = C(v,i) C(n-v,i) / C(n,v).
inline Rational hahn_weight(long n, long v, long i) {
  return binomial(v, i) * binomial(n - v, i) / binomial(n, v);
}

// ---------------------------------------------------------------------------
// Jacobi polynomials P_k^{alpha,beta} on [-1, 1]

struct JacobiFamily {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Sign and natural log of |P_k^{alpha,beta}(x)|. The recurrence is run in
/// long double and rescaled whenever the iterates grow large, so degrees
/// whose values overflow a double are still representable.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;
};

inline LogValue jacobi_log(double alpha, double beta, long k, double x) {
  if (!(alpha > -1.0 && beta > -1.0))
    throw DomainError("jacobi: alpha, beta must exceed -1");
  if (k < 0) throw DomainError("jacobi: negative degree");
  using LD = long double;
  const LD a = alpha, b = beta, z = x;
  LD p0 = 1.0L;
  LD scale_log = 0.0L;
  if (k == 0) return {0.0, 1};
  LD p1 = (a + 1.0L) + (a + b + 2.0L) * (z - 1.0L) / 2.0L;
  for (long m = 2; m <= k; ++m) {
    const LD s = 2.0L * m + a + b;
    const LD c1 = 2.0L * m * (m + a + b) * (s - 2.0L);
    const LD c2 = (s - 1.0L) * (s * (s - 2.0L) * z + a * a - b * b);
    const LD c3 = 2.0L * (m + a - 1.0L) * (m + b - 1.0L) * s;
    const LD p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
    const LD mag = std::fabs(p1) + std::fabs(p0);
    if (mag > 1e300L || (mag < 1e-300L && mag > 0.0L)) {
      const LD l = std::log(mag);
      p0 /= mag;
      p1 /= mag;
      scale_log += l;
    }
  }
  if (p1 == 0.0L) return {-std::numeric_limits<double>::infinity(), 0};
  return {static_cast<double>(std::log(std::fabs(p1)) + scale_log),
          p1 > 0 ? 1 : -1};
}

/// P_k^{alpha,beta}(x) in double precision (may overflow for large k).
inline double jacobi(double alpha, double beta, long k, double x) {
  const LogValue lv = jacobi_log(alpha, beta, k, x);
  if (lv.sign == 0) return 0.0;
  return lv.sign * std::exp(lv.log_abs);
}

/// Limit of the largest zero of P_k^{ak,bk} as k grows:
///   (b^2 - a^2 + 4 sqrt((a+b+1)(a+1)(b+1))) / (a+b+2)^2,
/// the larger root of the discriminant of the limiting Riccati equation.
/// The smallest zero tends to -jacobi_largest_zero_limit(b, a).
inline double jacobi_largest_zero_limit(double a, double b) {
  if (a < 0 || b < 0) throw DomainError("jacobi zero limit: a, b must be >= 0");
  const double s = a + b + 2.0;
  return (b * b - a * a + 4.0 * std::sqrt((a + b + 1.0) * (a + 1.0) * (b + 1.0))) /
         (s * s);
}

/// Smallest and largest zero of P_k^{ak,bk}. A cosine-spaced grid (dense
/// near +-1 where Jacobi zeros cluster) brackets the outermost sign
/// changes, which are then bisected.
inline std::pair<double, double> extreme_zeros_jacobi(double a, double b,
                                                      long k) {
  if (a < 0 || b < 0) throw DomainError("extreme_zeros_jacobi: a, b must be >= 0");
  if (k < 1) throw DomainError("extreme_zeros_jacobi: k must be >= 1");
  const double alpha = a * static_cast<double>(k);
  const double beta = b * static_cast<double>(k);
  auto sgn_at = [&](double x) { return jacobi_log(alpha, beta, k, x).sign; };
  auto value = [&](double x) {
    const LogValue lv = jacobi_log(alpha, beta, k, x);
    return static_cast<double>(lv.sign);
  };
  const long grid = std::max<long>(4000, 40 * k);
  auto node = [&](long j) {
    return std::cos(std::numbers::pi * static_cast<double>(j) /
                    static_cast<double>(grid));
  };
  double largest = 0.0, smallest = 0.0;
  {
    int prev = sgn_at(1.0);
    double xprev = 1.0;
    for (long j = 1; j <= grid; ++j) {
      const double x = node(j);
      const int s = sgn_at(x);
      if (s == 0) {
        largest = x;
        break;
      }
      if (s != prev) {
        largest = bisect_root(value, x, xprev, 1e-15);
        break;
      }
      xprev = x;
    }
  }
  {
    int prev = sgn_at(-1.0);
    double xprev = -1.0;
    for (long j = grid - 1; j >= 0; --j) {
      const double x = node(j);
      const int s = sgn_at(x);
      if (s == 0) {
        smallest = x;
        break;
      }
      if (s != prev) {
        smallest = bisect_root(value, xprev, x, 1e-15);
        break;
      }
      xprev = x;
    }
  }
  return {smallest, largest};
}

// ---------------------------------------------------------------------------
// Limiting exponents

enum class PolynomialFamily { Krawtchouk, Hahn, Jacobi };

/// Normalised right end of the Krawtchouk zero-free region, 1/2 - sqrt(t(1-t)).
inline double krawtchouk_zero_abscissa(double tau) {
  return 0.5 - std::sqrt(tau * (1.0 - tau));
}

/// lim (1/n) log2 K_{tau n}(xi n) for 0 <= xi <= 1/2 - sqrt(tau(1-tau)):
///   H2(tau) + int_0^xi log2[(1-2tau + sqrt((1-2tau)^2 - 4y(1-y))) / (2-2y)] dy.
inline double krawtchouk_exponent_integral(double tau, double xi,
                                           double tol = kDefaultTolerance) {
  if (!(tau > 0.0 && tau < 0.5))
    throw DomainError("krawtchouk_exponent: tau outside (0, 1/2)");
  const double top = krawtchouk_zero_abscissa(tau);
  if (!(xi >= 0.0 && xi <= top + 1e-12))
    throw DomainError("krawtchouk_exponent: xi outside the zero-free region");
  xi = std::min(xi, top);
  const double l = 1.0 - 2.0 * tau;
  auto g = [l](double y) {
    const double disc = std::max(0.0, l * l - 4.0 * y * (1.0 - y));
    return std::log2((l + std::sqrt(disc)) / (2.0 - 2.0 * y));
  };
  return integrate(g, 0.0, xi, tol);
}

inline double krawtchouk_exponent(double tau, double xi,
                                  double tol = kDefaultTolerance) {
  return entropy2(tau) + krawtchouk_exponent_integral(tau, xi, tol);
}

/// Normalised smallest zero of Q_{beta n}^{alpha n}:
///   (alpha(1-alpha) - beta(1-beta)) / (1 + 2 sqrt(beta(1-beta))).
inline double hahn_zero_abscissa(double alpha, double beta) {
  const double A = alpha * (1.0 - alpha), B = beta * (1.0 - beta);
  return (A - B) / (1.0 + 2.0 * std::sqrt(B));
}

/// lim (1/n) log2 Q_{beta n}^{alpha n}(xi n) on the zero-free region,
/// H2(beta) plus the integral of the limiting log-ratio
///   log2[(N + sqrt(N^2 - 4 P y^2)) / (2P)],
///   N = alpha(1-alpha) - y(1-2y) - beta(1-beta),  P = (alpha-y)(1-alpha-y).
inline double hahn_exponent(double alpha, double beta, double xi,
                            double tol = kDefaultTolerance) {
  if (!(beta >= 0.0 && beta <= alpha && alpha <= 0.5))
    throw DomainError("hahn_exponent: requires 0 <= beta <= alpha <= 1/2");
  const double A = alpha * (1.0 - alpha), B = beta * (1.0 - beta);
  if (!(A > B))
    throw DomainError("hahn_exponent: empty zero-free region");
  const double top = hahn_zero_abscissa(alpha, beta);
  if (!(xi >= 0.0 && xi <= top + 1e-12))
    throw DomainError("hahn_exponent: xi outside the zero-free region");
  xi = std::min(xi, top);
  auto g = [=](double y) {
    const double num = A - y * (1.0 - 2.0 * y) - B;
    const double p = (alpha - y) * (1.0 - alpha - y);
    const double disc = std::max(0.0, num * num - 4.0 * p * y * y);
    return std::log2((num + std::sqrt(disc)) / (2.0 * p));
  };
  return entropy2(beta) + integrate(g, 0.0, xi, tol);
}

/// lim (1/k) ln |P_k^{ak,bk}(x)| outside the oscillatory interval.
/// Right branch, x in [x1(a,b), 1]:
///   (1+a) H(a/(1+a)) - int_x^1 S(z) dz,
///   S = [c - sqrt(D)] / (2(1-z^2)) = 2(1+a+b) / (c + sqrt(D)),
///   c = a + (a+b) z - b,  D = c^2 - 4(1-z^2)(1+a+b);
/// S is the limiting logarithmic derivative, regular at z = 1. The left
/// branch x in [-1, -x1(b,a)] follows from P_k^{a,b}(-x) = (-1)^k P_k^{b,a}(x).
inline double jacobi_exponent(double a, double b, double x,
                              double tol = kDefaultTolerance) {
  if (a < 0 || b < 0) throw DomainError("jacobi_exponent: a, b must be >= 0");
  if (!(x >= -1.0 && x <= 1.0))
    throw DomainError("jacobi_exponent: x outside [-1, 1]");
  const double right = jacobi_largest_zero_limit(a, b);
  const double left = -jacobi_largest_zero_limit(b, a);
  if (x < right - 1e-12 && x > left + 1e-12)
    throw DomainError("jacobi_exponent: x inside the oscillatory region");
  if (x < right - 1e-12) return jacobi_exponent(b, a, -x, tol);
  const double base = a == 0.0 ? 0.0 : (1.0 + a) * entropy(a / (1.0 + a));
  if (x >= 1.0) return base;
  const double lo = std::max(x, right);
  auto s = [=](double z) {
    const double c = a + (a + b) * z - b;
    const double d = std::max(0.0, c * c - 4.0 * (1.0 - z * z) * (1.0 + a + b));
    return 2.0 * (1.0 + a + b) / (c + std::sqrt(d));
  };
  return base - integrate(s, lo, 1.0, tol);
}

}  // namespace delsarte
