#pragma once

// Lower bounds on distance distributions and binomial moments, finite and
// asymptotic, in the Hamming space and on the sphere.

#include <cmath>
#include <string>
#include <vector>

#include "delsarte/asymptotics.hpp"
#include "delsarte/codes.hpp"
#include "delsarte/errors.hpp"
#include "delsarte/numerics.hpp"
#include "delsarte/orthopoly.hpp"

namespace delsarte {

// ---------------------------------------------------------------------------
// Finite length

struct FiniteSpectrumBound {
  /// (M f_0 - f(0)), the mass that sum_{1<=i<=w} f(i) A_i must reach.
  Rational mass;
  /// Some j <= w has A_j >= mass / (w max_{1<=i<=w} f(i)).
  Rational uniform;
  /// Index attaining max f(i) on 1..w.
  long argmax = 1;
  /// per_index[j] = mass / (w f(j)), j = 1..w (entry 0 unused): some j
  /// satisfies A_j >= per_index[j].
  std::vector<Rational> per_index;
  /// Index with the largest per-index value (smallest f(j)).
  long best_index = 1;
  /// mass <= 0: nothing is guaranteed.
  bool vacuous = false;
};

/// Requires f_k >= 0 (k >= 1), f(i) > 0 on 0..w and f(i) <= 0 on w+1..n.
inline FiniteSpectrumBound finite_spectrum_lower(long n, const Rational& M, long w,
                                                 const PolynomialInBasis& f) {
  if (f.n() != n) throw DomainError("finite_spectrum_lower: polynomial length differs from n");
  if (w < 1 || w > n) throw DomainError("finite_spectrum_lower: requires 1 <= w <= n");
  for (long k = 1; k <= n; ++k)
    if (f.coeffs()[k] < 0)
      throw PreconditionError("finite_spectrum_lower: negative coefficient f_k", k);
  for (long i = 0; i <= n; ++i) {
    const auto& v = f.values()[i];
    if (i <= w && v <= 0)
      throw PreconditionError("finite_spectrum_lower: f(i) must be positive for i <= w", i);
    if (i > w && v > 0)
      throw PreconditionError("finite_spectrum_lower: f(i) must be nonpositive for i > w", i);
  }
  FiniteSpectrumBound out;
  out.mass = M * f.coeffs()[0] - f.values()[0];
  out.vacuous = out.mass <= 0;
  Rational fmax = f.values()[1], fmin = f.values()[1];
  for (long i = 2; i <= w; ++i) {
    if (f.values()[i] > fmax) {
      fmax = f.values()[i];
      out.argmax = i;
    }
    if (f.values()[i] < fmin) {
      fmin = f.values()[i];
      out.best_index = i;
    }
  }
  const Rational W(w);
  out.uniform = out.mass / (W * fmax);
  out.per_index.assign(static_cast<std::size_t>(w) + 1, Rational(0));
  for (long j = 1; j <= w; ++j) out.per_index[j] = out.mass / (W * f.values()[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Hamming space, asymptotic

/// R - H2(tau) - 2 I(xi, tau), I the integral term of the Krawtchouk
/// exponent (without H2(tau)).
inline double hamming_spectrum_exponent(double R, double tau, double xi,
                                        double tol = kDefaultTolerance) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("hamming_spectrum_exponent: R outside (0,1)");
  const double tmax = inverse_entropy2(R);
  if (!(tau >= 0.0 && tau <= tmax * (1.0 + 1e-12)))
    throw DomainError("hamming_spectrum_exponent: tau outside [0, H2^{-1}(R)]");
  if (tau == 0.0) {
    if (!(xi >= 0.0 && xi <= 0.5)) throw DomainError("hamming_spectrum_exponent: xi outside [0, 1/2]");
    return R;  // the integrand vanishes identically
  }
  return R - entropy2(tau) - 2.0 * krawtchouk_exponent_integral(tau, xi, tol);
}

/// Largest tau whose zero-free region contains xi: 1/2 - sqrt(xi(1-xi)).
inline double spectrum_tau_limit(double xi) { return 0.5 - std::sqrt(xi * (1.0 - xi)); }

struct SpectrumPoint {
  double xi = 0.0;
  double tau = 0.0;
  double exponent = 0.0;
};

inline constexpr int kSpectrumTauGrid = 200;

/// max over admissible tau of hamming_spectrum_exponent(R, tau, xi).
inline SpectrumPoint hamming_spectrum_point(double R, double xi, int tau_grid = kSpectrumTauGrid,
                                            double tol = kDefaultTolerance) {
  if (!(xi >= 0.0 && xi <= 0.5)) throw DomainError("hamming_spectrum_best: xi outside [0, 1/2]");
  const double top = std::min(inverse_entropy2(R), spectrum_tau_limit(xi));
  if (top <= 0.0) return {xi, 0.0, R};
  auto f = [&](double tau) { return hamming_spectrum_exponent(R, tau, std::min(xi, krawtchouk_zero_abscissa(tau)), tol); };
  const Extremum e = grid_refine_max(f, 0.0, top, tau_grid, 1e-10);
  return {xi, e.x, e.value};
}

/// The best-over-tau exponent on xi_points equally spaced abscissas in
/// [0, 1/2] (both ends included).
inline std::vector<SpectrumPoint> hamming_spectrum_best(double R, int xi_points = 101,
                                                        int tau_grid = kSpectrumTauGrid) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("hamming_spectrum_best: R outside (0,1)");
  if (xi_points < 2) throw DomainError("hamming_spectrum_best: need at least two points");
  std::vector<SpectrumPoint> out;
  for (int i = 0; i < xi_points; ++i) {
    const double xi = 0.5 * i / (xi_points - 1);
    out.push_back(hamming_spectrum_point(R, xi, tau_grid));
  }
  return out;
}

struct BinomMomentBound {
  double omega = 0.0;
  double omega_star = 0.0;
  double delta_lp = 0.0;
  double exponent = 0.0;
};

/// R - 1 + H2(w*) + (1-w*) H2((1-2w)/(1-w*)), w* = max(w, delta_lp(R)).
/// Defined for delta_lp/2 <= w <= 1/2; w = 1 gives R - 1 (the whole space).
inline BinomMomentBound binom_moment_exponent(double R, double omega) {
  BinomMomentBound b;
  b.omega = omega;
  b.delta_lp = mrrw_delta(R);
  if (omega == 1.0) {
    b.omega_star = 1.0;
    b.exponent = R - 1.0;
    return b;
  }
  if (!(omega >= 0.5 * b.delta_lp && omega <= 0.5))
    throw DomainError("binom_moment_exponent: omega outside [delta_lp/2, 1/2] and != 1");
  b.omega_star = omega >= b.delta_lp ? omega : b.delta_lp;
  const double arg = std::clamp((1.0 - 2.0 * omega) / (1.0 - b.omega_star), 0.0, 1.0);
  b.exponent = R - 1.0 + entropy2(b.omega_star) + (1.0 - b.omega_star) * entropy2(arg);
  return b;
}

// ---------------------------------------------------------------------------
// Sphere

/// Left end of the x-range for a given gamma: 2 sqrt(g(1+g)) / (1+2g).
inline double sphere_x_min(double gamma) {
  return 2.0 * std::sqrt(gamma * (1.0 + gamma)) / (1.0 + 2.0 * gamma);
}

namespace detail {
// Theorem-5 exponent without argument checks; gamma in (0, rho], x >= x_min.
inline double sphere_exponent_unchecked(double R, double gamma, double x, double tol) {
  if (gamma == 0.0) return R;
  const double g = gamma * (1.0 + gamma);
  const double base = R - rho_rate(gamma);
  const double lo = std::max(x, sphere_x_min(gamma));
  if (lo >= 1.0) return base;
  auto integrand = [g](double z) {
    const double disc = std::max(0.0, z * z - 4.0 * (1.0 - z * z) * g);
    return 1.0 / (z + std::sqrt(disc));
  };
  return base + 4.0 * g * integrate(integrand, lo, 1.0, tol);
}
}  // namespace detail

/// 4g(1+g) int_x^1 dz / (z + sqrt(z^2 - 4(1-z^2) g(1+g))) - (1+g) H(g/(1+g)) + R,
/// natural logarithms.
inline double sphere_spectrum_exponent(double R, double gamma, double x,
                                       double tol = kDefaultTolerance) {
  if (!(R >= 0.0)) throw DomainError("sphere_spectrum_exponent: R must be nonnegative");
  const double rho = solve_rho(R);
  if (!(gamma >= 0.0 && gamma <= rho * (1.0 + 1e-12)))
    throw DomainError("sphere_spectrum_exponent: gamma outside [0, rho(R)]");
  if (!(x >= sphere_x_min(gamma) - 1e-12 && x <= 1.0))
    throw DomainError("sphere_spectrum_exponent: x outside the admissible range");
  return detail::sphere_exponent_unchecked(R, gamma, x, tol);
}

struct PartitionSpec {
  double u0 = -1.0;
  /// t(d(C)) = 1 - d^2/2, right end of the partitioned segment (< 1).
  double top = 0.0;
  long m = 1;
  double point(long i) const { return u0 + (top - u0) * static_cast<double>(i) / static_cast<double>(m); }
};

struct Theorem2Result {
  long segment = 0;
  double s = 0.0;
  double f_s = 0.0;
  double f_one = 0.0;
  double bound = 0.0;
  bool vacuous = false;
};

inline constexpr int kSignSamples = 10000;

/// f(x) = sum_k coeffs[k] P_k^{l,l}(x), l = (dim - 3)/2.
inline double jacobi_series(const std::vector<double>& coeffs, double lambda, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0.0) s += coeffs[k] * jacobi(lambda, lambda, static_cast<long>(k), x);
  return s;
}

/// Spherical codes in dimension `dim` (S^{dim-1}): some segment U_i of the
/// partition carries distance density a(u_i, u_{i+1}) >= (f_0 M - f(1)) /
/// (m f(s)) for some s in U_i; reported with s the maximiser of f over
/// [u_0, top], the weakest such guarantee. Sign conditions on f are checked
/// on kSignSamples equally spaced points plus the partition points: a
/// semi-decision.
inline Theorem2Result theorem2_bound(double M, long dim, const std::vector<double>& coeffs,
                                     const PartitionSpec& part, int samples = kSignSamples) {
  if (dim < 2) throw DomainError("theorem2_bound: dimension must be >= 2");
  if (coeffs.empty()) throw DomainError("theorem2_bound: empty polynomial");
  if (part.m < 1) throw DomainError("theorem2_bound: m must be >= 1");
  if (!(part.u0 >= -1.0 && part.u0 < part.top && part.top < 1.0))
    throw DomainError("theorem2_bound: requires -1 <= u0 < top < 1");
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    if (coeffs[k] < 0.0)
      throw PreconditionError("theorem2_bound: negative coefficient f_k", static_cast<long>(k));
  const double lambda = (static_cast<double>(dim) - 3.0) / 2.0;
  auto f = [&](double x) { return jacobi_series(coeffs, lambda, x); };
  for (int i = 0; i <= samples; ++i) {
    const double x = -1.0 + 2.0 * i / samples;
    const double v = f(x);
    if (x < part.u0 && v > 0.0)
      throw PreconditionError("theorem2_bound: f > 0 at a sample left of u0", i);
    if (x > part.u0 && v < 0.0)
      throw PreconditionError("theorem2_bound: f < 0 at a sample right of u0", i);
  }
  Theorem2Result r;
  r.f_one = f(1.0);
  // Maximiser of f over [u0, top]: dense sampling then golden refinement.
  const Extremum e = grid_refine_max(f, part.u0, part.top, std::max(2, samples / 4), 1e-12);
  r.s = e.x;
  r.f_s = e.value;
  r.segment = std::min<long>(part.m - 1, static_cast<long>(std::floor((r.s - part.u0) / (part.top - part.u0) * static_cast<double>(part.m))));
  r.segment = std::max<long>(0, r.segment);
  const double mass = coeffs[0] * M - r.f_one;
  r.vacuous = mass <= 0.0 || r.f_s <= 0.0;
  r.bound = r.f_s > 0.0 ? mass / (static_cast<double>(part.m) * r.f_s) : 0.0;
  return r;
}

}  // namespace delsarte
