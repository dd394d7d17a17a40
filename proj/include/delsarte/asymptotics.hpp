#pragma once

// Asymptotic rate/distance curves: Gilbert-Varshamov, the second MRRW
// bound, and the Shannon and Kabatiansky-Levenshtein bounds for the sphere.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "delsarte/errors.hpp"
#include "delsarte/numerics.hpp"

namespace delsarte {

/// A sampled function of the rate; `columns[0]` is the argument.
struct BoundCurve {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Gilbert-Varshamov: delta = H2^{-1}(1 - R).
inline double gv_delta(double R) {
  if (!(R >= 0.0 && R <= 1.0)) throw DomainError("gv_delta: R outside [0,1]");
  return inverse_entropy2(1.0 - R);
}

struct MrrwResult {
  double delta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

inline constexpr int kMrrwGrid = 1000;

namespace detail {
inline double mrrw_alpha(double R, double beta) {
  const double y = std::min(1.0, 1.0 - R + entropy2(beta));
  return inverse_entropy2(y);
}
inline double mrrw_objective(double alpha, double beta) {
  const double b = beta * (1.0 - beta);
  return 2.0 * (alpha * (1.0 - alpha) - b) / (1.0 + 2.0 * std::sqrt(b));
}
}  // namespace detail

/// MRRW: minimum over beta in [0, H2^{-1}(R)] of
/// 2(a(1-a) - b(1-b)) / (1 + 2 sqrt(b(1-b))) with H2(a) - H2(b) = 1 - R.
/// Outside (0, 1) the analytic limits 1/2 (R <= 0) and 0 (R >= 1) are used.
inline MrrwResult mrrw_delta_full(double R, int grid_points = kMrrwGrid) {
  if (std::isnan(R)) throw DomainError("mrrw_delta: R is NaN");
  if (R <= 0.0) return {0.5, 0.5, 0.0};
  if (R >= 1.0) return {0.0, 0.5, 0.5};
  const double top = inverse_entropy2(R);
  auto f = [&](double beta) { return detail::mrrw_objective(detail::mrrw_alpha(R, beta), beta); };
  const Extremum e = grid_refine_min(f, 0.0, top, grid_points, 1e-12);
  return {e.value, detail::mrrw_alpha(R, e.x), e.x};
}

inline double mrrw_delta(double R) { return mrrw_delta_full(R).delta; }

/// R^{lp}(delta): the rate at which the MRRW curve reaches delta, for
/// delta in [0, 1/2].
inline double mrrw_rate(double delta, double tol = 1e-13) {
  if (!(delta >= 0.0 && delta <= 0.5)) throw DomainError("mrrw_rate: delta outside [0, 1/2]");
  if (delta >= 0.5) return 0.0;
  if (delta <= 0.0) return 1.0;
  return bisect_root([&](double R) { return mrrw_delta(R) - delta; }, 0.0, 1.0, tol);
}

/// d^{(s)}(R) = sqrt(2(1 - sqrt(1 - e^{-2R}))), R in nats.
inline double shannon_d(double R) {
  if (!(R >= 0.0)) throw DomainError("shannon_d: R must be nonnegative");
  const double u = std::exp(-2.0 * R);
  return std::sqrt(2.0 * u / (1.0 + std::sqrt(-std::expm1(-2.0 * R))));
}

/// (1 + rho) H(rho / (1 + rho)) in nats, = (1+rho) ln(1+rho) - rho ln rho.
inline double rho_rate(double rho) {
  if (rho <= 0.0) return 0.0;
  return (1.0 + rho) * std::log1p(rho) - rho * std::log(rho);
}

/// The root rho >= 0 of R = (1 + rho) H(rho / (1 + rho)).
inline double solve_rho(double R) {
  if (!(R >= 0.0)) throw DomainError("solve_rho: R must be nonnegative");
  if (R == 0.0) return 0.0;
  double hi = 1.0;
  while (rho_rate(hi) < R) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("solve_rho: R too large");
  }
  double lo = 0.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (rho_rate(mid) < R)
      lo = mid;
    else
      hi = mid;
  }
  return std::fabs(rho_rate(lo) - R) <= std::fabs(rho_rate(hi) - R) ? lo : hi;
}

/// sqrt2 (sqrt(1+rho) - sqrt(rho)) / sqrt(1+2rho).
inline double kl_distance(double rho) {
  return std::sqrt(2.0) * (std::sqrt(1.0 + rho) - std::sqrt(rho)) / std::sqrt(1.0 + 2.0 * rho);
}

inline double kl_d(double R) { return kl_distance(solve_rho(R)); }

}  // namespace delsarte
