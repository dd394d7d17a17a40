#pragma once

// Upper bounds on reliability functions: the BSC and Gaussian channel
// bounds built on distance-spectrum estimates, the error-detection
// exponent, the sphere-packing exponent and the straight-line bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "delsarte/asymptotics.hpp"
#include "delsarte/errors.hpp"
#include "delsarte/numerics.hpp"
#include "delsarte/orthopoly.hpp"
#include "delsarte/spectra.hpp"

namespace delsarte {

namespace detail {
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace detail

// ---------------------------------------------------------------------------
// Binary symmetric channel

enum class XiBracket { AsPrinted, MinusSign };

struct BscPoint {
  double alpha = 0.0, beta = 0.0, xi = 0.0, delta = 0.0, eta = 0.0;
  double nu = 0.0, nu_tilde = 0.0;
  double term_distance = 0.0;  // -delta log2 sqrt(4p(1-p))
  double term_spectrum = 0.0;  // -nu_tilde - xi log2 sqrt(4p(1-p))
  double E = detail::kNegInf;
  bool valid = false;
};

/// Upper end of the xi range: 2(a(1-a) + b(1-b)) / (1 + 2 sqrt(b(1-b))) as
/// printed, or with the minus sign of the MRRW expression.
inline double bsc_xi_max(double alpha, double beta, XiBracket bracket) {
  const double A = alpha * (1.0 - alpha), B = beta * (1.0 - beta);
  const double num = bracket == XiBracket::AsPrinted ? A + B : A - B;
  return 2.0 * num / (1.0 + 2.0 * std::sqrt(B));
}

namespace detail {

inline bool unit(double x) { return x >= -1e-15 && x <= 1.0 + 1e-15; }
inline double h2c(double x) { return entropy2(std::clamp(x, 0.0, 1.0)); }

// The eta-dependent part of nu_tilde; -inf where an entropy argument
// leaves [0, 1].
inline double eta_objective(double p, double xi, double delta, double eta) {
  double v = 0.0;
  if (delta > 0.0) {
    const double a = 2.0 * eta / delta;
    if (!unit(a)) return kNegInf;
    v += delta * h2c(a);
  }
  const double c2 = xi - delta / 2.0;
  if (c2 != 0.0) {
    const double den = 2.0 * xi - delta;
    const double a = (xi - 2.0 * eta) / den;
    if (!unit(a)) return kNegInf;
    v += c2 * h2c(a);
  }
  const double c3 = 1.0 - xi - delta / 2.0;
  if (c3 != 0.0) {
    const double a = (p * (1.0 - xi) - eta) / c3;
    if (!unit(a)) return kNegInf;
    v += c3 * h2c(a);
  }
  return v;
}

}  // namespace detail

namespace detail {

// The (beta, xi) part: alpha, nu and the validity checks.
inline BscPoint bsc_spectrum_part(double R, double beta, double xi, double tol) {
  BscPoint pt;
  pt.beta = beta;
  pt.xi = xi;
  const double rbeta = 1.0 - R + entropy2(beta);
  if (rbeta > 1.0 + 1e-15) return pt;
  pt.alpha = inverse_entropy2(std::min(1.0, rbeta));
  if (!(pt.alpha > beta)) return pt;
  if (xi / 2.0 > hahn_zero_abscissa(pt.alpha, beta) || xi >= 1.0) return pt;
  const double q = hahn_exponent(pt.alpha, beta, xi / 2.0, tol);
  const double hx = (pt.alpha - xi / 2.0) / (1.0 - xi);
  if (!unit(hx)) return pt;
  pt.nu = R - 1.0 + entropy2(beta) + 2.0 * entropy2(pt.alpha) - 2.0 * q - xi - (1.0 - xi) * h2c(hx);
  pt.valid = true;
  return pt;
}

// Completes a valid spectrum part at the given delta.
inline BscPoint bsc_with_delta(BscPoint pt, double p, double delta) {
  if (!pt.valid) return pt;
  const double xi = pt.xi;
  const double lb = std::log2(std::sqrt(4.0 * p * (1.0 - p)));
  pt.delta = delta;
  pt.eta = 0.0;
  pt.nu_tilde = pt.nu;
  const double eta_lo = delta * p / 2.0;
  const double eta_hi = std::min(delta / 4.0, p * (1.0 - xi));
  if (eta_hi >= eta_lo) {
    auto g = [&](double eta) { return eta_objective(p, xi, delta, eta); };
    Extremum e{eta_lo, g(eta_lo)};
    if (eta_hi > eta_lo) e = grid_refine_max(g, eta_lo, eta_hi, 16, 1e-12);
    if (e.value > kNegInf) {
      pt.eta = e.x;
      pt.nu_tilde = std::min(pt.nu, xi + (1.0 - xi) * entropy2(p) - e.value);
    }
  }
  pt.term_distance = -delta * lb;
  pt.term_spectrum = -pt.nu_tilde - xi * lb;
  pt.E = std::min(pt.term_distance, pt.term_spectrum);
  return pt;
}

}  // namespace detail

/// E_{alpha,beta,xi,delta} with alpha fixed by H2(alpha) - H2(beta) = 1 - R.
/// Invalid where q(alpha, beta, xi/2) or an entropy argument is undefined.
inline BscPoint bsc_objective(double R, double p, double beta, double delta, double xi,
                              double tol = kDefaultTolerance) {
  BscPoint pt = detail::bsc_with_delta(detail::bsc_spectrum_part(R, beta, xi, tol), p, delta);
  pt.delta = delta;
  return pt;
}

struct BscBound {
  BscPoint best;       // the maximiser (the bound as printed)
  double min_reading;  // the same expression minimised over the grid
  int grid = 0;
  XiBracket bracket = XiBracket::AsPrinted;
};

inline constexpr int kBscGrid = 16;

/// max over (beta, delta, xi) of bsc_objective, beta in [0, H2^{-1}(R)],
/// delta in [0, delta_lp(R)], xi as a fraction of its bracket. Nested
/// one-dimensional grid refinements, delta innermost; each level samples
/// `grid` points (beta gets twice as many). min_reading is the minimum over
/// the grid^3 lattice.
inline BscBound bsc_reliability_upper(double R, double p, int grid = kBscGrid,
                                      XiBracket bracket = XiBracket::AsPrinted) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("bsc_reliability_upper: R outside (0,1)");
  if (!(p > 0.0 && p < 0.5)) throw DomainError("bsc_reliability_upper: p outside (0,1/2)");
  if (grid < 2) throw DomainError("bsc_reliability_upper: grid too small");
  const double beta_hi = inverse_entropy2(R);
  const double delta_hi = mrrw_delta(R);
  if (!(beta_hi > 0.0 && delta_hi > 0.0))
    throw DomainError("bsc_reliability_upper: degenerate constraints near R = 1");
  auto spectrum = [&](double beta, double s) {
    const double alpha = inverse_entropy2(std::min(1.0, 1.0 - R + entropy2(beta)));
    return detail::bsc_spectrum_part(R, beta, s * bsc_xi_max(alpha, beta, bracket), kDefaultTolerance);
  };
  auto best_delta = [&](const BscPoint& part) {
    if (!part.valid) return part;
    const Extremum e = grid_refine_max([&](double d) { return detail::bsc_with_delta(part, p, d).E; }, 0.0,
                                       delta_hi, grid, 1e-11);
    return detail::bsc_with_delta(part, p, e.x);
  };
  auto over_xi = [&](double beta) {
    BscPoint best;
    const Extremum e = grid_refine_max(
        [&](double s) {
          const BscPoint pt = best_delta(spectrum(beta, s));
          return pt.valid ? pt.E : detail::kNegInf;
        },
        0.0, 1.0, grid, 1e-10);
    return e.value > detail::kNegInf ? best_delta(spectrum(beta, e.x)) : best;
  };

  BscBound out;
  out.grid = grid;
  out.bracket = bracket;
  out.min_reading = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i)
    for (int k = 0; k < grid; ++k) {
      const BscPoint part = spectrum(beta_hi * i / (grid - 1), static_cast<double>(k) / (grid - 1));
      if (!part.valid) continue;
      for (int j = 0; j < grid; ++j)
        out.min_reading = std::min(out.min_reading, detail::bsc_with_delta(part, p, delta_hi * j / (grid - 1)).E);
    }
  if (!std::isfinite(out.min_reading)) throw DomainError("bsc_reliability_upper: no admissible parameters");
  const Extremum e = grid_refine_max(
      [&](double beta) {
        const BscPoint pt = over_xi(beta);
        return pt.valid ? pt.E : detail::kNegInf;
      },
      0.0, beta_hi, 2 * grid, 1e-10);
  out.best = over_xi(e.x);
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian channel

struct GaussPoint {
  double gamma = 0.0, w = 0.0, d = 0.0;
  double L = 0.0, Fxg = 0.0;
  double value = detail::kNegInf;
};

/// min(A d^2/8, A w^2/8 - L(w,d,gamma)),
/// L = min(A d^2 w^2 / (8(4w^2 - d^2)), F(1 - w^2/2, gamma)).
inline GaussPoint gaussian_objective(double R, double A, double gamma, double w, double d,
                                     double tol = kDefaultTolerance) {
  GaussPoint g{gamma, w, d};
  g.Fxg = detail::sphere_exponent_unchecked(R, gamma, 1.0 - 0.5 * w * w, tol);
  const double first = (4.0 * w * w - d * d) > 0.0
                           ? A * d * d * w * w / (8.0 * (4.0 * w * w - d * d))
                           : 0.0;
  g.L = std::min(first, g.Fxg);
  g.value = std::min(A * d * d / 8.0, A * w * w / 8.0 - g.L);
  return g;
}

struct GaussBound {
  GaussPoint best;
  double rho = 0.0;
  double d_max = 0.0;
  int gamma_grid = 0, inner_grid = 0;
};

inline constexpr int kGaussGammaGrid = 16;
inline constexpr int kGaussInnerGrid = 24;

/// Inner maximum over d in [0, d_kl(R)], w in [d, w_max(gamma)]. For fixed
/// w the first term grows with d and the second does not, so the best d is
/// their crossing; the remaining search over w is one-dimensional.
inline GaussPoint gaussian_inner_max(double R, double A, double gamma, int grid = kGaussInnerGrid) {
  const double d_max = kl_d(R);
  const double w_top = kl_distance(gamma);
  auto best_d = [&](double w) {
    const double F = detail::sphere_exponent_unchecked(R, gamma, 1.0 - 0.5 * w * w, kDefaultTolerance);
    auto gap = [&](double d) {
      const double den = 4.0 * w * w - d * d;
      const double first = den > 0.0 ? A * d * d * w * w / (8.0 * den) : 0.0;
      return A * d * d / 8.0 - (A * w * w / 8.0 - std::min(first, F));
    };
    double lo = 0.0, hi = std::min(w, d_max);
    if (gap(hi) <= 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (gap(mid) <= 0.0 ? lo : hi) = mid;
    }
    return lo;
  };
  auto value = [&](double w) { return gaussian_objective(R, A, gamma, w, best_d(w)).value; };
  const Extremum e = grid_refine_max(value, 0.0, w_top, std::max(grid, 2), 1e-12);
  return gaussian_objective(R, A, gamma, e.x, best_d(e.x));
}

/// min over gamma in [0, rho(R)] of the inner maximum (rates in nats).
inline GaussBound gaussian_reliability_upper(double R, double A, int gamma_grid = kGaussGammaGrid,
                                             int inner_grid = kGaussInnerGrid) {
  if (!(R > 0.0)) throw DomainError("gaussian_reliability_upper: R must be positive");
  if (!(A > 0.0)) throw DomainError("gaussian_reliability_upper: A must be positive");
  GaussBound out;
  out.rho = solve_rho(R);
  out.d_max = kl_d(R);
  out.gamma_grid = gamma_grid;
  out.inner_grid = inner_grid;
  auto outer = [&](double gamma) { return gaussian_inner_max(R, A, gamma, inner_grid).value; };
  const Extremum e = grid_refine_min(outer, 0.0, out.rho, gamma_grid, 1e-9 * std::max(1.0, out.rho));
  out.best = gaussian_inner_max(R, A, e.x, inner_grid);
  return out;
}

// ---------------------------------------------------------------------------
// Error detection and sphere packing

/// R^{lp}(p): the rate where the MRRW curve equals p.
inline double lp_rate(double p) { return mrrw_rate(p); }

struct ErrorDetectionBound {
  double value = 0.0;
  double switch_rate = 0.0;  // R^{lp}(p)
  bool first_branch = false;
};

/// 1 - R - H2(delta_lp(R)) + T2(delta_lp(R), p) for R <= R^{lp}(p), else 1 - R.
/// `switch_rate` must be lp_rate(p); pass it when sweeping R.
inline ErrorDetectionBound error_detection_upper(double R, double p, double switch_rate) {
  if (!(R >= 0.0 && R <= 1.0)) throw DomainError("error_detection_upper: R outside [0,1]");
  if (!(p > 0.0 && p < 0.5)) throw DomainError("error_detection_upper: p outside (0,1/2)");
  ErrorDetectionBound b;
  b.switch_rate = switch_rate;
  if (R >= b.switch_rate) {
    b.value = 1.0 - R;
    return b;
  }
  const double d = mrrw_delta(R);
  b.first_branch = true;
  b.value = 1.0 - R - entropy2(d) + mixed_entropy(d, p, 2.0);
  return b;
}

inline ErrorDetectionBound error_detection_upper(double R, double p) {
  if (!(p > 0.0 && p < 0.5)) throw DomainError("error_detection_upper: p outside (0,1/2)");
  return error_detection_upper(R, p, lp_rate(p));
}

/// Sphere-packing exponent of the BSC in bits (not given in the source
/// text): D(delta || p) with delta = H2^{-1}(1 - R), for R < 1 - H2(p).
inline double sphere_packing_exponent(double R, double p) {
  if (!(p > 0.0 && p < 0.5)) throw DomainError("sphere_packing_exponent: p outside (0,1/2)");
  if (!(R >= 0.0 && R < 1.0 - entropy2(p)))
    throw DomainError("sphere_packing_exponent: R outside [0, capacity)");
  const double d = inverse_entropy2(1.0 - R);
  double v = 0.0;
  if (d > 0.0) v += d * std::log2(d / p);
  if (d < 1.0) v += (1.0 - d) * std::log2((1.0 - d) / (1.0 - p));
  return std::max(0.0, v);
}

// ---------------------------------------------------------------------------
// Straight-line bound

struct SampledCurve {
  std::function<double(double)> f;
  double lo = 0.0, hi = 1.0;
  int samples = 200;
  std::string label;
};

struct TangentLine {
  double x1 = 0.0, y1 = 0.0;  // on the left curve
  double x2 = 0.0, y2 = 0.0;  // on the right curve
  double slope = 0.0, intercept = 0.0;
  std::string left_label, right_label;
  double at(double x) const { return slope * x + intercept; }
};

struct StraightLineResult {
  TangentLine line;
  BoundCurve combined;  // columns R, value, source (0 left, 1 line, 2 right)
};

namespace detail {
inline std::vector<std::pair<double, double>> sample(const SampledCurve& c) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < c.samples; ++i) {
    const double x = i == c.samples - 1 ? c.hi : c.lo + (c.hi - c.lo) * i / (c.samples - 1);
    pts.emplace_back(x, c.f(x));
  }
  return pts;
}
inline void check_convex(const std::vector<std::pair<double, double>>& pts, const std::string& label) {
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double s1 = (pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first);
    const double s2 = (pts[i + 1].second - pts[i].second) / (pts[i + 1].first - pts[i].first);
    if (s2 < s1 - 1e-9 * std::max(1.0, std::fabs(s1)))
      throw PreconditionError("straight_line_bound: curve '" + label + "' is not convex", static_cast<long>(i));
  }
}
}  // namespace detail

/// Common lower tangent of two convex curves, `left` lying mostly to the
/// left of `right`. Sampled curves locate the bridge of the lower convex
/// hull; alternating one-sided tangent searches then refine both tangency
/// points on the exact functions.
inline StraightLineResult straight_line_bound(const SampledCurve& left, const SampledCurve& right) {
  if (!(left.lo < left.hi && right.lo < right.hi) || left.samples < 3 || right.samples < 3)
    throw DomainError("straight_line_bound: bad sampling intervals");
  const auto pl = detail::sample(left), pr = detail::sample(right);
  detail::check_convex(pl, left.label);
  detail::check_convex(pr, right.label);
  // Best sampled pair: the line through them lies below every sample.
  auto below_all = [&](double x1, double y1, double x2, double y2) {
    const double m = (y2 - y1) / (x2 - x1);
    for (const auto* pts : {&pl, &pr})
      for (const auto& [x, y] : *pts)
        if (y < y1 + m * (x - x1) - 1e-12 * std::max(1.0, std::fabs(y))) return false;
    return true;
  };
  std::size_t bi = pl.size(), bj = pr.size();
  for (std::size_t i = 0; i < pl.size() && bi == pl.size(); ++i)
    for (std::size_t j = 0; j < pr.size(); ++j) {
      if (pr[j].first <= pl[i].first) continue;
      if (below_all(pl[i].first, pl[i].second, pr[j].first, pr[j].second)) {
        bi = i;
        bj = j;
        break;
      }
    }
  if (bi == pl.size()) throw DomainError("straight_line_bound: no common tangent between the curves");
  double x1 = pl[bi].first, x2 = pr[bj].first;
  for (int it = 0; it < 200; ++it) {
    const double y2 = right.f(x2);
    // From (x2, y2) the lower tangent to the left curve has maximal slope.
    const double hi1 = std::min(left.hi, x2 - 1e-12);
    const Extremum e1 = grid_refine_max(
        [&](double x) { return (left.f(x) - y2) / (x - x2); }, left.lo, hi1, 64, 1e-13);
    const double y1 = left.f(e1.x);
    const double lo2 = std::max(right.lo, e1.x + 1e-12);
    const Extremum e2 = grid_refine_min(
        [&](double x) { return (right.f(x) - y1) / (x - e1.x); }, lo2, right.hi, 64, 1e-13);
    const bool done = std::fabs(e1.x - x1) < 1e-13 && std::fabs(e2.x - x2) < 1e-13;
    x1 = e1.x;
    x2 = e2.x;
    if (done) break;
  }
  StraightLineResult out;
  auto& L = out.line;
  L.x1 = x1;
  L.y1 = left.f(x1);
  L.x2 = x2;
  L.y2 = right.f(x2);
  L.slope = (L.y2 - L.y1) / (L.x2 - L.x1);
  L.intercept = L.y1 - L.slope * L.x1;
  L.left_label = left.label;
  L.right_label = right.label;

  out.combined.columns = {"R", "value", "source"};
  std::vector<double> xs;
  for (const auto& p : pl) xs.push_back(p.first);
  for (const auto& p : pr) xs.push_back(p.first);
  xs.push_back(x1);
  xs.push_back(x2);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs) {
    double best = std::numeric_limits<double>::infinity();
    double src = -1;
    if (x >= left.lo && x <= left.hi) {
      best = left.f(x);
      src = 0;
    }
    if (x >= L.x1 && x <= L.x2 && L.at(x) < best) {
      best = L.at(x);
      src = 1;
    }
    if (x >= right.lo && x <= right.hi) {
      const double v = right.f(x);
      if (v < best) {
        best = v;
        src = 2;
      }
    }
    out.combined.rows.push_back({x, best, src});
  }
  return out;
}

}  // namespace delsarte
