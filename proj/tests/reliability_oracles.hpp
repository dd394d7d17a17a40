#pragma once

// Independent oracles for the reliability bounds, shared by the unit tests
// and the acceptance run. They use only the formulas, plain loops and
// Boost quadrature.

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <utility>
#include <vector>

#include "delsarte/reliability.hpp"

namespace oracle {

using delsarte::hahn_exponent;
using delsarte::mrrw_delta;
using delsarte::solve_rho;

inline double h2(double x) { return x <= 0 || x >= 1 ? 0.0 : -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

inline double inv_h2(double y) {
  double lo = 0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h2(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// The BSC expression on a (beta, xi, delta) lattice with a dense eta grid.
// delta gets the finest axis since the maximum lies where the two terms cross.
inline double bsc_oracle(double R, double p, int n, int nd, int eta_points) {
  const double lb = std::log2(std::sqrt(4 * p * (1 - p)));
  const double beta_hi = inv_h2(R), delta_hi = mrrw_delta(R);
  double best = -1e300;
  for (int i = 0; i < n; ++i) {
    const double beta = beta_hi * i / (n - 1);
    const double alpha = inv_h2(std::min(1.0, 1 - R + h2(beta)));
    if (!(alpha > beta)) continue;
    const double A = alpha * (1 - alpha), B = beta * (1 - beta);
    const double xi_hi = std::min(1.0, 2 * (A - B) / (1 + 2 * std::sqrt(B)));
    for (int k = 0; k < n; ++k) {
      const double xi = xi_hi * k / (n - 1);
      if (xi / 2 > (A - B) / (1 + 2 * std::sqrt(B)) || xi >= 1) continue;
      const double q = hahn_exponent(alpha, beta, xi / 2);
      const double hx = (alpha - xi / 2) / (1 - xi);
      if (hx < 0 || hx > 1) continue;
      const double nu = R - 1 + h2(beta) + 2 * h2(alpha) - 2 * q - xi - (1 - xi) * h2(hx);
      for (int j = 0; j < nd; ++j) {
        const double delta = delta_hi * j / (nd - 1);
        const double lo = delta * p / 2, hi = std::min(delta / 4, p * (1 - xi));
        double inner = -1e300;
        for (int e = 0; e < eta_points && hi >= lo; ++e) {
          const double eta = eta_points == 1 ? lo : lo + (hi - lo) * e / (eta_points - 1);
          double v = 0;
          bool ok = true;
          auto add = [&](double c, double num, double den) {
            if (c == 0) return;
            const double a = num / den;
            if (a < -1e-15 || a > 1 + 1e-15) ok = false;
            else v += c * h2(std::clamp(a, 0.0, 1.0));
          };
          if (delta > 0) add(delta, 2 * eta, delta);
          add(xi - delta / 2, xi - 2 * eta, 2 * xi - delta);
          add(1 - xi - delta / 2, p * (1 - xi) - eta, 1 - xi - delta / 2);
          if (ok) inner = std::max(inner, v);
        }
        const double nut = inner > -1e300 ? std::min(nu, xi + (1 - xi) * h2(p) - inner) : nu;
        best = std::max(best, std::min(-delta * lb, -nut - xi * lb));
      }
    }
  }
  return best;
}

inline double F_oracle(double R, double gamma, double x) {
  const double g = gamma * (1 + gamma);
  const double t = gamma / (1 + gamma);
  const double h = gamma > 0 ? -t * std::log(t) - (1 - t) * std::log(1 - t) : 0.0;
  x = std::max(x, 2 * std::sqrt(g) / std::sqrt(1 + 4 * g));
  if (gamma == 0 || x >= 1) return R - (1 + gamma) * h;
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [g](double z) { return 4 * g / (z + std::sqrt(std::max(0.0, z * z - 4 * (1 - z * z) * g))); };
  return R - (1 + gamma) * h + ts.integrate(f, x, 1.0);
}

// gamma x w x d lattice. The maximum sits on the ridge where the two terms
// cross, so the d axis is sampled more finely than the others.
inline double gauss_oracle(double R, double A, int n, int nd) {
  const double rho = solve_rho(R);
  auto kl = [](double r) { return std::sqrt(2.0) * (std::sqrt(1 + r) - std::sqrt(r)) / std::sqrt(1 + 2 * r); };
  const double dmax = kl(rho);
  double outer = 1e300;
  for (int a = 0; a < n; ++a) {
    const double gamma = rho * a / (n - 1);
    const double wtop = kl(gamma);
    double inner = -1e300;
    for (int j = 0; j < n; ++j) {
      const double w = wtop * j / (n - 1);
      const double F = F_oracle(R, gamma, 1 - w * w / 2);
      const double dtop = std::min(w, dmax);
      for (int i = 0; i < nd; ++i) {
        const double d = dtop * i / (nd - 1);
        const double den = 4 * w * w - d * d;
        const double L = std::min(den > 0 ? A * d * d * w * w / (8 * den) : 0.0, F);
        inner = std::max(inner, std::min(A * d * d / 8, A * w * w / 8 - L));
      }
    }
    outer = std::min(outer, inner);
  }
  return outer;
}

// Common lower tangent of a1 (x-c1)^2 + k1 and a2 (x-c2)^2 + k2 (c1 < c2):
// u = t1 - c1 solves u^2 (a1^2/a2 - a1) + 2 a1 (c2 - c1) u + (k1 - k2) = 0.
inline std::pair<double, double> parabola_tangent(double a1, double c1, double k1, double a2, double c2, double k2) {
  const double qa = a1 * a1 / a2 - a1, qb = 2 * a1 * (c2 - c1), qc = k1 - k2;
  double u;
  if (std::fabs(qa) < 1e-15) {
    u = -qc / qb;
  } else {
    const double disc = std::sqrt(qb * qb - 4 * qa * qc);
    const double u1 = (-qb + disc) / (2 * qa), u2 = (-qb - disc) / (2 * qa);
    auto ordered = [&](double v) { return c1 + v < c2 + a1 * v / a2; };
    u = ordered(u1) ? u1 : u2;
  }
  return {c1 + u, c2 + a1 * u / a2};
}

}  // namespace oracle
