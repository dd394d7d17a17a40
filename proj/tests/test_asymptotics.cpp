#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "delsarte/asymptotics.hpp"

using namespace delsarte;

namespace {

long double h2(long double x) {
  if (x <= 0 || x >= 1) return 0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

// Dense-grid minimum over beta, alpha found by Newton continuation along
// the grid.
double mrrw_grid_oracle(double R, long points) {
  long double lo_b = 0, hi_b = 0.5;
  for (int i = 0; i < 200; ++i) {
    const long double mid = (lo_b + hi_b) / 2;
    (h2(mid) < R ? lo_b : hi_b) = mid;
  }
  const long double top = lo_b;
  long double alpha = 0.5, best = 1;
  for (long j = points; j >= 0; --j) {
    const long double beta = top * j / points;
    const long double y = 1 - R + h2(beta);
    if (y >= 1) {
      alpha = 0.5;
    } else {
      for (int it = 0; it < 60; ++it) {
        const long double slope = std::log2((1 - alpha) / alpha);
        long double next = alpha - (h2(alpha) - y) / slope;
        if (next >= 0.5) next = (alpha + 0.5) / 2;
        if (next <= 0) next = alpha / 2;
        if (std::fabs(next - alpha) < 1e-18L) { alpha = next; break; }
        alpha = next;
      }
    }
    const long double b = beta * (1 - beta);
    const long double v = 2 * (alpha * (1 - alpha) - b) / (1 + 2 * std::sqrt(b));
    best = std::min(best, v);
  }
  return static_cast<double>(best);
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(lo + (hi - lo) * i / (n + 1));
  return out;
}

}  // namespace

TEST(GilbertVarshamov, Examples) {
  EXPECT_DOUBLE_EQ(gv_delta(0.0), 0.5);
  EXPECT_DOUBLE_EQ(gv_delta(1.0), 0.0);
  EXPECT_NEAR(gv_delta(0.5), 0.1100278644383, 1e-12);
  for (double R : grid(0, 1, 50)) EXPECT_NEAR(static_cast<double>(h2(gv_delta(R))), 1 - R, 1e-12);
  EXPECT_THROW(gv_delta(1.5), DomainError);
  EXPECT_THROW(gv_delta(-0.1), DomainError);
}

TEST(Mrrw, Limits) {
  EXPECT_NEAR(mrrw_delta(1e-9), 0.5, 1e-3);
  EXPECT_NEAR(mrrw_delta(1e-6), 0.5, 1e-2);
  EXPECT_NEAR(mrrw_delta(1 - 1e-9), 0.0, 1e-3);
  EXPECT_DOUBLE_EQ(mrrw_delta(0.0), 0.5);
  EXPECT_DOUBLE_EQ(mrrw_delta(1.0), 0.0);
  EXPECT_THROW(mrrw_delta(std::nan("")), DomainError);
  const auto r = mrrw_delta_full(0.5);
  EXPECT_GE(r.alpha, r.beta);
  EXPECT_NEAR(static_cast<double>(h2(r.alpha) - h2(r.beta)), 0.5, 1e-10);
}

TEST(Mrrw, DenseGridOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<double> rates{0.5};
  for (int i = 0; i < 19; ++i) rates.push_back(u(rng));
  for (double R : rates) EXPECT_NEAR(mrrw_delta(R), mrrw_grid_oracle(R, 1'000'000), 1e-6) << R;
}

TEST(Mrrw, AgreesWithFirstBoundAtLowRatesAndImprovesAbove) {
  // 1/2 - sqrt(g(1-g)), g = H2^{-1}(R).
  for (double R : grid(0.01, 0.99, 98)) {
    const double g = inverse_entropy2(R);
    const double first = 0.5 - std::sqrt(g * (1 - g));
    EXPECT_LE(mrrw_delta(R), first + 1e-10) << R;
    if (R <= 0.3) EXPECT_NEAR(mrrw_delta(R), first, 1e-9) << R;
  }
  EXPECT_LT(mrrw_delta(0.5), 0.5 - std::sqrt(0.11002786443835959 * (1 - 0.11002786443835959)) - 1e-3);
}

TEST(Mrrw, RateInverse) {
  for (double d : grid(0.0, 0.5, 20)) EXPECT_NEAR(mrrw_delta(mrrw_rate(d)), d, 1e-9);
  EXPECT_DOUBLE_EQ(mrrw_rate(0.5), 0.0);
  EXPECT_DOUBLE_EQ(mrrw_rate(0.0), 1.0);
  EXPECT_THROW(mrrw_rate(0.6), DomainError);
}

TEST(Curves, DominanceAndMonotonicity) {
  const auto rates = grid(0, 1, 1000);
  double prev_gv = 1, prev_mrrw = 1;
  for (double R : rates) {
    const double g = gv_delta(R), m = mrrw_delta(R);
    EXPECT_LE(g, m) << R;
    EXPECT_LT(g, prev_gv);
    EXPECT_LT(m, prev_mrrw);
    prev_gv = g;
    prev_mrrw = m;
  }
  double prev_s = 10, prev_k = 10;
  for (double R : grid(0, 3, 1000)) {
    const double s = shannon_d(R), k = kl_d(R);
    EXPECT_LE(s, k) << R;
    EXPECT_LT(s, prev_s);
    EXPECT_LT(k, prev_k);
    prev_s = s;
    prev_k = k;
  }
}

TEST(Shannon, Examples) {
  EXPECT_DOUBLE_EQ(shannon_d(0.0), std::sqrt(2.0));
  EXPECT_LT(shannon_d(40.0), 1e-8);
  using big = boost::multiprecision::cpp_bin_float_50;
  for (double R : {0.5, 0.01, 1.0, 2.5, 10.0}) {
    const big exact = sqrt(2 * (1 - sqrt(1 - exp(big(-2 * R)))));
    EXPECT_NEAR(shannon_d(R), exact.convert_to<double>(), 1e-14) << R;
  }
  EXPECT_NEAR(shannon_d(0.5), std::sqrt(2 * (1 - std::sqrt(1 - std::exp(-1.0)))), 1e-15);
  EXPECT_THROW(shannon_d(-1), DomainError);
}

TEST(Rho, ExamplesAndResidual) {
  EXPECT_EQ(solve_rho(0.0), 0.0);
  EXPECT_NEAR(solve_rho(2 * std::log(2.0)), 1.0, 1e-12);
  for (double R : grid(0, 5, 1000)) {
    const double rho = solve_rho(R);
    // Natural-log entropy written out independently.
    const double t = rho / (1 + rho);
    const double h = -t * std::log(t) - (1 - t) * std::log(1 - t);
    EXPECT_LT(std::fabs((1 + rho) * h - R), 1e-10) << R;
  }
  EXPECT_THROW(solve_rho(-0.5), DomainError);
}

TEST(KabatianskyLevenshtein, Examples) {
  EXPECT_DOUBLE_EQ(kl_d(0.0), std::sqrt(2.0));
  EXPECT_NEAR(kl_d(2 * std::log(2.0)), std::sqrt(2.0) * (std::sqrt(2.0) - 1) / std::sqrt(3.0), 1e-12);
  EXPECT_LT(kl_d(50.0), 0.1);
}
