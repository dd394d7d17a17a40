#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

#include "delsarte/spectra.hpp"

using namespace delsarte;

namespace {

std::vector<Rational> ints(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

double h2(double x) { return x <= 0 || x >= 1 ? 0.0 : -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

std::vector<Word> span(long k, std::mt19937_64& rng, long n) {
  while (true) {
    std::vector<Word> out{0};
    for (long j = 0; j < k; ++j) {
      const Word g = rng() & ((Word{1} << n) - 1);
      const std::size_t m = out.size();
      for (std::size_t i = 0; i < m; ++i) out.push_back(out[i] ^ g);
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) == out.end()) return out;
  }
}

}  // namespace

TEST(FiniteSpectrum, Examples) {
  // f = K_0: some A_j >= (M-1)/n.
  const long n = 7;
  const auto d = distance_distribution(read_code_file(std::string(DELSARTE_DATA_DIR) + "/hamming74.txt"));
  const auto k0 = PolynomialInBasis::from_coefficients(n, ints({1, 0, 0, 0, 0, 0, 0, 0}));
  auto b = finite_spectrum_lower(n, 16, n, k0);
  EXPECT_EQ(b.mass, 15);
  EXPECT_EQ(b.uniform, Rational(15, 7));
  EXPECT_FALSE(b.vacuous);

  // f = 2 K_0 + K_1, values 9 - 2i: positive on 0..4, negative beyond.
  const auto f = PolynomialInBasis::from_coefficients(n, ints({2, 1, 0, 0, 0, 0, 0, 0}));
  b = finite_spectrum_lower(n, 16, 4, f);
  EXPECT_EQ(b.mass, 23);
  EXPECT_EQ(b.uniform, Rational(23, 28));
  EXPECT_EQ(b.argmax, 1);
  EXPECT_EQ(b.best_index, 4);
  EXPECT_EQ(b.per_index[4], Rational(23, 4));
  Rational top = 0;
  for (long j = 1; j <= 4; ++j) top = std::max(top, d.A[j]);
  EXPECT_LE(b.uniform, top);
  EXPECT_EQ(top, 7);
  bool some = false;
  for (long j = 1; j <= 4; ++j) some = some || d.A[j] >= b.per_index[j];
  EXPECT_TRUE(some);

  // M f_0 <= f(0): flagged, not clamped.
  b = finite_spectrum_lower(n, 4, 4, f);
  EXPECT_TRUE(b.vacuous);
  EXPECT_LT(b.mass, 0);
}

TEST(FiniteSpectrum, Preconditions) {
  const auto neg = PolynomialInBasis::from_coefficients(4, ints({3, -1, 0, 0, 0}));
  try {
    finite_spectrum_lower(4, 4, 2, neg);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.index(), 1);
  }
  const auto f = PolynomialInBasis::from_coefficients(4, ints({1, 1, 0, 0, 0}));  // 5,3,1,-1,-3
  EXPECT_NO_THROW(finite_spectrum_lower(4, 4, 2, f));
  try {
    finite_spectrum_lower(4, 4, 3, f);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.index(), 3);
  }
  try {
    finite_spectrum_lower(4, 4, 1, f);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.index(), 2);
  }
  EXPECT_THROW(finite_spectrum_lower(5, 4, 1, f), DomainError);
}

TEST(FiniteSpectrum, NeverViolatedOnRandomCodes) {
  std::mt19937_64 rng(61);
  int codes = 0, checks = 0;
  while (codes < 100) {
    const long n = 4 + static_cast<long>(rng() % 9);
    // Random polynomial with f_k >= 0 (k = 1..3); keep it if its sign
    // pattern is + ... + - ... -.
    std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
    c[0] = static_cast<long>(rng() % 21) - 10;
    for (long k = 1; k <= 3; ++k) c[k] = make_rational(static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 3));
    const auto f = PolynomialInBasis::from_coefficients(n, c);
    long w = -1;
    while (w + 1 <= n && f.value(w + 1) > 0) ++w;
    bool ok = w >= 1;
    for (long i = w + 1; i <= n && ok; ++i) ok = f.value(i) <= 0;
    if (!ok) continue;
    std::vector<Word> words;
    const long m = 2 + static_cast<long>(rng() % std::min<long>(50, (1L << n) - 1));
    std::unordered_set<Word> seen;
    while (static_cast<long>(words.size()) < m) {
      const Word x = rng() & ((Word{1} << n) - 1);
      if (seen.insert(x).second) words.push_back(x);
    }
    const auto d = distance_distribution(BinaryCode(n, words));
    const auto b = finite_spectrum_lower(n, m, w, f);
    Rational top = 0;
    bool some = false;
    for (long j = 1; j <= w; ++j) {
      top = std::max(top, d.A[j]);
      some = some || d.A[j] >= b.per_index[j];
    }
    ASSERT_GE(top, b.uniform);
    ASSERT_TRUE(some);
    ++codes;
    checks += b.vacuous ? 0 : 1;
  }
  EXPECT_GT(checks, 10);
}

TEST(HammingSpectrum, Examples) {
  for (double tau : {0.01, 0.05, 0.1}) EXPECT_EQ(hamming_spectrum_exponent(0.5, tau, 0.0), 0.5 - entropy2(tau));
  EXPECT_NEAR(hamming_spectrum_exponent(0.5, inverse_entropy2(0.5), 0.0), 0.0, 1e-12);
  EXPECT_EQ(hamming_spectrum_exponent(0.5, 0.0, 0.3), 0.5);
  // Independent Gauss-Kronrod quadrature of the integrand.
  const double tau = 0.05, xi = 0.2, l = 1 - 2 * tau;
  auto g = [l](double y) { return std::log2((l + std::sqrt(l * l - 4 * y * (1 - y))) / (2 - 2 * y)); };
  const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, xi, 15, 1e-12);
  EXPECT_NEAR(hamming_spectrum_exponent(0.5, tau, xi), 0.5 - h2(tau) - 2 * I, 1e-8);
  EXPECT_THROW(hamming_spectrum_exponent(0.5, 0.2, 0.1), DomainError);
  EXPECT_THROW(hamming_spectrum_exponent(0.5, 0.05, 0.4), DomainError);
  EXPECT_THROW(hamming_spectrum_exponent(1.5, 0.05, 0.1), DomainError);
}

TEST(HammingSpectrum, MonotoneInXi) {
  // The integrand is negative, so the exponent grows with xi.
  for (double tau : {0.02, 0.05, 0.1}) {
    double prev = -1;
    const double top = krawtchouk_zero_abscissa(tau);
    for (int i = 0; i <= 40; ++i) {
      const double v = hamming_spectrum_exponent(0.5, tau, top * i / 40);
      EXPECT_GE(v, prev - 1e-12);
      prev = v;
    }
  }
}

TEST(HammingSpectrum, BestOverTau) {
  auto curve = hamming_spectrum_best(0.5, 26);
  ASSERT_EQ(curve.size(), 26u);
  EXPECT_NEAR(curve.front().exponent, 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(curve.back().xi, 0.5);
  for (const auto& p : curve) {
    // tau = 0 is always admissible and gives R; no tau beats it.
    EXPECT_GE(p.exponent, 0.5 - 1e-12);
    EXPECT_LE(p.exponent, 0.5 + 1e-9);
  }
  const auto at_gv = hamming_spectrum_point(0.5, gv_delta(0.5));
  // The random-coding exponent H2(xi) - (1 - R) vanishes at the GV distance.
  EXPECT_GE(at_gv.exponent, h2(gv_delta(0.5)) - 0.5 - 1e-9);
}

TEST(HammingSpectrum, RandomLinearCodesPerTau) {
  // For each tau some j/n <= 1/2 - sqrt(tau(1-tau)) carries the promised
  // exponent up to the o(1) slack.
  std::mt19937_64 rng(71);
  const long n = 24, k = 12;
  for (int t = 0; t < 20; ++t) {
    const auto words = span(k, rng, n);
    const auto d = distance_distribution(BinaryCode(n, words));
    for (double tau : {0.0, 0.02, 0.05, 0.08, 0.11}) {
      const double top = krawtchouk_zero_abscissa(tau);
      double best_gap = -1e9;
      for (long j = 0; j <= n && static_cast<double>(j) / n <= top; ++j) {
        if (d.A[j] == 0) continue;
        const double e = log2_abs(d.A[j]) / n;
        best_gap = std::max(best_gap, e - hamming_spectrum_exponent(0.5, tau, static_cast<double>(j) / n));
      }
      EXPECT_GE(best_gap, -0.15) << "code " << t << " tau " << tau;
    }
  }
}

TEST(BinomialMoment, Examples) {
  EXPECT_NEAR(binom_moment_exponent(0.5, 0.5).exponent, 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(binom_moment_exponent(0.5, 1.0).exponent, -0.5);
  const double dl = mrrw_delta(0.5);
  auto b = binom_moment_exponent(0.5, 0.3);
  EXPECT_DOUBLE_EQ(b.omega_star, 0.3);
  EXPECT_NEAR(b.exponent, 0.5 - 1 + h2(0.3) + 0.7 * h2(0.4 / 0.7), 1e-12);
  b = binom_moment_exponent(0.5, 0.6 * dl);
  EXPECT_DOUBLE_EQ(b.omega_star, dl);
  EXPECT_NEAR(b.exponent, -0.5 + h2(dl) + (1 - dl) * h2((1 - 1.2 * dl) / (1 - dl)), 1e-12);
  EXPECT_THROW(binom_moment_exponent(0.5, 0.4 * dl), DomainError);
  EXPECT_THROW(binom_moment_exponent(0.5, 0.7), DomainError);
}

TEST(BinomialMoment, ContinuousAtDeltaLp) {
  for (double R : {0.1, 0.3, 0.5, 0.8}) {
    const double dl = mrrw_delta(R);
    const double left = binom_moment_exponent(R, dl * (1 - 1e-12)).exponent;
    const double right = binom_moment_exponent(R, dl).exponent;
    EXPECT_LT(std::fabs(left - right), 1e-9) << R;
  }
}

TEST(SphereSpectrum, Examples) {
  EXPECT_NEAR(sphere_spectrum_exponent(0.5, 0.1, 1.0), 0.5 - rho_rate(0.1), 1e-15);
  for (double x : {0.0, 0.3, 1.0}) EXPECT_EQ(sphere_spectrum_exponent(0.5, 0.0, x), 0.5);
  const double g = 0.1 * 1.1;
  auto integrand = [g](double z) { return 1.0 / (z + std::sqrt(std::max(0.0, z * z - 4 * (1 - z * z) * g))); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double I = ts.integrate(integrand, 0.7, 1.0);
  const double h = -(0.1 / 1.1) * std::log(0.1 / 1.1) - (1 / 1.1) * std::log(1 / 1.1);
  EXPECT_NEAR(sphere_spectrum_exponent(0.5, 0.1, 0.7), 4 * g * I - 1.1 * h + 0.5, 1e-8);
  EXPECT_THROW(sphere_spectrum_exponent(0.5, 0.5, 0.9), DomainError);
  EXPECT_THROW(sphere_spectrum_exponent(0.5, 0.1, 0.2), DomainError);
  EXPECT_THROW(sphere_spectrum_exponent(-0.5, 0.0, 0.2), DomainError);
}

TEST(SphereSpectrum, NonincreasingInX) {
  for (double R : {0.2, 0.5, 1.0}) {
    const double rho = solve_rho(R);
    for (double frac : {0.25, 0.5, 1.0}) {
      const double gamma = rho * frac;
      const double lo = sphere_x_min(gamma);
      double prev = 1e9;
      for (int i = 0; i <= 30; ++i) {
        const double x = lo + (1 - lo) * i / 30;
        const double v = sphere_spectrum_exponent(R, gamma, x);
        EXPECT_LE(v, prev + 1e-12);
        prev = v;
      }
    }
  }
}

TEST(Theorem2, ConstantAndSingleSegment) {
  PartitionSpec part{-1.0, 0.5, 4};
  auto r = theorem2_bound(10, 3, {1.0}, part);
  EXPECT_NEAR(r.bound, 9.0 / 4.0, 1e-12);
  EXPECT_FALSE(r.vacuous);
  part.m = 1;
  r = theorem2_bound(10, 3, {1.0}, part);
  EXPECT_NEAR(r.bound, 9.0, 1e-12);
  EXPECT_EQ(r.segment, 0);
}

TEST(Theorem2, TriangleOnGreatCircle) {
  // Three unit vectors at 120 degrees in R^3: all inner products -1/2, so
  // d^2 = 3 and t(d) = -1/2.
  const double M = 3;
  for (long m : {1L, 2L, 5L}) {
    PartitionSpec part{-1.0, -0.5, m};
    const auto r = theorem2_bound(M, 3, {1.0, 1.0}, part);  // f = 1 + x
    std::vector<double> density(static_cast<std::size_t>(m), 0.0);
    for (long i = 0; i < m; ++i)
      if (-0.5 >= part.point(i) - 1e-12 && -0.5 <= part.point(i + 1) + 1e-12) density[i] = 6.0 / M;
    EXPECT_LE(r.bound, *std::max_element(density.begin(), density.end()) + 1e-12);
    EXPECT_NEAR(r.s, -0.5, 1e-9);
    EXPECT_NEAR(r.bound, (M - 2.0) / (m * 0.5), 1e-9);
  }
}

TEST(Theorem2, SignChecks) {
  PartitionSpec part{0.0, 0.5, 2};
  // f = x is negative left of 0 and positive right of 0 (dim 3, Legendre).
  EXPECT_NO_THROW(theorem2_bound(5, 3, {0.0, 1.0}, part));
  part.u0 = -0.5;
  EXPECT_THROW(theorem2_bound(5, 3, {0.0, 1.0}, part), PreconditionError);
  EXPECT_THROW(theorem2_bound(5, 3, {1.0, -1.0}, part), PreconditionError);
  EXPECT_THROW(theorem2_bound(5, 1, {1.0}, part), DomainError);
  EXPECT_THROW(theorem2_bound(5, 3, {1.0}, PartitionSpec{0.5, 0.2, 2}), DomainError);
}
