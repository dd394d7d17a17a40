#pragma once

// Explicit binary codes, distance distributions, the MacWilliams transform
// and the finite-length consequences of the Delsarte inequalities.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "delsarte/clique.hpp"
#include "delsarte/errors.hpp"
#include "delsarte/numerics.hpp"
#include "delsarte/orthopoly.hpp"

namespace delsarte {

using Word = std::uint64_t;

inline int weight(Word w) { return std::popcount(w); }
inline int hamming_distance(Word a, Word b) { return std::popcount(a ^ b); }

/// A set of distinct length-n binary words, n <= 64. Bit j of a word is its
/// j-th coordinate (leftmost character of the text form is bit 0).
class BinaryCode {
 public:
  static constexpr long kMaxLength = 64;

  BinaryCode(long n, std::vector<Word> words) : n_(n), words_(std::move(words)) {
    if (n < 1 || n > kMaxLength)
      throw ResourceError("BinaryCode: length must be in [1, 64]");
    if (words_.empty()) throw DomainError("BinaryCode: a code needs at least one word");
    const Word mask = n == 64 ? ~Word{0} : ((Word{1} << n) - 1);
    std::unordered_set<Word> seen;
    for (Word w : words_) {
      if (w & ~mask) throw DomainError("BinaryCode: word longer than n");
      if (!seen.insert(w).second) throw DomainError("BinaryCode: duplicate word");
    }
  }

  static BinaryCode from_strings(const std::vector<std::string>& rows) {
    if (rows.empty()) throw DomainError("BinaryCode: no words");
    std::vector<Word> words;
    const long n = static_cast<long>(rows.front().size());
    for (const auto& r : rows) {
      if (static_cast<long>(r.size()) != n)
        throw DomainError("BinaryCode: words of unequal length");
      words.push_back(parse_word(r));
    }
    return BinaryCode(n, std::move(words));
  }

  static Word parse_word(const std::string& s) {
    Word w = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] == '1')
        w |= Word{1} << j;
      else if (s[j] != '0')
        throw DomainError("BinaryCode: words are strings over {0,1}");
    }
    return w;
  }

  static std::string format_word(Word w, long n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (long j = 0; j < n; ++j)
      if ((w >> j) & 1u) s[static_cast<std::size_t>(j)] = '1';
    return s;
  }

  long length() const { return n_; }
  long size() const { return static_cast<long>(words_.size()); }
  const std::vector<Word>& words() const { return words_; }

  /// Minimum distance; n + 1 for a one-word code.
  long min_distance() const {
    long d = n_ + 1;
    for (std::size_t i = 0; i < words_.size(); ++i)
      for (std::size_t j = i + 1; j < words_.size(); ++j)
        d = std::min<long>(d, hamming_distance(words_[i], words_[j]));
    return d;
  }

 private:
  long n_;
  std::vector<Word> words_;
};

/// Read the text code format: one 0/1 word per line, '#' comment lines and
/// blank lines skipped, all words of equal length.
inline BinaryCode read_code(std::istream& in) {
  std::vector<Word> words;
  std::unordered_set<Word> seen;
  long n = -1;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line[0] == '#') continue;
    if (line.find_first_not_of("01") != std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": not a 0/1 word", lineno);
    if (n < 0) {
      n = static_cast<long>(line.size());
      if (n > BinaryCode::kMaxLength)
        throw ResourceError("line " + std::to_string(lineno) + ": word longer than 64");
    } else if (static_cast<long>(line.size()) != n) {
      throw ParseError("line " + std::to_string(lineno) + ": ragged word length", lineno);
    }
    const Word w = BinaryCode::parse_word(line);
    if (!seen.insert(w).second)
      throw ParseError("line " + std::to_string(lineno) + ": duplicate word", lineno);
    words.push_back(w);
  }
  if (words.empty()) throw ParseError("no codewords in input", lineno);
  return BinaryCode(n, std::move(words));
}

inline BinaryCode read_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open " + path);
  return read_code(in);
}

// ---------------------------------------------------------------------------
// Distributions

/// A_i = |{(c, c') in C^2 : d(c, c') = i}| / |C|, i = 0..n.
struct DistanceDistribution {
  long n = 0;
  std::vector<Rational> A;

  Rational size() const {
    Rational s = 0;
    for (const auto& a : A) s += a;
    return s;
  }
};

/// A' = A K / |C|.
struct DualDistribution {
  long n = 0;
  std::vector<Rational> A_prime;
};

inline DistanceDistribution distance_distribution(const BinaryCode& c) {
  const long n = c.length();
  std::vector<long> counts(static_cast<std::size_t>(n) + 1, 0);
  const auto& w = c.words();
  for (std::size_t i = 0; i < w.size(); ++i) {
    ++counts[0];
    for (std::size_t j = i + 1; j < w.size(); ++j)
      counts[static_cast<std::size_t>(hamming_distance(w[i], w[j]))] += 2;
  }
  DistanceDistribution d{n, {}};
  for (long v : counts) d.A.push_back(make_rational(v, c.size()));
  return d;
}

/// Weight distribution (number of words of each weight).
inline std::vector<Rational> weight_distribution(const BinaryCode& c) {
  std::vector<Rational> out(static_cast<std::size_t>(c.length()) + 1, Rational(0));
  for (Word w : c.words()) out[static_cast<std::size_t>(weight(w))] += 1;
  return out;
}

inline DualDistribution macwilliams(const DistanceDistribution& d,
                                    const Rational& size) {
  if (size <= 0) throw DomainError("macwilliams: code size must be positive");
  const long n = d.n;
  DualDistribution out{n, std::vector<Rational>(static_cast<std::size_t>(n) + 1, Rational(0))};
  for (long i = 0; i <= n; ++i) {
    if (d.A[i] == 0) continue;
    const auto col = krawtchouk_column_integer(n, n, i);
    for (long k = 0; k <= n; ++k) out.A_prime[k] += d.A[i] * Rational(col[k]);
  }
  for (auto& a : out.A_prime) a /= size;
  return out;
}

struct FeasibilityResult {
  bool feasible = true;
  std::optional<long> violating_index;
  DualDistribution dual;
};

/// Delsarte inequalities A'_k >= 0, checked exactly.
inline FeasibilityResult delsarte_feasible(const DistanceDistribution& d,
                                           const Rational& size) {
  FeasibilityResult r;
  r.dual = macwilliams(d, size);
  for (long k = 0; k <= d.n; ++k) {
    if (r.dual.A_prime[k] < 0) {
      r.feasible = false;
      r.violating_index = k;
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Polynomials in the Krawtchouk basis

/// f = sum_k coeffs[k] K_k, stored with its values f(0..n).
class PolynomialInBasis {
 public:
  static PolynomialInBasis from_coefficients(long n, std::vector<Rational> coeffs) {
    if (static_cast<long>(coeffs.size()) != n + 1)
      throw DomainError("PolynomialInBasis: need n+1 coefficients");
    std::vector<Rational> values(static_cast<std::size_t>(n) + 1, Rational(0));
    for (long i = 0; i <= n; ++i) {
      const auto col = krawtchouk_column_integer(n, n, i);
      for (long k = 0; k <= n; ++k) values[i] += coeffs[k] * Rational(col[k]);
    }
    return PolynomialInBasis(n, std::move(coeffs), std::move(values));
  }

  long n() const { return n_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& coeff(long k) const { return coeffs_[k]; }
  const Rational& value(long i) const { return values_[i]; }

 private:
  friend PolynomialInBasis expand_in_krawtchouk(const std::vector<Rational>&);
  PolynomialInBasis(long n, std::vector<Rational> c, std::vector<Rational> v)
      : n_(n), coeffs_(std::move(c)), values_(std::move(v)) {}
  long n_;
  std::vector<Rational> coeffs_, values_;
};

/// Coefficients of the degree-<=n interpolant of `values` on {0..n}:
/// f_k = (2^n C(n,k))^{-1} sum_i C(n,i) f(i) K_k(i).
inline PolynomialInBasis expand_in_krawtchouk(const std::vector<Rational>& values) {
  if (values.empty()) throw DomainError("expand_in_krawtchouk: empty input");
  const long n = static_cast<long>(values.size()) - 1;
  std::vector<Rational> coeffs(values.size(), Rational(0));
  for (long i = 0; i <= n; ++i) {
    if (values[i] == 0) continue;
    const Rational wi = binomial(n, i) * values[i];
    const auto col = krawtchouk_column_integer(n, n, i);
    for (long k = 0; k <= n; ++k) coeffs[k] += wi * Rational(col[k]);
  }
  Rational two_n = 1;
  for (long j = 0; j < n; ++j) two_n *= 2;
  for (long k = 0; k <= n; ++k) coeffs[k] /= two_n * binomial(n, k);
  return PolynomialInBasis(n, std::move(coeffs), values);
}

// ---------------------------------------------------------------------------
// Weight functions g of Theorem-1-type functionals F = sum_{i>=1} g(i) A_i

enum class WeightTag { UndetectedError, Zero, BinomialMoment, Custom };

struct WeightFunction {
  WeightTag tag = WeightTag::Custom;
  std::vector<Rational> g;  // g(0..n)

  static WeightFunction undetected_error(long n, const Rational& p) {
    WeightFunction w{WeightTag::UndetectedError, {}};
    for (long i = 0; i <= n; ++i) {
      Rational v = 1;
      for (long j = 0; j < i; ++j) v *= p;
      for (long j = 0; j < n - i; ++j) v *= (1 - p);
      w.g.push_back(v);
    }
    return w;
  }
  static WeightFunction zero(long n) {
    return {WeightTag::Zero, std::vector<Rational>(static_cast<std::size_t>(n) + 1, Rational(0))};
  }
  /// g(i) = C(n-i, n-w).
  static WeightFunction binomial_moment(long n, long w) {
    WeightFunction out{WeightTag::BinomialMoment, {}};
    for (long i = 0; i <= n; ++i) out.g.push_back(binomial(n - i, n - w));
    return out;
  }
  static WeightFunction custom(std::vector<Rational> g) {
    return {WeightTag::Custom, std::move(g)};
  }
};

/// Both sides of |C| sum_k f_k A'_k = sum_i f(i) A_i, evaluated separately.
struct IdentitySides {
  Rational lhs;
  Rational rhs;
};

inline IdentitySides fourier_identity_check(const PolynomialInBasis& f,
                                            const BinaryCode& c) {
  if (f.n() != c.length()) throw DomainError("fourier_identity_check: length mismatch");
  const auto d = distance_distribution(c);
  const Rational m(c.size());
  const auto dual = macwilliams(d, m);
  IdentitySides s;
  for (long k = 0; k <= f.n(); ++k) s.lhs += f.coeff(k) * dual.A_prime[k];
  s.lhs *= m;
  for (long i = 0; i <= f.n(); ++i) s.rhs += f.value(i) * d.A[i];
  return s;
}

struct Theorem1Result {
  Rational F;      // sum_{i>=1} g(i) A_i
  Rational lower;  // |C| f_0 - f(0)
};

/// F >= |C| f_0 - f(0) for f with f_k >= 0 (k >= 1) and f(i) <= g(i) at
/// every i >= 1 carrying distance mass (A_i > 0); g(0) does not enter F.
inline Theorem1Result theorem1_bound(const PolynomialInBasis& f,
                                     const WeightFunction& g,
                                     const DistanceDistribution& d,
                                     const Rational& size) {
  const long n = d.n;
  if (f.n() != n || static_cast<long>(g.g.size()) != n + 1)
    throw DomainError("theorem1_bound: length mismatch");
  for (long k = 1; k <= n; ++k)
    if (f.coeff(k) < 0)
      throw PreconditionError("theorem1_bound: f_k < 0 at k=" + std::to_string(k), k);
  for (long i = 1; i <= n; ++i)
    if (d.A[i] != 0 && f.value(i) > g.g[i])
      throw PreconditionError("theorem1_bound: f(i) > g(i) at i=" + std::to_string(i), i);
  Theorem1Result r;
  for (long i = 1; i <= n; ++i) r.F += g.g[i] * d.A[i];
  r.lower = size * f.coeff(0) - f.value(0);
  return r;
}

/// P_ue = sum_{i>=1} A_i p^i (1-p)^{n-i}, exact for rational p.
inline Rational undetected_error_prob(const DistanceDistribution& d,
                                      const Rational& p) {
  if (p < 0 || p > Rational(1, 2))
    throw DomainError("undetected_error_prob: p outside [0, 1/2]");
  const auto w = WeightFunction::undetected_error(d.n, p);
  Rational s = 0;
  for (long i = 1; i <= d.n; ++i) s += d.A[i] * w.g[i];
  return s;
}

inline double undetected_error_prob(const DistanceDistribution& d, double p) {
  if (!(p >= 0.0 && p <= 0.5))
    throw DomainError("undetected_error_prob: p outside [0, 1/2]");
  double s = 0.0;
  const int n = static_cast<int>(d.n);
  for (int i = 1; i <= n; ++i)
    s += to_double(d.A[i]) * std::pow(p, i) * std::pow(1.0 - p, n - i);
  return s;
}

/// F_w = sum_{i=0}^{w} C(n-i, n-w) A_i.
inline Rational binomial_moment(const DistanceDistribution& d, long w) {
  if (w < 0 || w > d.n) throw DomainError("binomial_moment: w outside [0, n]");
  Rational s = 0;
  for (long i = 0; i <= w; ++i) s += binomial(d.n - i, d.n - w) * d.A[i];
  return s;
}

// ---------------------------------------------------------------------------
// Exhaustive maximum codes

struct MaxCodeResult {
  long size = 0;
  std::vector<Word> witness;
  std::uint64_t nodes = 0;
};

namespace detail {

inline Word low_bits(long count) {
  return count >= 64 ? ~Word{0} : ((Word{1} << count) - 1);
}

// Maximum clique among `vertices`, all of which must lie at distance >= d
// from every word of `fixed`; the result includes `fixed`. Only cliques
// beating `at_least` total words are searched for, and the search stops
// once `stop_at` total words are reached.
inline MaxCodeResult max_code_through(const std::vector<Word>& fixed,
                                      const std::vector<Word>& vertices, int d,
                                      std::size_t at_least, std::size_t stop_at,
                                      std::uint64_t node_limit = static_cast<std::uint64_t>(-1),
                                      bool* aborted = nullptr) {
  std::vector<Word> cand;
  for (Word w : vertices) {
    bool ok = true;
    for (Word f : fixed)
      if (hamming_distance(w, f) < d) {
        ok = false;
        break;
      }
    if (ok) cand.push_back(w);
  }
  MaxCodeResult r;
  r.witness = fixed;
  r.size = static_cast<long>(fixed.size());
  if (cand.empty()) return r;
  MaxCliqueSolver solver(cand.size(), [&](std::size_t i, std::size_t j) {
    return hamming_distance(cand[i], cand[j]) >= d;
  });
  CliqueOptions opt;
  opt.at_least = at_least > fixed.size() ? at_least - fixed.size() : 0;
  if (stop_at != static_cast<std::size_t>(-1)) opt.stop_at = stop_at - fixed.size();
  opt.node_limit = node_limit;
  const auto clique = solver.solve(opt);
  r.nodes = solver.nodes();
  if (aborted && solver.aborted()) *aborted = true;
  if (clique.empty()) return r;
  for (auto i : clique) r.witness.push_back(cand[i]);
  r.size = static_cast<long>(r.witness.size());
  return r;
}

using CodeMemo = std::map<std::pair<long, long>, MaxCodeResult>;

inline long max_code_size_memo(long n, long d, CodeMemo& memo);

// Coordinates split into runs that the words fixed so far cannot tell
// apart; permuting inside a run keeps every fixed word in place.
struct CanonicalState {
  std::vector<std::pair<long, long>> blocks;  // (start, length)
  std::vector<Word> fixed;
  long min_weight = 0;
};

struct SearchContext {
  long n = 0;
  long d = 0;
  int depth = 0;
  std::size_t upper = 0;
  MaxCodeResult best;
  std::uint64_t nodes = 0;
  std::uint64_t node_limit = static_cast<std::uint64_t>(-1);
  bool aborted = false;
};

// Every word of weight w that is lexicographically first inside each run:
// the counts of ones per run range over all compositions of w.
inline void for_each_canonical(const std::vector<std::pair<long, long>>& blocks, long w,
                               const std::function<void(Word, const std::vector<long>&)>& f) {
  std::vector<long> ones(blocks.size(), 0);
  std::function<void(std::size_t, long, Word)> rec = [&](std::size_t b, long left, Word word) {
    if (b == blocks.size()) {
      if (left == 0) f(word, ones);
      return;
    }
    long tail = 0;
    for (std::size_t c = b + 1; c < blocks.size(); ++c) tail += blocks[c].second;
    for (long a = std::min(left, blocks[b].second); a >= 0; --a) {
      if (left - a > tail) break;
      ones[b] = a;
      rec(b + 1, left - a, word | (low_bits(a) << blocks[b].first));
    }
  };
  rec(0, w, 0);
}

inline void canonical_extend(SearchContext& ctx, const CanonicalState& st, int level) {
  if (ctx.aborted || ctx.best.size >= static_cast<long>(ctx.upper)) return;
  const long n = ctx.n;
  auto admissible = [&](Word u) {
    for (Word f : st.fixed)
      if (hamming_distance(u, f) < ctx.d) return false;
    return true;
  };
  if (level == ctx.depth) {
    std::vector<Word> rest;
    for (Word u = 1; u < (Word{1} << n); ++u)
      if (weight(u) >= st.min_weight && admissible(u)) rest.push_back(u);
    const std::uint64_t left =
        ctx.node_limit == static_cast<std::uint64_t>(-1) ? ctx.node_limit
                                                         : ctx.node_limit - std::min(ctx.nodes, ctx.node_limit);
    auto r = max_code_through(st.fixed, rest, static_cast<int>(ctx.d),
                              static_cast<std::size_t>(ctx.best.size), ctx.upper, left,
                              &ctx.aborted);
    ctx.nodes += r.nodes;
    if (r.size > ctx.best.size) ctx.best = std::move(r);
    return;
  }
  if (static_cast<long>(st.fixed.size()) > ctx.best.size) {
    ctx.best.size = static_cast<long>(st.fixed.size());
    ctx.best.witness = st.fixed;
  }
  for (long w = st.min_weight; w <= n; ++w) {
    for_each_canonical(st.blocks, w, [&](Word u, const std::vector<long>& ones) {
      if (ctx.aborted || ctx.best.size >= static_cast<long>(ctx.upper)) return;
      if (!admissible(u)) return;
      CanonicalState next;
      next.fixed = st.fixed;
      next.fixed.push_back(u);
      next.min_weight = w;
      for (std::size_t b = 0; b < st.blocks.size(); ++b) {
        const auto [start, len] = st.blocks[b];
        if (ones[b] > 0) next.blocks.emplace_back(start, ones[b]);
        if (len - ones[b] > 0) next.blocks.emplace_back(start + ones[b], len - ones[b]);
      }
      canonical_extend(ctx, next, level + 1);
    });
  }
}

// Tabu search for k words at pairwise distance >= d among `vertices`: keep
// k words, repeatedly swap a conflicting one for the outside word with the
// fewest conflicts. Deterministic for a given seed.
inline std::optional<std::vector<Word>> local_search_code(const std::vector<Word>& vertices,
                                                          long d, std::size_t k,
                                                          std::uint64_t seed,
                                                          std::uint64_t max_iters) {
  const std::size_t nv = vertices.size();
  if (k > nv) return std::nullopt;
  if (k == 0) return std::vector<Word>{};
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> close(nv);
  for (std::size_t u = 0; u < nv; ++u)
    for (std::size_t v = 0; v < nv; ++v)
      if (u != v && hamming_distance(vertices[u], vertices[v]) < d)
        close[u].push_back(static_cast<std::uint32_t>(v));
  std::vector<std::size_t> perm(nv);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<char> member(nv, 0);
  std::vector<long> conflicts(nv, 0);
  std::vector<std::uint64_t> tabu(nv, 0);
  std::vector<std::size_t> set(perm.begin(), perm.begin() + static_cast<long>(k));
  auto add = [&](std::size_t u) {
    member[u] = 1;
    for (auto v : close[u]) ++conflicts[v];
  };
  auto remove = [&](std::size_t u) {
    member[u] = 0;
    for (auto v : close[u]) --conflicts[v];
  };
  for (auto u : set) add(u);
  std::vector<std::size_t> bad;
  for (std::uint64_t it = 1; it <= max_iters; ++it) {
    bad.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (conflicts[set[i]] > 0) bad.push_back(i);
    if (bad.empty()) {
      std::vector<Word> out;
      for (auto u : set) out.push_back(vertices[u]);
      return out;
    }
    const std::size_t slot = bad[rng() % bad.size()];
    const std::size_t u = set[slot];
    std::size_t pick = nv;
    long pick_c = 0;
    std::uint64_t ties = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (member[v]) continue;
      const long c = conflicts[v] - (hamming_distance(vertices[u], vertices[v]) < d ? 1 : 0);
      if (tabu[v] > it && c >= conflicts[u]) continue;
      if (pick == nv || c < pick_c) {
        pick = v;
        pick_c = c;
        ties = 1;
      } else if (c == pick_c && rng() % (++ties) == 0) {
        pick = v;
      }
    }
    if (pick == nv) continue;
    remove(u);
    add(pick);
    set[slot] = pick;
    tabu[u] = it + 10 + rng() % 10;
  }
  return std::nullopt;
}

inline constexpr std::uint64_t kQuickSearchNodes = 50'000;

// Exact A(n, d) for 2 <= d <= n.
//  * For even d, puncturing and parity extension identify A(n, d) with
//    A(n-1, d-1); the witness is the parity-extended shorter code.
//  * Translations are isometries, so some optimal code contains 0.
//  * Repeatedly take the remaining codeword of least weight. Coordinate
//    permutations fixing the words chosen so far bring it to a canonical
//    form (ones first inside every run of indistinguishable coordinates),
//    and all later words are at least as heavy. This is done for a few
//    levels before the clique search takes over.
//  * Splitting by the first coordinate, A(n,d) <= 2 A(n-1,d).
// Reaching an upper bound ends the search.
inline MaxCodeResult max_code_search(long n, long d,
                                     CodeMemo& memo) {
  if (d % 2 == 0) {
    MaxCodeResult r;
    if (d == 2) {
      for (Word u = 0; u < (Word{1} << (n - 1)); ++u) r.witness.push_back(u);
    } else {
      max_code_size_memo(n - 1, d - 1, memo);
      r = memo.at({n - 1, d - 1});
    }
    for (Word& u : r.witness)
      if (weight(u) % 2) u |= Word{1} << (n - 1);
    r.size = static_cast<long>(r.witness.size());
    return r;
  }
  SearchContext ctx;
  ctx.n = n;
  ctx.d = d;
  const long upper = std::min<long>(2 * max_code_size_memo(n - 1, d, memo), 1L << n);
  ctx.upper = static_cast<std::size_t>(upper);
  ctx.depth = 4;
  CanonicalState root;
  root.blocks = {{0, n}};
  root.fixed = {0};
  root.min_weight = d;
  auto run = [&](std::uint64_t limit) {
    ctx.best = {1, {0}, 0};
    ctx.nodes = 0;
    ctx.aborted = false;
    ctx.node_limit = limit;
    canonical_extend(ctx, root, 0);
  };
  // A short exhaustive attempt first; if it runs out of nodes, look for a
  // code meeting the upper bound by local search before the full search.
  run(kQuickSearchNodes);
  if (ctx.aborted) {
    std::vector<Word> space;
    for (Word u = 0; u < (Word{1} << n); ++u) space.push_back(u);
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
      if (auto hit = local_search_code(space, d, ctx.upper, seed, 500'000)) {
        std::sort(hit->begin(), hit->end());
        return {upper, *hit, ctx.nodes};
      }
    run(static_cast<std::uint64_t>(-1));
  }
  ctx.best.nodes = ctx.nodes;
  return ctx.best;
}

inline long max_code_size_memo(long n, long d, CodeMemo& memo) {
  if (d > n) return 1;
  if (d <= 1) return 1L << n;
  auto it = memo.find({n, d});
  if (it != memo.end()) return it->second.size;
  auto r = max_code_search(n, d, memo);
  const long s = r.size;
  memo[{n, d}] = std::move(r);
  return s;
}

}  // namespace detail

inline constexpr long kMaxBruteforceLength = 10;

/// Exact A(n, d) with a witness code.
inline MaxCodeResult bruteforce_max_code(long n, long d,
                                         long limit = kMaxBruteforceLength) {
  if (n > limit) throw ResourceError("bruteforce_max_code: n exceeds the configured limit");
  if (n < 1 || d < 1 || d > n) throw DomainError("bruteforce_max_code: requires 1 <= d <= n");
  if (d == 1) {
    MaxCodeResult r;
    for (Word w = 0; w < (Word{1} << n); ++w) r.witness.push_back(w);
    r.size = static_cast<long>(r.witness.size());
    return r;
  }
  // Sizes found earlier serve as bounds for later calls; the cache is
  // shared by the whole process.
  static std::mutex mutex;
  static detail::CodeMemo memo;
  std::lock_guard<std::mutex> lock(mutex);
  detail::max_code_size_memo(n, d, memo);
  return memo.at({n, d});
}

/// Exact A(J^{n,v}; 2 d_half): largest set of weight-v words with pairwise
/// distance >= 2 d_half.
inline MaxCodeResult bruteforce_max_constant_weight_code(long n, long v, long d_half,
                                                         long limit = kMaxBruteforceLength + 4) {
  if (n > limit) throw ResourceError("bruteforce_max_constant_weight_code: n too large");
  if (v < 0 || v > n || d_half < 1) throw DomainError("bruteforce_max_constant_weight_code: bad parameters");
  std::vector<Word> vertices;
  for (Word w = 0; w < (Word{1} << n); ++w)
    if (weight(w) == v) vertices.push_back(w);
  // The symmetric group acts transitively on J^{n,v}: fix the first word.
  return detail::max_code_through({vertices.front()}, vertices,
                                  static_cast<int>(2 * d_half), 0,
                                  static_cast<std::size_t>(-1));
}

}  // namespace delsarte
