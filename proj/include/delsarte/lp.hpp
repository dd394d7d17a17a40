#pragma once

// Exact rational linear programming (two-phase simplex, Bland's rule) and
// the Delsarte linear programs of the Hamming and Johnson spaces.

#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "delsarte/errors.hpp"
#include "delsarte/numerics.hpp"
#include "delsarte/orthopoly.hpp"

namespace delsarte {

enum class Sense { LessEqual, GreaterEqual, Equal };

/// maximize c.x subject to rows[i].x (sense_i) rhs_i, x >= 0.
struct LPInstance {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> rows;
  std::vector<Sense> senses;
  std::vector<Rational> rhs;
  /// Constant added to the objective value (not part of the LP proper).
  Rational offset = 0;

  std::size_t variables() const { return objective.size(); }
  std::size_t constraints() const { return rows.size(); }

  void validate() const {
    if (senses.size() != rows.size() || rhs.size() != rows.size())
      throw DomainError("LPInstance: rows, senses and rhs differ in length");
    for (const auto& r : rows)
      if (r.size() != objective.size())
        throw DomainError("LPInstance: row length differs from objective length");
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  /// Objective value including `offset`.
  Rational value = 0;
  std::vector<Rational> primal;
  /// One multiplier per constraint: >= 0 on <= rows, <= 0 on >= rows.
  std::vector<Rational> dual;
  std::size_t pivots = 0;
};

/// Exact optimality certificate: primal feasibility, dual feasibility
/// (A^T y >= c with sign-restricted y) and b.y == c.x.
inline bool verify_certificate(const LPInstance& lp, const LPSolution& s) {
  if (s.status != LPStatus::Optimal) return false;
  const std::size_t m = lp.constraints(), nv = lp.variables();
  if (s.primal.size() != nv || s.dual.size() != m) return false;
  for (const auto& x : s.primal)
    if (x < 0) return false;
  for (std::size_t i = 0; i < m; ++i) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < nv; ++j) lhs += lp.rows[i][j] * s.primal[j];
    switch (lp.senses[i]) {
      case Sense::LessEqual:
        if (lhs > lp.rhs[i] || s.dual[i] < 0) return false;
        break;
      case Sense::GreaterEqual:
        if (lhs < lp.rhs[i] || s.dual[i] > 0) return false;
        break;
      case Sense::Equal:
        if (lhs != lp.rhs[i]) return false;
        break;
    }
  }
  for (std::size_t j = 0; j < nv; ++j) {
    Rational col = 0;
    for (std::size_t i = 0; i < m; ++i) col += lp.rows[i][j] * s.dual[i];
    if (col < lp.objective[j]) return false;
  }
  Rational primal_value = lp.offset, dual_value = lp.offset;
  for (std::size_t j = 0; j < nv; ++j) primal_value += lp.objective[j] * s.primal[j];
  for (std::size_t i = 0; i < m; ++i) dual_value += lp.rhs[i] * s.dual[i];
  return primal_value == dual_value && primal_value == s.value;
}

namespace detail {

// Dense tableau over the standard form [A | slack | artificial] x = b, b >= 0.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t cols)
      : m_(m), cols_(cols), t_(m, std::vector<Rational>(cols + 1, Rational(0))), basis_(m) {}

  Rational& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  Rational& rhs(std::size_t i) { return t_[i][cols_]; }
  std::size_t& basic(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return m_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || t_[i][c] == 0) continue;
      const Rational f = t_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  // Maximize cost.x over columns with allowed[j]; Bland's rule throughout.
  // Returns false when unbounded.
  bool optimize(const std::vector<Rational>& cost, const std::vector<char>& allowed,
                std::size_t& pivots) {
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
        if (!allowed[j]) continue;
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i)
          if (t_[i][j] != 0) reduced -= cost[basis_[i]] * t_[i][j];
        if (reduced > 0) enter = j;
      }
      if (enter == cols_) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        const Rational ratio = t_[i][cols_] / t_[i][enter];
        if (leave == m_ || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

 private:
  std::size_t m_, cols_;
  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
};

// Solve B^T y = c_B exactly for the basis columns of the standard-form
// matrix `a` (m x cols).
inline std::vector<Rational> basis_duals(const std::vector<std::vector<Rational>>& a,
                                         const std::vector<std::size_t>& basis,
                                         const std::vector<Rational>& cost) {
  const std::size_t m = basis.size();
  // Rows of the system: for each basic column j, sum_i a[i][j] y_i = cost[j].
  std::vector<std::vector<Rational>> sys(m, std::vector<Rational>(m + 1));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < m; ++i) sys[r][i] = a[i][basis[r]];
    sys[r][m] = cost[basis[r]];
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && sys[piv][col] == 0) ++piv;
    if (piv == m) throw Error("simplex: singular basis");
    std::swap(sys[piv], sys[col]);
    const Rational p = sys[col][col];
    for (auto& v : sys[col]) v /= p;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || sys[r][col] == 0) continue;
      const Rational f = sys[r][col];
      for (std::size_t j = col; j <= m; ++j) sys[r][j] -= f * sys[col][j];
    }
  }
  std::vector<Rational> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = sys[i][m];
  return y;
}

}  // namespace detail

/// Two-phase exact simplex. An optimal answer is returned only after
/// `verify_certificate` accepts it.
inline LPSolution simplex_solve(const LPInstance& lp) {
  lp.validate();
  const std::size_t m = lp.constraints(), nv = lp.variables();

  // Standard form with nonnegative right-hand sides.
  std::vector<int> flip(m, 1);
  std::vector<Sense> sense = lp.senses;
  for (std::size_t i = 0; i < m; ++i)
    if (lp.rhs[i] < 0) {
      flip[i] = -1;
      if (sense[i] == Sense::LessEqual)
        sense[i] = Sense::GreaterEqual;
      else if (sense[i] == Sense::GreaterEqual)
        sense[i] = Sense::LessEqual;
    }
  std::size_t slacks = 0, artificials = 0;
  for (auto s : sense) {
    if (s != Sense::Equal) ++slacks;
    if (s != Sense::LessEqual) ++artificials;
  }
  const std::size_t cols = nv + slacks + artificials;
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(cols, Rational(0)));
  std::vector<Rational> b(m);
  std::vector<std::size_t> start_basis(m);
  std::vector<char> is_artificial(cols, 0);
  {
    std::size_t s = nv, art = nv + slacks;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < nv; ++j) a[i][j] = lp.rows[i][j] * flip[i];
      b[i] = lp.rhs[i] * flip[i];
      if (sense[i] == Sense::LessEqual) {
        a[i][s] = 1;
        start_basis[i] = s++;
      } else {
        if (sense[i] == Sense::GreaterEqual) a[i][s++] = -1;
        a[i][art] = 1;
        is_artificial[art] = 1;
        start_basis[i] = art++;
      }
    }
  }

  detail::Tableau tab(m, cols);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < cols; ++j) tab.at(i, j) = a[i][j];
    tab.rhs(i) = b[i];
    tab.basic(i) = start_basis[i];
  }

  LPSolution sol;
  std::vector<char> allowed(cols, 1);
  if (artificials > 0) {
    std::vector<Rational> phase1(cols, Rational(0));
    for (std::size_t j = 0; j < cols; ++j)
      if (is_artificial[j]) phase1[j] = -1;
    tab.optimize(phase1, allowed, sol.pivots);
    Rational infeasibility = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (is_artificial[tab.basic(i)]) infeasibility += tab.rhs(i);
    if (infeasibility > 0) {
      sol.status = LPStatus::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial[tab.basic(i)]) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (!is_artificial[j] && tab.at(i, j) != 0) {
          tab.pivot(i, j);
          ++sol.pivots;
          break;
        }
    }
    for (std::size_t j = 0; j < cols; ++j)
      if (is_artificial[j]) allowed[j] = 0;
  }

  std::vector<Rational> cost(cols, Rational(0));
  for (std::size_t j = 0; j < nv; ++j) cost[j] = lp.objective[j];
  if (!tab.optimize(cost, allowed, sol.pivots)) {
    sol.status = LPStatus::Unbounded;
    return sol;
  }

  sol.status = LPStatus::Optimal;
  sol.primal.assign(nv, Rational(0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    basis[i] = tab.basic(i);
    if (basis[i] < nv) sol.primal[basis[i]] = tab.rhs(i);
  }
  const auto y = detail::basis_duals(a, basis, cost);
  sol.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.dual[i] = y[i] * flip[i];
  sol.value = lp.offset;
  for (std::size_t j = 0; j < nv; ++j) sol.value += lp.objective[j] * sol.primal[j];
  if (!verify_certificate(lp, sol)) throw Error("simplex: optimality certificate failed");
  return sol;
}

/// Plain-text export: a header line `maximize` with the objective
/// coefficients, then one line per constraint `coefs... <=|>=|= rhs`,
/// numbers as exact rationals "p/q". A final `offset` line carries the
/// objective constant.
inline void write_lp(std::ostream& out, const LPInstance& lp) {
  lp.validate();
  out << "maximize";
  for (const auto& c : lp.objective) out << ' ' << to_string(c);
  out << '\n';
  for (std::size_t i = 0; i < lp.constraints(); ++i) {
    for (const auto& v : lp.rows[i]) out << to_string(v) << ' ';
    out << (lp.senses[i] == Sense::LessEqual      ? "<="
            : lp.senses[i] == Sense::GreaterEqual ? ">="
                                                  : "=")
        << ' ' << to_string(lp.rhs[i]) << '\n';
  }
  out << "offset " << to_string(lp.offset) << '\n';
}

inline LPInstance read_lp(std::istream& in) {
  LPInstance lp;
  std::string line;
  long lineno = 0;
  auto parse_q = [&](const std::string& tok) {
    Rational q;
    if (q.set_str(tok, 10) != 0 || q.get_den() == 0)
      throw ParseError("line " + std::to_string(lineno) + ": bad rational '" + tok + "'", lineno);
    q.canonicalize();
    return q;
  };
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ss >> tok) toks.push_back(tok);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "maximize") {
      for (std::size_t i = 1; i < toks.size(); ++i) lp.objective.push_back(parse_q(toks[i]));
      header = true;
      continue;
    }
    if (!header) throw ParseError("line " + std::to_string(lineno) + ": expected 'maximize'", lineno);
    if (toks[0] == "offset") {
      if (toks.size() != 2) throw ParseError("line " + std::to_string(lineno) + ": bad offset line", lineno);
      lp.offset = parse_q(toks[1]);
      continue;
    }
    if (toks.size() != lp.objective.size() + 2)
      throw ParseError("line " + std::to_string(lineno) + ": wrong number of coefficients", lineno);
    std::vector<Rational> row;
    for (std::size_t i = 0; i < lp.objective.size(); ++i) row.push_back(parse_q(toks[i]));
    const std::string& s = toks[lp.objective.size()];
    Sense sense;
    if (s == "<=")
      sense = Sense::LessEqual;
    else if (s == ">=")
      sense = Sense::GreaterEqual;
    else if (s == "=")
      sense = Sense::Equal;
    else
      throw ParseError("line " + std::to_string(lineno) + ": bad sense '" + s + "'", lineno);
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(sense);
    lp.rhs.push_back(parse_q(toks.back()));
  }
  if (!header) throw ParseError("missing 'maximize' line", lineno);
  lp.validate();
  return lp;
}

// ---------------------------------------------------------------------------
// Delsarte programs

inline constexpr long kMaxLPLength = 128;

struct DelsarteBound {
  Rational value;
  /// Optimal distance distribution A_0..A_n (Johnson: indexed by d/2).
  std::vector<Rational> distribution;
  /// Optimal polynomial in the orthogonal basis, f_0 = 1.
  std::vector<Rational> f;
  /// f(0..n) (Johnson: f at distance indices 0..v).
  std::vector<Rational> f_values;
  LPInstance instance;
  LPSolution solution;
  std::string normalization;
};

/// max 1 + sum_{i>=d} A_i  s.t.  sum_{i>=d} A_i (-K_k(i)) <= C(n,k), k = 1..n.
inline LPInstance delsarte_lp_hamming_instance(long n, long d) {
  if (n < 1 || d < 1 || d > n) throw DomainError("delsarte_lp_hamming: requires 1 <= d <= n");
  if (n > kMaxLPLength) throw ResourceError("delsarte_lp_hamming: n exceeds the configured limit");
  const auto kmat = krawtchouk_matrix(n);  // kmat[i][k]
  LPInstance lp;
  lp.objective.assign(static_cast<std::size_t>(n - d + 1), Rational(1));
  lp.offset = 1;
  for (long k = 1; k <= n; ++k) {
    std::vector<Rational> row;
    for (long i = d; i <= n; ++i) row.emplace_back(-kmat[i][k]);
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(Sense::LessEqual);
    lp.rhs.emplace_back(binomial_integer(n, k));
  }
  return lp;
}

inline DelsarteBound delsarte_lp_hamming_full(long n, long d) {
  DelsarteBound out;
  out.instance = delsarte_lp_hamming_instance(n, d);
  out.solution = simplex_solve(out.instance);
  if (out.solution.status != LPStatus::Optimal) throw Error("delsarte_lp_hamming: LP not optimal");
  out.value = out.solution.value;
  out.distribution.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  out.distribution[0] = 1;
  for (long i = d; i <= n; ++i) out.distribution[i] = out.solution.primal[i - d];
  out.f.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  out.f[0] = 1;
  for (long k = 1; k <= n; ++k) out.f[k] = out.solution.dual[k - 1];
  const auto kmat = krawtchouk_matrix(n);
  out.f_values.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  for (long i = 0; i <= n; ++i)
    for (long k = 0; k <= n; ++k) out.f_values[i] += out.f[k] * Rational(kmat[i][k]);
  out.normalization = "K_k(0)=C(n,k)";
  return out;
}

/// Delsarte LP bound on A(n, d).
inline Rational delsarte_lp_hamming(long n, long d) {
  return delsarte_lp_hamming_full(n, d).value;
}

/// Johnson space J^{n,v}, distance 2*d_half: variables B_i (i = d_half..v),
/// max 1 + sum B_i  s.t.  sum_i B_i (-Q_k(i)) <= Q_k(0), k = 1..v.
inline LPInstance delsarte_lp_johnson_instance(long n, long v, long d_half) {
  if (v < 1 || 2 * v > n || d_half < 1 || d_half > v)
    throw DomainError("delsarte_lp_johnson: requires 1 <= d_half <= v <= n/2");
  if (n > kMaxLPLength) throw ResourceError("delsarte_lp_johnson: n exceeds the configured limit");
  std::vector<std::vector<Rational>> q;  // q[i][k]
  for (long i = 0; i <= v; ++i) q.push_back(hahn_column(n, v, v, Rational(i)));
  LPInstance lp;
  lp.objective.assign(static_cast<std::size_t>(v - d_half + 1), Rational(1));
  lp.offset = 1;
  for (long k = 1; k <= v; ++k) {
    std::vector<Rational> row;
    for (long i = d_half; i <= v; ++i) row.push_back(-q[i][k]);
    lp.rows.push_back(std::move(row));
    lp.senses.push_back(Sense::LessEqual);
    lp.rhs.push_back(q[0][k]);
  }
  return lp;
}

inline DelsarteBound delsarte_lp_johnson_full(long n, long v, long d_half) {
  DelsarteBound out;
  out.instance = delsarte_lp_johnson_instance(n, v, d_half);
  out.solution = simplex_solve(out.instance);
  if (out.solution.status != LPStatus::Optimal) throw Error("delsarte_lp_johnson: LP not optimal");
  out.value = out.solution.value;
  out.distribution.assign(static_cast<std::size_t>(v) + 1, Rational(0));
  out.distribution[0] = 1;
  for (long i = d_half; i <= v; ++i) out.distribution[i] = out.solution.primal[i - d_half];
  out.f.assign(static_cast<std::size_t>(v) + 1, Rational(0));
  out.f[0] = 1;
  for (long k = 1; k <= v; ++k) out.f[k] = out.solution.dual[k - 1];
  out.f_values.assign(static_cast<std::size_t>(v) + 1, Rational(0));
  for (long i = 0; i <= v; ++i) {
    const auto col = hahn_column(n, v, v, Rational(i));
    for (long k = 0; k <= v; ++k) out.f_values[i] += out.f[k] * col[k];
  }
  out.normalization = HahnFamily::normalization;
  return out;
}

inline Rational delsarte_lp_johnson(long n, long v, long d_half) {
  return delsarte_lp_johnson_full(n, v, d_half).value;
}

struct EliasResult {
  Rational value;
  long v = 0;  // minimizing weight; 0 means the trivial bound 2^n
};

/// min over 1 <= v <= n/2 of 2^n J(v) / C(n,v), and the trivial 2^n.
inline EliasResult elias_translate(long n, long d,
                                   const std::function<Rational(long)>& johnson_bound) {
  if (n < 1 || d < 1 || d > n) throw DomainError("elias_translate: requires 1 <= d <= n");
  EliasResult best{Rational(Integer(1) << static_cast<unsigned long>(n)), 0};
  const Rational space = best.value;
  for (long v = 1; 2 * v <= n; ++v) {
    const Rational val = space * johnson_bound(v) / binomial(n, v);
    if (val < best.value) best = {val, v};
  }
  return best;
}

/// Elias translation fed by the Johnson LP; weights with d > 2v contribute
/// the trivial single-word bound J = 1.
inline EliasResult elias_lp_bound(long n, long d) {
  return elias_translate(n, d, [&](long v) -> Rational {
    const long d_half = (d + 1) / 2;
    if (d_half > v) return Rational(1);
    return delsarte_lp_johnson(n, v, d_half);
  });
}

}  // namespace delsarte
