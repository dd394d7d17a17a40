#pragma once

// Command-line front end: verbs, sweeps, table/CSV/JSON rendering and run
// manifests. `dispatch` is the whole program; tools/ only wraps it.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "delsarte/asymptotics.hpp"
#include "delsarte/codes.hpp"
#include "delsarte/errors.hpp"
#include "delsarte/lp.hpp"
#include "delsarte/numerics.hpp"
#include "delsarte/orthopoly.hpp"
#include "delsarte/reliability.hpp"
#include "delsarte/spectra.hpp"

namespace delsarte::cli {

inline constexpr const char* kToolName = "delsarte";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::size_t kMaxSweepPoints = 1'000'000;

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2, kDomain = 3, kResource = 4 };

class UsageError : public Error {
 public:
  using Error::Error;
};

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Extra structured output (JSON only) such as certificates.
  json details = json::object();
  /// Grid densities, normalizations and similar; goes to the manifest.
  json meta = json::object();
  /// For a one-row result in table format print only this column.
  int scalar = -1;
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

inline json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return std::strtod(format_double(*d).c_str(), nullptr);
  }
  if (const auto* l = std::get_if<long>(&c)) return *l;
  return std::get<std::string>(c);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

enum class Format { Table, Csv, Json };

inline Format parse_format(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("unknown format '" + s + "' (table, csv, json)");
}

inline const char* format_name(Format f) {
  return f == Format::Csv ? "csv" : f == Format::Json ? "json" : "table";
}

inline std::string render(const Table& t, Format f) {
  std::ostringstream os;
  switch (f) {
    case Format::Csv: {
      for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << csv_field(t.columns[j]);
      os << '\n';
      for (const auto& r : t.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << csv_field(cell_text(r[j]));
        os << '\n';
      }
      break;
    }
    case Format::Json: {
      json j;
      j["columns"] = t.columns;
      j["rows"] = json::array();
      for (const auto& r : t.rows) {
        json row = json::array();
        for (const auto& c : r) row.push_back(cell_json(c));
        j["rows"].push_back(row);
      }
      if (!t.details.empty()) j["details"] = t.details;
      os << j.dump(2) << '\n';
      break;
    }
    case Format::Table: {
      if (t.scalar >= 0 && t.rows.size() == 1) {
        os << cell_text(t.rows[0][static_cast<std::size_t>(t.scalar)]) << '\n';
        break;
      }
      std::vector<std::size_t> width(t.columns.size());
      for (std::size_t j = 0; j < t.columns.size(); ++j) width[j] = t.columns[j].size();
      std::vector<std::vector<std::string>> text;
      for (const auto& r : t.rows) {
        text.emplace_back();
        for (std::size_t j = 0; j < r.size(); ++j) {
          text.back().push_back(cell_text(r[j]));
          width[j] = std::max(width[j], text.back().back().size());
        }
      }
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
          os << (j ? "  " : "") << std::setw(static_cast<int>(width[j])) << cells[j];
        }
        os << '\n';
      };
      line(t.columns);
      for (const auto& r : text) line(r);
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Sweeps and value parsing

/// "a", "a,b,c" or "start:stop:step" (stop included when it lies on the
/// grid, up to a 1e-9 relative slack).
inline std::vector<double> parse_sweep(const std::string& text) {
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in '" + text + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw UsageError("bad number '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw UsageError("sweep '" + text + "' must be start:stop:step");
    const double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
    if (!(h > 0.0)) throw UsageError("sweep step must be positive in '" + text + "'");
    if (b < a) throw UsageError("sweep stop precedes start in '" + text + "'");
    const double steps = (b - a) / h;
    if (steps + 1.0 > static_cast<double>(kMaxSweepPoints))
      throw ResourceError("sweep '" + text + "' has too many points");
    const auto count = static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * h);
    return out;
  }
  std::string cur;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      out.push_back(num(cur));
      cur.clear();
    } else {
      cur += text[i];
    }
  }
  return out;
}

inline std::vector<long> parse_int_sweep(const std::string& text) {
  std::vector<long> out;
  for (double v : parse_sweep(text)) {
    const double r = std::round(v);
    if (std::fabs(v - r) > 1e-9 || std::fabs(r) > 1e15) throw UsageError("'" + text + "' must list integers");
    out.push_back(static_cast<long>(r));
  }
  return out;
}

/// "3/4", "-2" or a decimal such as "0.125" (read exactly).
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw UsageError("empty rational");
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw UsageError("bad rational '" + s + "'");
    if (q.get_den() == 0) throw UsageError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+") throw UsageError("bad rational '" + s + "'");
  if (digits[0] == '+') digits.erase(0, 1);
  Integer num;
  if (num.set_str(digits, 10) != 0) throw UsageError("bad rational '" + s + "'");
  Integer den = 1;
  for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  return make_rational(num, den);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (s[i] != ' ') {
      cur += s[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parallel rows

/// Computes rows[i] = f(i) on `jobs` threads; the order of the result is
/// the index order whatever the scheduling. The first exception wins.
template <class F>
std::vector<std::vector<Cell>> parallel_rows(std::size_t count, int jobs, F&& f) {
  std::vector<std::vector<Cell>> rows(count);
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = f(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        rows[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

// ---------------------------------------------------------------------------
// Commands

struct Settings {
  Format format = Format::Table;
  std::string out;
  std::string manifest;
  int jobs = 1;
  double tol = kDefaultTolerance;
};

/// DELSARTE_TOL, when set, replaces the default quadrature tolerance.
inline double default_tolerance() {
  if (const char* env = std::getenv("DELSARTE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
      throw UsageError(std::string("DELSARTE_TOL is not a positive number: '") + env + "'");
    return v;
  }
  return kDefaultTolerance;
}

inline std::vector<Cell> rational_cells(const Rational& q) { return {to_string(q), to_double(q)}; }

inline json rational_array(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

namespace detail {

inline void add_rational_columns(std::vector<std::string>& cols, const std::string& name) {
  cols.push_back(name);
  cols.push_back(name + "_float");
}

inline Table poly_kraw(long n, const std::vector<long>& ks, const std::vector<long>& xs) {
  Table t;
  t.columns = {"n", "k", "x"};
  add_rational_columns(t.columns, "value");
  for (long k : ks)
    for (long x : xs) {
      const Rational v = krawtchouk(n, k, x);
      t.rows.push_back({n, k, x, to_string(v), to_double(v)});
    }
  t.scalar = 3;
  t.meta["normalization"] = "K_k(0) = C(n,k)";
  return t;
}

inline Table poly_hahn(long n, long v, const std::vector<long>& ks, const std::vector<long>& is) {
  Table t;
  t.columns = {"n", "v", "k", "i"};
  add_rational_columns(t.columns, "value");
  for (long k : ks)
    for (long i : is) {
      const Rational q = hahn(n, v, k, i);
      t.rows.push_back({n, v, k, i, to_string(q), to_double(q)});
    }
  t.scalar = 4;
  t.meta["normalization"] = HahnFamily::normalization;
  return t;
}

}  // namespace detail

/// One parsed and executed command; nothing written yet.
struct RunResult {
  std::string output;
  Table table;
  Settings settings;
};

class Dispatcher {
 public:
  Dispatcher() = default;

  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

 private:
  RunResult execute(const std::vector<std::string>& args, bool* help, std::string* help_text);
};

namespace detail {

struct Options {
  // shared across leaves; each leaf reads only what it registers
  std::string n, k, x, v, i, d, dhalf, alpha, beta, a, b, tau, xi, r, p, omega, gamma, A, delta;
  std::string file, method = "mrrw", family = "kraw", values, coeffs, bracket = "printed";
  std::string m, dim, u0, top, parts, w, rmin, rmax;
  int grid = 0, inner_grid = 0, samples = 0, xi_points = 0;
};

inline long single_long(const std::string& flag, const std::string& s) {
  const auto v = parse_int_sweep(s);
  if (v.size() != 1) throw UsageError("--" + flag + " takes a single integer");
  return v.front();
}

inline double single_double(const std::string& flag, const std::string& s) {
  const auto v = parse_sweep(s);
  if (v.size() != 1) throw UsageError("--" + flag + " takes a single number");
  return v.front();
}

inline void require(const std::string& flag, const std::string& s) {
  if (s.empty()) throw UsageError("missing required option --" + flag);
}

}  // namespace detail

inline RunResult Dispatcher::execute(const std::vector<std::string>& args, bool* help,
                                     std::string* help_text) {
  using detail::require;
  using detail::single_double;
  using detail::single_long;
  CLI::App app{"Delsarte polynomial-method bounds for codes and channels", kToolName};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

  RunResult res;
  Settings& st = res.settings;
  st.tol = default_tolerance();
  std::string format = "table";
  CLI::Option* format_opt = app.add_option("--format", format, "table | csv | json (default: from --out extension, else table)");
  app.add_option("--out", st.out, "write output to a file plus <file>.manifest.json");
  app.add_option("--manifest", st.manifest, "explicit manifest path");
  app.add_option("--jobs", st.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--tol", st.tol, "quadrature tolerance (default: DELSARTE_TOL or 1e-9)")
      ->check(CLI::PositiveNumber);

  detail::Options o;
  std::vector<std::pair<CLI::App*, std::function<Table()>>> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                  std::function<Table()> fn) {
    CLI::App* s = parent->add_subcommand(name, desc);
    leaves.emplace_back(s, std::move(fn));
    return s;
  };
  auto opt = [](CLI::App* s, const std::string& flag, std::string& target, const std::string& desc) {
    s->add_option("--" + flag, target, desc);
  };

  // poly ---------------------------------------------------------------
  CLI::App* poly = app.add_subcommand("poly", "orthogonal polynomials");
  poly->require_subcommand(1);
  {
    auto* s = leaf(poly, "kraw", "exact Krawtchouk K_k(x)", [&] {
      require("n", o.n);
      require("k", o.k);
      require("x", o.x);
      return detail::poly_kraw(single_long("n", o.n), parse_int_sweep(o.k), parse_int_sweep(o.x));
    });
    opt(s, "n", o.n, "length");
    opt(s, "k", o.k, "degree (sweep)");
    opt(s, "x", o.x, "argument (sweep)");
  }
  {
    auto* s = leaf(poly, "hahn", "exact Hahn Q_k(i)", [&] {
      require("n", o.n);
      require("v", o.v);
      require("k", o.k);
      require("i", o.i);
      return detail::poly_hahn(single_long("n", o.n), single_long("v", o.v), parse_int_sweep(o.k),
                               parse_int_sweep(o.i));
    });
    opt(s, "n", o.n, "length");
    opt(s, "v", o.v, "weight");
    opt(s, "k", o.k, "degree (sweep)");
    opt(s, "i", o.i, "distance index (sweep)");
  }
  {
    auto* s = leaf(poly, "jacobi", "Jacobi P_k^{alpha,beta}(x)", [&] {
      require("alpha", o.alpha);
      require("beta", o.beta);
      require("k", o.k);
      require("x", o.x);
      const double al = single_double("alpha", o.alpha), be = single_double("beta", o.beta);
      const long k = single_long("k", o.k);
      Table t;
      t.columns = {"alpha", "beta", "k", "x", "value"};
      t.scalar = 4;
      for (double x : parse_sweep(o.x)) t.rows.push_back({al, be, k, x, jacobi(al, be, k, x)});
      t.meta["normalization"] = "P_k(1) = C(k+alpha, k)";
      return t;
    });
    opt(s, "alpha", o.alpha, "alpha");
    opt(s, "beta", o.beta, "beta");
    opt(s, "k", o.k, "degree");
    opt(s, "x", o.x, "argument (sweep)");
  }
  {
    auto* s = leaf(poly, "kraw-zero", "smallest zero of K_k", [&] {
      require("n", o.n);
      require("k", o.k);
      const long n = single_long("n", o.n);
      Table t;
      t.columns = {"n", "k", "zero", "zero_over_n", "limit"};
      t.scalar = 2;
      for (long k : parse_int_sweep(o.k)) {
        const double z = smallest_zero_krawtchouk(n, k);
        const double tau = static_cast<double>(k) / static_cast<double>(n);
        t.rows.push_back({n, k, z, z / static_cast<double>(n), krawtchouk_zero_abscissa(tau)});
      }
      return t;
    });
    opt(s, "n", o.n, "length");
    opt(s, "k", o.k, "degree (sweep)");
  }
  {
    auto* s = leaf(poly, "jacobi-zeros", "extreme zeros of P_k^{ak,bk}", [&] {
      require("a", o.a);
      require("b", o.b);
      require("k", o.k);
      const double a = single_double("a", o.a), b = single_double("b", o.b);
      Table t;
      t.columns = {"a", "b", "k", "smallest", "largest", "largest_limit"};
      for (long k : parse_int_sweep(o.k)) {
        const auto [lo, hi] = extreme_zeros_jacobi(a, b, k);
        t.rows.push_back({a, b, k, lo, hi, jacobi_largest_zero_limit(a, b)});
      }
      return t;
    });
    opt(s, "a", o.a, "alpha / k");
    opt(s, "b", o.b, "beta / k");
    opt(s, "k", o.k, "degree (sweep)");
  }
  {
    auto* s = leaf(poly, "exponent", "asymptotic exponent of a family", [&] {
      Table t;
      t.scalar = -1;
      if (o.family == "kraw") {
        require("tau", o.tau);
        require("xi", o.xi);
        const double tau = single_double("tau", o.tau);
        t.columns = {"tau", "xi", "exponent"};
        for (double xi : parse_sweep(o.xi)) t.rows.push_back({tau, xi, krawtchouk_exponent(tau, xi, st.tol)});
        t.scalar = 2;
      } else if (o.family == "hahn") {
        require("alpha", o.alpha);
        require("beta", o.beta);
        require("xi", o.xi);
        const double al = single_double("alpha", o.alpha), be = single_double("beta", o.beta);
        t.columns = {"alpha", "beta", "xi", "exponent"};
        for (double xi : parse_sweep(o.xi)) t.rows.push_back({al, be, xi, hahn_exponent(al, be, xi, st.tol)});
        t.scalar = 3;
      } else if (o.family == "jacobi") {
        require("a", o.a);
        require("b", o.b);
        require("x", o.x);
        const double a = single_double("a", o.a), b = single_double("b", o.b);
        t.columns = {"a", "b", "x", "exponent"};
        for (double x : parse_sweep(o.x)) t.rows.push_back({a, b, x, jacobi_exponent(a, b, x, st.tol)});
        t.scalar = 3;
      } else {
        throw UsageError("--family must be kraw, hahn or jacobi");
      }
      t.meta["tolerance"] = st.tol;
      return t;
    });
    opt(s, "family", o.family, "kraw | hahn | jacobi");
    for (auto* f : {"tau", "xi", "alpha", "beta", "a", "b", "x"}) {
      std::string* target = std::string(f) == "tau"     ? &o.tau
                            : std::string(f) == "xi"    ? &o.xi
                            : std::string(f) == "alpha" ? &o.alpha
                            : std::string(f) == "beta"  ? &o.beta
                            : std::string(f) == "a"     ? &o.a
                            : std::string(f) == "b"     ? &o.b
                                                        : &o.x;
      opt(s, f, *target, f);
    }
  }

  // code ---------------------------------------------------------------
  CLI::App* code = app.add_subcommand("code", "binary codes from 0/1 files");
  code->require_subcommand(1);
  {
    auto* s = leaf(code, "info", "distance distribution and its MacWilliams transform", [&] {
      require("file", o.file);
      const BinaryCode c = read_code_file(o.file);
      const auto dist = distance_distribution(c);
      const Rational M(static_cast<long>(c.size()));
      const auto feas = delsarte_feasible(dist, M);
      Table t;
      t.columns = {"i"};
      detail::add_rational_columns(t.columns, "A");
      detail::add_rational_columns(t.columns, "A_dual");
      detail::add_rational_columns(t.columns, "binomial_moment");
      for (long i = 0; i <= c.length(); ++i) {
        std::vector<Cell> row{i};
        for (const Rational* q : {&dist.A[i], &feas.dual.A_prime[i]}) {
          row.push_back(to_string(*q));
          row.push_back(to_double(*q));
        }
        const Rational bm = i >= 1 ? binomial_moment(dist, i) : Rational(0);
        row.push_back(to_string(bm));
        row.push_back(to_double(bm));
        t.rows.push_back(std::move(row));
      }
      long dmin = 0;
      for (long i = 1; i <= c.length() && dmin == 0; ++i)
        if (dist.A[i] != 0) dmin = i;
      t.details["n"] = c.length();
      t.details["M"] = static_cast<long>(c.size());
      t.details["minimum_distance"] = dmin;
      t.details["delsarte_feasible"] = feas.feasible;
      return t;
    });
    opt(s, "file", o.file, "code file (one 0/1 word per line)");
  }
  {
    auto* s = leaf(code, "pue", "undetected-error probability on the BSC", [&] {
      require("file", o.file);
      require("p", o.p);
      const BinaryCode c = read_code_file(o.file);
      const auto dist = distance_distribution(c);
      Table t;
      t.columns = {"p", "P_ue"};
      t.scalar = 1;
      for (double p : parse_sweep(o.p)) t.rows.push_back({p, undetected_error_prob(dist, p)});
      return t;
    });
    opt(s, "file", o.file, "code file");
    opt(s, "p", o.p, "crossover probability (sweep)");
  }

  // lp -----------------------------------------------------------------
  CLI::App* lp = app.add_subcommand("lp", "Delsarte linear programs");
  lp->require_subcommand(1);
  auto lp_table = [&](const std::vector<DelsarteBound>& bounds, const std::vector<std::vector<Cell>>& keys,
                      const std::vector<std::string>& key_cols) {
    Table t;
    t.columns = key_cols;
    detail::add_rational_columns(t.columns, "bound");
    t.columns.push_back("pivots");
    t.columns.push_back("certificate");
    json certs = json::array();
    for (std::size_t j = 0; j < bounds.size(); ++j) {
      const auto& b = bounds[j];
      auto row = keys[j];
      row.push_back(to_string(b.value));
      row.push_back(to_double(b.value));
      row.push_back(static_cast<long>(b.solution.pivots));
      const bool ok = verify_certificate(b.instance, b.solution);
      row.push_back(std::string(ok ? "verified" : "FAILED"));
      t.rows.push_back(std::move(row));
      json c;
      for (std::size_t q = 0; q < key_cols.size(); ++q) c[key_cols[q]] = cell_json(keys[j][q]);
      c["bound"] = to_string(b.value);
      c["status"] = to_string(b.solution.status);
      c["distribution"] = rational_array(b.distribution);
      c["dual"] = rational_array(b.solution.dual);
      c["polynomial_coefficients"] = rational_array(b.f);
      c["polynomial_values"] = rational_array(b.f_values);
      c["certificate_verified"] = ok;
      certs.push_back(c);
    }
    t.details["solutions"] = certs;
    t.scalar = static_cast<int>(key_cols.size());
    return t;
  };
  {
    auto* s = leaf(lp, "hamming", "LP bound on A(n,d)", [&] {
      require("n", o.n);
      require("d", o.d);
      const long n = single_long("n", o.n);
      const auto ds = parse_int_sweep(o.d);
      std::vector<DelsarteBound> bs(ds.size());
      std::vector<std::vector<Cell>> keys;
      parallel_rows(ds.size(), st.jobs, [&](std::size_t j) {
        bs[j] = delsarte_lp_hamming_full(n, ds[j]);
        return std::vector<Cell>{};
      });
      for (long d : ds) keys.push_back({n, d});
      auto t = lp_table(bs, keys, {"n", "d"});
      t.meta["normalization"] = "f_0 = 1";
      return t;
    });
    opt(s, "n", o.n, "length");
    opt(s, "d", o.d, "minimum distance (sweep)");
  }
  {
    auto* s = leaf(lp, "johnson", "LP bound on constant-weight codes", [&] {
      require("n", o.n);
      require("v", o.v);
      require("dhalf", o.dhalf);
      const long n = single_long("n", o.n), v = single_long("v", o.v);
      const auto hs = parse_int_sweep(o.dhalf);
      std::vector<DelsarteBound> bs(hs.size());
      parallel_rows(hs.size(), st.jobs, [&](std::size_t j) {
        bs[j] = delsarte_lp_johnson_full(n, v, hs[j]);
        return std::vector<Cell>{};
      });
      std::vector<std::vector<Cell>> keys;
      for (long h : hs) keys.push_back({n, v, h});
      auto t = lp_table(bs, keys, {"n", "v", "d_half"});
      t.meta["normalization"] = HahnFamily::normalization;
      return t;
    });
    opt(s, "n", o.n, "length");
    opt(s, "v", o.v, "weight");
    opt(s, "dhalf", o.dhalf, "half the minimum distance (sweep)");
  }
  {
    auto* s = leaf(lp, "elias", "Elias translation of the Johnson LP", [&] {
      require("n", o.n);
      require("d", o.d);
      const long n = single_long("n", o.n);
      const auto ds = parse_int_sweep(o.d);
      Table t;
      t.columns = {"n", "d"};
      detail::add_rational_columns(t.columns, "bound");
      t.columns.push_back("v");
      t.rows = parallel_rows(ds.size(), st.jobs, [&](std::size_t j) {
        const auto e = elias_lp_bound(n, ds[j]);
        return std::vector<Cell>{n, ds[j], to_string(e.value), to_double(e.value), e.v};
      });
      t.scalar = 2;
      return t;
    });
    opt(s, "n", o.n, "length");
    opt(s, "d", o.d, "minimum distance (sweep)");
  }
  {
    auto* s = leaf(lp, "solve", "solve an LP file exactly", [&] {
      require("file", o.file);
      std::ifstream in(o.file);
      if (!in) throw ResourceError("cannot open " + o.file);
      const LPInstance inst = read_lp(in);
      const LPSolution sol = simplex_solve(inst);
      Table t;
      t.columns = {"status"};
      detail::add_rational_columns(t.columns, "value");
      t.columns.push_back("pivots");
      const bool opt_ok = sol.status == LPStatus::Optimal;
      t.rows.push_back({std::string(to_string(sol.status)), opt_ok ? to_string(sol.value) : std::string("-"),
                        opt_ok ? to_double(sol.value) : std::nan(""), static_cast<long>(sol.pivots)});
      if (opt_ok) {
        t.details["primal"] = rational_array(sol.primal);
        t.details["dual"] = rational_array(sol.dual);
        t.details["certificate_verified"] = verify_certificate(inst, sol);
      }
      t.scalar = 1;
      return t;
    });
    opt(s, "file", o.file, "LP text file");
  }

  // curve --------------------------------------------------------------
  CLI::App* curve = app.add_subcommand("curve", "asymptotic bound curves");
  curve->require_subcommand(1);
  {
    auto* s = leaf(curve, "rdelta", "delta as a function of R", [&] {
      require("r", o.r);
      const auto rs = parse_sweep(o.r);
      Table t;
      if (o.method == "gv") {
        t.columns = {"R", "value"};
        t.rows = parallel_rows(rs.size(), st.jobs, [&](std::size_t j) {
          return std::vector<Cell>{rs[j], gv_delta(rs[j])};
        });
      } else if (o.method == "mrrw") {
        t.columns = {"R", "value", "alpha", "beta"};
        t.rows = parallel_rows(rs.size(), st.jobs, [&](std::size_t j) {
          const auto m = mrrw_delta_full(rs[j]);
          return std::vector<Cell>{rs[j], m.delta, m.alpha, m.beta};
        });
        t.meta["grid"] = kMrrwGrid;
      } else if (o.method == "shannon") {
        t.meta["units"] = "nats";
        t.columns = {"R", "value"};
        t.rows = parallel_rows(rs.size(), st.jobs, [&](std::size_t j) {
          return std::vector<Cell>{rs[j], shannon_d(rs[j])};
        });
      } else if (o.method == "kl") {
        t.meta["units"] = "nats";
        t.columns = {"R", "value", "rho"};
        t.rows = parallel_rows(rs.size(), st.jobs, [&](std::size_t j) {
          const double rho = solve_rho(rs[j]);
          return std::vector<Cell>{rs[j], kl_distance(rho), rho};
        });
      } else {
        throw UsageError("--method must be gv, mrrw, shannon or kl");
      }
      t.scalar = 1;
      t.meta["method"] = o.method;
      return t;
    });
    opt(s, "method", o.method, "gv | mrrw (bits) | shannon | kl (nats)");
    opt(s, "r", o.r, "rate (sweep)");
  }
  {
    auto* s = leaf(curve, "rlp", "inverse of the MRRW curve", [&] {
      require("delta", o.delta);
      const auto ds = parse_sweep(o.delta);
      Table t;
      t.columns = {"delta", "value"};
      t.rows = parallel_rows(ds.size(), st.jobs, [&](std::size_t j) {
        return std::vector<Cell>{ds[j], mrrw_rate(ds[j])};
      });
      t.scalar = 1;
      return t;
    });
    opt(s, "delta", o.delta, "relative distance (sweep)");
  }

  // spectrum -----------------------------------------------------------
  CLI::App* spec = app.add_subcommand("spectrum", "distance-spectrum bounds");
  spec->require_subcommand(1);
  {
    auto* s = leaf(spec, "hamming", "best exponent over tau per xi", [&] {
      require("r", o.r);
      const double R = single_double("r", o.r);
      const auto xs = o.xi.empty() ? parse_sweep("0:0.5:0.005") : parse_sweep(o.xi);
      const int grid = o.grid > 0 ? o.grid : kSpectrumTauGrid;
      Table t;
      t.columns = {"xi", "value", "tau"};
      t.rows = parallel_rows(xs.size(), st.jobs, [&](std::size_t j) {
        const auto sp = hamming_spectrum_point(R, xs[j], grid, st.tol);
        return std::vector<Cell>{sp.xi, sp.exponent, sp.tau};
      });
      t.meta["tau_grid"] = grid;
      t.meta["tolerance"] = st.tol;
      return t;
    });
    opt(s, "r", o.r, "rate (bits)");
    opt(s, "xi", o.xi, "abscissa (sweep, default 0:0.5:0.005)");
    s->add_option("--grid", o.grid, "tau grid points");
  }
  {
    auto* s = leaf(spec, "exponent", "spectrum exponent at (tau, xi)", [&] {
      require("r", o.r);
      require("tau", o.tau);
      require("xi", o.xi);
      const double R = single_double("r", o.r), tau = single_double("tau", o.tau);
      Table t;
      t.columns = {"tau", "xi", "exponent"};
      for (double xi : parse_sweep(o.xi)) t.rows.push_back({tau, xi, hamming_spectrum_exponent(R, tau, xi, st.tol)});
      t.scalar = 2;
      return t;
    });
    opt(s, "r", o.r, "rate (bits)");
    opt(s, "tau", o.tau, "tau");
    opt(s, "xi", o.xi, "xi (sweep)");
  }
  {
    auto* s = leaf(spec, "binom", "binomial-moment exponent", [&] {
      require("r", o.r);
      require("omega", o.omega);
      const double R = single_double("r", o.r);
      Table t;
      t.columns = {"omega", "exponent", "omega_star", "delta_lp"};
      for (double w : parse_sweep(o.omega)) {
        const auto b = binom_moment_exponent(R, w);
        t.rows.push_back({w, b.exponent, b.omega_star, b.delta_lp});
      }
      t.scalar = 1;
      return t;
    });
    opt(s, "r", o.r, "rate (bits)");
    opt(s, "omega", o.omega, "omega (sweep)");
  }
  {
    auto* s = leaf(spec, "sphere", "sphere spectrum exponent", [&] {
      require("r", o.r);
      require("gamma", o.gamma);
      require("x", o.x);
      const double R = single_double("r", o.r), g = single_double("gamma", o.gamma);
      Table t;
      t.columns = {"x", "exponent"};
      for (double x : parse_sweep(o.x)) t.rows.push_back({x, sphere_spectrum_exponent(R, g, x, st.tol)});
      t.scalar = 1;
      t.meta["units"] = "nats";
      return t;
    });
    opt(s, "r", o.r, "rate (nats)");
    opt(s, "gamma", o.gamma, "gamma in [0, rho(R)]");
    opt(s, "x", o.x, "x (sweep)");
  }
  {
    auto* s = leaf(spec, "finite", "finite-length spectrum lower bound", [&] {
      require("n", o.n);
      require("m", o.m);
      require("w", o.w);
      require("values", o.values);
      const long n = single_long("n", o.n), w = single_long("w", o.w);
      std::vector<Rational> vals;
      for (const auto& tok : split_list(o.values)) vals.push_back(parse_rational(tok));
      if (static_cast<long>(vals.size()) != n + 1) throw UsageError("--values needs n+1 entries f(0..n)");
      const auto f = expand_in_krawtchouk(vals);
      const auto b = finite_spectrum_lower(n, parse_rational(o.m), w, f);
      Table t;
      t.columns = {"j"};
      detail::add_rational_columns(t.columns, "lower");
      for (long j = 1; j <= w; ++j) {
        const auto& q = b.per_index[static_cast<std::size_t>(j)];
        t.rows.push_back({j, to_string(q), to_double(q)});
      }
      t.details["mass"] = to_string(b.mass);
      t.details["uniform"] = to_string(b.uniform);
      t.details["best_index"] = b.best_index;
      t.details["vacuous"] = b.vacuous;
      return t;
    });
    opt(s, "n", o.n, "length");
    opt(s, "m", o.m, "code size (rational)");
    opt(s, "w", o.w, "window");
    opt(s, "values", o.values, "f(0),...,f(n)");
  }
  {
    auto* s = leaf(spec, "partition", "spherical partition bound", [&] {
      for (auto [f, val] : {std::pair{"m", &o.m}, {"dim", &o.dim}, {"coeffs", &o.coeffs}, {"top", &o.top},
                            {"parts", &o.parts}})
        require(f, *val);
      std::vector<double> cs;
      for (const auto& tok : split_list(o.coeffs)) cs.push_back(single_double("coeffs", tok));
      PartitionSpec part;
      part.u0 = o.u0.empty() ? -1.0 : single_double("u0", o.u0);
      part.top = single_double("top", o.top);
      part.m = single_long("parts", o.parts);
      const auto r = theorem2_bound(single_double("m", o.m), single_long("dim", o.dim), cs, part);
      Table t;
      t.columns = {"segment", "s", "f_s", "f_one", "bound", "vacuous"};
      t.rows.push_back({r.segment, r.s, r.f_s, r.f_one, r.bound, std::string(r.vacuous ? "yes" : "no")});
      t.scalar = 4;
      t.meta["sign_samples"] = kSignSamples;
      return t;
    });
    opt(s, "m", o.m, "code size");
    opt(s, "dim", o.dim, "dimension of the ambient space");
    opt(s, "coeffs", o.coeffs, "Gegenbauer-normalised Jacobi coefficients f_0,f_1,...");
    opt(s, "u0", o.u0, "left end (default -1)");
    opt(s, "top", o.top, "right end 1 - d^2/2");
    opt(s, "parts", o.parts, "number of segments");
  }

  // reliability --------------------------------------------------------
  CLI::App* rel = app.add_subcommand("reliability", "reliability-function bounds");
  rel->require_subcommand(1);
  {
    auto* s = leaf(rel, "bsc", "upper bound for the BSC (bits)", [&] {
      require("r", o.r);
      require("p", o.p);
      const double p = single_double("p", o.p);
      XiBracket br;
      if (o.bracket == "printed")
        br = XiBracket::AsPrinted;
      else if (o.bracket == "minus")
        br = XiBracket::MinusSign;
      else
        throw UsageError("--xi-bracket must be printed or minus");
      const int grid = o.grid > 0 ? o.grid : kBscGrid;
      const auto rs = parse_sweep(o.r);
      Table t;
      t.columns = {"R", "value", "alpha", "beta", "xi", "delta", "eta", "nu", "nu_tilde", "min_reading"};
      t.rows = parallel_rows(rs.size(), st.jobs, [&](std::size_t j) {
        const auto b = bsc_reliability_upper(rs[j], p, grid, br);
        const auto& q = b.best;
        return std::vector<Cell>{rs[j], q.E, q.alpha, q.beta, q.xi, q.delta, q.eta, q.nu, q.nu_tilde, b.min_reading};
      });
      t.scalar = 1;
      t.meta["grid"] = grid;
      t.meta["xi_bracket"] = o.bracket;
      return t;
    });
    opt(s, "r", o.r, "rate (sweep)");
    opt(s, "p", o.p, "crossover probability");
    opt(s, "xi-bracket", o.bracket, "printed | minus");
    s->add_option("--grid", o.grid, "outer lattice points per axis");
  }
  {
    auto* s = leaf(rel, "gaussian", "upper bound for the Gaussian channel (nats)", [&] {
      require("r", o.r);
      require("a", o.A);
      const double A = single_double("a", o.A);
      const int g = o.grid > 0 ? o.grid : kGaussGammaGrid;
      const int ig = o.inner_grid > 0 ? o.inner_grid : kGaussInnerGrid;
      const auto rs = parse_sweep(o.r);
      Table t;
      t.columns = {"R", "value", "gamma", "w", "d", "L", "F"};
      t.rows = parallel_rows(rs.size(), st.jobs, [&](std::size_t j) {
        const auto b = gaussian_reliability_upper(rs[j], A, g, ig);
        const auto& q = b.best;
        return std::vector<Cell>{rs[j], q.value, q.gamma, q.w, q.d, q.L, q.Fxg};
      });
      t.scalar = 1;
      t.meta["units"] = "nats";
      t.meta["gamma_grid"] = g;
      t.meta["inner_grid"] = ig;
      return t;
    });
    opt(s, "r", o.r, "rate in nats (sweep)");
    opt(s, "a", o.A, "signal-to-noise ratio A");
    s->add_option("--grid", o.grid, "gamma grid points");
    s->add_option("--inner-grid", o.inner_grid, "w grid points");
  }
  {
    auto* s = leaf(rel, "detect", "error-detection exponent bound", [&] {
      require("r", o.r);
      require("p", o.p);
      const double p = single_double("p", o.p);
      const auto rs = parse_sweep(o.r);
      const double rlp = p > 0.0 && p < 0.5 ? lp_rate(p) : 0.0;
      Table t;
      t.columns = {"R", "value", "branch", "R_lp"};
      t.rows = parallel_rows(rs.size(), st.jobs, [&](std::size_t j) {
        const auto e = error_detection_upper(rs[j], p, rlp);
        return std::vector<Cell>{rs[j], e.value, static_cast<long>(e.first_branch ? 1 : 2), e.switch_rate};
      });
      t.scalar = 1;
      return t;
    });
    opt(s, "r", o.r, "rate (sweep)");
    opt(s, "p", o.p, "crossover probability");
  }
  {
    auto* s = leaf(rel, "sphere-packing", "sphere-packing exponent (external formula)", [&] {
      require("r", o.r);
      require("p", o.p);
      const double p = single_double("p", o.p);
      const auto rs = parse_sweep(o.r);
      Table t;
      t.columns = {"R", "value", "source"};
      for (double R : rs) t.rows.push_back({R, sphere_packing_exponent(R, p), std::string("external")});
      t.scalar = 1;
      t.meta["externally_sourced"] = "sphere_packing_exponent";
      return t;
    });
    opt(s, "r", o.r, "rate (sweep)");
    opt(s, "p", o.p, "crossover probability");
  }
  {
    auto* s = leaf(rel, "straight-line", "tangent between the BSC bound and sphere packing", [&] {
      require("p", o.p);
      const double p = single_double("p", o.p);
      const int samples = o.samples > 0 ? o.samples : 40;
      const int grid = o.grid > 0 ? o.grid : kBscGrid;
      if (samples < 3) throw UsageError("--samples must be at least 3");
      if (!(p > 0.0 && p < 0.5)) throw DomainError("straight-line: p outside (0,1/2)");
      const double cap = 1.0 - entropy2(p);
      const double r_lo = o.rmin.empty() ? 0.01 : single_double("r-min", o.rmin);
      const double r_hi = o.rmax.empty() ? cap * (1.0 - 1e-6) : single_double("r-max", o.rmax);
      if (!(r_lo > 0.0 && r_lo < r_hi && r_hi < cap))
        throw DomainError("straight-line: need 0 < --r-min < --r-max < capacity");
      auto grid_of = [&](double lo, double hi) {
        std::vector<double> xs(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i)
          xs[static_cast<std::size_t>(i)] = i == samples - 1 ? hi : lo + (hi - lo) * i / (samples - 1);
        return xs;
      };
      // Piecewise-linear interpolant through (xs, ys).
      auto interpolant = [](std::vector<double> xs, std::vector<double> ys) {
        return std::function<double(double)>([xs = std::move(xs), ys = std::move(ys)](double x) {
          if (x <= xs.front()) return ys.front();
          if (x >= xs.back()) return ys.back();
          const auto it = std::upper_bound(xs.begin(), xs.end(), x);
          const std::size_t k = static_cast<std::size_t>(it - xs.begin());
          const double u = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
          return ys[k - 1] + u * (ys[k] - ys[k - 1]);
        });
      };
      const auto bx = grid_of(r_lo, r_hi);
      const auto vals = parallel_rows(bx.size(), st.jobs, [&](std::size_t j) {
        return std::vector<Cell>{bsc_reliability_upper(bx[j], p, grid).best.E};
      });
      std::vector<double> by;
      for (const auto& v : vals) by.push_back(std::get<double>(v[0]));
      const auto sx = grid_of(r_lo, r_hi);
      std::vector<double> sy;
      for (double x : sx) sy.push_back(sphere_packing_exponent(x, p));
      const SampledCurve sp{interpolant(sx, sy), r_lo, r_hi, samples, "sphere_packing"};
      // The BSC curve need not be convex: split it into maximal convex runs
      // and take the lowest-rate run that admits a common tangent.
      std::vector<std::pair<std::size_t, std::size_t>> runs;
      std::size_t start = 0;
      for (std::size_t i = 1; i + 1 < bx.size(); ++i) {
        const double s1 = (by[i] - by[i - 1]) / (bx[i] - bx[i - 1]);
        const double s2 = (by[i + 1] - by[i]) / (bx[i + 1] - bx[i]);
        if (s2 < s1 - 1e-9 * std::max(1.0, std::fabs(s1))) {
          runs.emplace_back(start, i);
          start = i;
        }
      }
      runs.emplace_back(start, bx.size() - 1);
      std::optional<StraightLineResult> found;
      std::pair<std::size_t, std::size_t> used{0, 0};
      for (const auto& [i0, i1] : runs) {
        if (i1 < i0 + 2) continue;
        std::vector<double> xs(bx.begin() + static_cast<long>(i0), bx.begin() + static_cast<long>(i1) + 1);
        std::vector<double> ys(by.begin() + static_cast<long>(i0), by.begin() + static_cast<long>(i1) + 1);
        const SampledCurve upper{interpolant(xs, ys), xs.front(), xs.back(), static_cast<int>(4 * xs.size()), "bsc"};
        try {
          found = straight_line_bound(upper, sp);
          used = {i0, i1};
          break;
        } catch (const DomainError&) {
        } catch (const PreconditionError&) {
        }
      }
      if (!found) throw DomainError("straight-line: no convex stretch of the BSC curve has a common tangent");
      const auto& res = *found;
      Table t;
      t.columns = {"R", "value", "source"};
      static const char* names[] = {"bsc", "line", "sphere_packing"};
      for (const auto& row : res.combined.rows)
        t.rows.push_back({row[0], row[1], std::string(names[static_cast<int>(row[2])])});
      const auto& L = res.line;
      t.details["line"] = {{"R1", cell_json(L.x1)}, {"E1", cell_json(L.y1)}, {"R2", cell_json(L.x2)},
                           {"E2", cell_json(L.y2)}, {"slope", cell_json(L.slope)},
                           {"intercept", cell_json(L.intercept)}};
      t.meta["samples"] = samples;
      t.meta["grid"] = grid;
      t.meta["r_min"] = r_lo;
      t.meta["r_max"] = r_hi;
      t.meta["bsc_stretch"] = {bx[used.first], bx[used.second]};
      t.meta["externally_sourced"] = "sphere_packing_exponent";
      return t;
    });
    opt(s, "p", o.p, "crossover probability");
    s->add_option("--samples", o.samples, "rate samples per curve");
    s->add_option("--grid", o.grid, "BSC outer lattice points per axis");
    opt(s, "r-min", o.rmin, "lowest sampled rate (default 0.01)");
    opt(s, "r-max", o.rmax, "highest sampled rate (default: just below capacity)");
  }

  // oracle -------------------------------------------------------------
  CLI::App* orc = app.add_subcommand("oracle", "exact brute-force optima");
  orc->require_subcommand(1);
  {
    auto* s = leaf(orc, "maxcode", "exact A(n,d) with a witness", [&] {
      require("n", o.n);
      require("d", o.d);
      const long n = single_long("n", o.n);
      Table t;
      t.columns = {"n", "d", "size", "witness"};
      for (long d : parse_int_sweep(o.d)) {
        const auto r = bruteforce_max_code(n, d);
        std::string wit;
        if (r.witness.size() <= 64)
          for (Word w : r.witness) wit += (wit.empty() ? "" : " ") + BinaryCode::format_word(w, n);
        t.rows.push_back({n, d, r.size, wit});
      }
      t.scalar = 2;
      return t;
    });
    opt(s, "n", o.n, "length");
    opt(s, "d", o.d, "minimum distance (sweep)");
  }
  {
    auto* s = leaf(orc, "constant-weight", "exact constant-weight optimum", [&] {
      require("n", o.n);
      require("v", o.v);
      require("dhalf", o.dhalf);
      const long n = single_long("n", o.n), v = single_long("v", o.v);
      Table t;
      t.columns = {"n", "v", "d_half", "size"};
      for (long h : parse_int_sweep(o.dhalf))
        t.rows.push_back({n, v, h, bruteforce_max_constant_weight_code(n, v, h).size});
      t.scalar = 3;
      return t;
    });
    opt(s, "n", o.n, "length");
    opt(s, "v", o.v, "weight");
    opt(s, "dhalf", o.dhalf, "half distance (sweep)");
  }

  // parse ----------------------------------------------------------------
  std::vector<std::string> storage{kToolName};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    *help = true;
    *help_text = app.help();
    return res;
  } catch (const CLI::CallForAllHelp&) {
    *help = true;
    *help_text = app.help("", CLI::AppFormatMode::All);
    return res;
  } catch (const CLI::CallForVersion&) {
    *help = true;
    *help_text = std::string(kToolName) + " " + kVersion + "\n";
    return res;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  if (format_opt->count() == 0 && !st.out.empty()) {
    const std::string ext = std::filesystem::path(st.out).extension().string();
    if (ext == ".csv") format = "csv";
    if (ext == ".json") format = "json";
  }
  st.format = parse_format(format);
  for (auto& [sub, fn] : leaves) {
    if (sub->parsed()) {
      res.table = fn();
      res.output = render(res.table, st.format);
      return res;
    }
  }
  throw UsageError("no command given");
}

// ---------------------------------------------------------------------------
// Manifests

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json make_manifest(const std::vector<std::string>& args, const RunResult& r) {
  json m;
  m["tool"] = kToolName;
  m["version"] = kVersion;
  m["command"] = args;
  m["tolerance"] = r.settings.tol;
  m["format"] = format_name(r.settings.format);
  m["jobs"] = r.settings.jobs;
  m["output"] = r.settings.out.empty() ? std::string() : std::filesystem::absolute(r.settings.out).string();
  m["parameters"] = r.table.meta;
  m["timestamp"] = utc_timestamp();
  return m;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot write " + path);
  f << text;
  if (!f) throw ResourceError("write failed for " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace detail {

// replay --manifest M [--out F]: re-runs the recorded command with the
// recorded tolerance; compares with the recorded output file when it
// still exists.
inline int replay(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                  const std::function<RunResult(const std::vector<std::string>&)>& exec) {
  std::string manifest_path, new_out;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if ((args[i] == "--manifest" || args[i] == "--out") && i + 1 < args.size()) {
      (args[i] == "--manifest" ? manifest_path : new_out) = args[i + 1];
      ++i;
    } else if (args[i] == "--help" || args[i] == "-h") {
      out << "replay --manifest FILE [--out FILE]\n";
      return kOk;
    } else {
      throw UsageError("replay: unexpected argument '" + args[i] + "'");
    }
  }
  if (manifest_path.empty()) throw UsageError("replay: --manifest is required");
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw UsageError(std::string("replay: manifest is not valid JSON: ") + e.what());
  }
  if (!m.contains("command") || !m["command"].is_array()) throw UsageError("replay: manifest lacks 'command'");
  std::vector<std::string> cmd;
  for (const auto& a : m["command"]) cmd.push_back(a.get<std::string>());
  // Strip output redirection; the recorded tolerance and format are forced.
  std::vector<std::string> run;
  for (std::size_t i = 0; i < cmd.size(); ++i) {
    if ((cmd[i] == "--out" || cmd[i] == "--manifest" || cmd[i] == "--tol" || cmd[i] == "--format") &&
        i + 1 < cmd.size()) {
      ++i;
      continue;
    }
    run.push_back(cmd[i]);
  }
  if (m.contains("tolerance")) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", m["tolerance"].get<double>());
    run.insert(run.begin(), {"--tol", buf});
  }
  if (m.contains("format")) run.insert(run.begin(), {"--format", m["format"].get<std::string>()});
  const RunResult r = exec(run);
  if (!new_out.empty())
    write_file(new_out, r.output);
  else
    out << r.output;
  const std::string recorded = m.value("output", std::string());
  if (recorded.empty()) return kOk;
  std::ifstream probe(recorded, std::ios::binary);
  if (!probe) {
    err << "replay: recorded output " << recorded << " not found; nothing to compare\n";
    return kOk;
  }
  if (read_file(recorded) == r.output) {
    err << "replay: identical to " << recorded << "\n";
    return kOk;
  }
  err << "replay: output differs from " << recorded << "\n";
  return kMismatch;
}

}  // namespace detail

/// Runs one command line. Exit codes: 0 ok, 1 replay mismatch, 2 usage,
/// 3 domain/precondition/parse, 4 resource.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Dispatcher d;
  return d.run(args, out, err);
}

inline int Dispatcher::run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    if (!args.empty() && args.front() == "replay") {
      return detail::replay(args, out, err, [this](const std::vector<std::string>& a) {
        bool help = false;
        std::string text;
        RunResult r = execute(a, &help, &text);
        if (help) throw UsageError("replay: recorded command is a help request");
        return r;
      });
    }
    bool help = false;
    std::string text;
    RunResult r = execute(args, &help, &text);
    if (help) {
      out << text;
      return kOk;
    }
    if (r.settings.out.empty()) {
      out << r.output;
      if (!r.settings.manifest.empty()) write_file(r.settings.manifest, make_manifest(args, r).dump(2) + "\n");
    } else {
      write_file(r.settings.out, r.output);
      const std::string mpath =
          r.settings.manifest.empty() ? r.settings.out + ".manifest.json" : r.settings.manifest;
      write_file(mpath, make_manifest(args, r).dump(2) + "\n");
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kDomain;
  } catch (const Error& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::bad_alloc&) {
    err << "resource error: out of memory\n";
    return kResource;
  }
}

}  // namespace delsarte::cli
