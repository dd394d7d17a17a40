#pragma once

// Exact maximum clique by branch and bound with greedy-colouring bounds on
// bitset-encoded graphs (the MCQ/BBMC family of algorithms).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

namespace delsarte {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  void reset(std::size_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(),
                       [](std::uint64_t w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  /// Index of the lowest set bit, or npos.
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return npos;
  }
  void assign_and(const Bitset& a, const Bitset& b) {
    words_.resize(a.words_.size());
    for (std::size_t k = 0; k < words_.size(); ++k)
      words_[k] = a.words_[k] & b.words_[k];
  }
  /// Lowest set bit above i, or npos.
  std::size_t next(std::size_t i) const {
    ++i;
    std::size_t k = i >> 6;
    if (k >= words_.size()) return npos;
    std::uint64_t w = words_[k] & (~std::uint64_t{0} << (i & 63));
    while (true) {
      if (w) return k * 64 + static_cast<std::size_t>(std::countr_zero(w));
      if (++k >= words_.size()) return npos;
      w = words_[k];
    }
  }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }
  void and_not(const Bitset& b) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~b.words_[k];
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::uint64_t> words_;
};

struct CliqueOptions {
  /// Stop as soon as a clique of this size is found (a proven upper bound).
  std::size_t stop_at = static_cast<std::size_t>(-1);
  /// Known lower bound: only cliques strictly larger are searched for.
  std::size_t at_least = 0;
  /// Give up after this many search nodes; `aborted()` reports it.
  std::uint64_t node_limit = static_cast<std::uint64_t>(-1);
};

/// Undirected graph on vertices 0..n-1 given by adjacency predicate; returns
/// the vertices of a maximum clique (or of the first clique reaching
/// `stop_at`). Search is exact when `stop_at` is a valid upper bound.
class MaxCliqueSolver {
 public:
  template <class Adjacent>
  MaxCliqueSolver(std::size_t n, Adjacent&& adjacent) : n_(n) {
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (adjacent(i, j)) {
          adj[i][j] = adj[j][i] = 1;
          ++degree[i];
          ++degree[j];
        }
    // High-degree vertices first; colouring scans from the low end.
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
    adj_.assign(n, Bitset(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (adj[order_[i]][order_[j]]) adj_[i].set(j);
  }

  std::vector<std::size_t> solve(const CliqueOptions& opt = {}) {
    opt_ = opt;
    best_.clear();
    best_size_ = opt.at_least;
    done_ = false;
    nodes_ = 0;
    depth_ = 0;
    aborted_ = false;
    current_.clear();
    Bitset all(n_);
    for (std::size_t i = 0; i < n_; ++i) all.set(i);
    if (n_ > 0) expand(all);
    std::vector<std::size_t> out;
    for (auto v : best_) out.push_back(order_[v]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }

 private:
  // Greedy sequential colouring with one re-numbering attempt per vertex
  // that would open a class above `kmin` (classes up to kmin are never
  // branched on). Output is sorted by colour.
  void colour(const Bitset& cand, std::size_t kmin, std::vector<std::size_t>& verts,
              std::vector<std::size_t>& colours) {
    auto& classes = class_pool_[depth_];
    std::size_t used = 0;
    Bitset tmp;
    auto conflicts = [&](std::size_t k, std::size_t v) {
      tmp.assign_and(classes[k], adj_[v]);
      return !tmp.none();
    };
    auto single_conflict = [&](std::size_t k, std::size_t v) {
      tmp.assign_and(classes[k], adj_[v]);
      const std::size_t u = tmp.first();
      if (u == Bitset::npos) return Bitset::npos;
      tmp.reset(u);
      return tmp.none() ? u : Bitset::npos;
    };
    Bitset rest = cand;
    for (std::size_t v = rest.first(); v != Bitset::npos; v = rest.first()) {
      rest.reset(v);
      std::size_t k = 0;
      while (k < used && conflicts(k, v)) ++k;
      if (k >= kmin && kmin > 0) {
        bool moved = false;
        for (std::size_t k1 = 0; k1 < kmin && k1 < used && !moved; ++k1) {
          const std::size_t u = single_conflict(k1, v);
          if (u == Bitset::npos) continue;
          for (std::size_t k2 = 0; k2 < kmin && k2 < used; ++k2) {
            if (k2 == k1) continue;
            if (conflicts(k2, u)) continue;
            classes[k1].reset(u);
            classes[k2].set(u);
            classes[k1].set(v);
            moved = true;
            break;
          }
        }
        if (moved) continue;
      }
      if (k == used) {
        if (classes.size() <= used) classes.emplace_back(n_);
        classes[used].clear();
        ++used;
      }
      classes[k].set(v);
    }
    verts.clear();
    colours.clear();
    for (std::size_t k = 0; k < used; ++k)
      for (std::size_t v = classes[k].first(); v != Bitset::npos; v = classes[k].next(v)) {
        verts.push_back(v);
        colours.push_back(k + 1);
      }
  }

  void expand(const Bitset& cand) {
    if (++nodes_ > opt_.node_limit) {
      aborted_ = done_ = true;
      return;
    }
    if (class_pool_.size() <= depth_) class_pool_.resize(depth_ + 1);
    std::vector<std::size_t> verts, colours;
    const std::size_t kmin =
        best_size_ >= current_.size() ? best_size_ - current_.size() : 0;
    colour(cand, kmin, verts, colours);
    Bitset p = cand;
    Bitset next;
    for (std::size_t idx = verts.size(); idx-- > 0;) {
      if (done_) return;
      if (current_.size() + colours[idx] <= best_size_) return;
      const std::size_t v = verts[idx];
      current_.push_back(v);
      next.assign_and(p, adj_[v]);
      if (next.none()) {
        if (current_.size() > best_size_) {
          best_size_ = current_.size();
          best_ = current_;
          if (best_size_ >= opt_.stop_at) done_ = true;
        }
      } else {
        ++depth_;
        expand(next);
        --depth_;
      }
      current_.pop_back();
      p.reset(v);
    }
  }

  std::size_t n_;
  std::vector<std::size_t> order_;
  std::vector<Bitset> adj_;
  CliqueOptions opt_;
  std::vector<std::size_t> best_, current_;
  std::size_t best_size_ = 0;
  bool done_ = false;
  bool aborted_ = false;
  std::uint64_t nodes_ = 0;
  std::size_t depth_ = 0;
  std::vector<std::vector<Bitset>> class_pool_;
};

}  // namespace delsarte
