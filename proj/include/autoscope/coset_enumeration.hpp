#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "autoscope/error.hpp"
#include "autoscope/perm.hpp"
#include "autoscope/presentation.hpp"

namespace autoscope {

inline constexpr std::size_t kDefaultMaxCosets = 1000000;

inline std::size_t env_size(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  unsigned long long x = std::strtoull(v, &end, 10);
  if (end == v || *end) return fallback;
  return static_cast<std::size_t>(x);
}

inline std::size_t default_max_cosets() {
  return env_size("AUTOSCOPE_MAX_COSETS", kDefaultMaxCosets);
}

// Standardized complete coset table.  Column 2g is generator g, column
// 2g+1 its inverse.  Coset 0 is the subgroup itself.
struct CosetTable {
  std::size_t num_generators = 0;
  std::size_t num_cosets = 0;
  std::vector<std::uint32_t> table;

  std::uint32_t act(std::size_t coset, std::size_t column) const {
    return table[coset * 2 * num_generators + column];
  }
};

namespace detail {

class CosetEnumerator {
 public:
  CosetEnumerator(const Presentation& p, const std::vector<Word>& subgroup,
                  std::size_t max_cosets)
      : ngens_(p.generators.size()),
        ncols_(2 * p.generators.size()),
        max_cosets_(max_cosets) {
    for (const auto& r : p.relators) add_relator(r);
    for (const auto& w : subgroup) subgroup_.push_back(to_columns(w));
  }

  CosetTable run() {
    new_coset();
    for (const auto& w : subgroup_) scan_and_fill(0, w);
    process_deductions();
    // Felsch strategy: fill the first undefined entry in coset order.
    for (cursor_ = 0; cursor_ < static_cast<std::int32_t>(parent_.size()); ++cursor_) {
      for (std::size_t x = 0; x < ncols_ && is_live(cursor_); ++x) {
        if (entry(cursor_, x) < 0) {
          define(cursor_, x, true);
          process_deductions();
        }
      }
    }
    return standardize();
  }

 private:
  static int inv(int col) { return col ^ 1; }

  std::vector<int> to_columns(const Word& w) const {
    std::vector<int> cols;
    for (int l : w.letters()) cols.push_back(l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1);
    return cols;
  }

  void add_relator(const Word& r) {
    std::vector<int> cols = to_columns(r);
    // cyclic reduction
    while (cols.size() >= 2 && cols.front() == inv(cols.back())) {
      cols.erase(cols.begin());
      cols.pop_back();
    }
    if (cols.empty()) return;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::vector<int> rot(cols.begin() + i, cols.end());
      rot.insert(rot.end(), cols.begin(), cols.begin() + i);
      if (rotations_.size() < ncols_) rotations_.resize(ncols_);
      rotations_[rot[0]].push_back(std::move(rot));
    }
  }

  std::int32_t& entry(std::int32_t c, std::size_t x) { return table_[c * ncols_ + x]; }
  bool is_live(std::int32_t c) const { return parent_[c] == c; }

  std::int32_t rep(std::int32_t c) {
    std::int32_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      std::int32_t n = parent_[c];
      parent_[c] = r;
      c = n;
    }
    return r;
  }

  std::int32_t new_coset(bool may_compact = false) {
    if (live_ >= max_cosets_) throw CosetOverflow(max_cosets_);
    if (may_compact && parent_.size() >= max_cosets_ + max_cosets_ / 4 + 16) compact();
    auto c = static_cast<std::int32_t>(parent_.size());
    parent_.push_back(c);
    table_.resize(table_.size() + ncols_, -1);
    next_.push_back(-1);
    prev_.push_back(last_);
    if (last_ >= 0) next_[last_] = c;
    last_ = c;
    ++live_;
    return c;
  }

  void define(std::int32_t c, std::size_t x, bool may_compact = false) {
    std::int32_t d = new_coset(may_compact);
    if (may_compact) c = cursor_;
    entry(c, x) = d;
    entry(d, inv(static_cast<int>(x))) = c;
    deductions_.push_back({c, static_cast<int>(x)});
  }

  void unlink(std::int32_t c) {
    std::int32_t p = prev_[c], n = next_[c];
    if (p >= 0) next_[p] = n;
    if (n >= 0) prev_[n] = p;
    if (last_ == c) last_ = p;
    --live_;
  }

  void merge(std::int32_t a, std::int32_t b, std::vector<std::int32_t>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    unlink(b);
    queue.push_back(b);
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    std::vector<std::int32_t> queue;
    merge(a, b, queue);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::int32_t g = queue[qi];
      for (std::size_t x = 0; x < ncols_; ++x) {
        std::int32_t d = entry(g, x);
        if (d < 0) continue;
        int xi = inv(static_cast<int>(x));
        if (entry(d, xi) == g) entry(d, xi) = -1;
        std::int32_t mu = rep(g), nu = rep(d);
        if (entry(mu, x) >= 0) {
          merge(nu, entry(mu, x), queue);
        } else if (entry(nu, xi) >= 0) {
          merge(mu, entry(nu, xi), queue);
        } else {
          entry(mu, x) = nu;
          entry(nu, xi) = mu;
          deductions_.push_back({mu, static_cast<int>(x)});
        }
      }
    }
  }

  // Scans w at c without defining cosets; records deductions.
  void scan(std::int32_t c, const std::vector<int>& w) {
    std::int32_t f = c, b = c;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    while (i <= j && entry(f, w[i]) >= 0) f = entry(f, w[i++]);
    if (i > j) {
      if (f != c) coincidence(f, c);
      return;
    }
    while (j >= i && entry(b, inv(w[j])) >= 0) b = entry(b, inv(w[j--]));
    if (j < i) {
      coincidence(f, b);
    } else if (i == j) {
      entry(f, w[i]) = b;
      entry(b, inv(w[i])) = f;
      deductions_.push_back({f, w[i]});
    }
  }

  void scan_and_fill(std::int32_t c, const std::vector<int>& w) {
    if (w.empty()) return;
    while (true) {
      std::int32_t f = c, b = c;
      std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
      while (i <= j && entry(f, w[i]) >= 0) f = entry(f, w[i++]);
      if (i > j) {
        if (f != c) coincidence(f, c);
        return;
      }
      while (j >= i && entry(b, inv(w[j])) >= 0) b = entry(b, inv(w[j--]));
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        entry(f, w[i]) = b;
        entry(b, inv(w[i])) = f;
        deductions_.push_back({f, w[i]});
        return;
      }
      define(f, w[i]);
    }
  }

  void process_deductions() {
    while (!deductions_.empty()) {
      auto [c, x] = deductions_.back();
      deductions_.pop_back();
      if (!is_live(c)) continue;
      for (const auto& w : rotations_[x]) {
        if (!is_live(c)) break;
        scan(c, w);
      }
      if (!is_live(c)) continue;
      std::int32_t d = entry(c, x);
      if (d < 0 || !is_live(d)) continue;
      for (const auto& w : rotations_[inv(x)]) {
        if (!is_live(d)) break;
        scan(d, w);
      }
    }
  }

  void compact() {
    // Called only between definitions, so no deductions are pending.
    std::vector<std::int32_t> remap(parent_.size(), -1);
    std::int32_t n = 0;
    for (std::int32_t c = 0; c >= 0; c = next_[c]) remap[c] = n++;
    std::vector<std::int32_t> table(static_cast<std::size_t>(n) * ncols_);
    for (std::int32_t c = 0; c >= 0; c = next_[c])
      for (std::size_t x = 0; x < ncols_; ++x) {
        std::int32_t d = entry(c, x);
        table[remap[c] * ncols_ + x] = d < 0 ? -1 : remap[d];
      }
    table_ = std::move(table);
    parent_.resize(n);
    next_.resize(n);
    prev_.resize(n);
    for (std::int32_t c = 0; c < n; ++c) {
      parent_[c] = c;
      next_[c] = c + 1 < n ? c + 1 : -1;
      prev_[c] = c - 1;
    }
    last_ = n - 1;
    cursor_ = remap[cursor_];
  }

  CosetTable standardize() {
    std::vector<std::int32_t> order{0};
    std::vector<std::int32_t> num(parent_.size(), -1);
    num[0] = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t x = 0; x < ncols_; ++x) {
        std::int32_t d = entry(order[k], x);
        if (num[d] < 0) {
          num[d] = static_cast<std::int32_t>(order.size());
          order.push_back(d);
        }
      }
    CosetTable t;
    t.num_generators = ngens_;
    t.num_cosets = order.size();
    t.table.resize(order.size() * ncols_);
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t x = 0; x < ncols_; ++x)
        t.table[k * ncols_ + x] = static_cast<std::uint32_t>(num[entry(order[k], x)]);
    return t;
  }

  struct Deduction {
    std::int32_t coset;
    int column;
  };

  std::size_t ngens_, ncols_, max_cosets_;
  std::vector<std::vector<std::vector<int>>> rotations_ =
      std::vector<std::vector<std::vector<int>>>(ncols_);
  std::vector<std::vector<int>> subgroup_;
  std::vector<std::int32_t> table_, parent_, next_, prev_;
  std::int32_t last_ = -1;
  std::int32_t cursor_ = 0;
  std::size_t live_ = 0;
  std::vector<Deduction> deductions_;
};

}  // namespace detail

// Todd-Coxeter enumeration of the cosets of <subgroup> in the presented group.
inline CosetTable enumerate_cosets(const Presentation& p,
                                   const std::vector<Word>& subgroup = {},
                                   std::size_t max_cosets = default_max_cosets()) {
  return detail::CosetEnumerator(p, subgroup, max_cosets).run();
}

// One permutation per generator, acting on the cosets.
inline std::vector<Perm> perm_rep(const CosetTable& t) {
  std::vector<Perm> out;
  for (std::size_t g = 0; g < t.num_generators; ++g) {
    std::vector<std::uint32_t> img(t.num_cosets);
    for (std::size_t c = 0; c < t.num_cosets; ++c) img[c] = t.act(c, 2 * g);
    out.emplace_back(std::move(img));
  }
  return out;
}

}  // namespace autoscope
