#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "autoscope/perm.hpp"

namespace autoscope {

// Deterministic Schreier-Sims stabilizer chain.  Base points are taken
// from an optional prefix, then the smallest point moved by a new
// strong generator.
class StabChain {
 public:
  explicit StabChain(std::size_t degree, const std::vector<std::uint32_t>& base_prefix = {})
      : degree_(degree) {
    for (std::uint32_t b : base_prefix) push_level(b);
  }

  std::size_t degree() const { return degree_; }
  std::size_t num_levels() const { return levels_.size(); }

  std::vector<std::uint32_t> base() const {
    std::vector<std::uint32_t> b;
    for (const auto& l : levels_) b.push_back(l.point);
    return b;
  }

  const std::vector<std::uint32_t>& orbit(std::size_t level) const { return levels_[level].orbit; }
  bool in_orbit(std::size_t level, std::uint32_t p) const { return levels_[level].pos[p] >= 0; }

  // u with base_point^u = p, for p in the level orbit.
  const Perm& transversal(std::size_t level, std::uint32_t p) const {
    return levels_[level].u[levels_[level].pos[p]];
  }
  const Perm& transversal_inverse(std::size_t level, std::uint32_t p) const {
    return levels_[level].uinv[levels_[level].pos[p]];
  }

  const std::vector<Perm>& strong_generators() const { return strong_; }

  // Generators of the stabilizer of the first `level` base points.
  std::vector<Perm> level_generators(std::size_t level) const {
    std::vector<Perm> out;
    if (level < levels_.size()) {
      for (std::size_t i : levels_[level].gens) out.push_back(strong_[i]);
    }
    return out;
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& l : levels_) o *= l.orbit.size();
    return o;
  }

  // Residue of g and the level where sifting stopped.
  std::pair<Perm, std::size_t> sift(Perm g, std::size_t start = 0) const {
    for (std::size_t i = start; i < levels_.size(); ++i) {
      const Level& l = levels_[i];
      std::int32_t k = l.pos[g[l.point]];
      if (k < 0) return {std::move(g), i};
      if (k > 0) g = g * l.uinv[k];
    }
    return {std::move(g), levels_.size()};
  }

  bool contains(const Perm& g) const {
    if (g.degree() != degree_) return false;
    auto [r, lev] = sift(g);
    return lev == levels_.size() && r.is_identity();
  }

  // Returns true if the group grew.
  bool add_generator(const Perm& g) {
    if (g.degree() != degree_) throw Error("generator degree mismatch");
    auto [r, lev] = sift(g);
    if (lev == levels_.size() && r.is_identity()) return false;
    add_strong(std::move(r), 0, lev);
    return true;
  }

 private:
  struct Level {
    std::uint32_t point = 0;
    std::vector<std::size_t> gens;
    std::vector<std::uint32_t> orbit;
    std::vector<std::int32_t> pos;
    std::vector<Perm> u, uinv;
    std::vector<std::size_t> tested;
  };

  void push_level(std::uint32_t b) {
    Level l;
    l.point = b;
    l.pos.assign(degree_, -1);
    l.pos[b] = 0;
    l.orbit.push_back(b);
    l.u.push_back(Perm(degree_));
    l.uinv.push_back(Perm(degree_));
    levels_.push_back(std::move(l));
  }

  void extend_orbit(std::size_t i) {
    Level& l = levels_[i];
    for (std::size_t k = 0; k < l.orbit.size(); ++k) {
      for (std::size_t gi : l.gens) {
        const Perm& s = strong_[gi];
        std::uint32_t q = s[l.orbit[k]];
        if (l.pos[q] >= 0) continue;
        l.pos[q] = static_cast<std::int32_t>(l.orbit.size());
        l.orbit.push_back(q);
        Perm uq = l.u[k] * s;
        l.uinv.push_back(uq.inverse());
        l.u.push_back(std::move(uq));
      }
    }
  }

  void add_strong(Perm h, std::size_t from, std::size_t to) {
    if (to == levels_.size()) {
      std::uint32_t p = 0;
      while (h[p] == p) ++p;
      push_level(p);
    }
    std::size_t idx = strong_.size();
    strong_.push_back(std::move(h));
    for (std::size_t i = from; i <= to; ++i) {
      levels_[i].gens.push_back(idx);
      levels_[i].tested.push_back(0);
      extend_orbit(i);
    }
    for (std::size_t i = to + 1; i-- > from;) complete(i);
  }

  void complete(std::size_t i) {
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t k = 0; k < levels_[i].gens.size(); ++k) {
        while (levels_[i].tested[k] < levels_[i].orbit.size()) {
          const Level& l = levels_[i];
          std::size_t pi = l.tested[k];
          const Perm& s = strong_[l.gens[k]];
          std::uint32_t q = s[l.orbit[pi]];
          Perm sg = l.u[pi] * s * l.uinv[l.pos[q]];
          levels_[i].tested[k] = pi + 1;
          auto [r, lev] = sift(std::move(sg), i + 1);
          if (lev == levels_.size() && r.is_identity()) continue;
          add_strong(std::move(r), i + 1, lev);
          again = true;
        }
      }
    }
  }

  std::size_t degree_;
  std::vector<Level> levels_;
  std::vector<Perm> strong_;
};

// Permutation group given by generators; the stabilizer chain is built
// once on first use and shared between copies.
class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(std::size_t degree, std::vector<Perm> gens) : degree_(degree), gens_(std::move(gens)) {
    for (const auto& g : gens_)
      if (g.degree() != degree_) throw Error("generator degree mismatch");
  }

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }

  const StabChain& chain() const {
    std::call_once(cache_->once, [this] {
      StabChain c(degree_);
      for (const auto& g : gens_) c.add_generator(g);
      cache_->chain.emplace(std::move(c));
    });
    return *cache_->chain;
  }

  std::uint64_t order() const { return chain().order(); }
  bool contains(const Perm& g) const { return chain().contains(g); }
  Perm identity() const { return Perm(degree_); }

 private:
  struct Cache {
    std::once_flag once;
    std::optional<StabChain> chain;
  };
  std::size_t degree_ = 0;
  std::vector<Perm> gens_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace autoscope
