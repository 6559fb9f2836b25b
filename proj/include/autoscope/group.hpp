#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <vector>

#include "autoscope/coset_enumeration.hpp"
#include "autoscope/perm.hpp"
#include "autoscope/perm_group.hpp"

namespace autoscope {

using ElemId = std::uint32_t;

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), w_((n + 63) / 64) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }

  Bitset operator&(const Bitset& o) const {
    Bitset r(n_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }

  bool subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  std::vector<std::uint32_t> elements() const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t x = w_[i];
      while (x) {
        out.push_back(static_cast<std::uint32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(x))));
        x &= x - 1;
      }
    }
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : w_) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  // Orders sets by their smallest differing element.
  static bool canonical_less(const Bitset& a, const Bitset& b) {
    for (std::size_t i = 0; i < a.w_.size(); ++i) {
      if (a.w_[i] == b.w_[i]) continue;
      std::uint64_t d = a.w_[i] ^ b.w_[i];
      std::uint64_t low = d & (~d + 1);
      return (a.w_[i] & low) != 0;
    }
    return false;
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

// Subgroup of a concrete Group, stored as a membership set.
struct Subgroup {
  Bitset members;
  std::vector<ElemId> generators;

  std::size_t order() const { return count_; }
  bool contains(ElemId x) const { return members.test(x); }
  std::vector<ElemId> elements() const { return members.elements(); }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members == b.members; }

  std::size_t count_ = 0;
};

inline constexpr std::size_t kDefaultElementCap = 1000000;
inline constexpr std::size_t kDefaultByteCap = std::size_t{1} << 30;

// Enumerated finite group.  Element 0 is the identity; elements are
// numbered in breadth-first order over the generators.
class Group {
 public:
  explicit Group(PermGroup pg, std::size_t cap = kDefaultElementCap) : pg_(std::move(pg)) {
    const StabChain& chain = pg_.chain();
    std::uint64_t n = chain.order();
    if (n > cap) throw CapExceeded("group order " + std::to_string(n) + " exceeds element cap");
    deg_ = pg_.degree();
    if (n * std::max<std::size_t>(deg_, 1) * 4 > kDefaultByteCap)
      throw CapExceeded("group of order " + std::to_string(n) + " too large to enumerate");
    n_ = static_cast<std::size_t>(n);
    base_ = chain.base();
    build();
  }

  const PermGroup& perm_group() const { return pg_; }
  std::size_t order() const { return n_; }
  std::size_t degree() const { return deg_; }
  static constexpr ElemId identity() { return 0; }
  const std::vector<ElemId>& generators() const { return gens_; }

  const std::uint32_t* images(ElemId a) const { return &perms_[std::size_t{a} * deg_]; }
  Perm perm(ElemId a) const { return Perm(std::vector<std::uint32_t>(images(a), images(a) + deg_)); }

  ElemId mul(ElemId a, ElemId b) const {
    const std::uint32_t* pa = images(a);
    const std::uint32_t* pb = images(b);
    std::uint32_t key[kMaxInlineBase];
    std::vector<std::uint32_t> big;
    std::uint32_t* k = key;
    if (base_.size() > kMaxInlineBase) {
      big.resize(base_.size());
      k = big.data();
    }
    for (std::size_t t = 0; t < base_.size(); ++t) k[t] = pb[pa[base_[t]]];
    return lookup(k);
  }

  ElemId mul_gen(ElemId a, std::size_t gen_index) const { return gen_mul_[std::size_t{a} * gens_.size() + gen_index]; }
  ElemId inv(ElemId a) const { return inv_[a]; }
  std::uint32_t elem_order(ElemId a) const { return ord_[a]; }
  ElemId conj(ElemId a, ElemId b) const { return mul(inv(b), mul(a, b)); }
  ElemId commutator(ElemId a, ElemId b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  ElemId pow(ElemId a, long long k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    ElemId r = identity();
    ElemId b = a;
    while (k) {
      if (k & 1) r = mul(r, b);
      b = mul(b, b);
      k >>= 1;
    }
    return r;
  }

  std::optional<ElemId> find(const Perm& p) const {
    if (p.degree() != deg_) return std::nullopt;
    std::vector<std::uint32_t> k(base_.size());
    for (std::size_t t = 0; t < base_.size(); ++t) k[t] = p[base_[t]];
    std::int64_t slot = probe(k.data());
    if (slot < 0) return std::nullopt;
    ElemId id = table_[slot];
    if (!std::equal(p.images().begin(), p.images().end(), images(id))) return std::nullopt;
    return id;
  }

  Subgroup trivial_subgroup() const {
    Subgroup s{Bitset(n_), {}, 1};
    s.members.set(identity());
    return s;
  }

  Subgroup whole() const {
    Subgroup s{Bitset(n_), {}, n_};
    for (std::size_t i = 0; i < n_; ++i) s.members.set(i);
    for (ElemId g : gens_)
      if (g != identity() && std::find(s.generators.begin(), s.generators.end(), g) == s.generators.end())
        s.generators.push_back(g);
    return s;
  }

  // <H, x> by Dimino's coset extension.
  Subgroup extend(const Subgroup& h, ElemId x) const {
    if (h.contains(x)) return h;
    Subgroup r = h;
    r.generators.push_back(x);
    std::vector<ElemId> hel = h.elements();
    std::vector<ElemId> reps{identity()};
    auto add_coset = [&](ElemId y) {
      for (ElemId e : hel) r.members.set(mul(e, y));
      r.count_ += hel.size();
      reps.push_back(y);
    };
    add_coset(x);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (ElemId s : r.generators) {
        ElemId y = mul(reps[i], s);
        if (!r.members.test(y)) add_coset(y);
      }
    }
    return r;
  }

  Subgroup closure(const std::vector<ElemId>& gens) const {
    Subgroup s = trivial_subgroup();
    for (ElemId g : gens) s = extend(s, g);
    return s;
  }

  // Subgroup from a membership set known to be closed.
  Subgroup from_set(const Bitset& set) const {
    Subgroup s = trivial_subgroup();
    for (ElemId e : set.elements()) {
      if (!s.contains(e)) s = extend(s, e);
    }
    if (!(s.members == set)) throw Error("set is not a subgroup");
    return s;
  }

  // Conjugacy classes, ordered by smallest member; class 0 is {1}.
  const std::vector<std::vector<ElemId>>& classes() const {
    compute_classes();
    return cache_->classes;
  }
  std::uint32_t class_of(ElemId a) const {
    compute_classes();
    return cache_->class_of[a];
  }

  // Permutation group generated by the members of a subgroup.
  PermGroup subgroup_perm_group(const Subgroup& s) const {
    std::vector<Perm> gens;
    for (ElemId g : s.generators) gens.push_back(perm(g));
    return PermGroup(deg_, std::move(gens));
  }

 private:
  static constexpr std::size_t kMaxInlineBase = 16;

  struct Cache {
    std::once_flag once;
    std::vector<std::vector<ElemId>> classes;
    std::vector<std::uint32_t> class_of;
  };

  std::uint64_t hash_key(const std::uint32_t* k) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t t = 0; t < base_.size(); ++t) {
      h ^= k[t];
      h *= 0x100000001b3ull;
      h ^= h >> 29;
    }
    return h;
  }

  // Slot holding the key, or -1.
  std::int64_t probe(const std::uint32_t* k) const {
    std::size_t mask = table_.size() - 1;
    std::size_t slot = hash_key(k) & mask;
    std::size_t kl = base_.size();
    while (true) {
      ElemId id = table_[slot];
      if (id == kEmpty) return -1;
      if (std::memcmp(&keys_[std::size_t{id} * kl], k, kl * sizeof(std::uint32_t)) == 0)
        return static_cast<std::int64_t>(slot);
      slot = (slot + 1) & mask;
    }
  }

  ElemId lookup(const std::uint32_t* k) const {
    std::int64_t s = probe(k);
    if (s < 0) throw Error("product not found in group");
    return table_[s];
  }

  void insert(ElemId id) {
    std::size_t mask = table_.size() - 1;
    std::size_t slot = hash_key(&keys_[std::size_t{id} * base_.size()]) & mask;
    while (table_[slot] != kEmpty) slot = (slot + 1) & mask;
    table_[slot] = id;
  }

  void append(const std::uint32_t* img) {
    ElemId id = static_cast<ElemId>(count_);
    perms_.insert(perms_.end(), img, img + deg_);
    for (std::uint32_t b : base_) keys_.push_back(img[b]);
    insert(id);
    ++count_;
  }

  void build() {
    std::size_t cap = 1;
    while (cap < 2 * n_ + 2) cap <<= 1;
    table_.assign(cap, kEmpty);
    perms_.reserve(n_ * deg_);
    keys_.reserve(n_ * base_.size());
    std::vector<std::uint32_t> id(deg_);
    std::iota(id.begin(), id.end(), 0u);
    append(id.data());

    const auto& pgens = pg_.generators();
    gens_.clear();
    std::vector<std::uint32_t> key(base_.size()), img(deg_);
    gen_mul_.assign(n_ * pgens.size(), 0);
    for (std::size_t e = 0; e < count_; ++e) {
      for (std::size_t s = 0; s < pgens.size(); ++s) {
        const std::uint32_t* pe = images(static_cast<ElemId>(e));
        const auto& ps = pgens[s].images();
        for (std::size_t t = 0; t < base_.size(); ++t) key[t] = ps[pe[base_[t]]];
        std::int64_t slot = probe(key.data());
        ElemId r;
        if (slot >= 0) {
          r = table_[slot];
        } else {
          for (std::size_t i = 0; i < deg_; ++i) img[i] = ps[pe[i]];
          r = static_cast<ElemId>(count_);
          append(img.data());
        }
        gen_mul_[e * pgens.size() + s] = r;
      }
    }
    if (count_ != n_) throw Error("element enumeration mismatch");
    for (std::size_t s = 0; s < pgens.size(); ++s) gens_.push_back(gen_mul_[s]);

    inv_.resize(n_);
    ord_.resize(n_);
    std::vector<std::uint32_t> inv_img(deg_);
    for (std::size_t e = 0; e < n_; ++e) {
      const std::uint32_t* pe = images(static_cast<ElemId>(e));
      for (std::size_t i = 0; i < deg_; ++i) inv_img[pe[i]] = static_cast<std::uint32_t>(i);
      for (std::size_t t = 0; t < base_.size(); ++t) key[t] = inv_img[base_[t]];
      inv_[e] = lookup(key.data());
      std::uint64_t o = 1;
      std::vector<bool> seen(deg_);
      for (std::size_t i = 0; i < deg_; ++i) {
        if (seen[i]) continue;
        std::uint64_t len = 0;
        for (std::size_t j = i; !seen[j]; j = pe[j]) {
          seen[j] = true;
          ++len;
        }
        o = std::lcm(o, len);
      }
      ord_[e] = static_cast<std::uint32_t>(o);
    }
  }

  void compute_classes() const {
    std::call_once(cache_->once, [this] {
      auto& cls = cache_->classes;
      auto& cof = cache_->class_of;
      cof.assign(n_, UINT32_MAX);
      std::vector<ElemId> ginv;
      for (ElemId g : gens_) ginv.push_back(inv(g));
      for (ElemId e = 0; e < n_; ++e) {
        if (cof[e] != UINT32_MAX) continue;
        auto c = static_cast<std::uint32_t>(cls.size());
        std::vector<ElemId> orbit{e};
        cof[e] = c;
        for (std::size_t i = 0; i < orbit.size(); ++i) {
          for (std::size_t s = 0; s < gens_.size(); ++s) {
            ElemId y = mul(ginv[s], mul_gen(orbit[i], s));
            if (cof[y] == UINT32_MAX) {
              cof[y] = c;
              orbit.push_back(y);
            }
          }
        }
        std::sort(orbit.begin(), orbit.end());
        cls.push_back(std::move(orbit));
      }
    });
  }

  static constexpr ElemId kEmpty = UINT32_MAX;

  PermGroup pg_;
  std::size_t n_ = 0, deg_ = 0, count_ = 0;
  std::vector<std::uint32_t> base_;
  std::vector<std::uint32_t> perms_, keys_;
  std::vector<ElemId> table_;
  std::vector<ElemId> gens_, gen_mul_, inv_;
  std::vector<std::uint32_t> ord_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

using GroupPtr = std::shared_ptr<const Group>;

inline GroupPtr make_group(PermGroup pg, std::size_t cap = kDefaultElementCap) {
  return std::make_shared<const Group>(std::move(pg), cap);
}

// Regular permutation representation of the presented group.
inline PermGroup perm_group_from_presentation(const Presentation& p,
                                              std::size_t max_cosets = default_max_cosets()) {
  CosetTable t = enumerate_cosets(p, {}, max_cosets);
  return PermGroup(t.num_cosets, perm_rep(t));
}

}  // namespace autoscope
