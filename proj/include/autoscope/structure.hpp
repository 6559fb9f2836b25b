#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "autoscope/group.hpp"

namespace autoscope {

inline bool commutes_with_all(const Group& g, ElemId x, const std::vector<ElemId>& with) {
  for (ElemId y : with)
    if (g.mul(x, y) != g.mul(y, x)) return false;
  return true;
}

inline bool is_abelian(const Group& g) {
  const auto& gens = g.generators();
  for (ElemId a : gens)
    if (!commutes_with_all(g, a, gens)) return false;
  return true;
}

inline Subgroup centralizer(const Group& g, const std::vector<ElemId>& of) {
  Bitset set(g.order());
  for (ElemId x = 0; x < g.order(); ++x)
    if (commutes_with_all(g, x, of)) set.set(x);
  return g.from_set(set);
}

inline Subgroup centralizer(const Group& g, const Subgroup& h) { return centralizer(g, h.generators); }

inline Subgroup center(const Group& g) { return centralizer(g, g.generators()); }

inline bool normalizes(const Group& g, ElemId x, const Subgroup& h) {
  for (ElemId y : h.generators)
    if (!h.contains(g.conj(y, x))) return false;
  return true;
}

inline Subgroup normalizer(const Group& g, const Subgroup& h) {
  Bitset set(g.order());
  for (ElemId x = 0; x < g.order(); ++x)
    if (normalizes(g, x, h)) set.set(x);
  return g.from_set(set);
}

inline bool is_normal(const Group& g, const Subgroup& h) {
  for (ElemId x : g.generators())
    if (!normalizes(g, x, h)) return false;
  return true;
}

// Smallest normal subgroup containing the seeds.
inline Subgroup normal_closure(const Group& g, const std::vector<ElemId>& seeds) {
  Subgroup h = g.trivial_subgroup();
  for (ElemId s : seeds) {
    if (h.contains(s)) continue;
    for (ElemId c : g.classes()[g.class_of(s)])
      if (!h.contains(c)) h = g.extend(h, c);
  }
  return h;
}

inline Subgroup derived_subgroup(const Group& g) {
  std::vector<ElemId> comms;
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) comms.push_back(g.commutator(gens[i], gens[j]));
  return normal_closure(g, comms);
}

inline Subgroup intersection(const Group& g, const Subgroup& a, const Subgroup& b) {
  return g.from_set(a.members & b.members);
}

inline Subgroup join(const Group& g, const Subgroup& a, const Subgroup& b) {
  Subgroup r = a;
  for (ElemId x : b.generators) r = g.extend(r, x);
  return r;
}

inline std::size_t prime_part(std::size_t n, std::size_t p) {
  std::size_t r = 1;
  while (n % p == 0) {
    n /= p;
    r *= p;
  }
  return r;
}

// A Sylow p-subgroup, grown one factor p at a time inside normalizers.
inline Subgroup sylow_subgroup(const Group& g, std::size_t p) {
  std::size_t target = prime_part(g.order(), p);
  Subgroup s = g.trivial_subgroup();
  while (s.order() < target) {
    Subgroup n = normalizer(g, s);
    bool grown = false;
    for (ElemId x : n.elements()) {
      if (s.contains(x)) continue;
      if (!s.contains(g.pow(x, static_cast<long long>(p)))) continue;
      std::size_t o = g.elem_order(x);
      if (prime_part(o, p) != o) continue;
      s = g.extend(s, x);
      grown = true;
      break;
    }
    if (!grown) throw Error("sylow search failed");
  }
  return s;
}

struct Quotient {
  PermGroup group;
  std::vector<std::uint32_t> coset_of;
  std::vector<ElemId> representatives;
};

// G/N acting regularly on the right cosets of N.
inline Quotient quotient(const Group& g, const Subgroup& n) {
  if (!is_normal(g, n)) throw Error("quotient by a non-normal subgroup");
  Quotient q;
  q.coset_of.assign(g.order(), UINT32_MAX);
  std::vector<ElemId> nel = n.elements();
  for (ElemId x = 0; x < g.order(); ++x) {
    if (q.coset_of[x] != UINT32_MAX) continue;
    auto c = static_cast<std::uint32_t>(q.representatives.size());
    q.representatives.push_back(x);
    for (ElemId y : nel) q.coset_of[g.mul(y, x)] = c;
  }
  std::size_t m = q.representatives.size();
  std::vector<Perm> gens;
  for (std::size_t s = 0; s < g.generators().size(); ++s) {
    std::vector<std::uint32_t> img(m);
    for (std::size_t c = 0; c < m; ++c) img[c] = q.coset_of[g.mul_gen(q.representatives[c], s)];
    gens.emplace_back(std::move(img));
  }
  q.group = PermGroup(m, std::move(gens));
  return q;
}

inline Group subgroup_as_group(const Group& g, const Subgroup& h) {
  return Group(g.subgroup_perm_group(h));
}

inline constexpr std::size_t kDefaultNormalCap = 100000;

// All normal subgroups, sorted by (order, canonical membership order).
inline std::vector<Subgroup> normal_subgroups(const Group& g, std::size_t cap = kDefaultNormalCap) {
  if (g.order() > cap) throw CapExceeded("normal subgroup enumeration above cap");
  std::vector<Subgroup> minimal;
  std::unordered_set<Bitset, BitsetHash> seen_min;
  for (const auto& cls : g.classes()) {
    Subgroup c = normal_closure(g, {cls.front()});
    if (seen_min.insert(c.members).second) minimal.push_back(std::move(c));
  }
  std::vector<Subgroup> all;
  std::unordered_set<Bitset, BitsetHash> seen;
  auto add = [&](Subgroup s) {
    if (seen.insert(s.members).second) all.push_back(std::move(s));
  };
  add(g.trivial_subgroup());
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& c : minimal) {
      if (c.members.subset_of(all[i].members)) continue;
      add(join(g, all[i], c));
    }
  }
  std::sort(all.begin(), all.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return Bitset::canonical_less(a.members, b.members);
  });
  return all;
}

// First pair (N1, N2) of nontrivial normal subgroups with G = N1 x N2.
inline std::optional<std::pair<Subgroup, Subgroup>> direct_product_factorization(
    const Group& g, std::size_t min_first_order = 2, std::size_t cap = kDefaultNormalCap) {
  std::vector<Subgroup> ns = normal_subgroups(g, cap);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const Subgroup& a = ns[i];
    if (a.order() < min_first_order || a.order() == 1 || a.order() == g.order()) continue;
    for (std::size_t j = i + 1; j < ns.size(); ++j) {
      const Subgroup& b = ns[j];
      if (a.order() * b.order() != g.order()) continue;
      if ((a.members & b.members).count() != 1) continue;
      return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

struct OrderClassData {
  std::size_t count = 0;
  std::size_t classes = 0;
  std::map<std::size_t, std::size_t> class_sizes;  // size -> multiplicity
};

using OrderStructure = std::map<std::uint32_t, OrderClassData>;

inline OrderStructure order_structure(const Group& g) {
  OrderStructure os;
  for (const auto& cls : g.classes()) {
    std::uint32_t o = g.elem_order(cls.front());
    if (o == 1) continue;
    auto& d = os[o];
    d.count += cls.size();
    d.classes += 1;
    d.class_sizes[cls.size()] += 1;
  }
  return os;
}

// Lines like "2-47-15 [1^3,2^6,4^4,8^2]".
inline std::vector<std::string> format_order_structure(const OrderStructure& os) {
  std::vector<std::string> out;
  for (const auto& [o, d] : os) {
    std::ostringstream s;
    s << o << '-' << d.count << '-' << d.classes << " [";
    bool first = true;
    for (const auto& [size, mult] : d.class_sizes) {
      if (!first) s << ',';
      first = false;
      s << size << '^' << mult;
    }
    s << ']';
    out.push_back(s.str());
  }
  return out;
}

}  // namespace autoscope
