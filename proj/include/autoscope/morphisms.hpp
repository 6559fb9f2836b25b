#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "autoscope/group.hpp"
#include "autoscope/perm_group.hpp"
#include "autoscope/presentation.hpp"
#include "autoscope/structure.hpp"

namespace autoscope {

inline constexpr std::uint64_t kDefaultAutCap = 100000000;

inline std::uint64_t default_aut_cap() { return env_size("AUTOSCOPE_AUT_CAP", kDefaultAutCap); }

// Homomorphism given by the images of the source generators.
struct GroupHomomorphism {
  GroupPtr source;
  GroupPtr target;
  std::vector<ElemId> images;

  // Full element map, or nullopt if the images do not define a homomorphism.
  std::optional<std::vector<ElemId>> extend() const {
    const Group& s = *source;
    const Group& t = *target;
    if (images.size() != s.generators().size()) return std::nullopt;
    constexpr ElemId kNone = UINT32_MAX;
    std::vector<ElemId> phi(s.order(), kNone);
    phi[0] = 0;
    std::vector<ElemId> queue{0};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      ElemId e = queue[i];
      for (std::size_t g = 0; g < images.size(); ++g) {
        ElemId x = s.mul_gen(e, g);
        ElemId v = t.mul(phi[e], images[g]);
        if (phi[x] == kNone) {
          phi[x] = v;
          queue.push_back(x);
        } else if (phi[x] != v) {
          return std::nullopt;
        }
      }
    }
    return phi;
  }
};

inline bool verify_homomorphism(const GroupHomomorphism& h) { return h.extend().has_value(); }

inline bool is_bijective(const GroupHomomorphism& h) {
  auto phi = h.extend();
  if (!phi || h.source->order() != h.target->order()) return false;
  std::vector<bool> hit(h.target->order());
  for (ElemId v : *phi) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

// Evaluates a word with generator i sent to images[i].
inline ElemId evaluate(const Group& g, const Word& w, const std::vector<ElemId>& images) {
  ElemId r = Group::identity();
  for (const auto& s : w.syllables()) r = g.mul(r, g.pow(images[s.gen], s.exp));
  return r;
}

// True iff every relator maps to the identity.
inline bool satisfies_relators(const Presentation& p, const Group& target, const std::vector<ElemId>& images) {
  for (const auto& r : p.relators)
    if (evaluate(target, r, images) != Group::identity()) return false;
  return true;
}

// Per-element invariants preserved by isomorphisms: element order,
// class size and root count of the element and of its proper powers.
class FingerprintTable {
 public:
  std::vector<std::uint32_t> compute(const Group& g) {
    std::vector<std::uint32_t> roots(g.order());
    for (ElemId y = 0; y < g.order(); ++y) roots[g.mul(y, y)]++;
    std::vector<std::uint32_t> per_class(g.classes().size());
    for (std::size_t c = 0; c < g.classes().size(); ++c) {
      ElemId x = g.classes()[c].front();
      std::uint32_t o = g.elem_order(x);
      std::vector<std::uint64_t> v{o, g.classes()[c].size(), roots[x]};
      for (std::uint32_t d = 2; d < o; ++d) {
        if (o % d) continue;
        ElemId y = g.pow(x, d);
        v.push_back(g.classes()[g.class_of(y)].size());
        v.push_back(roots[y]);
      }
      auto [it, inserted] = ids_.emplace(std::move(v), static_cast<std::uint32_t>(ids_.size()));
      per_class[c] = it->second;
    }
    std::vector<std::uint32_t> fp(g.order());
    for (ElemId x = 0; x < g.order(); ++x) fp[x] = per_class[g.class_of(x)];
    return fp;
  }

 private:
  std::map<std::vector<std::uint64_t>, std::uint32_t> ids_;
};

namespace detail {

// Backtrack search for isomorphisms src -> dst over images of a greedy
// generating sequence of src.
class MorphismSearch {
 public:
  static constexpr ElemId kNone = UINT32_MAX;

  MorphismSearch(const Group& src, const Group& dst, std::vector<std::uint32_t> src_fp,
                 std::vector<std::uint32_t> dst_fp)
      : src_(src), dst_(dst), sfp_(std::move(src_fp)), dfp_(std::move(dst_fp)) {
    std::unordered_map<std::uint32_t, std::vector<ElemId>> by_fp;
    for (ElemId y = 0; y < dst_.order(); ++y) by_fp[dfp_[y]].push_back(y);
    choose_generators(by_fp);
    for (ElemId g : gens_) {
      auto it = by_fp.find(sfp_[g]);
      candidates_.push_back(it == by_fp.end() ? std::vector<ElemId>{} : it->second);
    }
    images_.assign(gens_.size(), kNone);
    reset();
  }

  const std::vector<ElemId>& generators() const { return gens_; }
  const std::vector<ElemId>& candidates(std::size_t level) const { return candidates_[level]; }
  const std::vector<ElemId>& map() const { return phi_; }

  void reset() {
    phi_.assign(src_.order(), kNone);
    phiinv_.assign(dst_.order(), kNone);
    mapped_.clear();
    phi_[0] = 0;
    phiinv_[0] = 0;
    mapped_.push_back(0);
  }

  std::size_t mark() const { return mapped_.size(); }

  void undo(std::size_t mark) {
    for (std::size_t i = mark; i < mapped_.size(); ++i) {
      phiinv_[phi_[mapped_[i]]] = kNone;
      phi_[mapped_[i]] = kNone;
    }
    mapped_.resize(mark);
  }

  // Maps gens_[j] to y, closing the partial map over gens_[0..j].
  bool extend(std::size_t j, ElemId y) {
    if (phiinv_[y] != kNone) return false;
    std::size_t m = mapped_.size();
    images_[j] = y;
    for (std::size_t idx = 0; idx < mapped_.size(); ++idx) {
      ElemId e = mapped_[idx];
      std::size_t lo = idx < m ? j : 0;
      for (std::size_t l = lo; l <= j; ++l) {
        ElemId t = src_.mul(e, gens_[l]);
        ElemId v = dst_.mul(phi_[e], images_[l]);
        if (phi_[t] == kNone) {
          if (phiinv_[v] != kNone || sfp_[t] != dfp_[v]) {
            undo(m);
            return false;
          }
          phi_[t] = v;
          phiinv_[v] = t;
          mapped_.push_back(t);
        } else if (phi_[t] != v) {
          undo(m);
          return false;
        }
      }
    }
    return true;
  }

  // Completes levels j.. to a full isomorphism.
  bool complete(std::size_t j) {
    if (j == gens_.size()) return mapped_.size() == src_.order();
    for (ElemId y : candidates_[j]) {
      std::size_t m = mark();
      if (!extend(j, y)) continue;
      if (complete(j + 1)) return true;
      undo(m);
    }
    return false;
  }

 private:
  void choose_generators(const std::unordered_map<std::uint32_t, std::vector<ElemId>>& by_fp) {
    Subgroup h = src_.trivial_subgroup();
    while (h.order() < src_.order()) {
      ElemId best = kNone;
      for (ElemId x = 0; x < src_.order(); ++x) {
        if (h.contains(x)) continue;
        if (best == kNone) {
          best = x;
          continue;
        }
        std::uint32_t ox = src_.elem_order(x), ob = src_.elem_order(best);
        if (ox != ob) {
          if (ox > ob) best = x;
          continue;
        }
        auto cx = by_fp.count(sfp_[x]) ? by_fp.at(sfp_[x]).size() : 0;
        auto cb = by_fp.count(sfp_[best]) ? by_fp.at(sfp_[best]).size() : 0;
        if (cx < cb) best = x;
      }
      gens_.push_back(best);
      h = src_.extend(h, best);
    }
  }

  const Group& src_;
  const Group& dst_;
  std::vector<std::uint32_t> sfp_, dfp_;
  std::vector<ElemId> gens_;
  std::vector<std::vector<ElemId>> candidates_;
  std::vector<ElemId> images_;
  std::vector<ElemId> phi_, phiinv_, mapped_;
};

}  // namespace detail

// Drops the identity point: element e > 0 becomes point e - 1.
inline Perm element_map_to_action(const Perm& m) {
  std::vector<std::uint32_t> img(m.degree() - 1);
  for (std::size_t i = 1; i < m.degree(); ++i) img[i - 1] = m[i] - 1;
  return Perm(std::move(img));
}

inline Perm action_to_element_map(const Perm& a) {
  std::vector<std::uint32_t> img(a.degree() + 1);
  for (std::size_t i = 0; i < a.degree(); ++i) img[i + 1] = a[i] + 1;
  return Perm(std::move(img));
}

// Aut(G), stored as element permutations with a stabilizer chain whose
// base is the search generating sequence.
class AutomorphismGroup {
 public:
  AutomorphismGroup(GroupPtr g, std::vector<ElemId> base, std::vector<Perm> maps, StabChain chain)
      : g_(std::move(g)), base_(std::move(base)), maps_(std::move(maps)), chain_(std::move(chain)) {}

  const GroupPtr& group() const { return g_; }
  std::uint64_t order() const { return chain_.order(); }
  const std::vector<ElemId>& search_generators() const { return base_; }

  // Generators as permutations of the elements of G (identity fixed).
  const std::vector<Perm>& element_maps() const { return maps_; }
  const StabChain& chain() const { return chain_; }
  bool contains(const Perm& element_map) const { return chain_.contains(element_map); }

  // Action on the |G| - 1 non-identity elements.
  PermGroup action() const {
    std::vector<Perm> gens;
    for (const auto& m : maps_) gens.push_back(element_map_to_action(m));
    return PermGroup(g_->order() - 1, std::move(gens));
  }

  GroupHomomorphism homomorphism(std::size_t i) const {
    GroupHomomorphism h{g_, g_, {}};
    for (ElemId x : g_->generators()) h.images.push_back(maps_[i][x]);
    return h;
  }

  Perm inner(ElemId by) const {
    std::vector<std::uint32_t> img(g_->order());
    for (ElemId x = 0; x < g_->order(); ++x) img[x] = g_->conj(x, by);
    return Perm(std::move(img));
  }

 private:
  GroupPtr g_;
  std::vector<ElemId> base_;
  std::vector<Perm> maps_;
  StabChain chain_;
};

inline AutomorphismGroup automorphism_group(const GroupPtr& gp, std::uint64_t cap = default_aut_cap()) {
  const Group& g = *gp;
  FingerprintTable table;
  std::vector<std::uint32_t> fp = table.compute(g);
  detail::MorphismSearch search(g, g, fp, fp);
  const auto& gens = search.generators();
  StabChain chain(g.order(), std::vector<std::uint32_t>(gens.begin(), gens.end()));
  std::vector<Perm> found;
  for (std::size_t level = gens.size(); level-- > 0;) {
    search.reset();
    for (std::size_t l = 0; l < level; ++l) search.extend(l, gens[l]);
    for (ElemId y : search.candidates(level)) {
      if (chain.in_orbit(level, y)) continue;
      std::size_t m = search.mark();
      if (search.extend(level, y) && search.complete(level + 1)) {
        Perm a(std::vector<std::uint32_t>(search.map().begin(), search.map().end()));
        if (chain.add_generator(a)) found.push_back(std::move(a));
        if (chain.order() > cap) throw CapExceeded("automorphism group exceeds cap");
      }
      search.undo(m);
    }
  }
  return AutomorphismGroup(gp, gens, std::move(found), std::move(chain));
}

// An isomorphism g -> h, or nullopt.
inline std::optional<GroupHomomorphism> isomorphism_test(const GroupPtr& g, const GroupPtr& h) {
  if (g->order() != h->order()) return std::nullopt;
  FingerprintTable table;
  std::vector<std::uint32_t> fg = table.compute(*g);
  std::vector<std::uint32_t> fh = table.compute(*h);
  std::vector<std::uint32_t> sg = fg, sh = fh;
  std::sort(sg.begin(), sg.end());
  std::sort(sh.begin(), sh.end());
  if (sg != sh) return std::nullopt;
  detail::MorphismSearch search(*g, *h, fg, fh);
  if (!search.complete(0)) return std::nullopt;
  GroupHomomorphism iso{g, h, {}};
  for (ElemId x : g->generators()) iso.images.push_back(search.map()[x]);
  return iso;
}

inline bool are_isomorphic(const GroupPtr& g, const GroupPtr& h) { return isomorphism_test(g, h).has_value(); }

// Image of a subgroup under an element map.
inline Bitset image_of(const Perm& map, const Bitset& members) {
  Bitset r(members.size());
  for (ElemId x : members.elements()) r.set(map[x]);
  return r;
}

struct SubgroupOrbit {
  std::vector<Bitset> members;
  std::vector<Perm> transversal;  // element maps taking the first member to each
};

// Orbit of a subgroup under the generated automorphisms.
inline SubgroupOrbit subgroup_orbit(const AutomorphismGroup& a, const Bitset& n) {
  SubgroupOrbit o;
  std::unordered_map<Bitset, std::size_t, BitsetHash> index;
  o.members.push_back(n);
  o.transversal.push_back(Perm(a.group()->order()));
  index.emplace(n, 0);
  for (std::size_t i = 0; i < o.members.size(); ++i) {
    for (const auto& m : a.element_maps()) {
      Bitset img = image_of(m, o.members[i]);
      if (index.count(img)) continue;
      index.emplace(img, o.members.size());
      o.transversal.push_back(o.transversal[i] * m);
      o.members.push_back(std::move(img));
    }
  }
  return o;
}

inline std::size_t characteristic_multiplicity(const AutomorphismGroup& a, const Subgroup& n) {
  return subgroup_orbit(a, n.members).members.size();
}

inline bool is_characteristic(const AutomorphismGroup& a, const Subgroup& n) {
  for (const auto& m : a.element_maps())
    if (!(image_of(m, n.members) == n.members)) return false;
  return true;
}

// Stabilizer of n in Aut(G), from Schreier generators of the orbit.
// Returned in the action on non-identity elements.
inline PermGroup setwise_stabilizer_in_aut(const AutomorphismGroup& a, const Subgroup& n) {
  SubgroupOrbit o = subgroup_orbit(a, n.members);
  std::unordered_map<Bitset, std::size_t, BitsetHash> index;
  for (std::size_t i = 0; i < o.members.size(); ++i) index.emplace(o.members[i], i);
  StabChain chain(a.group()->order());
  std::vector<Perm> gens;
  for (std::size_t i = 0; i < o.members.size(); ++i) {
    for (const auto& m : a.element_maps()) {
      std::size_t j = index.at(image_of(m, o.members[i]));
      Perm s = o.transversal[i] * m * o.transversal[j].inverse();
      if (chain.add_generator(s)) gens.push_back(element_map_to_action(s));
    }
  }
  return PermGroup(a.group()->order() - 1, std::move(gens));
}

// Subgroup of Aut(G) generated by the stored generators that fix n.
inline PermGroup kernel_fixing_generators(const AutomorphismGroup& a, const Subgroup& n) {
  std::vector<Perm> gens;
  for (const auto& m : a.element_maps())
    if (image_of(m, n.members) == n.members) gens.push_back(element_map_to_action(m));
  return PermGroup(a.group()->order() - 1, std::move(gens));
}

// Trivial center and every automorphism inner.
inline bool is_complete(const GroupPtr& g, std::uint64_t cap = default_aut_cap()) {
  if (center(*g).order() != 1) return false;
  return automorphism_group(g, cap).order() == g->order();
}

}  // namespace autoscope
