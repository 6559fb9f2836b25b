#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "autoscope/catalog.hpp"
#include "autoscope/constructions.hpp"
#include "autoscope/morphisms.hpp"
#include "autoscope/structure.hpp"

namespace autoscope {

struct ReferenceGroup {
  std::string label;
  std::string presentation;
};

inline const std::vector<ReferenceGroup>& order8_groups() {
  static const std::vector<ReferenceGroup> g = {
      {"C8", "a^8=1"},
      {"C4xC2", "a^4=b^2=(a,b)=1"},
      {"C2xC2xC2", "a^2=b^2=c^2=(a,b)=(a,c)=(b,c)=1"},
      {"D4", "a^4=b^2=a^b*a=1"},
      {"Q2", "a^4=a^2*(b^-2)=a^b*a=1"},
  };
  return g;
}

// Numbered as in the Hall-Senior order 16 list.
inline const std::vector<ReferenceGroup>& order16_groups() {
  static const std::vector<ReferenceGroup> g = {
      {"(1^4)", "a^2=b^2=c^2=d^2=(a,b)=(a,c)=(a,d)=(b,c)=(b,d)=(c,d)=1"},
      {"(2,1^2)", "a^4=b^2=c^2=(a,b)=(a,c)=(b,c)=1"},
      {"(2^2)", "a^4=b^4=(a,b)=1"},
      {"(3,1)", "a^8=b^2=(a,b)=1"},
      {"(4)", "a^16=1"},
      {"D4xC2", "a^4=b^2=a^b*a=c^2=(a,c)=(b,c)=1"},
      {"Q2xC2", "a^4=a^2*(b^-2)=a^b*a=c^2=(a,c)=(b,c)=1"},
      {"C4YQ2", "b^2=c^2=(b,c)*a^2=(a,b)=(a,c)=1"},
      {"(4,4|2,2)", "a^2=b^4=((a,b),a)=((a,b),b)=1"},
      {"C4@C4", "a^4=b^4=(a,b)*a^2=1"},
      {"<2,2|2>", "a^2*(b^-8)=(a,b)*b^4=1"},
      {"D8", "a^8=b^2=(a,b)*a^2=1"},
      {"<-2,4|2>", "b^2=(b,a)*a^2=1"},
      {"Q4", "a^4*(b^-2)=(a,b)*a^2=1"},
  };
  return g;
}

// Index into order16_groups() for a kernel label as printed, or -1.
inline int order16_index(const std::string& label) {
  static const std::map<std::string, int> m = {
      {"(1,1,1,1)", 0}, {"1^4", 0},      {"(1^4)", 0},      {"(2,1,1)", 1},    {"(2,1^2)", 1},
      {"(2^2)", 2},     {"C4xC4", 2},    {"(2,2)", 2},      {"(3,1)", 3},      {"C8xC2", 3},
      {"(4)", 4},       {"C16", 4},      {"D4xC2", 5},      {"Q2xC2", 6},      {"C4YQ2", 7},
      {"(4,4|2,2)", 8}, {"#9[16]", 8},   {"C4@C4", 9},      {"<2,2|2>", 10},   {"D8", 11},
      {"<-2,4|2>", 12}, {"Q4", 13},
  };
  auto it = m.find(label);
  return it == m.end() ? -1 : it->second;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Subgroup of a concrete group generated by permutations of its degree.
inline Subgroup subgroup_from_perms(const Group& g, const std::vector<Perm>& perms) {
  std::vector<ElemId> ids;
  for (const auto& p : perms) {
    auto id = g.find(p);
    if (!id) throw Error("permutation not in group");
    ids.push_back(*id);
  }
  return g.closure(ids);
}

// Index-2 subgroup on which the listed generators act by inversion.
inline Subgroup kernel_from_action(const GroupPtr& g, const Presentation& p, const std::vector<char>& action) {
  GroupPtr c2 = make_group(cyclic_group(2));
  GroupHomomorphism f{g, c2, {}};
  for (char x : p.generators) {
    bool acts = std::find(action.begin(), action.end(), x) != action.end();
    f.images.push_back(acts ? c2->generators().at(0) : Group::identity());
  }
  for (char x : action)
    if (p.index_of(x) < 0) throw Error(std::string("action generator '") + x + "' not in presentation");
  auto phi = f.extend();
  if (!phi) throw Error("action does not define a homomorphism onto C2");
  Bitset k(g->order());
  for (ElemId x = 0; x < g->order(); ++x)
    if ((*phi)[x] == Group::identity()) k.set(x);
  return g->from_set(k);
}

struct ExtensionSpec {
  GroupPtr base;
  Subgroup kernel;
  std::size_t prime = 3;
};

// C_p @ base on |base| + p points: base acts regularly and inverts C_p
// through base/kernel.
inline PermGroup build_32p(const ExtensionSpec& s) {
  const Group& g = *s.base;
  std::size_t n = g.order(), p = s.prime, deg = n + p;
  if (s.kernel.order() * 2 != n || !is_normal(g, s.kernel)) throw Error("kernel is not of index 2");
  std::vector<Perm> gens;
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    bool inverts = !s.kernel.contains(g.generators()[i]);
    std::vector<std::uint32_t> img(deg);
    for (std::size_t x = 0; x < n; ++x) img[x] = g.mul_gen(static_cast<ElemId>(x), i);
    for (std::size_t k = 0; k < p; ++k)
      img[n + k] = static_cast<std::uint32_t>(n + (inverts ? (p - k) % p : k));
    gens.emplace_back(std::move(img));
  }
  std::vector<std::uint32_t> cyc(deg);
  for (std::size_t x = 0; x < n; ++x) cyc[x] = static_cast<std::uint32_t>(x);
  for (std::size_t k = 0; k < p; ++k) cyc[n + k] = static_cast<std::uint32_t>(n + (k + 1) % p);
  gens.emplace_back(std::move(cyc));
  PermGroup r(deg, std::move(gens));
  if (r.order() != n * p) throw Error("extension has the wrong order");
  return r;
}

struct AssociatedGroup {
  Subgroup sylow_p;
  Subgroup sylow_2;
  Subgroup kernel;  // inside sylow_2
};

// Kernel of the action of the Sylow 2-subgroup on the normal Sylow p.
inline AssociatedGroup group_associated_with_extension(const Group& g, std::size_t p) {
  AssociatedGroup a;
  a.sylow_p = sylow_subgroup(g, p);
  if (!is_normal(g, a.sylow_p)) throw Error("Sylow p-subgroup is not normal");
  a.sylow_2 = sylow_subgroup(g, 2);
  Subgroup c = centralizer(g, a.sylow_p);
  a.kernel = intersection(g, c, a.sylow_2);
  if (a.kernel.order() * 2 != a.sylow_2.order()) throw Error("action is not of order 2");
  return a;
}

// Sends each member of s (a subgroup of g) to the corresponding element of
// h = subgroup_as_group(g, s).
inline std::vector<ElemId> embed_members(const Group& g, const Subgroup& s, const Group& h) {
  std::vector<ElemId> out(g.order(), UINT32_MAX);
  for (ElemId x : s.elements()) {
    auto y = h.find(g.perm(x));
    if (!y) throw Error("subgroup element missing from its own group");
    out[x] = *y;
  }
  return out;
}

enum class FactorMatch { kIsoConfirmed, kOrderOnly, kMismatch };

inline const char* to_string(FactorMatch m) {
  switch (m) {
    case FactorMatch::kIsoConfirmed:
      return "iso_confirmed";
    case FactorMatch::kOrderOnly:
      return "order_only";
    default:
      return "mismatch";
  }
}

struct HolomorphSplit {
  GroupPtr aut;  // concrete Aut(G) on its action
  Subgroup n1;   // = Hol(C_p)
  Subgroup n2;   // the 2-group side factor
};

// Finds Aut(G) = N1 x N2 with N1 ~ Hol(C_p) containing the inner
// automorphisms by the Sylow p-subgroup P.
inline std::optional<HolomorphSplit> split_holomorph(const AutomorphismGroup& a, const Subgroup& P, std::size_t p,
                                                     std::size_t normal_cap = kDefaultNormalCap) {
  HolomorphSplit r;
  r.aut = make_group(a.action());
  const Group& A = *r.aut;
  std::vector<Perm> inner;
  for (ElemId x : P.generators) inner.push_back(element_map_to_action(a.inner(x)));
  Subgroup N = subgroup_from_perms(A, inner);
  if (N.order() != p) return std::nullopt;
  std::size_t hol = p * (p - 1);
  if (A.order() % hol) return std::nullopt;
  std::size_t m = A.order() / hol;
  GroupPtr holc = make_group(holomorph(make_group(cyclic_group(p))));
  auto accept = [&](const Subgroup& n1, const Subgroup& n2) {
    if (n1.order() != hol || n2.order() != m) return false;
    if ((n1.members & n2.members).count() != 1) return false;
    if (!is_normal(A, n1) || !is_normal(A, n2)) return false;
    return are_isomorphic(make_group(A.subgroup_perm_group(n1)), holc);
  };
  Subgroup c = centralizer(A, N);
  if (m % p != 0 && c.order() == p * m) {
    // C = N x N2 with p coprime to |N2|.
    Bitset s(A.order());
    for (ElemId x : c.elements())
      if (A.pow(x, static_cast<long long>(m)) == Group::identity()) s.set(x);
    Subgroup n2 = A.from_set(s);
    if (n2.order() == m) {
      Subgroup n1 = centralizer(A, n2);
      if (accept(n1, n2)) {
        r.n1 = n1;
        r.n2 = n2;
        return r;
      }
    }
  }
  if (A.order() > normal_cap) return std::nullopt;
  std::vector<Subgroup> ns = normal_subgroups(A, normal_cap);
  for (const auto& n1 : ns) {
    if (n1.order() != hol || !N.members.subset_of(n1.members)) continue;
    for (const auto& n2 : ns) {
      if (accept(n1, n2)) {
        r.n1 = n1;
        r.n2 = n2;
        return r;
      }
    }
  }
  return std::nullopt;
}

// Aut(C_p @ G) = Hol(C_p) x Stab(K), built from explicit automorphisms:
// each stabilizer element extended by c -> c, the inner map by c and
// c -> c^r. Holds iff the generated group has order p(p-1)|Stab|.
struct ConstructiveSplit {
  PermGroup hol;
  PermGroup factor;
  bool commute = false;
  bool generates = false;
};

inline std::size_t primitive_root(std::size_t p) {
  for (std::size_t r = 2; r < p; ++r) {
    std::size_t x = 1, k = 0;
    do {
      x = x * r % p;
      ++k;
    } while (x != 1);
    if (k == p - 1) return r;
  }
  return 1;
}

inline ConstructiveSplit constructive_split(const AutomorphismGroup& aut, const GroupPtr& base, const PermGroup& stab,
                                            std::size_t p) {
  const Group& g = *aut.group();
  const Group& b = *base;
  std::size_t m = b.generators().size();
  if (g.generators().size() != m + 1) throw Error("extension generators do not match the base group");
  std::vector<ElemId> emb(b.order(), UINT32_MAX);
  emb[Group::identity()] = Group::identity();
  std::vector<ElemId> queue{Group::identity()};
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (std::size_t i = 0; i < m; ++i) {
      ElemId y = b.mul_gen(queue[q], i);
      if (emb[y] != UINT32_MAX) continue;
      emb[y] = g.mul(emb[queue[q]], g.generators()[i]);
      queue.push_back(y);
    }
  ElemId c = g.generators()[m];
  auto as_action = [&](const std::vector<ElemId>& images) {
    auto phi = GroupHomomorphism{aut.group(), aut.group(), images}.extend();
    if (!phi) throw Error("extended map is not a homomorphism");
    Perm e(std::vector<std::uint32_t>(phi->begin(), phi->end()));
    if (!aut.contains(e)) throw Error("extended map is not an automorphism");
    return element_map_to_action(e);
  };
  std::vector<Perm> fgens;
  for (const Perm& a : stab.generators()) {
    Perm e = action_to_element_map(a);
    std::vector<ElemId> images;
    for (std::size_t i = 0; i < m; ++i) images.push_back(emb[e[b.generators()[i]]]);
    images.push_back(c);
    fgens.push_back(as_action(images));
  }
  std::vector<ElemId> sigma(g.generators().begin(), g.generators().end());
  sigma[m] = g.pow(c, static_cast<long long>(primitive_root(p)));
  std::vector<Perm> hgens{element_map_to_action(aut.inner(c)), as_action(sigma)};
  ConstructiveSplit r{PermGroup(g.order() - 1, hgens), PermGroup(g.order() - 1, fgens)};
  r.commute = true;
  for (const auto& x : hgens)
    for (const auto& y : fgens)
      if (!(x * y == y * x)) r.commute = false;
  std::vector<Perm> all = hgens;
  all.insert(all.end(), fgens.begin(), fgens.end());
  PermGroup both(g.order() - 1, all);
  r.generates = r.commute && r.hol.order() == p * (p - 1) && r.factor.order() == stab.order() &&
                both.order() == aut.order() && both.order() == r.hol.order() * r.factor.order();
  return r;
}

struct ExtensionReport {
  std::string row_id;
  std::size_t prime = 0;
  std::uint64_t group_order = 0;
  std::uint64_t aut32_order = 0;
  std::uint64_t aut_order = 0;
  std::uint64_t predicted = 0;
  std::size_t k = 0;              // printed multiplicity
  std::size_t k_computed = 0;     // orbit length of the kernel
  bool kernel_index2 = false;
  bool kernel_matches_action = false;
  int kernel_label_expected = -1;  // index into order16_groups()
  int kernel_label_computed = -1;
  bool order_law = false;
  bool roundtrip = false;
  FactorMatch factor_match = FactorMatch::kMismatch;
  std::uint64_t factor_order = 0;        // |N2| found in Aut
  bool split = false;                    // Aut = Hol(C_p) x Stab(K) shown
  std::string note;
  bool anomaly = false;
  double seconds = 0;
};

inline json to_json(const ExtensionReport& r) {
  json j = {{"row_id", r.row_id},
            {"p", r.prime},
            {"group_order", r.group_order},
            {"aut_order", r.aut_order},
            {"predicted", r.predicted},
            {"k", r.k},
            {"k_computed", r.k_computed},
            {"factor_match", to_string(r.factor_match)},
            {"factor_order", r.factor_order},
            {"order_law", r.order_law},
            {"kernel_index2", r.kernel_index2},
            {"kernel_matches_action", r.kernel_matches_action},
            {"roundtrip", r.roundtrip},
            {"anomaly", r.anomaly},
            {"timings", {{"seconds", r.seconds}}}};
  j["kernel_label"] = r.kernel_label_computed >= 0 ? json(order16_groups()[r.kernel_label_computed].label) : json();
  j["split"] = r.split;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

struct AutsubcReport {
  int id = 0;
  std::string row_id;
  std::uint64_t aut_order = 0;
  std::uint64_t t_order = 0;
  std::uint64_t stab_order = 0;
  bool t_normal_in_aut = false;
  bool stab_normal_in_aut = false;
  std::optional<std::size_t> normal_count;
  std::optional<std::size_t> characteristic_count;
  std::optional<std::size_t> characteristic_count_all;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> t_direct_factors;
  bool anomaly = false;
  double seconds = 0;
};

inline json to_json(const AutsubcReport& r) {
  json j = {{"id", r.id},
            {"row_id", r.row_id},
            {"aut_order", r.aut_order},
            {"T_order", r.t_order},
            {"stab_order", r.stab_order},
            {"T_normal_in_aut", r.t_normal_in_aut},
            {"stab_normal_in_aut", r.stab_normal_in_aut},
            {"anomaly", r.anomaly},
            {"timings", {{"seconds", r.seconds}}}};
  if (r.normal_count) j["normal_count"] = *r.normal_count;
  if (r.characteristic_count) j["characteristic_count"] = *r.characteristic_count;
  if (r.characteristic_count_all) j["characteristic_count_all"] = *r.characteristic_count_all;
  if (r.t_direct_factors) j["T_direct_factors"] = {r.t_direct_factors->first, r.t_direct_factors->second};
  return j;
}

struct CensusGroupCount {
  std::string label;
  std::size_t index2 = 0;         // index-2 subgroups
  std::size_t index2_orbits = 0;  // dimidiations
  std::size_t pairs = 0;          // (N, M) with M < N, G/M ~ C2 x C2
  std::size_t pair_orbits = 0;
};

struct LabOptions {
  std::uint64_t aut_cap = default_aut_cap();
  std::size_t normal_cap = kDefaultNormalCap;
  std::size_t iso_cap = 30000;  // largest order compared by isomorphism
};

class Lab {
 public:
  explicit Lab(const Catalog& c, LabOptions o = {}) : cat_(c), opt_(o) {}

  const Catalog& catalog() const { return cat_; }
  const LabOptions& options() const { return opt_; }

  std::shared_ptr<const AutomorphismGroup> aut32(int id) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->aut.find(id);
      if (it != cache_->aut.end()) return it->second;
    }
    auto a = std::make_shared<const AutomorphismGroup>(automorphism_group(cat_.group(id), opt_.aut_cap));
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->aut.emplace(id, a).first->second;
  }

  GroupPtr aut32_concrete(int id) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto it = cache_->aut_concrete.find(id);
      if (it != cache_->aut_concrete.end()) return it->second;
    }
    GroupPtr g = make_group(aut32(id)->action());
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->aut_concrete.emplace(id, g).first->second;
  }

  static GroupPtr order16(int index) {
    static std::mutex mu;
    static std::map<int, GroupPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(index);
    if (it != cache.end()) return it->second;
    GroupPtr g = make_group(from_presentation_text(order16_groups().at(index).presentation));
    cache.emplace(index, g);
    return g;
  }

  // Which order-16 group a subgroup is, or -1.
  static int identify16(const Group& g, const Subgroup& s) {
    if (s.order() != 16) return -1;
    GroupPtr h = make_group(g.subgroup_perm_group(s));
    for (int i = 0; i < static_cast<int>(order16_groups().size()); ++i)
      if (are_isomorphic(h, order16(i))) return i;
    return -1;
  }

  ExtensionReport verify_extension_row(const ExtensionRow& row, std::size_t p) const {
    auto t0 = std::chrono::steady_clock::now();
    ExtensionReport r;
    r.row_id = row.row_id;
    r.prime = p;
    r.k = row.multiplicity;
    GroupPtr base = cat_.group(row.base_id);
    auto a32 = aut32(row.base_id);
    r.aut32_order = a32->order();
    Subgroup kernel = cat_.kernel(row);
    r.kernel_index2 = kernel.order() * 2 == base->order() && is_normal(*base, kernel);
    Subgroup by_action = kernel_from_action(base, cat_.presentation(row.base_id), row.action);
    r.kernel_matches_action = by_action.members == kernel.members;
    r.kernel_label_expected = order16_index(row.kernel_label);
    r.kernel_label_computed = identify16(*base, kernel);
    r.k_computed = characteristic_multiplicity(*a32, kernel);
    if (!r.kernel_index2) {
      r.note = "kernel words do not give an index-2 subgroup";
      r.anomaly = true;
      r.seconds = seconds_since(t0);
      return r;
    }
    std::uint64_t num = static_cast<std::uint64_t>(p) * (p - 1) * r.aut32_order;
    r.predicted = num % r.k == 0 ? num / r.k : 0;
    PermGroup g32p = build_32p({base, kernel, p});
    GroupPtr g = make_group(g32p);
    r.group_order = g->order();
    AutomorphismGroup a = automorphism_group(g, opt_.aut_cap);
    r.aut_order = a.order();
    r.order_law = r.predicted != 0 && r.aut_order == r.predicted;

    AssociatedGroup assoc = group_associated_with_extension(*g, p);
    GroupPtr s2 = make_group(g->subgroup_perm_group(assoc.sylow_2));
    auto iso = isomorphism_test(s2, base);
    if (iso) {
      auto phi = iso->extend();
      auto emb = embed_members(*g, assoc.sylow_2, *s2);
      Bitset img(base->order());
      for (ElemId x : assoc.kernel.elements()) img.set((*phi)[emb[x]]);
      SubgroupOrbit orbit = subgroup_orbit(*a32, kernel.members);
      for (const auto& m : orbit.members)
        if (m == img) r.roundtrip = true;
    }

    std::uint64_t want = r.aut32_order / r.k;
    PermGroup stab = setwise_stabilizer_in_aut(*a32, kernel);
    ConstructiveSplit split = constructive_split(a, base, stab, p);
    r.split = split.generates;
    r.factor_order = split.factor.order();
    if (!split.generates) {
      r.factor_match = FactorMatch::kMismatch;
      r.note = "Aut is not Hol(C_p) x Stab(K)";
    } else if (row.characteristic) {
      r.factor_match = r.factor_order == r.aut32_order ? FactorMatch::kIsoConfirmed : FactorMatch::kMismatch;
    } else if (row.meta.contains("factor_recipe")) {
      GroupPtr want_g = make_group(cat_.construct_recipe(row.meta["factor_recipe"].get<std::string>()));
      if (want_g->order() != r.factor_order)
        r.factor_match = FactorMatch::kMismatch;
      else if (r.factor_order <= opt_.iso_cap)
        r.factor_match =
            are_isomorphic(make_group(stab), want_g) ? FactorMatch::kIsoConfirmed : FactorMatch::kMismatch;
      else
        r.factor_match = FactorMatch::kOrderOnly;
    } else {
      r.factor_match = r.factor_order == want ? FactorMatch::kOrderOnly : FactorMatch::kMismatch;
    }
    if (row.meta.contains("factor_order") && row.meta["factor_order"].get<std::uint64_t>() != want)
      r.note += (r.note.empty() ? "" : "; ") + std::string("printed factor order differs from |Aut|/k");
    r.anomaly = !r.order_law || r.k_computed != r.k || r.factor_match == FactorMatch::kMismatch ||
                (r.kernel_label_expected >= 0 && r.kernel_label_computed != r.kernel_label_expected) || !r.roundtrip;
    r.seconds = seconds_since(t0);
    return r;
  }

  struct NormalCensus {
    std::size_t normal = 0;
    std::size_t characteristic = 0;      // excluding 1 and the whole group
    std::size_t characteristic_all = 0;  // including them
  };

  // Normal and characteristic subgroup counts of Aut(G32).
  NormalCensus aut_normal_census(int id) const {
    GroupPtr A = aut32_concrete(id);
    std::vector<Subgroup> ns = normal_subgroups(*A, opt_.normal_cap);
    AutomorphismGroup aa = automorphism_group(A, opt_.aut_cap);
    NormalCensus c;
    c.normal = ns.size();
    for (const auto& n : ns)
      if (is_characteristic(aa, n)) ++c.characteristic_all;
    c.characteristic = c.characteristic_all - (A->order() > 1 ? 2 : 1);
    return c;
  }

  AutsubcReport autsubc(const ExtensionRow& row, bool with_census) const {
    auto t0 = std::chrono::steady_clock::now();
    AutsubcReport r;
    r.id = row.base_id;
    r.row_id = row.row_id;
    auto a32 = aut32(row.base_id);
    r.aut_order = a32->order();
    Subgroup kernel = cat_.kernel(row);
    PermGroup t = kernel_fixing_generators(*a32, kernel);
    PermGroup stab = setwise_stabilizer_in_aut(*a32, kernel);
    r.t_order = t.order();
    r.stab_order = stab.order();
    r.anomaly = r.t_order != r.stab_order;
    if (r.aut_order <= opt_.normal_cap) {
      GroupPtr A = aut32_concrete(row.base_id);
      Subgroup ts = subgroup_from_perms(*A, t.generators());
      Subgroup ss = subgroup_from_perms(*A, stab.generators());
      r.t_normal_in_aut = is_normal(*A, ts);
      r.stab_normal_in_aut = is_normal(*A, ss);
      GroupPtr tg = make_group(t);
      if (tg->order() <= opt_.normal_cap) {
        auto f = direct_product_factorization(*tg, 2, opt_.normal_cap);
        if (f) r.t_direct_factors = std::make_pair(f->first.order(), f->second.order());
      }
      if (with_census) {
        NormalCensus nc = aut_normal_census(row.base_id);
        r.normal_count = nc.normal;
        r.characteristic_count = nc.characteristic;
        r.characteristic_count_all = nc.characteristic_all;
      }
    }
    r.seconds = seconds_since(t0);
    return r;
  }

  // Aut-orbits of index-2 subgroups and of (N, M) incidences.
  static CensusGroupCount census_group(const GroupPtr& g, const std::string& label, std::uint64_t aut_cap) {
    CensusGroupCount c;
    c.label = label;
    AutomorphismGroup a = automorphism_group(g, aut_cap);
    std::vector<Subgroup> idx2;
    for (const auto& n : normal_subgroups(*g))
      if (n.order() * 2 == g->order()) idx2.push_back(n);
    c.index2 = idx2.size();
    std::unordered_set<Bitset, BitsetHash> seen;
    for (const auto& n : idx2) {
      if (seen.count(n.members)) continue;
      ++c.index2_orbits;
      for (const auto& m : subgroup_orbit(a, n.members).members) seen.insert(m);
    }
    // M = N1 ∩ N2 for distinct index-2 subgroups; pairs (N, M) with M < N.
    std::vector<std::pair<Bitset, Bitset>> pairs;
    std::unordered_set<Bitset, BitsetHash> ms;
    for (std::size_t i = 0; i < idx2.size(); ++i)
      for (std::size_t j = i + 1; j < idx2.size(); ++j) ms.insert(idx2[i].members & idx2[j].members);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::unordered_map<Bitset, std::size_t, BitsetHash> n_index, m_index;
    for (std::size_t i = 0; i < idx2.size(); ++i) n_index.emplace(idx2[i].members, i);
    std::vector<Bitset> mlist(ms.begin(), ms.end());
    std::sort(mlist.begin(), mlist.end(), Bitset::canonical_less);
    for (std::size_t j = 0; j < mlist.size(); ++j) m_index.emplace(mlist[j], j);
    for (std::size_t i = 0; i < idx2.size(); ++i)
      for (std::size_t j = 0; j < mlist.size(); ++j)
        if (mlist[j].subset_of(idx2[i].members)) index.emplace(std::make_pair(i, j), index.size());
    c.pairs = index.size();
    std::vector<bool> done(index.size());
    for (const auto& [key, id] : index) {
      if (done[id]) continue;
      ++c.pair_orbits;
      std::vector<std::pair<std::size_t, std::size_t>> stack{key};
      done[id] = true;
      while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        for (const auto& m : a.element_maps()) {
          std::size_t i2 = n_index.at(image_of(m, idx2[i].members));
          std::size_t j2 = m_index.at(image_of(m, mlist[j]));
          std::size_t id2 = index.at({i2, j2});
          if (!done[id2]) {
            done[id2] = true;
            stack.push_back({i2, j2});
          }
        }
      }
    }
    return c;
  }

  std::vector<CensusGroupCount> census(std::size_t order) const {
    std::vector<CensusGroupCount> out;
    if (order == 8 || order == 16) {
      const auto& refs = order == 8 ? order8_groups() : order16_groups();
      for (const auto& r : refs)
        out.push_back(census_group(make_group(from_presentation_text(r.presentation)), r.label, opt_.aut_cap));
    } else if (order == 32) {
      for (const auto& e : cat_.entries()) out.push_back(census_group(cat_.group(e.id), e.label, opt_.aut_cap));
    } else {
      throw Error("census is available for orders 8, 16 and 32");
    }
    return out;
  }

  struct Table3Report {
    std::string id;
    std::uint64_t group_order = 0;
    std::uint64_t aut_order = 0;
    std::optional<bool> aut_matches_recipe;
    std::optional<bool> complete;
    std::optional<std::size_t> aut_class_count;
    std::optional<std::size_t> aut_center_order;
    std::string error;
    std::string discrepancy;  // documented in the data file
    bool pass = false;
    double seconds = 0;
  };

  Table3Report verify_table3(const Table3Entry& t) const {
    auto t0 = std::chrono::steady_clock::now();
    Table3Report r;
    r.id = t.id;
    r.discrepancy = t.expected.value("discrepancy", "");
    try {
      GroupPtr g = make_group(cat_.build_table3(t));
      r.group_order = g->order();
      AutomorphismGroup a = automorphism_group(g, opt_.aut_cap);
      r.aut_order = a.order();
      bool ok = !t.expected.contains("aut_order") || t.expected["aut_order"].get<std::uint64_t>() == r.aut_order;
      bool small = r.aut_order <= opt_.iso_cap;
      GroupPtr A = small ? make_group(a.action()) : nullptr;
      if (t.expected.contains("aut_recipe") && small) {
        GroupPtr want = make_group(cat_.construct_recipe(t.expected["aut_recipe"].get<std::string>()));
        r.aut_matches_recipe = want->order() == r.aut_order && are_isomorphic(A, want);
        ok = ok && *r.aut_matches_recipe;
      }
      if (t.expected.contains("aut_complete") && small) {
        r.complete = is_complete(A, opt_.aut_cap);
        ok = ok && *r.complete == t.expected["aut_complete"].get<bool>();
      }
      if (t.expected.contains("aut_class_count") && small) {
        r.aut_class_count = A->classes().size();
        ok = ok && *r.aut_class_count == t.expected["aut_class_count"].get<std::size_t>();
      }
      if (t.expected.contains("aut_center_order") && small) {
        r.aut_center_order = center(*A).order();
        ok = ok && *r.aut_center_order == t.expected["aut_center_order"].get<std::size_t>();
      }
      r.pass = ok;
    } catch (const Error& e) {
      r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
  }

  struct Check {
    std::string name;
    json expected;
    json got;
    bool pass = false;
  };

  struct Table1Report {
    int id = 0;
    std::uint64_t group_order = 0;
    std::uint64_t aut_order = 0;
    std::vector<Check> checks;
    std::string discrepancy;
    std::string error;
    double seconds = 0;

    bool pass() const {
      if (!error.empty()) return false;
      for (const auto& c : checks)
        if (!c.pass) return false;
      return true;
    }
  };

  // Checks every printed Table 1 fact about Aut(G32) that fits the caps.
  Table1Report verify_table1(int id) const {
    auto t0 = std::chrono::steady_clock::now();
    Table1Report r;
    r.id = id;
    const json& e = cat_.entry(id).expected;
    r.discrepancy = e.value("discrepancy", "");
    auto add = [&](std::string name, json want, json got) {
      bool ok = want == got;
      r.checks.push_back({std::move(name), std::move(want), std::move(got), ok});
    };
    try {
      GroupPtr g = cat_.group(id);
      r.group_order = g->order();
      add("order", 32, r.group_order);
      auto a = aut32(id);
      r.aut_order = a->order();
      if (auto want = cat_.expected_aut_order(id)) add("aut_order", *want, r.aut_order);
      bool small = r.aut_order <= opt_.iso_cap;
      GroupPtr A = small ? aut32_concrete(id) : nullptr;
      if (e.contains("aut_recipe") && small) {
        GroupPtr want = make_group(cat_.construct_recipe(e["aut_recipe"].get<std::string>()));
        add("aut_recipe_iso", true, want->order() == r.aut_order && are_isomorphic(A, want));
      }
      if (e.contains("aut_classes") && small) add("aut_classes", e["aut_classes"], A->classes().size());
      if (e.contains("aut_order_structure") && small)
        add("aut_order_structure", e["aut_order_structure"], format_order_structure(order_structure(*A)));
      if (e.contains("aut_center_order") && small) add("aut_center_order", e["aut_center_order"], center(*A).order());
      if (e.contains("aut_complete") && small) add("aut_complete", e["aut_complete"], is_complete(A, opt_.aut_cap));
      if (e.contains("aut_perm_generators")) {
        const json& pg = e["aut_perm_generators"];
        std::size_t deg = pg["degree"].get<std::size_t>();
        std::vector<Perm> gens;
        for (const auto& s : pg["perms"]) gens.push_back(Perm::parse(deg, s.get<std::string>()));
        PermGroup P(deg, gens);
        add("aut_perm_generators_order", r.aut_order, P.order());
        if (small && P.order() <= opt_.iso_cap) add("aut_perm_generators_iso", true, are_isomorphic(A, make_group(P)));
      }
      if (e.contains("aut_presentation") && small) {
        std::uint64_t n = 0;
        try {
          n = from_presentation_text(e["aut_presentation"].get<std::string>()).order();
        } catch (const Error&) {
        }
        add("aut_presentation_order", r.aut_order, n);
      }
    } catch (const Error& ex) {
      r.error = ex.what();
    }
    r.seconds = seconds_since(t0);
    return r;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<int, std::shared_ptr<const AutomorphismGroup>> aut;
    std::map<int, GroupPtr> aut_concrete;
  };

  const Catalog& cat_;
  LabOptions opt_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline json to_json(const Lab::Table1Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"expected", c.expected}, {"got", c.got}, {"pass", c.pass}});
  json j = {{"id", r.id},
            {"group_order", r.group_order},
            {"aut_order", r.aut_order},
            {"pass", r.pass()},
            {"checks", checks},
            {"timings", {{"seconds", r.seconds}}}};
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.discrepancy.empty()) j["discrepancy"] = r.discrepancy;
  return j;
}

inline json to_json(const Lab::Table3Report& r) {
  json j = {{"id", r.id},
            {"group_order", r.group_order},
            {"aut_order", r.aut_order},
            {"pass", r.pass},
            {"timings", {{"seconds", r.seconds}}}};
  if (r.aut_matches_recipe) j["aut_matches_recipe"] = *r.aut_matches_recipe;
  if (r.complete) j["complete"] = *r.complete;
  if (r.aut_class_count) j["aut_class_count"] = *r.aut_class_count;
  if (r.aut_center_order) j["aut_center_order"] = *r.aut_center_order;
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.discrepancy.empty()) j["discrepancy"] = r.discrepancy;
  return j;
}

}  // namespace autoscope
