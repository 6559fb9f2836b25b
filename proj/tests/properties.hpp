#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "autoscope/lab.hpp"

namespace autoscope::testing {

struct CorpusGroup {
  std::string name;
  GroupPtr group;
};

inline constexpr std::size_t kPropertyOrderLimit = 2000;

// Every group of order <= 2000 the engine builds for the tables.
inline std::vector<CorpusGroup> property_corpus(const Catalog& cat, const Lab& lab) {
  std::vector<CorpusGroup> out;
  auto add = [&](std::string name, GroupPtr g) {
    if (g->order() <= kPropertyOrderLimit) out.push_back({std::move(name), std::move(g)});
  };
  for (const auto& r : order8_groups()) add("8:" + r.label, make_group(from_presentation_text(r.presentation)));
  for (std::size_t i = 0; i < order16_groups().size(); ++i) add("16:" + order16_groups()[i].label, Lab::order16(i));
  for (const auto& e : cat.entries()) add("32#" + std::to_string(e.id), cat.group(e.id));
  for (const auto& e : cat.entries()) {
    auto a = lab.aut32(e.id);
    if (a->order() <= kPropertyOrderLimit) add("Aut(32#" + std::to_string(e.id) + ")", lab.aut32_concrete(e.id));
  }
  for (const auto& row : cat.extensions()) {
    Subgroup k = cat.kernel(row);
    add("C3@" + row.row_id, make_group(build_32p({cat.group(row.base_id), k, 3})));
  }
  std::size_t n5 = 0;
  for (const auto& row : cat.extensions())
    if (row.row_id.back() == 'a' && n5++ < 12)
      add("C5@" + row.row_id, make_group(build_32p({cat.group(row.base_id), cat.kernel(row), 5})));
  for (const auto& t : cat.table3()) {
    if (t.expected.contains("discrepancy") && t.kind == "perms") continue;
    add("t3:" + t.id, make_group(cat.build_table3(t)));
  }
  for (const char* r : {"S4", "A4", "SL(2,3)", "GL(2,3)", "Hol(C5)", "Hol(C7)", "Hol(C31)", "D4 x D4", "S4 x C2 x C2",
                        "C2 wr S3", "A5", "S5", "GL(3,2)", "Q2 x C3"}) {
    try {
      add(r, make_group(cat.construct_recipe(r)));
    } catch (const Error&) {
    }
  }
  return out;
}

struct PropertyTally {
  std::size_t groups = 0;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

inline bool centralizer_size_ok(const Group& g, const std::vector<ElemId>& k) {
  return centralizer(g, std::vector<ElemId>{k.front()}).order() * k.size() == g.order();
}

inline void class_sizes_sum(const CorpusGroup& c, PropertyTally& t) {
  const Group& g = *c.group;
  std::size_t sum = 0;
  bool divides = true, centralizer = true;
  for (const auto& k : g.classes()) {
    sum += k.size();
    if (g.order() % k.size()) divides = false;
    if (!centralizer_size_ok(g, k)) centralizer = false;
  }
  t.check(sum == g.order(), c.name + ": class sizes sum");
  t.check(divides, c.name + ": class sizes divide |G|");
  t.check(centralizer, c.name + ": |class| = |G|/|C(x)|");
}

inline void inner_equals_quotient_by_center(const CorpusGroup& c, const AutomorphismGroup& a, PropertyTally& t) {
  const Group& g = *c.group;
  std::vector<Perm> inn;
  for (ElemId x : g.generators()) inn.push_back(element_map_to_action(a.inner(x)));
  std::uint64_t inn_order = g.order() == 1 ? 1 : PermGroup(g.order() - 1, inn).order();
  Subgroup z = center(g);
  t.check(inn_order == quotient(g, z).group.order(), c.name + ": |Inn| = |G/Z|");
  bool inner_in_aut = true;
  for (ElemId x : g.generators())
    if (!a.contains(a.inner(x))) inner_in_aut = false;
  t.check(inner_in_aut, c.name + ": Inn <= Aut");
}

inline void orbit_stabilizer(const CorpusGroup& c, const AutomorphismGroup& a, const std::vector<Subgroup>& ns,
                             PropertyTally& t, std::size_t limit = 40) {
  std::size_t done = 0;
  for (const auto& n : ns) {
    if (n.order() == 1 || n.order() == c.group->order()) continue;
    if (done++ >= limit) break;
    std::size_t k = characteristic_multiplicity(a, n);
    PermGroup stab = setwise_stabilizer_in_aut(a, n);
    PermGroup tg = kernel_fixing_generators(a, n);
    t.check(k * stab.order() == a.order(),
            c.name + ": |Aut| = k|stab| for a normal subgroup of order " + std::to_string(n.order()));
    t.check(stab.order() % tg.order() == 0, c.name + ": |T| divides |stab|");
  }
}

inline void quotient_multiplicativity(const CorpusGroup& c, const std::vector<Subgroup>& ns, PropertyTally& t,
                                      std::size_t limit = 40) {
  const Group& g = *c.group;
  std::size_t done = 0;
  for (const auto& n : ns) {
    if (done++ >= limit) break;
    Quotient q = quotient(g, n);
    t.check(q.group.order() * n.order() == g.order(), c.name + ": |G/N||N| = |G|");
  }
}

// Same group on relabelled points.
inline GroupPtr relabelled(const Group& g, std::uint64_t seed) {
  const PermGroup& pg = g.perm_group();
  std::vector<std::uint32_t> pts(pg.degree());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = static_cast<std::uint32_t>(i);
  std::mt19937_64 rng(seed);
  std::shuffle(pts.begin(), pts.end(), rng);
  Perm s(pts);
  Perm si = s.inverse();
  std::vector<Perm> gens;
  for (const auto& x : pg.generators()) gens.push_back(si * x * s);
  return make_group(PermGroup(pg.degree(), gens));
}

inline void isomorphism_laws(const CorpusGroup& c, const CorpusGroup* other, PropertyTally& t) {
  t.check(are_isomorphic(c.group, c.group), c.name + ": G ~ G");
  t.check(are_isomorphic(c.group, relabelled(*c.group, c.group->order())), c.name + ": G ~ relabelled G");
  if (other) {
    bool ab = are_isomorphic(c.group, other->group), ba = are_isomorphic(other->group, c.group);
    t.check(ab == ba, c.name + " vs " + other->name + ": symmetry");
  }
}

inline PropertyTally run_properties(const std::vector<CorpusGroup>& corpus, std::uint64_t aut_cap = default_aut_cap()) {
  PropertyTally t;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const CorpusGroup& c = corpus[i];
    ++t.groups;
    try {
      class_sizes_sum(c, t);
      std::vector<Subgroup> ns = normal_subgroups(*c.group);
      quotient_multiplicativity(c, ns, t);
      AutomorphismGroup a = automorphism_group(c.group, aut_cap);
      inner_equals_quotient_by_center(c, a, t);
      orbit_stabilizer(c, a, ns, t);
      const CorpusGroup* other = nullptr;
      for (std::size_t j = i + 1; j < corpus.size() && !other; ++j)
        if (corpus[j].group->order() == c.group->order()) other = &corpus[j];
      isomorphism_laws(c, other, t);
    } catch (const std::exception& e) {
      t.failures.push_back(c.name + ": exception " + e.what());
    }
  }
  return t;
}

}  // namespace autoscope::testing
