#include <gtest/gtest.h>

#include <map>

#include "autoscope/verify.hpp"
#include "oracles.hpp"

using namespace autoscope;
using namespace autoscope::testing;

namespace {

const Catalog& cat() {
  static const Catalog c = Catalog::load();
  return c;
}

const Lab& lab() {
  static const Lab l(cat());
  return l;
}

}  // namespace

TEST(CatalogData, Shape) {
  EXPECT_EQ(cat().entries().size(), 51u);
  EXPECT_EQ(cat().extensions().size(), 144u);
  std::vector<std::size_t> sizes(8, 0);
  for (const auto& e : cat().entries()) ++sizes.at(e.isoclinic_class - 1);
  EXPECT_EQ(sizes, (std::vector<std::size_t>{7, 15, 10, 9, 2, 2, 3, 3}));
}

TEST(CatalogData, KernelsHaveIndexTwo) {
  for (const auto& row : cat().extensions()) {
    GroupPtr g = cat().group(row.base_id);
    Subgroup k = cat().kernel(row);
    EXPECT_EQ(k.order(), 16u) << row.row_id;
    EXPECT_TRUE(is_normal(*g, k)) << row.row_id;
    Subgroup by_action = kernel_from_action(g, cat().presentation(row.base_id), row.action);
    EXPECT_TRUE(by_action.members == k.members) << row.row_id;
  }
}

TEST(CatalogData, IndexTwoCountsFromPresentations) {
  for (const auto& e : cat().entries()) {
    std::size_t engine = 0;
    for (const auto& n : normal_subgroups(*cat().group(e.id)))
      if (n.order() == 16) ++engine;
    EXPECT_EQ(engine, index2_count_from_presentation(cat().presentation(e.id))) << e.id;
  }
}

TEST(CatalogData, MultiplicitiesCoverIndexTwoSubgroups) {
  for (const auto& e : cat().entries()) {
    auto rows = cat().extensions_of(e.id);
    bool unverified = false;
    std::size_t sum = 0;
    for (const auto* r : rows) {
      sum += r->characteristic ? 1 : r->multiplicity;
      unverified |= r->unverified_kernel();
    }
    if (unverified) continue;
    EXPECT_EQ(sum, index2_count_from_presentation(cat().presentation(e.id))) << e.id;
  }
}

TEST(Extensions, OrderOfExtension) {
  const auto& row = cat().extension("48a");
  for (std::size_t p : {3, 5, 7}) {
    PermGroup g = build_32p({cat().group(row.base_id), cat().kernel(row), p});
    EXPECT_EQ(g.order(), 32u * p);
    EXPECT_EQ(g.order(), bfs_order(g.generators(), g.degree()));
  }
}

TEST(Extensions, AssociatedGroupRecoversKernel) {
  const auto& row = cat().extension("44a");
  GroupPtr g = make_group(build_32p({cat().group(row.base_id), cat().kernel(row), 3}));
  AssociatedGroup a = group_associated_with_extension(*g, 3);
  EXPECT_EQ(a.sylow_2.order(), 32u);
  EXPECT_EQ(a.kernel.order(), 16u);
}

TEST(Extensions, ConstructiveSplitMatchesScan) {
  for (const char* id : {"48a", "48b", "44a"}) {
    const auto& row = cat().extension(id);
    GroupPtr base = cat().group(row.base_id);
    Subgroup k = cat().kernel(row);
    GroupPtr g = make_group(build_32p({base, k, 3}));
    AutomorphismGroup a = automorphism_group(g);
    PermGroup stab = setwise_stabilizer_in_aut(*lab().aut32(row.base_id), k);
    ConstructiveSplit c = constructive_split(a, base, stab, 3);
    EXPECT_TRUE(c.generates) << id;
    AssociatedGroup assoc = group_associated_with_extension(*g, 3);
    auto scan = split_holomorph(a, assoc.sylow_p, 3);
    ASSERT_TRUE(scan.has_value()) << id;
    EXPECT_EQ(scan->n2.order(), c.factor.order()) << id;
    EXPECT_TRUE(are_isomorphic(make_group(scan->aut->subgroup_perm_group(scan->n2)), make_group(c.factor))) << id;
  }
}

TEST(Extensions, CharacteristicRowFactor) {
  ExtensionReport r = lab().verify_extension_row(cat().extension("48b"), 3);
  EXPECT_TRUE(row_passes(r));
  EXPECT_EQ(r.aut_order, 6u * r.aut32_order);
  EXPECT_EQ(r.factor_match, FactorMatch::kIsoConfirmed);
}

TEST(Extensions, RecipeRowFactor) {
  ExtensionReport r = lab().verify_extension_row(cat().extension("48a"), 3);
  EXPECT_TRUE(row_passes(r));
  EXPECT_EQ(r.factor_order, 64u);
  EXPECT_EQ(r.aut_order, 384u);
}

TEST(Extensions, LargerPrime) {
  ExtensionReport r = lab().verify_extension_row(cat().extension("3a"), 5);
  EXPECT_TRUE(r.order_law);
  EXPECT_EQ(r.factor_order, 512u);
  EXPECT_TRUE(r.roundtrip);
}

TEST(AutSubgroups, KernelStabilizers) {
  AutsubcReport r = lab().autsubc(cat().extension("16ab"), false);
  EXPECT_EQ(r.t_order, 64u);
  EXPECT_EQ(r.stab_order, 128u);
  EXPECT_EQ(lab().autsubc(cat().extension("3a"), false).stab_order, 512u);
}

TEST(AutSubgroups, NormalCensus) {
  std::map<int, std::pair<std::size_t, std::size_t>> want{{5, {46, 14}}, {20, {105, 4}}, {49, {36, 26}}};
  for (auto [id, w] : want) {
    auto c = lab().aut_normal_census(id);
    EXPECT_EQ(c.normal, w.first) << id;
    EXPECT_EQ(c.characteristic, w.second) << id;
    EXPECT_EQ(c.characteristic_all, w.second + 2) << id;
  }
}

TEST(AutSubgroups, IsomorphicAutomorphismGroups) {
  EXPECT_TRUE(are_isomorphic(lab().aut32_concrete(29), lab().aut32_concrete(30)));
  EXPECT_FALSE(are_isomorphic(lab().aut32_concrete(5), lab().aut32_concrete(47)));
}

TEST(Census, SmallOrders) {
  std::size_t n8 = 0, n16 = 0, raw8 = 0, raw16 = 0;
  for (const auto& c : lab().census(8)) {
    n8 += c.pair_orbits;
    raw8 += c.pairs;
  }
  for (const auto& c : lab().census(16)) {
    n16 += c.pair_orbits;
    raw16 += c.pairs;
  }
  EXPECT_EQ(n8, 6u);
  EXPECT_EQ(n16, 35u);
  EXPECT_EQ(raw8, 30u);
  EXPECT_EQ(raw16, 213u);
}

TEST(Census, IndexTwoOrbitsAgreeWithOracle) {
  for (std::size_t i = 0; i < order16_groups().size(); ++i) {
    CensusGroupCount c = Lab::census_group(Lab::order16(static_cast<int>(i)), order16_groups()[i].label, 1u << 20);
    EXPECT_EQ(c.index2, index2_count_from_presentation(parse_presentation(order16_groups()[i].presentation)));
    EXPECT_LE(c.index2_orbits, c.index2);
  }
}

TEST(Census, Dimidiations) {
  CensusTotals t = census_totals(lab(), false);
  EXPECT_EQ(t.dimidiations, 144u);
  EXPECT_EQ(t.by_class, printed_dimidiations_by_class());
}

TEST(Suites, TextAndJson) {
  SuiteOptions o;
  o.ids = {"5", "49"};
  SuiteResult r = run_suite("table1", lab(), o);
  EXPECT_EQ(r.items.size(), 2u);
  EXPECT_TRUE(r.ok(true));
  EXPECT_NE(r.to_text().find("PASS"), std::string::npos);
  EXPECT_EQ(r.to_json()["suite"], "table1");
  EXPECT_THROW(run_suite("nope", lab(), o), Error);
}
