#include <gtest/gtest.h>

#include "autoscope/catalog.hpp"
#include "autoscope/lab.hpp"
#include "oracles.hpp"

using namespace autoscope;
using namespace autoscope::testing;

namespace {

const Catalog& cat() {
  static const Catalog c = Catalog::load();
  return c;
}

}  // namespace

TEST(Perm, ParseComposeInverse) {
  Perm a = Perm::parse(5, "(1,2,3)");
  Perm b = Perm::parse(5, "(3,4)");
  EXPECT_EQ(a.order(), 3u);
  EXPECT_EQ((a * b).order(), 4u);
  EXPECT_TRUE((a * a.inverse()).is_identity());
  EXPECT_EQ(Perm::parse(5, a.to_string()).images(), a.images());
  EXPECT_THROW(Perm::parse(5, "(1,2"), Error);
}

TEST(StabChain, SymmetricAndAlternatingOrders) {
  for (std::size_t n = 1; n <= 9; ++n) {
    EXPECT_EQ(symmetric_group(n).order(), factorial(n)) << n;
    if (n >= 2) {
      EXPECT_EQ(alternating_group(n).order(), factorial(n) / 2) << n;
    }
  }
}

TEST(StabChain, AgreesWithClosure) {
  for (const PermGroup& g : {symmetric_group(5), alternating_group(6), dihedral_group(12), general_linear_group(2, 3),
                             general_linear_group(3, 2), wreath_product(cyclic_group(2), symmetric_group(3))}) {
    EXPECT_EQ(g.order(), bfs_order(g.generators(), g.degree()));
  }
}

TEST(StabChain, Membership) {
  PermGroup a5 = alternating_group(5);
  EXPECT_TRUE(a5.contains(Perm::parse(5, "(1,2,3)")));
  EXPECT_FALSE(a5.contains(Perm::parse(5, "(1,2)")));
}

TEST(Constructions, LinearGroupOrders) {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {2, 5}, {4, 2}})
    EXPECT_EQ(general_linear_group(n, q).order(), gl_order(n, q)) << n << "," << q;
  EXPECT_EQ(special_linear_2_3().order(), 24u);
}

TEST(Constructions, HolomorphOfCyclic) {
  for (std::size_t p : {3, 5, 7, 11, 31})
    EXPECT_EQ(holomorph(make_group(cyclic_group(p))).order(), p * (p - 1)) << p;
}

TEST(Constructions, Recipes) {
  EXPECT_EQ(cat().construct_recipe("S4 x C2 x C2").order(), 96u);
  EXPECT_EQ(cat().construct_recipe("D4 x D4").order(), 64u);
  EXPECT_EQ(cat().construct_recipe("C2 wr S3").order(), 48u);
  EXPECT_EQ(cat().construct_recipe("A4 x C8").order(), 96u);
  EXPECT_EQ(cat().construct_recipe("Aff[00011,00001,10000,01000,00100]").order(), 32u * 31u);
  EXPECT_THROW(cat().construct_recipe("S4 x"), Error);
}

TEST(Presentation, ParseAndRender) {
  Presentation p = parse_presentation("a^4=b^2=a^b*a=1");
  EXPECT_EQ(p.generators.size(), 2u);
  EXPECT_EQ(p.relators.size(), 3u);
  Presentation q = parse_presentation(render(p));
  EXPECT_EQ(perm_group_from_presentation(q).order(), 8u);
  EXPECT_THROW(parse_presentation("a^4=b^"), Error);
}

TEST(Enumeration, SmallGroups) {
  EXPECT_EQ(from_presentation_text("a^32=1").order(), 32u);
  EXPECT_EQ(from_presentation_text("a=1").order(), 1u);
  EXPECT_EQ(from_presentation_text("a^2=b^3=(a*b)^5=1").order(), 60u);
  EXPECT_EQ(from_presentation_text("a^2=b^3=(a*b)^4=1").order(), 24u);
  EXPECT_EQ(from_presentation_text("a^4=a^2*(b^-2)=a^b*a=1").order(), 8u);
  EXPECT_EQ(from_presentation_text("a^3=b^3=(a*b)^3=(a*b^-1)^3=1").order(), 27u);
}

TEST(Enumeration, CosetLimit) {
  EXPECT_THROW(perm_group_from_presentation(parse_presentation("a^32=1"), 10), CosetOverflow);
}

TEST(Enumeration, RegularAction) {
  PermGroup g = from_presentation_text("a^4=b^2=a^b*a=c^2=(a,c)=(b,c)=1");
  EXPECT_EQ(g.degree(), g.order());
  EXPECT_EQ(g.order(), bfs_order(g.generators(), g.degree()));
}

TEST(Enumeration, CatalogOrders) {
  for (const auto& e : cat().entries()) EXPECT_EQ(cat().group(e.id)->order(), 32u) << e.id;
}

TEST(Group, Structure) {
  GroupPtr d4 = make_group(dihedral_group(4));
  EXPECT_EQ(center(*d4).order(), 2u);
  EXPECT_EQ(derived_subgroup(*d4).order(), 2u);
  EXPECT_EQ(d4->classes().size(), 5u);
  EXPECT_EQ(normal_subgroups(*d4).size(), 6u);
  GroupPtr s4 = make_group(symmetric_group(4));
  EXPECT_EQ(s4->classes().size(), 5u);
  EXPECT_EQ(normal_subgroups(*s4).size(), 4u);
  EXPECT_EQ(sylow_subgroup(*s4, 2).order(), 8u);
  EXPECT_EQ(quotient(*s4, derived_subgroup(*s4)).group.order(), 2u);
}

TEST(Automorphisms, CyclicGroups) {
  for (std::size_t n : {2, 6, 8, 15, 16, 32, 36})
    EXPECT_EQ(automorphism_group(make_group(cyclic_group(n))).order(), euler_phi(n)) << n;
}

TEST(Automorphisms, AbelianCatalogGroups) {
  std::vector<std::vector<std::uint64_t>> types{{1, 1, 1, 1, 1}, {2, 1, 1, 1}, {2, 2, 1}, {3, 1, 1},
                                                {3, 2},          {4, 1},       {5}};
  for (int id = 1; id <= 7; ++id)
    EXPECT_EQ(automorphism_group(cat().group(id)).order(), abelian_aut_order(types[id - 1], 2)) << id;
}

TEST(Automorphisms, BruteForceOrder8) {
  for (const auto& r : order8_groups()) {
    GroupPtr g = make_group(from_presentation_text(r.presentation));
    EXPECT_EQ(automorphism_group(g).order(), brute_force_hom_count(g, g, true)) << r.label;
  }
}

TEST(Automorphisms, BruteForceOrder16) {
  for (std::size_t i = 0; i < order16_groups().size(); ++i) {
    GroupPtr g = Lab::order16(static_cast<int>(i));
    EXPECT_EQ(automorphism_group(g).order(), brute_force_hom_count(g, g, true)) << order16_groups()[i].label;
  }
}

TEST(Automorphisms, ProductFormulas) {
  // |Aut(H x K)| = |Aut H||Aut K||Hom(H, Z(K))||Hom(K, Z(H))| when H, K share no direct factor.
  EXPECT_EQ(automorphism_group(make_group(cat().construct_recipe("A4 x C8"))).order(), 24u * euler_phi(8));
  GroupPtr sl = make_group(special_linear_2_3());
  GroupPtr c4 = make_group(cyclic_group(4));
  GroupPtr z2 = make_group(cyclic_group(2));
  std::uint64_t want = automorphism_group(sl).order() * euler_phi(4) * brute_force_hom_count(sl, c4, false) *
                       brute_force_hom_count(c4, z2, false);
  EXPECT_EQ(want, 96u);
  EXPECT_EQ(automorphism_group(make_group(cat().construct_recipe("SL(2,3) x C4"))).order(), want);
  EXPECT_EQ(automorphism_group(make_group(cat().construct_recipe("A4 x 1^3"))).order(), 24u * gl_order(3, 2));
}

TEST(Automorphisms, AffineC31) {
  // Aut(1^5 @ C31) is the semilinear affine group of GF(32): 32 * 31 * ord_31(2).
  GroupPtr g = make_group(cat().construct_recipe("Aff[00011,00001,10000,01000,00100]"));
  AutomorphismGroup a = automorphism_group(g);
  EXPECT_EQ(a.order(), 32u * 31u * multiplicative_order(2, 31));
  EXPECT_TRUE(is_complete(make_group(a.action())));
}

TEST(Automorphisms, InnerMaps) {
  GroupPtr s4 = make_group(symmetric_group(4));
  AutomorphismGroup a = automorphism_group(s4);
  EXPECT_EQ(a.order(), 24u);
  for (ElemId x = 0; x < s4->order(); ++x) EXPECT_TRUE(a.contains(a.inner(x)));
  EXPECT_TRUE(is_complete(s4));
  EXPECT_FALSE(is_complete(make_group(alternating_group(4))));
}

TEST(Automorphisms, Characteristic) {
  GroupPtr d4 = make_group(dihedral_group(4));
  AutomorphismGroup a = automorphism_group(d4);
  std::size_t ch = 0;
  for (const auto& n : normal_subgroups(*d4))
    if (is_characteristic(a, n)) ++ch;
  EXPECT_EQ(ch, 4u);
}

TEST(Isomorphism, Distinguishes) {
  std::vector<GroupPtr> gs;
  for (std::size_t i = 0; i < order16_groups().size(); ++i) gs.push_back(Lab::order16(static_cast<int>(i)));
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = 0; j < gs.size(); ++j) EXPECT_EQ(are_isomorphic(gs[i], gs[j]), i == j) << i << "," << j;
}

TEST(Isomorphism, DifferentPresentations) {
  GroupPtr a = make_group(from_presentation_text("a^2=b^3=(a*b)^3=1"));
  GroupPtr b = make_group(alternating_group(4));
  EXPECT_TRUE(are_isomorphic(a, b));
  auto h = isomorphism_test(a, b);
  ASSERT_TRUE(h.has_value());
  EXPECT_TRUE(is_bijective(*h));
  EXPECT_FALSE(are_isomorphic(make_group(symmetric_group(4)), make_group(special_linear_2_3())));
}

TEST(Catalog, IdentifyRoundTrip) {
  for (int id : {1, 5, 7, 18, 33, 49, 51}) {
    auto got = cat().identify(make_group(PermGroup(cat().group(id)->perm_group())));
    ASSERT_TRUE(got.has_value()) << id;
    EXPECT_EQ(*got, id);
  }
}

TEST(Catalog, GroupSpecs) {
  EXPECT_EQ(resolve_group_spec("catalog:7", cat())->order(), 32u);
  EXPECT_EQ(resolve_group_spec("inline:a^6=1", cat())->order(), 6u);
  EXPECT_EQ(resolve_group_spec("construct:S4", cat())->order(), 24u);
  EXPECT_THROW(resolve_group_spec("S4", cat()), Error);
  EXPECT_THROW(resolve_group_spec("catalog:99", cat()), Error);
}
