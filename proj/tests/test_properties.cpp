#include <gtest/gtest.h>

#include "properties.hpp"

using namespace autoscope;
using namespace autoscope::testing;

namespace {

const Catalog& cat() {
  static const Catalog c = Catalog::load();
  return c;
}

std::vector<CorpusGroup> small_corpus() {
  std::vector<CorpusGroup> out;
  for (const auto& r : order8_groups()) out.push_back({r.label, make_group(from_presentation_text(r.presentation))});
  for (int id : {1, 5, 18, 33, 44, 49}) out.push_back({"32#" + std::to_string(id), cat().group(id)});
  for (const char* r : {"S4", "SL(2,3)", "GL(2,3)", "Hol(C7)", "A5"})
    out.push_back({r, make_group(cat().construct_recipe(r))});
  return out;
}

}  // namespace

TEST(Properties, SmallCorpus) {
  PropertyTally t = run_properties(small_corpus());
  EXPECT_EQ(t.groups, 16u);
  EXPECT_GT(t.checks, 16u * 6);
  for (const auto& f : t.failures) ADD_FAILURE() << f;
}

TEST(Properties, RelabellingPreservesInvariants) {
  for (const auto& c : small_corpus()) {
    GroupPtr h = relabelled(*c.group, 7);
    EXPECT_EQ(h->order(), c.group->order()) << c.name;
    EXPECT_EQ(h->classes().size(), c.group->classes().size()) << c.name;
    EXPECT_EQ(center(*h).order(), center(*c.group).order()) << c.name;
    EXPECT_EQ(automorphism_group(h).order(), automorphism_group(c.group).order()) << c.name;
  }
}

TEST(Properties, TallyRecordsFailures) {
  PropertyTally t;
  t.check(true, "a");
  t.check(false, "b");
  EXPECT_EQ(t.checks, 2u);
  ASSERT_EQ(t.failures.size(), 1u);
  EXPECT_EQ(t.failures[0], "b");
}

TEST(Properties, CorpusStaysUnderLimit) {
  Lab lab(cat());
  std::vector<CorpusGroup> corpus = property_corpus(cat(), lab);
  EXPECT_GT(corpus.size(), 250u);
  for (const auto& c : corpus) EXPECT_LE(c.group->order(), kPropertyOrderLimit) << c.name;
}
