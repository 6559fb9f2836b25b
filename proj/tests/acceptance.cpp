// One PASS/FAIL line per acceptance criterion. Exit status 1 if any gating criterion fails.
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "autoscope/verify.hpp"
#include "properties.hpp"

using namespace autoscope;
using namespace autoscope::testing;

namespace {

constexpr double kEnumerateSeconds = 10;
constexpr double kAutSeconds = 120;
constexpr double kRowSeconds = 300;
constexpr std::size_t kMinRowsAtFive = 10;

using Clock = std::chrono::steady_clock;

struct Criterion {
  int number;
  bool pass = true;
  std::ostringstream detail;
  std::string why;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      why += " [" + what + "]";
    }
  }
};

int failures = 0;

void report(Criterion& c, double seconds) {
  std::printf("criterion %d: %s  %s%s (%.1fs)\n", c.number, c.pass ? "PASS" : "FAIL", c.detail.str().c_str(),
              c.why.c_str(), seconds);
  std::fflush(stdout);
  if (!c.pass) ++failures;
}

template <class F>
void run(int n, F&& body) {
  Criterion c{n};
  auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(c, seconds_since(t0));
}

void enumeration(const Catalog& cat, Criterion& c) {
  auto t0 = Clock::now();
  std::map<int, GroupPtr> groups;
  bool all32 = true;
  for (const auto& e : cat.entries()) {
    PermGroup g = from_presentation_text(e.presentation);
    if (g.order() != 32) all32 = false;
    groups[e.id] = make_group(std::move(g));
  }
  double secs = seconds_since(t0);
  c.require(all32, "some presentation does not have order 32");
  c.require(secs < kEnumerateSeconds, "enumeration took " + std::to_string(secs) + "s");
  std::vector<std::size_t> sizes(8, 0);
  std::map<int, std::vector<int>> members;
  for (const auto& e : cat.entries()) {
    ++sizes.at(e.isoclinic_class - 1);
    members[e.isoclinic_class].push_back(e.id);
  }
  c.require(sizes == std::vector<std::size_t>{7, 15, 10, 9, 2, 2, 3, 3}, "isoclinic class sizes");
  bool iso = true;
  for (const auto& [cls, ids] : members) {
    const Group& g0 = *groups[ids[0]];
    GroupPtr q0 = make_group(quotient(g0, center(g0)).group);
    GroupPtr d0 = make_group(g0.subgroup_perm_group(derived_subgroup(g0)));
    for (int id : ids) {
      const Group& g = *groups[id];
      GroupPtr q = make_group(quotient(g, center(g)).group);
      GroupPtr d = make_group(g.subgroup_perm_group(derived_subgroup(g)));
      if (!are_isomorphic(q, q0) || !are_isomorphic(d, d0)) {
        iso = false;
        c.require(false, "#" + std::to_string(id) + " differs from #" + std::to_string(ids[0]) + " in G/Z or G'");
      }
    }
  }
  c.require(iso, "isoclinism invariants");
  c.detail << "51 groups of order 32 in " << secs << "s; class sizes 7,15,10,9,2,2,3,3";
}

void aut_orders(const Catalog& cat, Criterion& c) {
  std::vector<std::pair<int, std::uint64_t>> want{{2, 21504}, {3, 1536}, {5, 128},  {9, 9216},  {11, 512},
                                                  {12, 512},  {16, 256}, {18, 384}, {39, 256},  {40, 256},
                                                  {43, 1920}, {44, 64},  {47, 128}, {49, 128}};
  double worst = 0;
  for (auto [id, order] : want) {
    auto t0 = Clock::now();
    AutomorphismGroup a = automorphism_group(make_group(from_presentation_text(cat.entry(id).presentation)));
    double s = seconds_since(t0);
    worst = std::max(worst, s);
    c.require(a.order() == order, "Aut(#" + std::to_string(id) + ") = " + std::to_string(a.order()));
    c.require(s < kAutSeconds, "Aut(#" + std::to_string(id) + ") took " + std::to_string(s) + "s");
  }
  c.detail << want.size() << " automorphism group orders; slowest " << worst << "s";
}

void aut5(const Lab& lab, Criterion& c) {
  GroupPtr a = lab.aut32_concrete(5);
  std::size_t k = a->classes().size();
  auto lines = format_order_structure(order_structure(*a));
  auto has = [&](const std::string& s) { return std::find(lines.begin(), lines.end(), s) != lines.end(); };
  c.require(a->order() == 128, "order");
  c.require(k == 26, "classes " + std::to_string(k));
  c.require(has("2-47-15 [1^3,2^6,4^4,8^2]"), "involution line");
  c.require(has("4-80-10 [8^10]"), "order-4 line");
  c.detail << "|Aut| 128, " << k << " classes, order structure lines present";
}

void completeness(const Catalog& cat, const Lab& lab, Criterion& c) {
  GroupPtr a43 = lab.aut32_concrete(43);
  c.require(a43->order() == 1920 && is_complete(a43), "Aut(#43)");
  GroupPtr t13 = make_group(cat.build_table3(cat.table3_entry("3a13")));
  GroupPtr a13 = make_group(automorphism_group(t13).action());
  c.require(a13->order() == 384 && is_complete(a13), "Aut(3a13)");
  c.detail << "Aut(#43) order " << a43->order() << " complete; Aut(3a13) order " << a13->order() << " complete";
  auto t0 = Clock::now();
  GroupPtr a9 = lab.aut32_concrete(9);
  bool c9 = is_complete(a9);
  c.detail << "; stretch (non-gating): Aut(#9) order " << a9->order() << (c9 ? " complete" : " not complete") << " in "
           << seconds_since(t0) << "s";
}

void table2_law(const Catalog& cat, const Lab& lab, Criterion& c) {
  double worst = 0;
  auto row = [&](const char* id) {
    ExtensionReport r = lab.verify_extension_row(cat.extension(id), 3);
    worst = std::max(worst, r.seconds);
    c.require(r.seconds < kRowSeconds, std::string(id) + " took " + std::to_string(r.seconds) + "s");
    c.require(r.split, std::string(id) + " Aut is not Hol(C3) x Stab");
    return r;
  };
  ExtensionReport b = row("48b");
  c.require(b.factor_match == FactorMatch::kIsoConfirmed && b.factor_order == b.aut32_order, "48b factor");
  c.require(b.aut_order == 6 * b.aut32_order, "48b order");
  ExtensionReport a = row("48a");
  c.require(a.factor_match == FactorMatch::kIsoConfirmed, "48a factor not D4 x D4");
  c.require(a.aut_order == 384, "48a |Aut| " + std::to_string(a.aut_order));
  ExtensionReport r3a = row("3a");
  c.require(r3a.factor_order == 512, "3a factor " + std::to_string(r3a.factor_order));
  ExtensionReport r3c = row("3c");
  c.require(r3c.factor_order == 384, "3c factor " + std::to_string(r3c.factor_order));
  c.detail << "48b Hol(C3) x Aut(48); 48a factor D4 x D4, |Aut| " << a.aut_order << "; 3a factor "
           << r3a.factor_order << "; 3c factor " << r3c.factor_order << "; slowest " << worst << "s";
}

void order_law(const Lab& lab, Criterion& c) {
  SuiteOptions o;
  o.primes = {3};
  SuiteResult r3 = run_table2(lab, o);
  o.primes = {5};
  SuiteResult r5 = run_table2(lab, o);
  std::size_t ok3 = 0, ok5 = 0;
  auto check = [&](const SuiteResult& r, std::size_t& ok, std::size_t p) {
    for (std::size_t i = 0; i < r.items.size(); ++i) {
      const auto& it = r.items[i];
      bool law = it.report.value("order_law", false);
      if (law) ++ok;
      const auto& row = lab.catalog().extensions()[i];
      if (!law && !row.unverified_kernel())
        c.require(false, it.id + " at p=" + std::to_string(p) + ": " + it.summary);
    }
  };
  check(r3, ok3, 3);
  check(r5, ok5, 5);
  c.require(ok5 >= kMinRowsAtFive, "p=5 rows");
  c.detail << "order law holds on " << ok3 << "/" << r3.items.size() << " rows at p=3 and " << ok5 << "/"
           << r5.items.size() << " at p=5; every miss is on a row with an unverified kernel";
}

void table4(const Catalog& cat, const Lab& lab, Criterion& c) {
  std::map<int, std::pair<std::size_t, std::size_t>> want{{5, {46, 14}}, {20, {105, 4}}, {49, {36, 26}}};
  for (auto [id, w] : want) {
    auto n = lab.aut_normal_census(id);
    c.require(n.normal == w.first && n.characteristic == w.second,
              "#" + std::to_string(id) + " " + std::to_string(n.normal) + "/" + std::to_string(n.characteristic));
    c.detail << "#" << id << " " << n.normal << "/" << n.characteristic << "; ";
  }
  AutsubcReport r = lab.autsubc(cat.extension("3a"), false);
  c.require(r.t_order == 256, "3a T = " + std::to_string(r.t_order) + ", expected 256");
  c.require(r.stab_order == 512, "3a stab = " + std::to_string(r.stab_order));
  c.detail << "3a T " << r.t_order << " stab " << r.stab_order;
}

void census(const Lab& lab, Criterion& c) {
  CensusTotals t = census_totals(lab, true);
  c.require(t.dimidiations == 144, "dimidiations " + std::to_string(t.dimidiations));
  c.require(t.by_class == printed_dimidiations_by_class(), "class breakdown");
  c.require(t.incidence8 == 6, "incidence 8: " + std::to_string(t.incidence8));
  c.require(t.incidence16 == 35, "incidence 16: " + std::to_string(t.incidence16));
  c.detail << "144 dimidiations (12,42,30,33,4,10,6,7); incidence 6 and 35; order 32 (non-gating): "
           << t.incidence32 << " against printed 263";
}

void table3(const Catalog& cat, const Lab& lab, Criterion& c) {
  for (const char* id : {"3a3", "3a7", "3cC"}) {
    Lab::Table3Report r = lab.verify_table3(cat.table3_entry(id));
    c.require(r.pass, std::string(id) + " |Aut| " + std::to_string(r.aut_order) + (r.error.empty() ? "" : " " + r.error));
    c.detail << id << " " << r.aut_order << "; ";
  }
  c.detail << "Aut(A4 x C8) = S4 x C2 x C2, Aut(SL(2,3) x C4) = 96, Aut(1^5@C31) = 4960";
}

void properties(const Catalog& cat, const Lab& lab, Criterion& c) {
  std::vector<CorpusGroup> corpus = property_corpus(cat, lab);
  PropertyTally t = run_properties(corpus);
  for (std::size_t i = 0; i < t.failures.size() && i < 5; ++i) c.require(false, t.failures[i]);
  c.require(t.failures.empty(), std::to_string(t.failures.size()) + " failures");
  c.detail << t.groups << " groups of order <= " << kPropertyOrderLimit << ", " << t.checks << " checks, "
           << t.failures.size() << " failures";
}

}  // namespace

int main() {
  Catalog cat = Catalog::load();
  Lab lab(cat);
  run(1, [&](Criterion& c) { enumeration(cat, c); });
  run(2, [&](Criterion& c) { aut_orders(cat, c); });
  run(3, [&](Criterion& c) { aut5(lab, c); });
  run(4, [&](Criterion& c) { completeness(cat, lab, c); });
  run(5, [&](Criterion& c) { table2_law(cat, lab, c); });
  run(6, [&](Criterion& c) { order_law(lab, c); });
  run(7, [&](Criterion& c) { table4(cat, lab, c); });
  run(8, [&](Criterion& c) { census(lab, c); });
  run(9, [&](Criterion& c) { table3(cat, lab, c); });
  run(10, [&](Criterion& c) { properties(cat, lab, c); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
