#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "autoscope/catalog.hpp"
#include "autoscope/lab.hpp"
#include "autoscope/verify.hpp"

using namespace autoscope;

namespace {

struct Config {
  std::string format = "text";
  std::string data_dir;
  std::size_t max_cosets = 0;
  std::uint64_t aut_cap = 0;
  std::size_t normal_cap = 0;
  std::size_t jobs = 1;
};

bool as_json(const Config& c) { return c.format == "json"; }

void emit(const Config& c, const json& j, const std::string& text) {
  if (as_json(c))
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw)
    for (const auto& x : detail::split_list(r, ',')) out.push_back(x);
  return out;
}

LabOptions lab_options(const Config& c) {
  LabOptions o;
  if (c.aut_cap) o.aut_cap = c.aut_cap;
  if (c.normal_cap) o.normal_cap = c.normal_cap;
  return o;
}

Catalog load_catalog(const Config& c) { return Catalog::load(c.data_dir.empty() ? default_data_dir() : c.data_dir); }

json group_summary(const Group& g) {
  return {{"order", g.order()},
          {"classes", g.classes().size()},
          {"center_order", center(g).order()},
          {"derived_order", derived_subgroup(g).order()},
          {"order_structure", format_order_structure(order_structure(g))}};
}

int cmd_enumerate(const Config& c, const std::string& spec, const std::string& inline_text,
                  const std::string& file, bool perms) {
  std::string text = inline_text;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file);
    std::string line;
    while (std::getline(in, line)) {
      std::string t = detail::trim(line);
      if (!t.empty() && t[0] != '#') text += t;
    }
  }
  if (text.empty() && !spec.empty()) {
    if (spec.rfind("inline:", 0) == 0) text = spec.substr(7);
    else text = spec;
  }
  if (text.empty()) throw Error("nothing to enumerate");
  Presentation p = parse_presentation(text);
  CosetTable t = enumerate_cosets(p, {}, c.max_cosets ? c.max_cosets : default_max_cosets());
  json j = {{"order", t.num_cosets}};
  std::ostringstream os;
  os << "order " << t.num_cosets << "\n";
  if (perms) {
    json arr = json::array();
    auto ps = perm_rep(t);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      arr.push_back(ps[i].to_string());
      os << p.generators[i] << " = " << ps[i].to_string() << "\n";
    }
    j["generators"] = arr;
  }
  emit(c, j, os.str());
  return 0;
}

int cmd_aut(const Config& c, const std::string& spec, bool complete) {
  Catalog cat = load_catalog(c);
  GroupPtr g = resolve_group_spec(spec, cat);
  AutomorphismGroup a = automorphism_group(g, c.aut_cap ? c.aut_cap : default_aut_cap());
  json j = {{"group_order", g->order()}, {"aut_order", a.order()}, {"generators", a.element_maps().size()}};
  std::ostringstream os;
  os << "group order " << g->order() << "\n"
     << "aut order " << a.order() << "\n";
  try {
    GroupPtr A = make_group(a.action());
    json s = group_summary(*A);
    j["aut_classes"] = s["classes"];
    j["aut_center_order"] = s["center_order"];
    j["aut_order_structure"] = s["order_structure"];
    os << "classes " << A->classes().size() << "\n"
       << "center order " << s["center_order"].get<std::size_t>() << "\n";
    for (const auto& line : s["order_structure"]) os << "  " << line.get<std::string>() << "\n";
    if (complete) {
      bool comp = is_complete(A, c.aut_cap ? c.aut_cap : default_aut_cap());
      j["complete"] = comp;
      os << (comp ? "complete\n" : "not complete\n");
    }
  } catch (const CapExceeded& e) {
    j["note"] = e.what();
    os << "(class data skipped: " << e.what() << ")\n";
  }
  emit(c, j, os.str());
  return 0;
}

int cmd_classes(const Config& c, const std::string& spec) {
  Catalog cat = load_catalog(c);
  GroupPtr g = resolve_group_spec(spec, cat);
  json j = group_summary(*g);
  json cls = json::array();
  std::ostringstream os;
  os << "order " << g->order() << ", " << g->classes().size() << " classes\n";
  for (const auto& line : j["order_structure"]) os << "  " << line.get<std::string>() << "\n";
  for (const auto& k : g->classes()) cls.push_back(json{{"order", g->elem_order(k.front())}, {"size", k.size()}});
  j["class_list"] = cls;
  emit(c, j, os.str());
  return 0;
}

int cmd_normals(const Config& c, const std::string& spec, bool characteristic) {
  Catalog cat = load_catalog(c);
  GroupPtr g = resolve_group_spec(spec, cat);
  auto ns = normal_subgroups(*g, c.normal_cap ? c.normal_cap : kDefaultNormalCap);
  std::map<std::size_t, std::size_t> by_order;
  for (const auto& n : ns) ++by_order[n.order()];
  json j = {{"group_order", g->order()}, {"normal_count", ns.size()}};
  json bo = json::object();
  std::ostringstream os;
  os << ns.size() << " normal subgroups\n";
  for (auto [o, k] : by_order) {
    bo[std::to_string(o)] = k;
    os << "  order " << o << ": " << k << "\n";
  }
  j["by_order"] = bo;
  if (characteristic) {
    AutomorphismGroup a = automorphism_group(g, c.aut_cap ? c.aut_cap : default_aut_cap());
    std::size_t ch = 0;
    for (const auto& n : ns)
      if (is_characteristic(a, n)) ++ch;
    j["characteristic_count"] = ch;
    os << ch << " characteristic (including 1 and G)\n";
  }
  emit(c, j, os.str());
  return 0;
}

int cmd_construct(const Config& c, int base, const std::string& action, std::size_t p, const std::string& recipe,
                  bool aut, bool perms) {
  Catalog cat = load_catalog(c);
  PermGroup pg(1, {});
  json j;
  std::ostringstream os;
  if (!recipe.empty()) {
    pg = cat.construct_recipe(recipe);
    j["recipe"] = recipe;
  } else {
    if (base <= 0 || action.empty()) throw Error("construct needs --recipe or --base with --action");
    std::vector<char> act;
    for (const auto& a : detail::split_list(action, ',')) act.push_back(a.at(0));
    GroupPtr g = cat.group(base);
    Subgroup k = kernel_from_action(g, cat.presentation(base), act);
    pg = build_32p({g, k, p});
    j["base"] = base;
    j["action"] = action;
    j["p"] = p;
    j["kernel_label"] = Lab::identify16(*g, k) >= 0 ? json(order16_groups()[Lab::identify16(*g, k)].label) : json();
  }
  j["order"] = pg.order();
  j["degree"] = pg.degree();
  os << "order " << pg.order() << " on " << pg.degree() << " points\n";
  if (j.contains("kernel_label") && !j["kernel_label"].is_null())
    os << "kernel " << j["kernel_label"].get<std::string>() << "\n";
  if (perms) {
    json arr = json::array();
    for (const auto& g : pg.generators()) {
      arr.push_back(g.to_string());
      os << "  " << g.to_string() << "\n";
    }
    j["generators"] = arr;
  }
  if (aut) {
    std::uint64_t n = automorphism_group(make_group(pg), c.aut_cap ? c.aut_cap : default_aut_cap()).order();
    j["aut_order"] = n;
    os << "aut order " << n << "\n";
  }
  emit(c, j, os.str());
  return 0;
}

int cmd_identify(const Config& c, const std::string& spec) {
  Catalog cat = load_catalog(c);
  GroupPtr g = resolve_group_spec(spec, cat);
  json j = {{"order", g->order()}};
  std::ostringstream os;
  if (g->order() == 32) {
    auto id = cat.identify(g);
    j["catalog_id"] = id ? json(*id) : json();
    if (id) {
      j["label"] = cat.entry(*id).label;
      os << *id << "  " << cat.entry(*id).label << "\n";
    } else {
      os << "not in catalog\n";
    }
  } else if (g->order() == 16 || g->order() == 8) {
    const auto& refs = g->order() == 16 ? order16_groups() : order8_groups();
    int found = -1;
    for (int i = 0; i < static_cast<int>(refs.size()) && found < 0; ++i)
      if (are_isomorphic(g, make_group(from_presentation_text(refs[i].presentation)))) found = i;
    j["label"] = found >= 0 ? json(refs[found].label) : json();
    os << (found >= 0 ? refs[found].label : "unknown") << "\n";
  } else {
    throw Error("identify handles orders 8, 16 and 32");
  }
  emit(c, j, os.str());
  return 0;
}

int cmd_catalog_list(const Config& c) {
  Catalog cat = load_catalog(c);
  json arr = json::array();
  std::ostringstream os;
  for (const auto& e : cat.entries()) {
    arr.push_back({{"id", e.id}, {"label", e.label}, {"class", e.isoclinic_class}});
    os << e.id << "\t" << e.isoclinic_class << "\t" << e.label << "\n";
  }
  emit(c, arr, os.str());
  return 0;
}

int cmd_catalog_show(const Config& c, int id) {
  Catalog cat = load_catalog(c);
  const CatalogEntry& e = cat.entry(id);
  json j = {{"id", e.id},
            {"label", e.label},
            {"class", e.isoclinic_class},
            {"presentation", e.presentation},
            {"expected", e.expected}};
  json rows = json::array();
  std::ostringstream os;
  os << "#" << e.id << "  " << e.label << "  (class " << e.isoclinic_class << ")\n"
     << "  " << e.presentation << "\n";
  if (auto n = cat.expected_aut_order(id)) os << "  |Aut| " << *n << "\n";
  for (const auto* r : cat.extensions_of(id)) {
    rows.push_back({{"row", r->row_id}, {"mark", r->characteristic ? "*" : std::to_string(r->multiplicity)},
                    {"factor", r->factor}, {"kernel", r->kernel_label}});
    os << "  " << r->row_id << "  " << (r->characteristic ? "*" : std::to_string(r->multiplicity)) << "  "
       << r->factor << "  " << r->kernel_label << "\n";
  }
  j["extensions"] = rows;
  emit(c, j, os.str());
  return 0;
}

int cmd_verify(const Config& c, const std::string& suite, const std::vector<std::string>& ids,
               const std::vector<std::size_t>& primes, bool strict, const std::string& out) {
  Catalog cat = load_catalog(c);
  Lab lab(cat, lab_options(c));
  SuiteOptions o;
  o.ids = split_ids(ids);
  if (!primes.empty()) o.primes = primes;
  for (std::size_t p : o.primes)
    if (p < 3 || p % 2 == 0) throw Error("primes must be odd");
  o.strict = strict;
  o.jobs = c.jobs;
  std::vector<std::string> suites = suite == "all" ? std::vector<std::string>{"table1", "table2", "table3", "table4",
                                                                             "census"}
                                                   : std::vector<std::string>{suite};
  bool ok = true;
  json all = json::array();
  for (const auto& s : suites) {
    SuiteResult r = run_suite(s, lab, o);
    ok = ok && r.ok(strict);
    all.push_back(r.to_json());
    if (!as_json(c)) std::cout << r.to_text();
  }
  json doc = suites.size() == 1 ? all[0] : all;
  if (as_json(c)) std::cout << doc.dump(2) << "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out);
    f << doc.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"autoscope: groups of order 32 and 32p, their automorphism groups, and table verification"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--data", c.data_dir, "Catalog data directory");
  app.add_option("--max-cosets", c.max_cosets, "Coset enumeration limit (AUTOSCOPE_MAX_COSETS)");
  app.add_option("--aut-cap", c.aut_cap, "Largest automorphism group order (AUTOSCOPE_AUT_CAP)");
  app.add_option("--normal-cap", c.normal_cap, "Normal subgroup listing limit");
  app.add_option("--jobs", c.jobs, "Rows evaluated concurrently")->check(CLI::PositiveNumber);

  std::string spec, inline_text, file;
  bool perms = false, complete = false, characteristic = false, aut = false, strict = false;
  int base = 0, show_id = 0;
  std::string action, recipe, suite, out;
  std::size_t prime = 3;
  std::vector<std::string> ids;
  std::vector<std::size_t> primes;

  auto* enumerate = app.add_subcommand("enumerate", "Todd-Coxeter order of a presentation");
  enumerate->add_option("spec", spec, "Presentation or inline:<presentation>");
  enumerate->add_option("--inline", inline_text, "Presentation text");
  enumerate->add_option("--file", file, "File holding a presentation");
  enumerate->add_flag("--perms", perms, "Print the coset permutations");

  auto* autc = app.add_subcommand("aut", "Automorphism group order, classes and order structure");
  autc->add_option("spec", spec, "Group spec")->required();
  autc->add_flag("--complete", complete, "Test whether Aut is complete");

  auto* classes = app.add_subcommand("classes", "Conjugacy classes");
  classes->add_option("spec", spec, "Group spec")->required();

  auto* normals = app.add_subcommand("normals", "Normal subgroups");
  normals->add_option("spec", spec, "Group spec")->required();
  normals->add_flag("--characteristic", characteristic, "Also count characteristic subgroups");

  auto* construct = app.add_subcommand("construct", "Build C_p @ G32 or a recipe group");
  construct->add_option("--base", base, "Catalog id of G32");
  construct->add_option("--action", action, "Generators acting by inversion, e.g. a,c");
  construct->add_option("--p", prime, "Odd prime")->check(CLI::PositiveNumber);
  construct->add_option("--recipe", recipe, "Recipe such as \"S4 x C2 x C2\"");
  construct->add_flag("--aut", aut, "Also compute |Aut|");
  construct->add_flag("--perms", perms, "Print generators");

  auto* identify = app.add_subcommand("identify", "Catalog id of a group of order 32 (or label for 8, 16)");
  identify->add_option("spec", spec, "Group spec")->required();

  auto* catalog = app.add_subcommand("catalog", "Catalog queries");
  catalog->require_subcommand(1);
  auto* clist = catalog->add_subcommand("list", "List the 51 groups");
  auto* cshow = catalog->add_subcommand("show", "Show one entry");
  cshow->add_option("id", show_id, "Catalog id")->required();
  auto* cident = catalog->add_subcommand("identify", "Identify a group");
  cident->add_option("spec", spec, "Group spec")->required();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "table1|table2|table3|table4|census|all")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4", "census", "all"}));
  verify->add_option("--ids", ids, "Comma separated ids or row ids");
  verify->add_option("--p", primes, "Primes for table2")->delimiter(',');
  verify->add_flag("--strict", strict, "Treat documented discrepancies as failures");
  verify->add_option("--out", out, "Write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  if (c.max_cosets) setenv("AUTOSCOPE_MAX_COSETS", std::to_string(c.max_cosets).c_str(), 1);
  if (c.aut_cap) setenv("AUTOSCOPE_AUT_CAP", std::to_string(c.aut_cap).c_str(), 1);

  try {
    if (*enumerate) return cmd_enumerate(c, spec, inline_text, file, perms);
    if (*autc) return cmd_aut(c, spec, complete);
    if (*classes) return cmd_classes(c, spec);
    if (*normals) return cmd_normals(c, spec, characteristic);
    if (*construct) return cmd_construct(c, base, action, prime, recipe, aut, perms);
    if (*identify || *cident) return cmd_identify(c, spec);
    if (*clist) return cmd_catalog_list(c);
    if (*cshow) return cmd_catalog_show(c, show_id);
    if (*verify) return cmd_verify(c, suite, ids, primes, strict, out);
  } catch (const std::exception& e) {
    std::cerr << "autoscope: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
