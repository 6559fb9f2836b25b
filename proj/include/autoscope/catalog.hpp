#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "autoscope/constructions.hpp"
#include "autoscope/group.hpp"
#include "autoscope/morphisms.hpp"
#include "autoscope/presentation.hpp"
#include "autoscope/structure.hpp"

namespace autoscope {

using json = nlohmann::json;

struct CatalogEntry {
  int id = 0;
  std::string label;
  int isoclinic_class = 0;
  std::string presentation;
  json expected = json::object();
};

struct ExtensionRow {
  std::string row_id;
  int base_id = 0;
  std::vector<char> action;
  bool characteristic = false;  // marked "*"
  std::size_t multiplicity = 1;
  std::string factor;
  std::string kernel_label;
  std::vector<std::string> kernel_words;
  json meta = json::object();

  bool unverified_kernel() const { return meta.value("unverified_kernel", false); }
};

struct Table3Entry {
  std::string id;
  std::string label;
  std::string kind;  // presentation | perms | recipe
  std::string body;
  json expected = json::object();
};

inline std::string default_data_dir() {
  if (const char* d = std::getenv("AUTOSCOPE_DATA_DIR"); d && *d) return d;
#ifdef AUTOSCOPE_DATA_DIR
  return AUTOSCOPE_DATA_DIR;
#else
  return "data";
#endif
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Fields are separated by " | "; labels may contain a bare '|'.
inline std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> f;
  std::size_t start = 0;
  while (true) {
    std::size_t k = line.find(" | ", start);
    f.push_back(trim(line.substr(start, k == std::string::npos ? std::string::npos : k - start)));
    if (k == std::string::npos) break;
    start = k + 3;
  }
  return f;
}

inline std::vector<std::pair<std::size_t, std::string>> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open catalog file " + path);
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.emplace_back(n, line);
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string x;
  while (std::getline(ss, x, sep))
    if (!trim(x).empty()) out.push_back(trim(x));
  return out;
}

}  // namespace detail

class Catalog {
 public:
  static Catalog load(const std::string& dir = default_data_dir()) {
    return load_files(dir + "/order32.txt", dir + "/order32p.txt");
  }

  static Catalog load_files(const std::string& groups_path, const std::string& ext_path) {
    Catalog c;
    for (const auto& [n, line] : detail::read_records(groups_path)) {
      auto f = detail::split_record(line);
      if (f.size() != 5) throw Error(groups_path + ":" + std::to_string(n) + ": expected 5 fields");
      CatalogEntry e;
      e.id = std::stoi(f[0]);
      e.label = f[1];
      e.isoclinic_class = std::stoi(f[2]);
      e.presentation = f[3];
      e.expected = json::parse(f[4]);
      if (c.index_.count(e.id)) throw Error("duplicate catalog id " + f[0]);
      c.index_[e.id] = c.entries_.size();
      c.entries_.push_back(std::move(e));
    }
    std::set<std::string> seen;
    for (const auto& [n, line] : detail::read_records(ext_path)) {
      auto f = detail::split_record(line);
      std::string where = ext_path + ":" + std::to_string(n);
      if (f[0] == "ext") {
        if (f.size() != 9) throw Error(where + ": expected 9 fields");
        ExtensionRow r;
        r.row_id = f[1];
        r.base_id = std::stoi(f[2]);
        for (const auto& a : detail::split_list(f[3], ',')) r.action.push_back(a.at(0));
        r.characteristic = f[4] == "*";
        r.multiplicity = r.characteristic ? 1 : std::stoul(f[4]);
        r.factor = f[5];
        r.kernel_label = f[6];
        r.kernel_words = detail::split_list(f[7], ',');
        r.meta = json::parse(f[8]);
        if (!seen.insert(r.row_id).second) throw Error(where + ": duplicate row " + r.row_id);
        if (!c.index_.count(r.base_id)) throw Error(where + ": unknown base id");
        c.extensions_.push_back(std::move(r));
      } else if (f[0] == "t3") {
        if (f.size() != 6) throw Error(where + ": expected 6 fields");
        Table3Entry t{f[1], f[2], f[3], f[4], json::parse(f[5])};
        if (!seen.insert(t.id).second) throw Error(where + ": duplicate row " + t.id);
        c.table3_.push_back(std::move(t));
      } else {
        throw Error(where + ": unknown record kind '" + f[0] + "'");
      }
    }
    return c;
  }

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  const std::vector<ExtensionRow>& extensions() const { return extensions_; }
  const std::vector<Table3Entry>& table3() const { return table3_; }

  bool has(int id) const { return index_.count(id) > 0; }

  const CatalogEntry& entry(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("no catalog entry " + std::to_string(id));
    return entries_[it->second];
  }

  const ExtensionRow& extension(const std::string& row_id) const {
    for (const auto& r : extensions_)
      if (r.row_id == row_id) return r;
    throw Error("no extension row " + row_id);
  }

  const Table3Entry& table3_entry(const std::string& id) const {
    for (const auto& t : table3_)
      if (t.id == id) return t;
    throw Error("no table 3 entry " + id);
  }

  std::vector<const ExtensionRow*> extensions_of(int base_id) const {
    std::vector<const ExtensionRow*> out;
    for (const auto& r : extensions_)
      if (r.base_id == base_id) out.push_back(&r);
    return out;
  }

  Presentation presentation(int id) const { return parse_presentation(entry(id).presentation); }

  // Regular representation, built once per id.
  GroupPtr group(int id) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->groups.find(id);
    if (it != cache_->groups.end()) return it->second;
    GroupPtr g = make_group(perm_group_from_presentation(presentation(id)));
    cache_->groups.emplace(id, g);
    return g;
  }

  RecipeParser::CatalogLookup lookup() const {
    return [this](int id) { return group(id)->perm_group(); };
  }

  PermGroup construct_recipe(const std::string& recipe) const { return construct(recipe, lookup()); }

  // The printed order, or the order of the printed symbolic description.
  std::optional<std::uint64_t> expected_aut_order(int id) const {
    const json& e = entry(id).expected;
    if (e.contains("aut_order")) return e["aut_order"].get<std::uint64_t>();
    if (e.contains("aut_recipe")) return construct_recipe(e["aut_recipe"].get<std::string>()).order();
    return std::nullopt;
  }

  // Kernel of a row as a subgroup of the catalog group.
  Subgroup kernel(const ExtensionRow& r) const {
    GroupPtr g = group(r.base_id);
    Presentation p = presentation(r.base_id);
    std::vector<ElemId> gens;
    for (const auto& w : r.kernel_words) gens.push_back(evaluate(*g, parse_word(w, p.generators), g->generators()));
    return g->closure(gens);
  }

  PermGroup build_table3(const Table3Entry& t) const {
    if (t.kind == "presentation") return from_presentation_text(t.body);
    if (t.kind == "recipe") return construct_recipe(t.body);
    if (t.kind == "perms") {
      std::vector<std::string> parts = detail::split_list(t.body, ';');
      std::size_t deg = 0;
      for (const auto& s : parts) {
        std::size_t v = 0;
        for (char ch : s) {
          if (std::isdigit(static_cast<unsigned char>(ch))) {
            v = v * 10 + static_cast<std::size_t>(ch - '0');
          } else {
            deg = std::max(deg, v);
            v = 0;
          }
        }
        deg = std::max(deg, v);
      }
      std::vector<Perm> gens;
      for (const auto& s : parts) gens.push_back(Perm::parse(deg, s));
      return PermGroup(deg, std::move(gens));
    }
    throw Error("unknown table 3 kind '" + t.kind + "'");
  }

  // Catalog id of an order-32 group, by invariants then isomorphism.
  std::optional<int> identify(const GroupPtr& g) const {
    if (g->order() != 32) return std::nullopt;
    auto key = quick_key(*g);
    for (const auto& e : entries_) {
      GroupPtr c = group(e.id);
      if (quick_key(*c) != key) continue;
      if (are_isomorphic(g, c)) return e.id;
    }
    return std::nullopt;
  }

 private:
  static std::vector<std::string> quick_key(const Group& g) {
    std::vector<std::string> k = format_order_structure(order_structure(g));
    k.push_back("z" + std::to_string(center(g).order()));
    k.push_back("d" + std::to_string(derived_subgroup(g).order()));
    k.push_back("k" + std::to_string(g.classes().size()));
    return k;
  }

  struct Cache {
    std::mutex mu;
    std::map<int, GroupPtr> groups;
  };

  std::vector<CatalogEntry> entries_;
  std::map<int, std::size_t> index_;
  std::vector<ExtensionRow> extensions_;
  std::vector<Table3Entry> table3_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// catalog:<id>, file:<path>, inline:<presentation>, construct:<recipe>.
inline GroupPtr resolve_group_spec(const std::string& spec, const Catalog& cat) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error("group spec needs a prefix: catalog:, file:, inline: or construct:");
  std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);
  if (kind == "catalog") {
    int id = 0;
    try {
      id = std::stoi(body);
    } catch (const std::exception&) {
      throw Error("bad catalog id '" + body + "'");
    }
    return cat.group(id);
  }
  if (kind == "inline") return make_group(from_presentation_text(body));
  if (kind == "construct") return make_group(cat.construct_recipe(body));
  if (kind == "file") {
    std::ifstream in(body);
    if (!in) throw Error("cannot open " + body);
    std::string text, line;
    while (std::getline(in, line)) {
      std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      text += t;
    }
    return make_group(from_presentation_text(text));
  }
  throw Error("unknown group spec kind '" + kind + "'");
}

}  // namespace autoscope
