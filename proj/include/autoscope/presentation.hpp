#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "autoscope/error.hpp"

namespace autoscope {

// A syllable gen^exp of a word; exp is never zero in a reduced word.
struct Syllable {
  int gen = 0;
  int exp = 0;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

// Word in the free group, kept freely reduced.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Syllable> s) : syl_(std::move(s)) { reduce(); }

  static Word generator(int g, int e = 1) { return Word({{g, e}}); }

  const std::vector<Syllable>& syllables() const { return syl_; }
  bool empty() const { return syl_.empty(); }

  std::size_t length() const {
    std::size_t n = 0;
    for (const auto& s : syl_) n += static_cast<std::size_t>(std::abs(s.exp));
    return n;
  }

  Word inverse() const {
    std::vector<Syllable> r(syl_.rbegin(), syl_.rend());
    for (auto& s : r) s.exp = -s.exp;
    return Word(std::move(r));
  }

  Word operator*(const Word& o) const {
    std::vector<Syllable> r = syl_;
    r.insert(r.end(), o.syl_.begin(), o.syl_.end());
    return Word(std::move(r));
  }

  Word pow(long long n) const {
    Word base = n < 0 ? inverse() : *this;
    Word r;
    for (long long i = 0; i < (n < 0 ? -n : n); ++i) r = r * base;
    return r;
  }

  // Letters as signed generator numbers: +(g+1) or -(g+1).
  std::vector<int> letters() const {
    std::vector<int> out;
    for (const auto& s : syl_) {
      int l = s.exp > 0 ? s.gen + 1 : -(s.gen + 1);
      for (int i = 0; i < std::abs(s.exp); ++i) out.push_back(l);
    }
    return out;
  }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  void reduce() {
    std::vector<Syllable> out;
    for (const auto& s : syl_) {
      if (s.exp == 0) continue;
      if (!out.empty() && out.back().gen == s.gen) {
        out.back().exp += s.exp;
        if (out.back().exp == 0) out.pop_back();
      } else {
        out.push_back(s);
      }
    }
    syl_ = std::move(out);
  }

  std::vector<Syllable> syl_;
};

struct Presentation {
  std::vector<char> generators;
  std::vector<Word> relators;

  int index_of(char c) const {
    auto it = std::find(generators.begin(), generators.end(), c);
    return it == generators.end() ? -1 : static_cast<int>(it - generators.begin());
  }
  friend bool operator==(const Presentation&, const Presentation&) = default;
};

namespace detail {

// Expression tree: words are built once generator numbering is known.
class PresentationParser {
 public:
  explicit PresentationParser(std::string_view text) : s_(text) {}

  Presentation parse() {
    skip_space(true);
    std::optional<std::vector<char>> declared = parse_declaration();
    std::vector<std::vector<Node>> chains;
    bool bracketed = bracketed_;
    while (true) {
      skip_space(true);
      if (at_end()) break;
      if (bracketed && peek() == '>') {
        ++pos_;
        skip_space(true);
        if (!at_end()) fail("unexpected text after '>'");
        bracketed = false;
        break;
      }
      if (peek() == ';') {
        ++pos_;
        continue;
      }
      chains.push_back(parse_chain());
      skip_space(false);
      if (at_end()) break;
      char c = peek();
      if (c == ';' || c == '\n' || c == '\r') {
        ++pos_;
        continue;
      }
      if (bracketed && c == '>') continue;
      fail(std::string("unexpected character '") + c + "'");
    }
    if (bracketed) fail("missing '>'");

    Presentation p;
    if (declared) {
      p.generators = *declared;
      for (char c : letters_seen_) {
        if (p.index_of(c) < 0)
          throw ParseError(std::string("undeclared generator '") + c + "'",
                           letter_pos_[c]);
      }
    } else {
      p.generators.assign(letters_seen_.begin(), letters_seen_.end());
    }
    for (const auto& chain : chains) {
      std::vector<Word> ws;
      for (const auto& n : chain) ws.push_back(build(n, p));
      if (ws.size() == 1) {
        if (!ws[0].empty()) p.relators.push_back(ws[0]);
        continue;
      }
      Word last_inv = ws.back().inverse();
      for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
        Word r = ws[i] * last_inv;
        if (!r.empty()) p.relators.push_back(r);
      }
    }
    return p;
  }

 private:
  enum class Kind { kIdentity, kGen, kProduct, kPower, kConjugate, kCommutator };
  struct Node {
    Kind kind = Kind::kIdentity;
    char letter = 0;
    long long exponent = 0;
    std::vector<Node> kids;
  };

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_space(bool newlines) {
    while (!at_end()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || ((c == '\n' || c == '\r') && newlines)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::optional<std::vector<char>> parse_declaration() {
    if (peek() == '<') {
      ++pos_;
      bracketed_ = true;
      std::vector<char> gens = parse_letter_list();
      skip_space(true);
      if (peek() != '|') fail("expected '|'");
      ++pos_;
      return gens;
    }
    // "a,b,c:" prefix
    std::size_t save = pos_;
    std::size_t i = pos_;
    bool ok = false;
    while (i < s_.size()) {
      char c = s_[i];
      if (std::islower(static_cast<unsigned char>(c)) || c == ',' || c == ' ') {
        ++i;
      } else {
        ok = c == ':';
        break;
      }
    }
    if (!ok) return std::nullopt;
    std::vector<char> gens = parse_letter_list();
    skip_space(true);
    if (peek() != ':') {
      pos_ = save;
      return std::nullopt;
    }
    ++pos_;
    return gens;
  }

  std::vector<char> parse_letter_list() {
    std::vector<char> gens;
    skip_space(true);
    if (peek() == '|' || peek() == ':') return gens;
    while (true) {
      skip_space(true);
      char c = peek();
      if (!std::islower(static_cast<unsigned char>(c))) fail("expected generator letter");
      if (std::find(gens.begin(), gens.end(), c) != gens.end())
        fail(std::string("duplicate generator '") + c + "'");
      gens.push_back(c);
      ++pos_;
      skip_space(true);
      if (peek() != ',') break;
      ++pos_;
    }
    return gens;
  }

  std::vector<Node> parse_chain() {
    std::vector<Node> chain;
    chain.push_back(parse_expr());
    while (true) {
      skip_space(false);
      if (peek() != '=') break;
      ++pos_;
      skip_space(true);
      chain.push_back(parse_expr());
    }
    return chain;
  }

  bool starts_term() const {
    char c = peek();
    return std::islower(static_cast<unsigned char>(c)) || c == '(' || c == '1';
  }

  Node parse_expr() {
    Node prod;
    prod.kind = Kind::kProduct;
    prod.kids.push_back(parse_term());
    while (true) {
      skip_space(false);
      if (peek() == '*') {
        ++pos_;
        skip_space(true);
        prod.kids.push_back(parse_term());
      } else if (starts_term()) {
        prod.kids.push_back(parse_term());
      } else {
        break;
      }
    }
    if (prod.kids.size() == 1) return prod.kids[0];
    return prod;
  }

  Node parse_term() {
    Node base = parse_atom();
    while (true) {
      skip_space(false);
      if (peek() != '^') break;
      ++pos_;
      skip_space(false);
      base = parse_exponent(std::move(base));
    }
    return base;
  }

  std::optional<long long> try_integer() {
    std::size_t save = pos_;
    bool neg = false;
    skip_space(false);
    if (peek() == '-') {
      neg = true;
      ++pos_;
      skip_space(false);
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      pos_ = save;
      return std::nullopt;
    }
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1000000000LL) fail("exponent too large");
      ++pos_;
    }
    return neg ? -v : v;
  }

  Node make_power(Node base, long long e) {
    Node n;
    n.kind = Kind::kPower;
    n.exponent = e;
    n.kids.push_back(std::move(base));
    return n;
  }

  Node make_conjugate(Node base, Node by) {
    Node n;
    n.kind = Kind::kConjugate;
    n.kids.push_back(std::move(base));
    n.kids.push_back(std::move(by));
    return n;
  }

  Node parse_exponent(Node base) {
    char c = peek();
    if (c == '{' || c == '(') {
      char close = c == '{' ? '}' : ')';
      ++pos_;
      skip_space(true);
      std::size_t save = pos_;
      if (auto v = try_integer()) {
        skip_space(true);
        if (peek() == close) {
          ++pos_;
          return make_power(std::move(base), *v);
        }
      }
      pos_ = save;
      Node by = parse_expr();
      skip_space(true);
      if (peek() != close) fail(std::string("expected '") + close + "'");
      ++pos_;
      return make_conjugate(std::move(base), std::move(by));
    }
    if (auto v = try_integer()) return make_power(std::move(base), *v);
    if (std::islower(static_cast<unsigned char>(c))) {
      return make_conjugate(std::move(base), parse_letter());
    }
    fail("expected exponent");
  }

  Node parse_letter() {
    char c = peek();
    if (!letter_pos_.count(c)) letter_pos_[c] = pos_;
    letters_seen_.insert(c);
    ++pos_;
    Node n;
    n.kind = Kind::kGen;
    n.letter = c;
    return n;
  }

  Node parse_atom() {
    char c = peek();
    if (std::islower(static_cast<unsigned char>(c))) return parse_letter();
    if (c == '1' && !(pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return Node{};
    }
    if (c == '(') {
      ++pos_;
      skip_space(true);
      Node first = parse_expr();
      skip_space(true);
      if (peek() == ',') {
        ++pos_;
        skip_space(true);
        Node second = parse_expr();
        skip_space(true);
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        Node n;
        n.kind = Kind::kCommutator;
        n.kids.push_back(std::move(first));
        n.kids.push_back(std::move(second));
        return n;
      }
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return first;
    }
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  Word build(const Node& n, const Presentation& p) const {
    switch (n.kind) {
      case Kind::kIdentity:
        return Word();
      case Kind::kGen:
        return Word::generator(p.index_of(n.letter));
      case Kind::kProduct: {
        Word w;
        for (const auto& k : n.kids) w = w * build(k, p);
        return w;
      }
      case Kind::kPower:
        return build(n.kids[0], p).pow(n.exponent);
      case Kind::kConjugate: {
        Word x = build(n.kids[0], p);
        Word y = build(n.kids[1], p);
        return y.inverse() * x * y;
      }
      case Kind::kCommutator: {
        Word x = build(n.kids[0], p);
        Word y = build(n.kids[1], p);
        return x.inverse() * y.inverse() * x * y;
      }
    }
    return Word();
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  bool bracketed_ = false;
  std::set<char> letters_seen_;
  std::map<char, std::size_t> letter_pos_;
};

}  // namespace detail

// Parses "w1=w2=...=1" chains separated by ';' or newlines.
// An optional "<a,b|...>" or "a,b:" prefix declares the generators.
inline Presentation parse_presentation(std::string_view text) {
  return detail::PresentationParser(text).parse();
}

// A single word over the given generators.
inline Word parse_word(std::string_view text, const std::vector<char>& gens) {
  std::string t = "<";
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) t += ',';
    t += gens[i];
  }
  t += '|';
  t += text;
  t += '>';
  Presentation p = parse_presentation(t);
  if (p.relators.size() > 1) throw ParseError("expected a single word", 0);
  return p.relators.empty() ? Word() : p.relators.front();
}

inline std::string render_word(const Word& w, const std::vector<char>& gens) {
  const auto& s = w.syllables();
  if (s.empty()) return "1";
  std::string out;
  auto emit = [&](const std::string& piece) {
    if (!out.empty()) out += '*';
    out += piece;
  };
  for (std::size_t i = 0; i < s.size();) {
    if (i + 2 < s.size() && s[i].exp == -1 && s[i + 2].exp == 1 &&
        s[i].gen == s[i + 2].gen && s[i + 1].exp == 1) {
      emit(std::string(1, gens[s[i + 1].gen]) + "^" + gens[s[i].gen]);
      i += 3;
      continue;
    }
    std::string g(1, gens[s[i].gen]);
    if (s[i].exp == 1) {
      emit(g);
    } else if (s[i].exp > 0) {
      emit(g + "^" + std::to_string(s[i].exp));
    } else {
      emit("(" + g + "^" + std::to_string(s[i].exp) + ")");
    }
    ++i;
  }
  return out;
}

inline std::string render(const Presentation& p) {
  std::set<int> used;
  for (const auto& r : p.relators)
    for (const auto& s : r.syllables()) used.insert(s.gen);
  std::vector<char> inferred;
  for (int g : used) inferred.push_back(p.generators[g]);
  std::sort(inferred.begin(), inferred.end());
  bool need_decl = inferred != p.generators;
  std::string body;
  for (const auto& r : p.relators) {
    body += render_word(r, p.generators);
    body += '=';
  }
  if (!body.empty()) body += '1';
  if (!need_decl) return body;
  std::string decl = "<";
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    if (i) decl += ',';
    decl += p.generators[i];
  }
  return decl + "|" + body + ">";
}

}  // namespace autoscope
