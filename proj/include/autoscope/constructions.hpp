#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "autoscope/group.hpp"
#include "autoscope/morphisms.hpp"
#include "autoscope/perm_group.hpp"
#include "autoscope/presentation.hpp"

namespace autoscope {

inline PermGroup cyclic_group(std::size_t n) {
  if (n == 0) throw Error("cyclic group of order 0");
  std::vector<std::uint32_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>((i + 1) % n);
  return PermGroup(n, {Perm(std::move(img))});
}

inline PermGroup from_presentation_text(std::string_view text) {
  return perm_group_from_presentation(parse_presentation(text));
}

inline PermGroup direct_product(const PermGroup& a, const PermGroup& b) {
  std::size_t n = a.degree() + b.degree();
  std::vector<Perm> gens;
  for (const auto& g : a.generators()) {
    std::vector<std::uint32_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = i < a.degree() ? g[i] : static_cast<std::uint32_t>(i);
    gens.emplace_back(std::move(img));
  }
  for (const auto& g : b.generators()) {
    std::vector<std::uint32_t> img(n);
    for (std::size_t i = 0; i < n; ++i)
      img[i] = i < a.degree() ? static_cast<std::uint32_t>(i)
                              : static_cast<std::uint32_t>(a.degree() + g[i - a.degree()]);
    gens.emplace_back(std::move(img));
  }
  return PermGroup(n, std::move(gens));
}

// Order 2n: symmetries of an n-gon; D2 is the Klein four-group.
inline PermGroup dihedral_group(std::size_t n) {
  if (n == 1) return cyclic_group(2);
  if (n == 2) return direct_product(cyclic_group(2), cyclic_group(2));
  std::vector<std::uint32_t> r(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = static_cast<std::uint32_t>((i + 1) % n);
    s[i] = static_cast<std::uint32_t>((n - i) % n);
  }
  return PermGroup(n, {Perm(r), Perm(s)});
}

// Order 4n: <a,b | a^2n, b^2 = a^n, a^b = a^-1>.
inline PermGroup dicyclic_group(std::size_t n) {
  std::string t = "a^" + std::to_string(2 * n) + "=a^" + std::to_string(n) + "*(b^-2)=a^b*a=1";
  return from_presentation_text(t);
}

inline PermGroup symmetric_group(std::size_t n) {
  if (n <= 1) return PermGroup(1, {});
  std::vector<std::uint32_t> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<std::uint32_t>((i + 1) % n);
  Perm t(n);
  std::vector<std::uint32_t> ti = t.images();
  std::swap(ti[0], ti[1]);
  return PermGroup(n, {Perm(c), Perm(ti)});
}

inline PermGroup alternating_group(std::size_t n) {
  if (n <= 2) return PermGroup(std::max<std::size_t>(n, 1), {});
  std::vector<Perm> gens;
  for (std::size_t k = 2; k < n; ++k) {
    std::vector<std::uint32_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(i);
    img[0] = 1;
    img[1] = static_cast<std::uint32_t>(k);
    img[k] = 0;
    gens.emplace_back(std::move(img));
  }
  return PermGroup(n, std::move(gens));
}

namespace detail {

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Matrix group over F_p acting on the nonzero vectors.  Vectors are
// encoded base p, coordinate 0 least significant.
inline PermGroup matrix_group(std::size_t n, std::size_t p, const std::vector<std::vector<std::vector<int>>>& mats) {
  std::size_t q = ipow(p, n);
  std::vector<Perm> gens;
  for (const auto& m : mats) {
    std::vector<std::uint32_t> img(q - 1);
    for (std::size_t v = 1; v < q; ++v) {
      std::vector<int> x(n);
      for (std::size_t i = 0, t = v; i < n; ++i, t /= p) x[i] = static_cast<int>(t % p);
      std::size_t w = 0;
      for (std::size_t i = n; i-- > 0;) {
        int s = 0;
        for (std::size_t j = 0; j < n; ++j) s += m[i][j] * x[j];
        w = w * p + static_cast<std::size_t>(((s % static_cast<int>(p)) + static_cast<int>(p)) % static_cast<int>(p));
      }
      img[v - 1] = static_cast<std::uint32_t>(w - 1);
    }
    gens.emplace_back(std::move(img));
  }
  return PermGroup(q - 1, std::move(gens));
}

}  // namespace detail

// GL(n,p) on the p^n - 1 nonzero vectors.
inline PermGroup general_linear_group(std::size_t n, std::size_t p) {
  std::vector<std::vector<std::vector<int>>> mats;
  auto ident = [&] {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
  };
  // primitive root scaling, transvection, cyclic shift of the basis
  int g = 1;
  for (int c = 2; c < static_cast<int>(p); ++c) {
    int x = 1, ord = 0;
    do {
      x = x * c % static_cast<int>(p);
      ++ord;
    } while (x != 1);
    if (ord == static_cast<int>(p) - 1) {
      g = c;
      break;
    }
  }
  if (p > 2) {
    auto m = ident();
    m[0][0] = g;
    mats.push_back(m);
  }
  if (n >= 2) {
    auto t = ident();
    t[0][1] = 1;
    mats.push_back(t);
    std::vector<std::vector<int>> c(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) c[(i + 1) % n][i] = 1;
    if (n % 2 == 0 && p > 2) c[0][n - 1] = -1;
    mats.push_back(c);
  }
  return detail::matrix_group(n, p, mats);
}

inline PermGroup special_linear_2_3() {
  return detail::matrix_group(2, 3, {{{1, 1}, {0, 1}}, {{0, -1}, {1, 0}}});
}

// F_2^n extended by the cyclic group generated by an invertible matrix,
// acting affinely on the 2^n vectors.
inline PermGroup affine_f2(const std::vector<std::vector<int>>& m) {
  std::size_t n = m.size();
  std::size_t q = detail::ipow(2, n);
  std::vector<Perm> gens;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::uint32_t> img(q);
    for (std::size_t v = 0; v < q; ++v) img[v] = static_cast<std::uint32_t>(v ^ (std::size_t{1} << k));
    gens.emplace_back(std::move(img));
  }
  std::vector<std::uint32_t> img(q);
  for (std::size_t v = 0; v < q; ++v) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int s = 0;
      for (std::size_t j = 0; j < n; ++j) s ^= m[i][j] & static_cast<int>((v >> j) & 1u);
      w |= static_cast<std::size_t>(s) << i;
    }
    img[v] = static_cast<std::uint32_t>(w);
  }
  gens.emplace_back(std::move(img));
  return PermGroup(q, std::move(gens));
}

// Abelian 2-group C_{2^e1} x C_{2^e2} x ...
inline PermGroup abelian_2_group(const std::vector<std::size_t>& exponents) {
  PermGroup g = cyclic_group(std::size_t{1} << exponents.at(0));
  for (std::size_t i = 1; i < exponents.size(); ++i)
    g = direct_product(g, cyclic_group(std::size_t{1} << exponents[i]));
  return g;
}

// A wr T with T acting on its own points.
inline PermGroup wreath_product(const PermGroup& a, const PermGroup& top) {
  std::size_t m = a.degree(), k = top.degree();
  std::size_t n = m * k;
  std::vector<Perm> gens;
  for (std::size_t blk = 0; blk < k; ++blk) {
    for (const auto& g : a.generators()) {
      std::vector<std::uint32_t> img(n);
      for (std::size_t i = 0; i < n; ++i)
        img[i] = i / m == blk ? static_cast<std::uint32_t>(blk * m + g[i % m]) : static_cast<std::uint32_t>(i);
      gens.emplace_back(std::move(img));
    }
  }
  for (const auto& t : top.generators()) {
    std::vector<std::uint32_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(t[i / m] * m + i % m);
    gens.emplace_back(std::move(img));
  }
  return PermGroup(n, std::move(gens));
}

// Right regular representation of a concrete group.
inline PermGroup regular_representation(const Group& g) {
  std::vector<Perm> gens;
  for (std::size_t s = 0; s < g.generators().size(); ++s) {
    std::vector<std::uint32_t> img(g.order());
    for (ElemId x = 0; x < g.order(); ++x) img[x] = g.mul_gen(x, s);
    gens.emplace_back(std::move(img));
  }
  return PermGroup(g.order(), std::move(gens));
}

// G x| Aut(G) acting on the elements of G.
inline PermGroup holomorph(const GroupPtr& g) {
  PermGroup reg = regular_representation(*g);
  std::vector<Perm> gens = reg.generators();
  AutomorphismGroup a = automorphism_group(g);
  for (const auto& m : a.element_maps()) gens.push_back(m);
  return PermGroup(g->order(), std::move(gens));
}

inline PermGroup automorphism_perm_group(const GroupPtr& g) {
  PermGroup act = automorphism_group(g).action();
  if (act.degree() == 0) return PermGroup(1, {});
  return act;
}

// N x| H where generator i of H acts on N by the automorphism sending
// N's generators to action[i].  Throws if the action is not a
// homomorphism H -> Aut(N).
inline PermGroup semidirect_product(const GroupPtr& n, const PermGroup& h,
                                    const std::vector<std::vector<ElemId>>& action) {
  if (action.size() != h.generators().size()) throw Error("one automorphism per generator of H required");
  std::size_t nn = n->order(), deg = nn + h.degree();
  std::vector<Perm> gens;
  for (std::size_t s = 0; s < n->generators().size(); ++s) {
    std::vector<std::uint32_t> img(deg);
    for (std::size_t i = 0; i < deg; ++i)
      img[i] = i < nn ? n->mul_gen(static_cast<ElemId>(i), s) : static_cast<std::uint32_t>(i);
    gens.emplace_back(std::move(img));
  }
  for (std::size_t t = 0; t < action.size(); ++t) {
    GroupHomomorphism phi{n, n, action[t]};
    if (!is_bijective(phi)) throw Error("semidirect action is not by automorphisms");
    std::vector<ElemId> map = *phi.extend();
    std::vector<std::uint32_t> img(deg);
    for (std::size_t i = 0; i < deg; ++i)
      img[i] = i < nn ? map[i] : static_cast<std::uint32_t>(nn + h.generators()[t][i - nn]);
    gens.emplace_back(std::move(img));
  }
  PermGroup r(deg, std::move(gens));
  if (r.order() != nn * h.order()) throw Error("semidirect action is not a homomorphism");
  return r;
}

// Recipe language for named groups, e.g. "S4 wr C2", "Hol(C16)",
// "D4 x 1^3", "Aut((2,1,1)) x C2", "GL(5,2)", "#33", "Aff[011,101,110]".
class RecipeParser {
 public:
  using CatalogLookup = std::function<PermGroup(int)>;

  RecipeParser(std::string_view text, CatalogLookup lookup) : s_(text), lookup_(std::move(lookup)) {}

  PermGroup parse() {
    PermGroup g = product();
    skip();
    if (pos_ != s_.size()) fail("unexpected text");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const { throw ParseError("recipe: " + m, pos_); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  std::size_t number() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected number");
    std::size_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
    return v;
  }

  bool accept_times() {
    skip();
    if (accept("\xC3\x97")) return true;
    if (pos_ < s_.size() && s_[pos_] == 'x' &&
        (pos_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return true;
    }
    return false;
  }

  PermGroup product() {
    PermGroup g = wreath();
    while (accept_times()) g = direct_product(g, wreath());
    return g;
  }

  PermGroup wreath() {
    PermGroup g = atom();
    skip();
    if (accept("wr")) g = wreath_product(g, atom());
    return g;
  }

  // "1^k" or a list "(2,1^2)" of exponents.
  std::vector<std::size_t> exponent_entry() {
    std::size_t e = number();
    std::size_t rep = 1;
    if (accept("^")) rep = number();
    return std::vector<std::size_t>(rep, e);
  }

  PermGroup atom() {
    skip();
    if (accept("(")) {
      std::size_t save = pos_;
      skip();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        try {
          std::vector<std::size_t> ex;
          do {
            auto e = exponent_entry();
            ex.insert(ex.end(), e.begin(), e.end());
          } while (accept(","));
          expect(")");
          return abelian_2_group(ex);
        } catch (const ParseError&) {
          pos_ = save;
        }
      }
      PermGroup g = product();
      expect(")");
      return g;
    }
    if (accept("Hol(")) {
      PermGroup a = product();
      expect(")");
      return holomorph(make_group(a));
    }
    if (accept("Aut(")) {
      PermGroup a = product();
      expect(")");
      return automorphism_perm_group(make_group(a));
    }
    if (accept("GL(")) {
      std::size_t n = number();
      expect(",");
      std::size_t p = number();
      expect(")");
      return general_linear_group(n, p);
    }
    if (accept("SL(2,3)")) return special_linear_2_3();
    if (accept("Aff[")) {
      std::vector<std::vector<int>> m;
      do {
        skip();
        std::vector<int> row;
        while (pos_ < s_.size() && (s_[pos_] == '0' || s_[pos_] == '1')) row.push_back(s_[pos_++] - '0');
        m.push_back(std::move(row));
      } while (accept(","));
      expect("]");
      for (const auto& row : m)
        if (row.size() != m.size()) fail("affine matrix must be square");
      return affine_f2(m);
    }
    if (accept("#")) {
      if (!lookup_) fail("catalog reference without catalog");
      return lookup_(static_cast<int>(number()));
    }
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto ex = exponent_entry();
      return abelian_2_group(ex);
    }
    ++pos_;
    switch (c) {
      case 'C':
        return cyclic_group(number());
      case 'D':
        return dihedral_group(number());
      case 'Q':
        return dicyclic_group(number());
      case 'S':
        return symmetric_group(number());
      case 'A':
        return alternating_group(number());
      default:
        --pos_;
        fail(std::string("unknown group symbol '") + c + "'");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  CatalogLookup lookup_;
};

inline PermGroup construct(std::string_view recipe, RecipeParser::CatalogLookup lookup = {}) {
  return RecipeParser(recipe, std::move(lookup)).parse();
}

}  // namespace autoscope
