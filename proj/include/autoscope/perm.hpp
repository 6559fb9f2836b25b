#pragma once

#include <cctype>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "autoscope/error.hpp"

namespace autoscope {

// Permutation of {0..n-1}.  Products act on the right: i^(p*q) = (i^p)^q.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t n) : img_(n) { std::iota(img_.begin(), img_.end(), 0u); }
  explicit Perm(std::vector<std::uint32_t> images) : img_(std::move(images)) {}

  // Cycles use 1-based points, as printed in the literature.
  static Perm from_cycles(std::size_t n, const std::vector<std::vector<std::uint32_t>>& cycles) {
    Perm p(n);
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        std::uint32_t a = c[i] - 1, b = c[(i + 1) % c.size()] - 1;
        if (a >= n || b >= n) throw Error("cycle point out of range");
        p.img_[a] = b;
      }
    }
    return p;
  }

  // Parses "(1,2,3)(4,5)" with 1-based points.
  static Perm parse(std::size_t n, const std::string& text) {
    std::vector<std::vector<std::uint32_t>> cycles;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ') {
        ++i;
      } else if (c == '(') {
        std::vector<std::uint32_t> cyc;
        ++i;
        while (i < text.size() && text[i] != ')') {
          if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::uint32_t v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
              v = v * 10 + static_cast<std::uint32_t>(text[i++] - '0');
            cyc.push_back(v);
          } else {
            ++i;
          }
        }
        if (i >= text.size()) throw Error("unterminated cycle in '" + text + "'");
        ++i;
        cycles.push_back(std::move(cyc));
      } else {
        throw Error("bad permutation text '" + text + "'");
      }
    }
    return from_cycles(n, cycles);
  }

  std::size_t degree() const { return img_.size(); }
  std::uint32_t operator[](std::size_t i) const { return img_[i]; }
  const std::vector<std::uint32_t>& images() const { return img_; }

  Perm operator*(const Perm& q) const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[i] = q.img_[img_[i]];
    return r;
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<std::uint32_t>(i);
    return r;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  std::uint64_t order() const {
    std::vector<bool> seen(img_.size());
    std::uint64_t o = 1;
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      std::uint64_t len = 0;
      for (std::size_t j = i; !seen[j]; j = img_[j]) {
        seen[j] = true;
        ++len;
      }
      o = std::lcm(o, len);
    }
    return o;
  }

  std::string to_string() const {
    std::string out;
    std::vector<bool> seen(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (seen[i] || img_[i] == i) continue;
      out += '(';
      for (std::size_t j = i; !seen[j]; j = img_[j]) {
        seen[j] = true;
        if (j != i) out += ',';
        out += std::to_string(j + 1);
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  friend bool operator==(const Perm&, const Perm&) = default;

 private:
  std::vector<std::uint32_t> img_;
};

}  // namespace autoscope
