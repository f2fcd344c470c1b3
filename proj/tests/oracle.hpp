#pragma once

#include "vbma/end_form.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

// Brute-force exterior algebra used to cross-check the library's sign
// bookkeeping.  A monomial is the interleaved word of its one-form factors,
// every factor treated as a single odd-degree letter: letters 1..n stand for
// dz^1..dz^n and n+1..2n for dzbar^1..dzbar^n.  Products concatenate words and
// bubble-sort them into increasing order, flipping the sign on every adjacent
// transposition and vanishing on a repeated letter.  Matrix coefficients
// multiply in the order of the factors.

namespace oracle {

using Word = std::vector<int>;

struct Sorted {
  Word word;
  int sign = 1;
  bool zero = false;
};

inline Sorted sort_word(Word w) {
  int sign = 1;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == w[i + 1]) return Sorted{{}, 1, true};
      if (w[i] > w[i + 1]) {
        std::swap(w[i], w[i + 1]);
        sign = -sign;
        moved = true;
      }
    }
  }
  return Sorted{std::move(w), sign, false};
}

using FormMap = std::map<Word, vbma::Mat>;

// Canonical words list holomorphic letters first, both groups increasing;
// this matches the EndForm key convention, so no resigning is needed.
inline FormMap from_end_form(const vbma::EndForm& f) {
  FormMap out;
  for (const auto& [key, value] : f.coeffs()) {
    Word w;
    for (int i : vbma::mask_indices(key.hol)) w.push_back(i);
    for (int i : vbma::mask_indices(key.anti)) w.push_back(f.n() + i);
    out[w] = value;
  }
  return out;
}

inline FormMap wedge(const FormMap& a, const FormMap& b) {
  FormMap out;
  for (const auto& [wa, ma] : a) {
    for (const auto& [wb, mb] : b) {
      Word cat = wa;
      cat.insert(cat.end(), wb.begin(), wb.end());
      Sorted s = sort_word(std::move(cat));
      if (s.zero) continue;
      const vbma::Mat term = static_cast<double>(s.sign) * (ma * mb);
      auto it = out.find(s.word);
      if (it == out.end()) {
        out.emplace(std::move(s.word), term);
      } else {
        it->second += term;
      }
    }
  }
  return out;
}

inline double max_diff(const FormMap& a, const FormMap& b) {
  double out = 0.0;
  auto scan = [&](const FormMap& x, const FormMap& y) {
    for (const auto& [w, m] : x) {
      auto it = y.find(w);
      if (it == y.end()) {
        if (m.size() > 0) out = std::max(out, m.cwiseAbs().maxCoeff());
      } else {
        out = std::max(out, (m - it->second).cwiseAbs().maxCoeff());
      }
    }
  };
  scan(a, b);
  scan(b, a);
  return out;
}

// Library wedge and oracle wedge of the same pair, compared entrywise.
inline double wedge_discrepancy(const vbma::EndForm& f, const vbma::EndForm& g) {
  return max_diff(from_end_form(vbma::wedge(f, g)),
                  wedge(from_end_form(f), from_end_form(g)));
}

}  // namespace oracle
