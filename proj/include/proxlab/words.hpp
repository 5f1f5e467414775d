#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "proxlab/errors.hpp"

namespace proxlab {

// Reduced word over a free group.  Letters are nonzero ints: +g is the g-th
// generator (1-based), -g its inverse.  The constructor reduces, so a Word
// value is always reduced.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> raw) : letters(reduce(std::move(raw))) {}

  static std::vector<int> reduce(std::vector<int> raw) {
    std::vector<int> out;
    out.reserve(raw.size());
    for (int x : raw) {
      if (x == 0) throw InvalidInput("Word: letter 0 is not a generator");
      if (!out.empty() && out.back() == -x)
        out.pop_back();
      else
        out.push_back(x);
    }
    return out;
  }

  int size() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Word& w) const { return letters == w.letters; }
  bool operator!=(const Word& w) const { return letters != w.letters; }
  bool operator<(const Word& w) const {
    if (letters.size() != w.letters.size())
      return letters.size() < w.letters.size();
    return letters < w.letters;
  }

  Word inverse() const {
    std::vector<int> inv(letters.rbegin(), letters.rend());
    for (int& x : inv) x = -x;
    Word w;
    w.letters = std::move(inv);  // reversal of a reduced word is reduced
    return w;
  }

  // Highest generator index used; 0 for the empty word.
  int max_generator() const {
    int m = 0;
    for (int x : letters) m = std::max(m, std::abs(x));
    return m;
  }
};

inline Word operator*(const Word& u, const Word& v) {
  std::vector<int> cat = u.letters;
  cat.insert(cat.end(), v.letters.begin(), v.letters.end());
  return Word(std::move(cat));
}

inline Word word_power(const Word& w, int n) {
  if (n < 0) return word_power(w.inverse(), -n);
  Word out;
  for (int i = 0; i < n; ++i) out = out * w;
  return out;
}

// w = conj * core * conj^{-1} with core cyclically reduced (possibly empty).
struct CyclicDecomposition {
  Word conj;
  Word core;
};

inline CyclicDecomposition cyclic_decomposition(const Word& w) {
  std::vector<int> core = w.letters;
  std::vector<int> conj;
  while (core.size() >= 2 && core.front() == -core.back()) {
    conj.push_back(core.front());
    core.erase(core.begin());
    core.pop_back();
  }
  CyclicDecomposition out;
  out.conj.letters = std::move(conj);
  out.core.letters = std::move(core);
  return out;
}

// Text form: 'a'..'z' are generators 1..26, 'A'..'Z' their inverses; ""
// or "e" is the identity.
inline Word parse_word(const std::string& text) {
  if (text == "e" || text == "1") return Word();
  std::vector<int> raw;
  raw.reserve(text.size());
  for (char ch : text) {
    if (std::islower(static_cast<unsigned char>(ch)))
      raw.push_back(ch - 'a' + 1);
    else if (std::isupper(static_cast<unsigned char>(ch)))
      raw.push_back(-(ch - 'A' + 1));
    else
      throw InvalidInput(std::string("parse_word: bad character '") + ch + "'");
  }
  return Word(std::move(raw));
}

inline std::string format_word(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  out.reserve(w.letters.size());
  for (int x : w.letters) {
    int g = std::abs(x) - 1;
    if (g >= 26) throw InvalidInput("format_word: generator index beyond z");
    out.push_back(static_cast<char>((x > 0 ? 'a' : 'A') + g));
  }
  return out;
}

}  // namespace proxlab
