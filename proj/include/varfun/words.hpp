#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "varfun/error.hpp"

namespace varfun {

// A word is a finite letter sequence; the empty string is the empty word.
// Words do not carry their alphabet; operations that need letter ordering or
// membership take the Alphabet explicitly.
using Word = std::string;

inline constexpr const char* kEpsToken = "eps";

inline std::string show_word(const Word& w) { return w.empty() ? kEpsToken : w; }

inline Word parse_word_token(const std::string& tok) {
  return tok == kEpsToken ? Word{} : tok;
}

// Finite ordered set of single-character letters. The declared order is the
// global tie-break for every canonical choice downstream.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::string letters) : letters_(std::move(letters)) {
    rank_.fill(-1);
    if (letters_.empty()) throw Error("FormatError", "alphabet must be nonempty");
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(letters_[i]);
      if (c < 0x21 || c > 0x7e)
        throw Error("FormatError", "alphabet letters must be printable");
      if (rank_[c] >= 0)
        throw Error("FormatError",
                    std::string("duplicate alphabet letter '") + letters_[i] + "'");
      rank_[c] = static_cast<int>(i);
    }
  }

  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& letters() const { return letters_; }
  char letter(int i) const { return letters_[static_cast<std::size_t>(i)]; }

  bool contains(char c) const { return rank_[static_cast<unsigned char>(c)] >= 0; }
  int rank(char c) const { return rank_[static_cast<unsigned char>(c)]; }

  bool word_ok(const Word& w) const {
    for (char c : w)
      if (!contains(c)) return false;
    return true;
  }

  void require_word(const Word& w) const {
    for (char c : w)
      if (!contains(c))
        throw Error("UnknownLetter", std::string("letter '") + c +
                                         "' not in alphabet " + letters_);
  }

  // Same-length lexicographic order by declared letter rank.
  bool lex_less(const Word& x, const Word& y) const {
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
      int rx = rank(x[i]), ry = rank(y[i]);
      if (rx != ry) return rx < ry;
    }
    return x.size() < y.size();
  }

  // Canonical order: by length first, then lexicographic by rank.
  bool canon_less(const Word& x, const Word& y) const {
    if (x.size() != y.size()) return x.size() < y.size();
    return lex_less(x, y);
  }

  bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }

 private:
  std::string letters_;
  std::array<int, 256> rank_{};
};

// Comparator usable with std::map for canonical (length, word) ordering.
struct CanonLess {
  const Alphabet* alpha = nullptr;
  bool operator()(const Word& x, const Word& y) const {
    return alpha->canon_less(x, y);
  }
};

inline Word concat(const Alphabet& a, const Word& x, const Word& y) {
  if (!a.word_ok(x) || !a.word_ok(y))
    throw Error("AlphabetMismatch", "word uses letters outside " + a.letters());
  return x + y;
}

inline Word power(const Word& x, int n) {
  Word out;
  out.reserve(x.size() * static_cast<std::size_t>(n < 0 ? 0 : n));
  for (int i = 0; i < n; ++i) out += x;
  return out;
}

inline Word prefix_m(const Word& x, int m) {
  if (m < 1) throw Error("OutOfDomain", "prefix length must be positive");
  if (static_cast<int>(x.size()) <= m) return x;
  return x.substr(0, static_cast<std::size_t>(m));
}

// Membership in X_m^n for n = |x|: every word of length <= m qualifies,
// otherwise the last n-m+1 letters must coincide.
inline bool in_generated_set(const Word& x, int m) {
  if (m < 1) throw Error("OutOfDomain", "m must be positive");
  int n = static_cast<int>(x.size());
  if (n <= m) return true;
  char z = x[static_cast<std::size_t>(m - 1)];
  for (int i = m; i < n; ++i)
    if (x[static_cast<std::size_t>(i)] != z) return false;
  return true;
}

// All |a|^n words of length n, in lexicographic order by alphabet rank.
inline std::vector<Word> enumerate_words(const Alphabet& a, int n) {
  if (n < 0) throw Error("OutOfDomain", "length must be non-negative");
  std::vector<Word> out;
  Word w(static_cast<std::size_t>(n), a.letter(0));
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  for (;;) {
    out.push_back(w);
    int i = n - 1;
    while (i >= 0 && digits[static_cast<std::size_t>(i)] == a.size() - 1) {
      digits[static_cast<std::size_t>(i)] = 0;
      w[static_cast<std::size_t>(i)] = a.letter(0);
      --i;
    }
    if (i < 0) break;
    ++digits[static_cast<std::size_t>(i)];
    w[static_cast<std::size_t>(i)] = a.letter(digits[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Words of every length in [lo, hi], canonical order.
inline std::vector<Word> enumerate_words_upto(const Alphabet& a, int lo, int hi) {
  std::vector<Word> out;
  for (int n = lo; n <= hi; ++n) {
    auto w = enumerate_words(a, n);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

}  // namespace varfun
