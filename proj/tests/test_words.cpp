#include <doctest.h>

#include <algorithm>
#include <set>

#include "varfun/words.hpp"

using namespace varfun;

TEST_SUITE("words") {

TEST_CASE("alphabet validates letters") {
  Alphabet ab("ab");
  CHECK(ab.size() == 2);
  CHECK(ab.rank('b') == 1);
  CHECK(ab.contains('a'));
  CHECK(!ab.contains('c'));
  CHECK_THROWS_AS(Alphabet("aa"), Error);
  CHECK_THROWS_AS(Alphabet(""), Error);
  CHECK_THROWS_AS(Alphabet("a b"), Error);  // space is not printable-visible
}

TEST_CASE("concat and neutral element") {
  Alphabet abc("abc");
  CHECK(concat(abc, "", "ab") == "ab");
  CHECK(concat(abc, "a", "bc") == "abc");
  CHECK(concat(abc, "ab", "") == "ab");
  CHECK_THROWS_AS(concat(abc, "a", "d"), Error);
}

TEST_CASE("power") {
  CHECK(power("ab", 0) == "");
  CHECK(power("z", 3) == "zzz");
  CHECK(power("ab", 2) == "abab");
}

TEST_CASE("prefix_m") {
  CHECK(prefix_m("ab", 5) == "ab");
  CHECK(prefix_m("abc", 2) == "ab");
  CHECK(prefix_m("", 1) == "");
  CHECK_THROWS_AS(prefix_m("a", 0), Error);
}

TEST_CASE("in_generated_set closed form") {
  CHECK(in_generated_set("aaa", 1));
  CHECK(in_generated_set("abb", 2));
  CHECK(in_generated_set("abc", 3));
  CHECK(!in_generated_set("aab", 1));
}

TEST_CASE("in_generated_set equals brute-force X_m^n over three letters") {
  // X_m^n = { y z^{n-min(n,m)+1} : y z in X^{min(n,m)} } built literally.
  Alphabet abc("abc");
  for (int n = 0; n <= 4; ++n) {
    for (int m = 1; m <= 5; ++m) {
      int k = std::min(n, m);
      std::set<Word> brute;
      for (const auto& yz : enumerate_words(abc, k)) {
        if (yz.empty()) {
          if (n == 0) brute.insert("");
          continue;
        }
        Word y = yz.substr(0, yz.size() - 1);
        Word z(1, yz.back());
        brute.insert(y + power(z, n - k + 1));
      }
      if (n == 0) brute.insert("");
      for (const auto& x : enumerate_words(abc, n)) {
        CAPTURE(x);
        CAPTURE(m);
        CHECK(in_generated_set(x, m) == (brute.count(x) > 0));
      }
    }
  }
}

TEST_CASE("generated sets are nested in m") {
  Alphabet ab("ab");
  for (const auto& x : enumerate_words_upto(ab, 0, 4))
    for (int m = 1; m <= 4; ++m)
      if (in_generated_set(x, m)) CHECK(in_generated_set(x, m + 1));
}

TEST_CASE("enumerate_words is lexicographic and complete") {
  Alphabet ab("ab");
  CHECK(enumerate_words(ab, 0) == std::vector<Word>{""});
  CHECK(enumerate_words(ab, 1) == std::vector<Word>{"a", "b"});
  CHECK(enumerate_words(ab, 2) == std::vector<Word>{"aa", "ab", "ba", "bb"});
  auto w3 = enumerate_words(ab, 3);
  CHECK(w3.size() == 8);
  CHECK(std::is_sorted(w3.begin(), w3.end(),
                       [&](const Word& a, const Word& b) { return ab.lex_less(a, b); }));
  std::set<Word> uniq(w3.begin(), w3.end());
  CHECK(uniq.size() == 8);
}

TEST_CASE("enumeration respects declared alphabet order, not ASCII") {
  Alphabet ba("ba");
  CHECK(enumerate_words(ba, 1) == std::vector<Word>{"b", "a"});
  CHECK(ba.lex_less("b", "a"));
  CHECK(ba.canon_less("a", "bb"));
}

TEST_CASE("prefix of a power re-powers to itself") {
  for (char z : {'a', 'b'}) {
    for (int n = 1; n <= 5; ++n) {
      Word w = power(Word(1, z), n);
      Word p = prefix_m(w, 1);
      CHECK(p + power(Word(1, p.back()), n - 1) == w);
    }
  }
}

TEST_CASE("eps serialization token") {
  CHECK(show_word("") == "eps");
  CHECK(show_word("ab") == "ab");
  CHECK(parse_word_token("eps") == "");
  CHECK(parse_word_token("ab") == "ab");
}

}  // TEST_SUITE
