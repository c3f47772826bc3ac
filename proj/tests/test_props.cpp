#include <doctest.h>

#include "varfun/families.hpp"
#include "varfun/props.hpp"

using namespace varfun;

namespace {

const char* kSumTable =
    "varfun-table v1\n"
    "alphabet: 01\n"
    "codomain: symbols s0 s1 s2 s3\n"
    "maxlen: 3\n"
    "0 -> s0\n1 -> s1\n"
    "00 -> s0\n01 -> s1\n10 -> s1\n11 -> s2\n"
    "000 -> s0\n001 -> s1\n010 -> s1\n011 -> s2\n"
    "100 -> s1\n101 -> s2\n110 -> s2\n111 -> s3\n";

// F(a)=F(b)=p but F(ab) != F(bb): breaks (B-)preassociativity.
const char* kBrokenTable =
    "varfun-table v1\n"
    "alphabet: ab\n"
    "codomain: symbols p q r\n"
    "maxlen: 2\n"
    "a -> p\nb -> p\n"
    "aa -> q\nab -> q\nba -> r\nbb -> r\n";

VariadicFn identity_fn(int L) {
  Alphabet ab("ab");
  std::vector<std::pair<Word, Value>> rows;
  rows.emplace_back(Word{}, Word{});
  for (int n = 1; n <= L; ++n)
    for (const auto& w : enumerate_words(ab, n)) rows.emplace_back(w, w);
  return VariadicFn::tabulated(ab, Codomain::words(ab), L, rows, true);
}

VariadicFn first_letter_fn(int L) {
  Alphabet ab("ab");
  std::vector<std::pair<Word, Value>> rows;
  for (int n = 1; n <= L; ++n)
    for (const auto& w : enumerate_words(ab, n))
      rows.emplace_back(w, Word(1, w.front()));
  return VariadicFn::tabulated(ab, Codomain::words(ab), L, rows);
}

}  // namespace

TEST_SUITE("props") {

TEST_CASE("length-preserving") {
  CHECK(check_length_preserving(identity_fn(2)).passed());
  auto f = remove_letter_fn('a', Alphabet("ab"), 2);
  auto r = check_length_preserving(f);
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness);
  CHECK(r.witness->x == "a");  // F(a) = eps is the least failure
  CHECK_THROWS_AS(check_length_preserving(load_table(kSumTable)), Error);
}

TEST_CASE("associativity of identity and of the remove-letter function") {
  CHECK(check_associative(identity_fn(3)).passed());
  auto f = remove_letter_fn('a', Alphabet("abc"), 6);
  auto r = check_associative(f, 5);
  CHECK(r.passed());
  CHECK(r.instances_checked > 0);
}

TEST_CASE("transposition chain breaks associativity") {
  // h_1 = h_2 = (a b): F(F(y)) applies the swap twice.
  auto f = hchain_fn({"ba", "ba", "ba"}, Alphabet("ab"), 3);
  auto r = check_associative(f);
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness);
  // Re-evaluating the witness reproduces the violation.
  Word inner = r.witness->x + f.eval(r.witness->y) + r.witness->z;
  CHECK(f.eval(r.witness->x + r.witness->y + r.witness->z) != f.eval(inner));
}

TEST_CASE("insufficient tabulation when outputs grow") {
  // F doubles its argument; x F(y) z may leave the universe.
  Alphabet ab("ab");
  std::vector<std::pair<Word, Value>> rows;
  for (int n = 1; n <= 2; ++n)
    for (const auto& w : enumerate_words(ab, n))
      rows.emplace_back(w, (w + w).substr(0, 2));
  auto f = VariadicFn::tabulated(ab, Codomain::words(ab), 2, rows);
  auto r = check_associative(f);
  CHECK(r.verdict != Verdict::Pass);  // fail or insufficient, never a clean pass
}

TEST_CASE("preassociativity") {
  CHECK(check_preassociative(identity_fn(3)).passed());
  // Equal sum means equal value regardless of length, so the sum table is
  // preassociative even without the length restriction.
  CHECK(check_preassociative(load_table(kSumTable)).passed());
  auto r = check_preassociative(load_table(kBrokenTable));
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness);
  CHECK(r.witness->x == "");
  CHECK(r.witness->y == "a");
  CHECK(r.witness->y2 == "b");
  CHECK(r.witness->z == "a");  // least z with F(ay z) != F(by z) scan order
}

TEST_CASE("b-preassociativity") {
  CHECK(check_b_preassociative(load_table(kSumTable)).passed());
  CHECK(check_b_preassociative(first_letter_fn(3)).passed());
  auto r = check_b_preassociative(load_table(kBrokenTable));
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness);
  CHECK(r.witness->y.size() == r.witness->y2.size());
}

TEST_CASE("witness reproduces the violation") {
  for (const char* table : {kBrokenTable}) {
    auto f = load_table(table);
    auto r = check_b_preassociative(f);
    REQUIRE(r.witness);
    const auto& w = *r.witness;
    CHECK(f.eval(w.y) == f.eval(w.y2));
    CHECK(f.eval(w.x + w.y + w.z) != f.eval(w.x + w.y2 + w.z));
  }
}

TEST_CASE("de Finetti condition") {
  CHECK(check_definetti(load_table(kSumTable)).passed());
  auto r = check_definetti(load_table(kBrokenTable));
  CHECK(r.verdict == Verdict::Fail);
  // Constant function trivially satisfies it.
  Alphabet ab("ab");
  std::vector<std::pair<Word, Value>> rows;
  for (int n = 1; n <= 3; ++n)
    for (const auto& w : enumerate_words(ab, n)) rows.emplace_back(w, Value("p"));
  auto c = VariadicFn::tabulated(ab, Codomain::symbols({"p"}), 3, rows);
  CHECK(check_definetti(c).passed());
}

TEST_CASE("b-associativity for letter-valued functions") {
  CHECK(check_b_associative_eps(first_letter_fn(3)).passed());
  // Last-letter function: symmetric case.
  Alphabet ab("ab");
  std::vector<std::pair<Word, Value>> rows;
  for (int n = 1; n <= 3; ++n)
    for (const auto& w : enumerate_words(ab, n))
      rows.emplace_back(w, Word(1, w.back()));
  auto last = VariadicFn::tabulated(ab, Codomain::words(ab), 3, rows);
  CHECK(check_b_associative_eps(last).passed());
  CHECK_THROWS_AS(check_b_associative_eps(identity_fn(3)), Error);
}

TEST_CASE("b-associativity on the in-domain arithmetic mean") {
  // Means over {0,1,2} for inputs whose mean is integral; other inputs get a
  // fresh distinct letter pattern that keeps the table total but is exercised
  // only through in-domain words here. Use the 1-letter universe restriction:
  // check over words whose every prefix/suffix recombination stays integral is
  // delicate, so keep to the diagonal-heavy subtable.
  Alphabet x("012");
  std::vector<std::pair<Word, Value>> rows;
  auto mean_or_self = [&](const Word& w) -> Value {
    int s = 0;
    for (char c : w) s += c - '0';
    if (s % static_cast<int>(w.size()) == 0)
      return Word(1, static_cast<char>('0' + s / static_cast<int>(w.size())));
    return Word(1, w.front());
  };
  for (int n = 1; n <= 2; ++n)
    for (const auto& w : enumerate_words(x, n)) rows.emplace_back(w, mean_or_self(w));
  auto f = VariadicFn::tabulated(x, Codomain::words(x), 2, rows);
  // The mean table at L=2 with first-letter fallback happens to be
  // B-associative on this universe; mainly we exercise the checker path.
  auto r = check_b_associative_eps(f);
  CHECK(r.instances_checked > 0);
}

TEST_CASE("idempotent parts") {
  CHECK(check_idempotent_parts(identity_fn(3)).passed());
  auto swap2 = hchain_fn({"ba", "ba"}, Alphabet("ab"), 2);
  auto r = check_idempotent_parts(tabulate(swap2));
  CHECK(r.verdict == Verdict::Fail);
  CHECK_THROWS_AS(check_idempotent_parts(first_letter_fn(2)), Error);
}

TEST_CASE("m-generated range") {
  auto id = identity_fn(2);
  CHECK(check_m_generated_range(id, 2).passed());
  auto r = check_m_generated_range(id, 1);
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness);
  CHECK(r.witness->x == "ab");
  // Constant-diagonal H: H_n(x) = a^n has a 1-generated range.
  Alphabet ab("ab");
  std::vector<std::pair<Word, Value>> rows;
  for (int n = 1; n <= 3; ++n)
    for (const auto& w : enumerate_words(ab, n)) rows.emplace_back(w, power("a", n));
  auto diag = VariadicFn::tabulated(ab, Codomain::words(ab), 3, rows);
  CHECK(check_m_generated_range(diag, 1).passed());
}

TEST_CASE("m-generated range implies length-preserving and is monotone") {
  auto f = first_letter_fn(3);
  // first-letter is not length-preserving beyond arity 1, so it fails every m.
  CHECK(!check_m_generated_range(f, 1).passed());
  auto id = identity_fn(3);
  for (int m = 1; m <= 3; ++m)
    if (check_m_generated_range(id, m).passed()) {
      CHECK(check_m_generated_range(id, m + 1).passed());
      CHECK(check_length_preserving(id).passed());
    }
}

TEST_CASE("m-quasi-range-idempotent") {
  auto f = load_table(kSumTable);
  CHECK(check_m_quasi_range_idempotent(f, 2, 2).passed());
  CHECK(check_m_quasi_range_idempotent(f, 2, 5).passed());
  auto r = check_m_quasi_range_idempotent(f, 2, 1);
  CHECK(r.verdict == Verdict::Fail);
  REQUIRE(r.witness);
  CHECK(f.eval(r.witness->x) == "s1");  // the value missing from the diagonal
}

TEST_CASE("figure-1 implication chain on sample functions") {
  for (auto f : {identity_fn(3), tabulate(remove_letter_H('a', Alphabet("ab"), 3))}) {
    bool assoc = check_associative(f).passed();
    bool pre = check_preassociative(f).passed();
    bool bpa = check_b_preassociative(f).passed();
    if (assoc) CHECK(pre);
    if (pre) CHECK(bpa);
  }
}

}  // TEST_SUITE
