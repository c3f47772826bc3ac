#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varfun/funcrep.hpp"
#include "varfun/report.hpp"
#include "varfun/words.hpp"

namespace varfun {

// Every checker quantifies over the truncated universe X^{<=L}; L defaults to
// the function's own bound and may be lowered for procedural functions whose
// bound exceeds the tractable universe. Witnesses are the lexicographically
// least failing tuple in the (length, word) scan order, so outputs are stable.

namespace detail {

inline int universe_bound(const VariadicFn& f, int upto) {
  if (upto < 0) return f.maxlen();
  if (upto > f.maxlen())
    throw Error("OutOfDomain", "universe bound exceeds the function's bound");
  return upto;
}

inline void require_string_fn(const VariadicFn& f) {
  if (!f.codomain().is_words() ||
      !(f.codomain().alphabet() == f.alphabet()))
    throw Error("WrongCodomain", "expected a string function (codomain words over "
                                 "the same alphabet)");
}

// Words of lengths [lo, hi] in canonical order.
inline std::vector<Word> ctx_words(const VariadicFn& f, int lo, int hi) {
  return enumerate_words_upto(f.alphabet(), lo, hi);
}

// Per-length word lists for the whole universe, built once per check.
inline std::vector<std::vector<Word>> words_by_len(const Alphabet& a, int L) {
  std::vector<std::vector<Word>> out(static_cast<std::size_t>(L) + 1);
  for (int n = 0; n <= L; ++n) out[static_cast<std::size_t>(n)] = enumerate_words(a, n);
  return out;
}

// Interpret a codomain value as a letter of X or the empty word; nullopt means
// neither (the value cannot feed back into an argument position).
inline std::optional<Word> value_as_letter_or_eps(const VariadicFn& f,
                                                  const Value& v) {
  if (f.codomain().is_words()) {
    if (v.size() <= 1) return v;
    return std::nullopt;
  }
  if (v == kEpsToken) return Word{};
  if (v.size() == 1 && f.alphabet().contains(v[0])) return v;
  return std::nullopt;
}

}  // namespace detail

inline PropertyReport check_length_preserving(const VariadicFn& f, int upto = -1) {
  detail::require_string_fn(f);
  int L = detail::universe_bound(f, upto);
  PropertyReport r{.property = "length-preserving"};
  if (f.has_eps_entry()) {
    ++r.instances_checked;
    Value v = f.eval(Word{});
    if (!v.empty()) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = Word{}, .lhs = show_word(v), .rhs = kEpsToken};
      return r;
    }
  }
  for (const auto& w : detail::ctx_words(f, 1, L)) {
    ++r.instances_checked;
    Value v = f.eval(w);
    if (v.size() != w.size()) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = w, .lhs = show_word(v),
                          .rhs = "length " + std::to_string(w.size())};
      return r;
    }
  }
  return r;
}

// F(xyz) = F(x F(y) z) over all splits inside the universe. Instances whose
// inner image x F(y) z leaves the universe are tallied and downgrade a clean
// verdict to insufficient-tabulation; they never arise when |F(w)| <= |w|.
inline PropertyReport check_associative(const VariadicFn& f, int upto = -1) {
  detail::require_string_fn(f);
  int L = detail::universe_bound(f, upto);
  PropertyReport r{.property = "associative"};
  long long skipped = 0;
  std::optional<Witness> skip_witness;
  auto by_len = detail::words_by_len(f.alphabet(), L);
  int ylo = f.has_eps_entry() ? 0 : 1;
  for (int lx = 0; lx <= L; ++lx)
  for (const auto& x : by_len[static_cast<std::size_t>(lx)]) {
    for (int ly = ylo; ly <= L - lx; ++ly)
    for (const auto& y : by_len[static_cast<std::size_t>(ly)]) {
      Value fy = f.eval(y);
      int rest = L - lx - ly;
      for (int lz = 0; lz <= rest; ++lz)
      for (const auto& z : by_len[static_cast<std::size_t>(lz)]) {
        Word outer = x + y + z;
        Word inner = x + fy + z;
        if (static_cast<int>(inner.size()) > L ||
            (outer.empty() && !f.has_eps_entry()) ||
            (inner.empty() && !f.has_eps_entry())) {
          ++skipped;
          if (!skip_witness)
            skip_witness = Witness{.x = x, .y = y, .y2 = fy, .z = z,
                                   .lhs = "inner word " + show_word(inner) +
                                          " outside universe",
                                   .rhs = ""};
          continue;
        }
        ++r.instances_checked;
        Value lhs = f.eval(outer), rhs = f.eval(inner);
        if (lhs != rhs) {
          r.verdict = Verdict::Fail;
          r.witness = Witness{.x = x, .y = y, .y2 = fy, .z = z,
                              .lhs = f.codomain().show(lhs),
                              .rhs = f.codomain().show(rhs)};
          return r;
        }
      }
    }
  }
  if (skipped > 0) {
    r.verdict = Verdict::InsufficientTabulation;
    r.witness = skip_witness;
  }
  return r;
}

namespace detail {

// Shared engine for preassociativity and its barycentric restriction: the
// premise F(y) = F(y') is iterated through kernel classes (per length when
// same_length_only).
inline PropertyReport check_preassoc_impl(const VariadicFn& f, bool same_length_only,
                                          int upto, const std::string& name) {
  int L = universe_bound(f, upto);
  PropertyReport r{.property = name};
  int ylo = f.has_eps_entry() ? 0 : 1;

  // Group every evaluable word by (length?, value); members stay canonical.
  std::map<std::pair<int, Value>, std::vector<Word>> groups;
  auto ys = ctx_words(f, ylo, L);
  std::map<Word, const std::vector<Word>*> member_of;
  for (const auto& y : ys) {
    int k = same_length_only ? static_cast<int>(y.size()) : -1;
    groups[{k, f.eval(y)}].push_back(y);
  }
  for (const auto& [key, members] : groups)
    for (const auto& y : members) member_of[y] = &members;

  auto by_len = words_by_len(f.alphabet(), L);
  for (int lx = 0; lx <= L; ++lx)
  for (const auto& x : by_len[static_cast<std::size_t>(lx)]) {
    for (const auto& y : ys) {
      if (lx + static_cast<int>(y.size()) > L) continue;
      const auto& members = *member_of.at(y);
      for (const auto& y2 : members) {
        if (!f.alphabet().canon_less(y, y2)) continue;
        int span = std::max(static_cast<int>(y.size()), static_cast<int>(y2.size()));
        int rest = L - lx - span;
        if (rest < 0) continue;
        for (int lz = 0; lz <= rest; ++lz)
        for (const auto& z : by_len[static_cast<std::size_t>(lz)]) {
          Word w1 = x + y + z, w2 = x + y2 + z;
          if ((w1.empty() || w2.empty()) && !f.has_eps_entry()) continue;
          ++r.instances_checked;
          Value lhs = f.eval(w1), rhs = f.eval(w2);
          if (lhs != rhs) {
            r.verdict = Verdict::Fail;
            r.witness = Witness{.x = x, .y = y, .y2 = y2, .z = z,
                                .lhs = f.codomain().show(lhs),
                                .rhs = f.codomain().show(rhs)};
            return r;
          }
        }
      }
    }
  }
  return r;
}

}  // namespace detail

inline PropertyReport check_preassociative(const VariadicFn& f, int upto = -1) {
  return detail::check_preassoc_impl(f, false, upto, "preassociative");
}

inline PropertyReport check_b_preassociative(const VariadicFn& f, int upto = -1) {
  return detail::check_preassoc_impl(f, true, upto, "b-preassociative");
}

// De Finetti's mean condition: F(y) = F(u^{|y|}) forces F(xyz) = F(x u^{|y|} z).
inline PropertyReport check_definetti(const VariadicFn& f, int upto = -1) {
  int L = detail::universe_bound(f, upto);
  PropertyReport r{.property = "definetti"};
  auto by_len = detail::words_by_len(f.alphabet(), L);
  for (int lx = 0; lx <= L; ++lx)
  for (const auto& x : by_len[static_cast<std::size_t>(lx)]) {
    for (int ly = 1; ly <= L - lx; ++ly)
    for (const auto& y : by_len[static_cast<std::size_t>(ly)]) {
      for (int ui = 0; ui < f.alphabet().size(); ++ui) {
        Word u_pow = power(Word(1, f.alphabet().letter(ui)), ly);
        if (f.eval(y) != f.eval(u_pow)) continue;
        for (int lz = 0; lz <= L - lx - ly; ++lz)
        for (const auto& z : by_len[static_cast<std::size_t>(lz)]) {
          if (x.empty() && z.empty()) continue;  // |xz| >= 1 required
          ++r.instances_checked;
          Value lhs = f.eval(x + y + z), rhs = f.eval(x + u_pow + z);
          if (lhs != rhs) {
            r.verdict = Verdict::Fail;
            r.witness = Witness{.x = x, .y = y, .y2 = u_pow, .z = z,
                                .lhs = f.codomain().show(lhs),
                                .rhs = f.codomain().show(rhs)};
            return r;
          }
        }
      }
    }
  }
  return r;
}

// B-associativity for X-union-eps valued functions: F(xyz) = F(x F(y)^{|y|} z).
// Instances where F(y) = eps would shrink the argument are skipped and tallied.
inline PropertyReport check_b_associative_eps(const VariadicFn& f, int upto = -1) {
  int L = detail::universe_bound(f, upto);
  for (const auto& w : detail::ctx_words(f, 1, L))
    if (!detail::value_as_letter_or_eps(f, f.eval(w)))
      throw Error("WrongCodomain", "output at '" + show_word(w) +
                                       "' is neither a letter nor eps");
  PropertyReport r{.property = "b-associative"};
  long long skipped = 0;
  std::optional<Witness> skip_witness;
  auto by_len = detail::words_by_len(f.alphabet(), L);
  for (int lx = 0; lx <= L; ++lx)
  for (const auto& x : by_len[static_cast<std::size_t>(lx)]) {
    for (int ly = 1; ly <= L - lx; ++ly)
    for (const auto& y : by_len[static_cast<std::size_t>(ly)]) {
      Word v = *detail::value_as_letter_or_eps(f, f.eval(y));
      if (v.empty()) {
        ++skipped;
        if (!skip_witness)
          skip_witness = Witness{.y = y, .lhs = "F(y) = eps changes the length",
                                 .rhs = ""};
        continue;
      }
      Word v_pow = power(v, ly);
      for (int lz = 0; lz <= L - lx - ly; ++lz)
      for (const auto& z : by_len[static_cast<std::size_t>(lz)]) {
        ++r.instances_checked;
        Value lhs = f.eval(x + y + z), rhs = f.eval(x + v_pow + z);
        if (lhs != rhs) {
          r.verdict = Verdict::Fail;
          r.witness = Witness{.x = x, .y = y, .y2 = v_pow, .z = z,
                              .lhs = f.codomain().show(lhs),
                              .rhs = f.codomain().show(rhs)};
          return r;
        }
      }
    }
  }
  if (skipped > 0 && r.verdict == Verdict::Pass) {
    r.verdict = Verdict::InsufficientTabulation;
    r.witness = skip_witness;
  }
  return r;
}

// F_n o F_n = F_n for every arity; meaningful only for length-preserving
// string functions (otherwise the inner image changes arity).
inline PropertyReport check_idempotent_parts(const VariadicFn& f, int upto = -1) {
  detail::require_string_fn(f);
  int L = detail::universe_bound(f, upto);
  if (!check_length_preserving(f, L).passed())
    throw Error("NotLengthPreserving", "idempotent-parts requires |F(x)| = |x|");
  PropertyReport r{.property = "idempotent-parts"};
  for (const auto& w : detail::ctx_words(f, 1, L)) {
    ++r.instances_checked;
    Value once = f.eval(w), twice = f.eval(once);
    if (once != twice) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = w, .lhs = show_word(twice), .rhs = show_word(once)};
      return r;
    }
  }
  return r;
}

// ran(F_n) inside X_m^n for every arity n <= L.
inline PropertyReport check_m_generated_range(const VariadicFn& f, int m,
                                              int upto = -1) {
  detail::require_string_fn(f);
  if (m < 1) throw Error("OutOfDomain", "m must be positive");
  int L = detail::universe_bound(f, upto);
  PropertyReport r{.property = "m-generated-range(m=" + std::to_string(m) + ")"};
  for (const auto& w : detail::ctx_words(f, 1, L)) {
    ++r.instances_checked;
    Value v = f.eval(w);
    if (v.size() != w.size() || !in_generated_set(v, m)) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = w, .lhs = show_word(v),
                          .rhs = "X_" + std::to_string(m) + "^" +
                                 std::to_string(w.size())};
      return r;
    }
  }
  return r;
}

// ran(F_n) = ran(delta_F^m); only the forward inclusion needs testing.
inline PropertyReport check_m_quasi_range_idempotent(const VariadicFn& f, int n,
                                                     int m, int upto = -1) {
  require_arity(f, n);
  if (m < 1) throw Error("OutOfDomain", "m must be positive");
  (void)detail::universe_bound(f, upto);
  PropertyReport r{.property = "m-quasi-range-idempotent(n=" + std::to_string(n) +
                               ",m=" + std::to_string(m) + ")"};
  std::vector<Value> diag_range;
  for (const auto& [w, v] : diagonal_section_m(f, n, m)) diag_range.push_back(v);
  std::sort(diag_range.begin(), diag_range.end());
  for (const auto& w : enumerate_words(f.alphabet(), n)) {
    ++r.instances_checked;
    Value v = f.eval(w);
    if (!std::binary_search(diag_range.begin(), diag_range.end(), v)) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = w, .lhs = f.codomain().show(v),
                          .rhs = "ran(diagonal section m=" + std::to_string(m) + ")"};
      return r;
    }
  }
  return r;
}

}  // namespace varfun
