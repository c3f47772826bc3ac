#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varfun/funcrep.hpp"
#include "varfun/props.hpp"
#include "varfun/quasi.hpp"
#include "varfun/report.hpp"

namespace varfun {

// F_n = f_n o H_n with H associative, length-preserving and every outer map
// one-to-one; the quasi-inverse choices that produced H are kept as provenance.
struct Factorization {
  VariadicFn H;  // tabulated string function, eps |-> eps
  std::vector<std::vector<std::pair<Word, Value>>> outer;  // [n-1], canonical
  std::vector<QuasiInverse> provenance;                    // [n-1]

  const Value* outer_find(int n, const Word& w) const {
    if (n < 1 || n > static_cast<int>(outer.size())) return nullptr;
    for (const auto& [key, v] : outer[static_cast<std::size_t>(n - 1)])
      if (key == w) return &v;
    return nullptr;
  }
};

inline PropertyReport verify_factorization(const VariadicFn& f,
                                           const Factorization& fac);

// H with H_0(eps) = eps and H_n = g_n o F_n; no preassociativity assumed, so
// this is also the raw material for the section-composition equivalences.
inline VariadicFn section_composition(const VariadicFn& f,
                                      const std::vector<QuasiInverse>& gs) {
  if (!f.is_tabulated())
    throw Error("OutOfDomain", "section composition requires a tabulated function");
  int L = f.maxlen();
  if (static_cast<int>(gs.size()) != L)
    throw Error("OutOfDomain", "need one quasi-inverse per arity 1.." +
                                   std::to_string(L));
  std::vector<std::pair<Word, Value>> h_rows;
  h_rows.emplace_back(Word{}, Word{});  // H_0(eps) = eps
  for (int n = 1; n <= L; ++n) {
    const auto& g = gs[static_cast<std::size_t>(n - 1)];
    for (const auto& w : enumerate_words(f.alphabet(), n)) {
      const Word* h = g.find(f.eval(w));
      if (!h)
        throw Error("PartialOuterMap", "quasi-inverse for arity " +
                                           std::to_string(n) + " misses a value");
      h_rows.emplace_back(w, *h);
    }
  }
  return VariadicFn::tabulated(f.alphabet(), Codomain::words(f.alphabet()), L,
                               h_rows);
}

namespace detail {

inline Factorization factorize_from_choices(const VariadicFn& f,
                                            std::vector<QuasiInverse> gs) {
  VariadicFn H = section_composition(f, gs);
  int L = f.maxlen();
  std::vector<std::vector<std::pair<Word, Value>>> outer(
      static_cast<std::size_t>(L));
  for (int n = 1; n <= L; ++n) {
    std::vector<Word> ran;
    for (const auto& w : enumerate_words(f.alphabet(), n))
      ran.push_back(H.eval(w));
    std::sort(ran.begin(), ran.end(), [&f](const Word& a, const Word& b) {
      return f.alphabet().canon_less(a, b);
    });
    ran.erase(std::unique(ran.begin(), ran.end()), ran.end());
    auto& fn = outer[static_cast<std::size_t>(n - 1)];
    for (const auto& w : ran) fn.emplace_back(w, f.eval(w));
  }
  // Re-tag H as declared length-preserving; factorize only reaches here for
  // B-preassociative inputs, where the construction guarantees it.
  std::vector<std::pair<Word, Value>> h_rows(H.entries());
  Factorization fac{
      .H = VariadicFn::tabulated(f.alphabet(), Codomain::words(f.alphabet()), L,
                                 h_rows, true),
      .outer = std::move(outer),
      .provenance = std::move(gs)};
  auto check = verify_factorization(f, fac);
  if (!check.passed())
    throw Error("InternalConsistency", check.render());
  return fac;
}

}  // namespace detail

// Full factorization with the canonical (least preimage) choices. The
// B-preassociativity precondition is enforced: it is exactly the condition
// under which the factorization exists.
inline Factorization factorize(const VariadicFn& f) {
  auto bpa = check_b_preassociative(f);
  if (!bpa.passed()) throw PropertyError("NotBPreassociative", bpa);
  std::vector<QuasiInverse> gs;
  for (int n = 1; n <= f.maxlen(); ++n)
    gs.push_back(canonical_quasi_inverse(f, n));
  return detail::factorize_from_choices(f, std::move(gs));
}

// Same construction with explicit per-arity quasi-inverse choices.
inline Factorization factorize_with(const VariadicFn& f,
                                    std::vector<QuasiInverse> gs) {
  auto bpa = check_b_preassociative(f);
  if (!bpa.passed()) throw PropertyError("NotBPreassociative", bpa);
  return detail::factorize_from_choices(f, std::move(gs));
}

// Range-constrained variant: sections constrained to X_m^n, so H has an m-generated
// range.
inline Factorization factorize_m(const VariadicFn& f, int m) {
  auto bpa = check_b_preassociative(f);
  if (!bpa.passed()) throw PropertyError("NotBPreassociative", bpa);
  std::vector<QuasiInverse> gs;
  for (int n = 1; n <= f.maxlen(); ++n)
    gs.push_back(constrained_quasi_inverse(f, n, m));
  auto fac = detail::factorize_from_choices(f, std::move(gs));
  auto range = check_m_generated_range(fac.H, m);
  if (!range.passed()) throw Error("InternalConsistency", range.render());
  return fac;
}

// H_[m](x) = the m-prefix of H(x); outputs have length min(|x|, m).
inline VariadicFn assimilate_prefix(const VariadicFn& H, int m) {
  auto range = check_m_generated_range(H, m);
  if (!range.passed()) throw PropertyError("NotMGeneratedRange", range);
  Codomain cod = Codomain::words(H.alphabet());
  if (H.is_tabulated()) {
    std::vector<std::pair<Word, Value>> rows;
    for (const auto& [w, v] : H.entries()) rows.emplace_back(w, prefix_m(v, m));
    return VariadicFn::tabulated(H.alphabet(), cod, H.maxlen(), rows);
  }
  return VariadicFn::procedural(
      H.alphabet(), cod, H.maxlen(),
      [H, m](const Word& x) { return prefix_m(H.eval(x), m); },
      H.has_eps_entry());
}

// Inverse of assimilate_prefix: re-power the last letter of the prefix.
inline VariadicFn reconstruct_from_prefix(const VariadicFn& Hm, int m) {
  if (m < 1) throw Error("OutOfDomain", "m must be positive");
  auto expand = [m](const Word& x, const Word& v) -> Word {
    int n = static_cast<int>(x.size());
    if (n <= m) return v;
    if (v.empty())
      throw Error("EmptyPrefixOutput", "empty prefix value at '" + show_word(x) + "'");
    if (static_cast<int>(v.size()) != m)
      throw Error("EmptyPrefixOutput", "prefix value at '" + show_word(x) +
                                           "' does not have length " +
                                           std::to_string(m));
    return v + power(Word(1, v.back()), n - m);
  };
  Codomain cod = Codomain::words(Hm.alphabet());
  if (Hm.is_tabulated()) {
    std::vector<std::pair<Word, Value>> rows;
    for (const auto& [w, v] : Hm.entries()) rows.emplace_back(w, expand(w, v));
    return VariadicFn::tabulated(Hm.alphabet(), cod, Hm.maxlen(), rows, true);
  }
  return VariadicFn::procedural(
      Hm.alphabet(), cod, Hm.maxlen(),
      [Hm, expand](const Word& x) { return expand(x, Hm.eval(x)); },
      Hm.has_eps_entry(), true);
}

// All factorization laws: length preservation, associativity of H, the
// composition F_n = f_n o H_n, F o H = F, injective outer maps, and outer
// agreement with F on ran(H_n).
inline PropertyReport verify_factorization(const VariadicFn& f,
                                           const Factorization& fac) {
  PropertyReport r{.property = "factorization"};
  int L = f.maxlen();
  if (fac.H.maxlen() != L ||
      static_cast<int>(fac.outer.size()) != L) {
    r.verdict = Verdict::Fail;
    r.witness = Witness{.lhs = "arity mismatch", .rhs = ""};
    return r;
  }
  for (int n = 1; n <= L; ++n) {
    for (const auto& x : enumerate_words(f.alphabet(), n)) {
      Word h = fac.H.eval(x);
      ++r.instances_checked;
      if (h.size() != x.size()) {
        r.verdict = Verdict::Fail;
        r.witness = Witness{.x = x, .lhs = show_word(h), .rhs = "length-preserving"};
        return r;
      }
      const Value* v = fac.outer_find(n, h);
      ++r.instances_checked;
      if (!v || *v != f.eval(x)) {
        r.verdict = Verdict::Fail;
        r.witness = Witness{.x = x, .y = h,
                            .lhs = v ? f.codomain().show(*v) : "undefined",
                            .rhs = f.codomain().show(f.eval(x))};
        return r;
      }
      ++r.instances_checked;
      if (f.eval(h) != f.eval(x)) {
        r.verdict = Verdict::Fail;
        r.witness = Witness{.x = x, .y = h, .lhs = f.codomain().show(f.eval(h)),
                            .rhs = f.codomain().show(f.eval(x))};
        return r;
      }
    }
    // Outer map: defined exactly on ran(H_n), injective, and equal to F there.
    const auto& fn = fac.outer[static_cast<std::size_t>(n - 1)];
    for (std::size_t i = 0; i < fn.size(); ++i) {
      ++r.instances_checked;
      if (fn[i].second != f.eval(fn[i].first)) {
        r.verdict = Verdict::Fail;
        r.witness = Witness{.x = fn[i].first,
                            .lhs = f.codomain().show(fn[i].second),
                            .rhs = f.codomain().show(f.eval(fn[i].first))};
        return r;
      }
      for (std::size_t j = i + 1; j < fn.size(); ++j) {
        ++r.instances_checked;
        if (fn[i].second == fn[j].second) {
          r.verdict = Verdict::Fail;
          r.witness = Witness{.x = fn[i].first, .y = fn[j].first,
                              .lhs = f.codomain().show(fn[i].second),
                              .rhs = "outer map not one-to-one"};
          return r;
        }
      }
    }
  }
  auto assoc = check_associative(fac.H);
  r.instances_checked += assoc.instances_checked;
  if (!assoc.passed()) {
    r.verdict = assoc.verdict;
    r.witness = assoc.witness;
  }
  return r;
}

// Sampled verification for procedural functions that cannot be tabulated: the
// caller supplies a procedural section g(n, value) and an enumeration bound.
struct ProceduralFactorCheck {
  long long samples = 0;
  bool ok = true;
  std::optional<Witness> witness;
};

inline ProceduralFactorCheck check_procedural_factorization(
    const VariadicFn& f, const std::function<Word(int, const Value&)>& g,
    int upto_len) {
  ProceduralFactorCheck out;
  for (int n = 1; n <= upto_len; ++n) {
    for (const auto& x : enumerate_words(f.alphabet(), n)) {
      ++out.samples;
      Word h = g(n, f.eval(x));
      // quasi-inverse law, length preservation, and F = f_n o H_n via F(h)=F(x)
      if (h.size() != x.size() || f.eval(h) != f.eval(x)) {
        out.ok = false;
        out.witness = Witness{.x = x, .y = h,
                              .lhs = f.codomain().show(f.eval(h)),
                              .rhs = f.codomain().show(f.eval(x))};
        return out;
      }
    }
  }
  return out;
}

inline std::string serialize_factorization(const VariadicFn& f,
                                           const Factorization& fac) {
  std::ostringstream out;
  out << "factorization-outer v1\n";
  for (std::size_t n = 1; n <= fac.outer.size(); ++n) {
    out << "arity " << n << ":\n";
    for (const auto& [w, v] : fac.outer[n - 1])
      out << "  " << show_word(w) << " -> " << f.codomain().show(v) << "\n";
  }
  out << "provenance:\n";
  for (const auto& g : fac.provenance) {
    std::istringstream lines(g.serialize(f.codomain()));
    std::string line;
    while (std::getline(lines, line)) out << "  " << line << "\n";
  }
  return out.str();
}

}  // namespace varfun
