#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "varfun/funcrep.hpp"
#include "varfun/props.hpp"
#include "varfun/report.hpp"

namespace varfun {

// A section of F_n: one chosen preimage in X^n per value of ran(F_n). The
// section's domain is exactly ran(F_n), which makes both quasi-inverse laws
// hold by construction for least-preimage choices.
struct QuasiInverse {
  int arity = 0;
  std::vector<std::pair<Value, Word>> section;  // ordered by codomain value order

  const Word* find(const Value& v) const {
    for (const auto& [val, w] : section)
      if (val == v) return &w;
    return nullptr;
  }

  std::string serialize(const Codomain& cod) const {
    std::ostringstream out;
    out << "quasi-inverse v1, arity: " << arity << "\n";
    for (const auto& [v, w] : section)
      out << cod.show(v) << " -> " << show_word(w) << "\n";
    return out.str();
  }
};

namespace detail {

// Preimage classes of F_n keyed by value, in codomain value order; members in
// canonical word order.
inline std::vector<std::pair<Value, std::vector<Word>>> preimage_classes(
    const VariadicFn& f, int n) {
  auto classes = kernel_partition(f, n);
  std::sort(classes.begin(), classes.end(),
            [&f](const auto& a, const auto& b) {
              return f.codomain().less(a.first, b.first);
            });
  return classes;
}

}  // namespace detail

// The lexicographically least preimage per value.
inline QuasiInverse canonical_quasi_inverse(const VariadicFn& f, int n) {
  require_arity(f, n);
  QuasiInverse g{.arity = n};
  for (const auto& [v, members] : detail::preimage_classes(f, n))
    g.section.emplace_back(v, members.front());
  return g;
}

// Least preimage constrained to X_m^n; exists for every value precisely when
// F_n is m-quasi-range-idempotent.
inline QuasiInverse constrained_quasi_inverse(const VariadicFn& f, int n, int m) {
  require_arity(f, n);
  if (!check_m_quasi_range_idempotent(f, n, m).passed())
    throw Error("NotMQuasiRangeIdempotent",
                "F_" + std::to_string(n) + " is not " + std::to_string(m) +
                    "-quasi-range-idempotent");
  QuasiInverse g{.arity = n};
  for (const auto& [v, members] : detail::preimage_classes(f, n)) {
    const Word* pick = nullptr;
    for (const auto& w : members)
      if (in_generated_set(w, m)) {
        pick = &w;
        break;
      }
    if (!pick)  // ruled out by the idempotence check
      throw Error("NotMQuasiRangeIdempotent",
                  "no constrained preimage for " + f.codomain().show(v));
    g.section.emplace_back(v, *pick);
  }
  return g;
}

// Every section map, as a mixed-radix sweep over the preimage classes (last
// value varies fastest). The first element is the canonical quasi-inverse.
inline std::vector<QuasiInverse> enumerate_quasi_inverses(const VariadicFn& f, int n,
                                                          long long budget) {
  require_arity(f, n);
  auto classes = detail::preimage_classes(f, n);
  long long total = 1;
  for (const auto& [v, members] : classes) {
    total *= static_cast<long long>(members.size());
    if (total > budget)
      throw Error("BudgetExceeded",
                  "quasi-inverse count exceeds budget " + std::to_string(budget));
  }
  std::vector<QuasiInverse> out;
  std::vector<std::size_t> pick(classes.size(), 0);
  for (;;) {
    QuasiInverse g{.arity = n};
    for (std::size_t i = 0; i < classes.size(); ++i)
      g.section.emplace_back(classes[i].first, classes[i].second[pick[i]]);
    out.push_back(std::move(g));
    std::size_t i = classes.size();
    while (i > 0 && pick[i - 1] + 1 == classes[i - 1].second.size()) pick[--i] = 0;
    if (i == 0) break;
    ++pick[i - 1];
  }
  return out;
}

// The quasi-inverse laws, plus injectivity of F on ran(g o F).
inline PropertyReport verify_quasi_inverse(const VariadicFn& f, int n,
                                           const QuasiInverse& g) {
  require_arity(f, n);
  PropertyReport r{.property = "quasi-inverse(arity=" + std::to_string(n) + ")"};
  std::unordered_map<Value, Word> section;
  for (const auto& [v, w] : g.section) section.emplace(v, w);

  auto words = enumerate_words(f.alphabet(), n);
  auto apply_h = [&](const Word& x) -> const Word* {
    Value v = f.eval(x);
    auto it = section.find(v);
    return it == section.end() ? nullptr : &it->second;
  };

  // F o g o F = F, and (g o F)^2 = g o F.
  for (const auto& x : words) {
    ++r.instances_checked;
    const Word* h = apply_h(x);
    if (!h) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = x, .lhs = f.codomain().show(f.eval(x)),
                          .rhs = "not in the section's domain"};
      return r;
    }
    if (f.eval(*h) != f.eval(x)) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = x, .y = *h, .lhs = f.codomain().show(f.eval(*h)),
                          .rhs = f.codomain().show(f.eval(x))};
      return r;
    }
    const Word* hh = apply_h(*h);
    ++r.instances_checked;
    if (!hh || *hh != *h) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = x, .y = *h, .y2 = hh ? *hh : Word{},
                          .lhs = "H(H(x))", .rhs = "H(x)"};
      return r;
    }
  }

  // F restricted to ran(g o F) is one-to-one.
  std::unordered_map<Value, Word> seen;
  for (const auto& x : words) {
    const Word* h = apply_h(x);
    ++r.instances_checked;
    auto [it, fresh] = seen.emplace(f.eval(*h), *h);
    if (!fresh && it->second != *h) {
      r.verdict = Verdict::Fail;
      r.witness = Witness{.x = it->second, .y = *h,
                          .lhs = f.codomain().show(f.eval(*h)),
                          .rhs = "F not one-to-one on ran(g o F)"};
      return r;
    }
  }
  return r;
}

}  // namespace varfun
