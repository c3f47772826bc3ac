#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varfun/funcrep.hpp"
#include "varfun/report.hpp"
#include "varfun/words.hpp"

namespace varfun {

// One equivalence relation on X per coordinate position 1..L, stored as a
// class-id table indexed by letter rank.
struct PositionRelations {
  std::vector<std::vector<int>> class_id;  // [pos-1][rank] -> class index

  int positions() const { return static_cast<int>(class_id.size()); }

  bool same(int pos, int rank_a, int rank_b) const {
    const auto& ids = class_id[static_cast<std::size_t>(pos - 1)];
    return ids[static_cast<std::size_t>(rank_a)] ==
           ids[static_cast<std::size_t>(rank_b)];
  }

  // Classes at a position, each sorted by rank, ordered by least member.
  std::vector<std::vector<int>> classes(int pos) const {
    const auto& ids = class_id[static_cast<std::size_t>(pos - 1)];
    std::vector<std::vector<int>> out;
    std::map<int, std::size_t> where;
    for (std::size_t r = 0; r < ids.size(); ++r) {
      auto it = where.find(ids[r]);
      if (it == where.end()) {
        where.emplace(ids[r], out.size());
        out.push_back({static_cast<int>(r)});
      } else {
        out[it->second].push_back(static_cast<int>(r));
      }
    }
    return out;
  }

  // Lines of the form `E1: {a,b} {c}`.
  std::string serialize(const Alphabet& a) const {
    std::ostringstream out;
    for (int pos = 1; pos <= positions(); ++pos) {
      out << "E" << pos << ":";
      for (const auto& cls : classes(pos)) {
        out << " {";
        for (std::size_t i = 0; i < cls.size(); ++i) {
          if (i) out << ",";
          out << a.letter(cls[i]);
        }
        out << "}";
      }
      out << "\n";
    }
    return out.str();
  }
};

struct KernelDetection {
  std::optional<PositionRelations> relations;
  std::optional<Witness> violation;  // pair breaking the product biconditional
};

// Two-phase detection: the candidate E_i is the value-preserving single-swap
// relation at position i (the only possible defining relation), then the full
// product biconditional is verified on every same-arity pair.
inline KernelDetection detect_componentwise_kernel(const VariadicFn& f) {
  const Alphabet& a = f.alphabet();
  int L = f.maxlen();
  PositionRelations rel;
  rel.class_id.resize(static_cast<std::size_t>(L));

  for (int pos = 1; pos <= L; ++pos) {
    // swap_ok[a][b]: every substitution of b for a at this position, in every
    // context of every arity covering it, preserves the value.
    std::vector<std::vector<bool>> ok(
        static_cast<std::size_t>(a.size()),
        std::vector<bool>(static_cast<std::size_t>(a.size()), true));
    for (int n = pos; n <= L; ++n) {
      for (const auto& w : enumerate_words(a, n)) {
        Value base = f.eval(w);
        Word mod = w;
        int r0 = a.rank(w[static_cast<std::size_t>(pos - 1)]);
        for (int r = 0; r < a.size(); ++r) {
          if (r == r0) continue;
          mod[static_cast<std::size_t>(pos - 1)] = a.letter(r);
          if (f.eval(mod) != base) {
            ok[static_cast<std::size_t>(r0)][static_cast<std::size_t>(r)] = false;
            ok[static_cast<std::size_t>(r)][static_cast<std::size_t>(r0)] = false;
          }
        }
      }
    }
    // The swap relation is transitive, so union of surviving pairs is a
    // partition.
    auto& ids = rel.class_id[static_cast<std::size_t>(pos - 1)];
    ids.assign(static_cast<std::size_t>(a.size()), -1);
    int next = 0;
    for (int r = 0; r < a.size(); ++r) {
      if (ids[static_cast<std::size_t>(r)] >= 0) continue;
      ids[static_cast<std::size_t>(r)] = next;
      for (int s = r + 1; s < a.size(); ++s)
        if (ok[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)])
          ids[static_cast<std::size_t>(s)] = next;
      ++next;
    }
  }

  // Verify F(x) = F(y) <=> coordinatewise relatedness, on all pairs per arity.
  for (int n = 1; n <= L; ++n) {
    auto words = enumerate_words(a, n);
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        bool related = true;
        for (int pos = 1; pos <= n && related; ++pos)
          related = rel.same(pos, a.rank(words[i][static_cast<std::size_t>(pos - 1)]),
                             a.rank(words[j][static_cast<std::size_t>(pos - 1)]));
        bool equal = f.eval(words[i]) == f.eval(words[j]);
        if (related != equal) {
          return KernelDetection{
              .relations = std::nullopt,
              .violation = Witness{.x = words[i], .y = words[j],
                                   .lhs = f.codomain().show(f.eval(words[i])),
                                   .rhs = f.codomain().show(f.eval(words[j]))}};
        }
      }
    }
  }
  return KernelDetection{.relations = std::move(rel), .violation = std::nullopt};
}

// E_i nested in E_{i+1} for every position: each class of E_i lies inside a
// class of E_{i+1}.
inline PropertyReport check_nested_relations(const PositionRelations& rel,
                                             const Alphabet& a) {
  PropertyReport r{.property = "nested-relations"};
  for (int pos = 1; pos < rel.positions(); ++pos) {
    for (int x = 0; x < a.size(); ++x) {
      for (int y = x + 1; y < a.size(); ++y) {
        ++r.instances_checked;
        if (rel.same(pos, x, y) && !rel.same(pos + 1, x, y)) {
          r.verdict = Verdict::Fail;
          r.witness = Witness{.x = Word(1, a.letter(x)), .y = Word(1, a.letter(y)),
                              .lhs = "E" + std::to_string(pos),
                              .rhs = "E" + std::to_string(pos + 1)};
          return r;
        }
      }
    }
  }
  return r;
}

// A unary operation on X represented as the image word: op[rank] is the image
// of the rank-th letter.
using UnaryOp = Word;

inline char apply_op(const Alphabet& a, const UnaryOp& op, char c) {
  return op[static_cast<std::size_t>(a.rank(c))];
}

inline UnaryOp compose_ops(const Alphabet& a, const UnaryOp& f, const UnaryOp& g) {
  UnaryOp out = g;
  for (auto& c : out) c = apply_op(a, f, c);
  return out;
}

// The kernel partitions {ker(h_i)} of a chain, as PositionRelations.
inline PositionRelations kernels_of_chain(const Alphabet& a,
                                          const std::vector<UnaryOp>& chain) {
  PositionRelations rel;
  for (const auto& h : chain) {
    std::vector<int> ids(static_cast<std::size_t>(a.size()));
    std::map<char, int> seen;
    int next = 0;
    for (int r = 0; r < a.size(); ++r) {
      char img = apply_op(a, h, a.letter(r));
      auto [it, fresh] = seen.emplace(img, next);
      if (fresh) ++next;
      ids[static_cast<std::size_t>(r)] = it->second;
    }
    rel.class_id.push_back(std::move(ids));
  }
  return rel;
}

// Componentwise normal form: F_n(x) = outer(n, h_1(x_1)...h_n(x_n)). The chain
// conditions h_n o h_n = h_n and h_{n+1} o h_n = h_{n+1} are enforced; the
// default outer naming assigns one fresh symbol per reached tuple.
inline VariadicFn build_from_kernel_data(
    const Alphabet& a, int L, const std::vector<UnaryOp>& chain,
    const std::function<Value(int, const Word&)>& outer = nullptr) {
  if (static_cast<int>(chain.size()) < L)
    throw Error("OutOfDomain", "need a unary operation per position 1.." +
                                   std::to_string(L));
  for (int n = 1; n <= L; ++n) {
    const auto& h = chain[static_cast<std::size_t>(n - 1)];
    if (static_cast<int>(h.size()) != a.size() || !a.word_ok(h))
      throw Error("FormatError", "unary operation " + std::to_string(n) +
                                     " is not a map on the alphabet");
    if (compose_ops(a, h, h) != h)
      throw Error("ChainConditionViolated",
                  "h_" + std::to_string(n) + " is not idempotent");
    if (n < L) {
      const auto& h2 = chain[static_cast<std::size_t>(n)];
      if (compose_ops(a, h2, h) != h2)
        throw Error("ChainConditionViolated",
                    "h_" + std::to_string(n + 1) + " o h_" + std::to_string(n) +
                        " != h_" + std::to_string(n + 1));
    }
  }

  auto reduce = [&](const Word& x) {
    Word out = x;
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = apply_op(a, chain[i], out[i]);
    return out;
  };

  // Collect reached tuples per arity, then assign values.
  std::vector<std::pair<Word, Value>> rows;
  std::vector<std::string> symbols;
  for (int n = 1; n <= L; ++n) {
    std::map<Word, Value, CanonLess> assigned{CanonLess{&a}};
    std::map<Value, Word> used;
    for (const auto& x : enumerate_words(a, n)) {
      Word t = reduce(x);
      auto it = assigned.find(t);
      if (it == assigned.end()) {
        Value v = outer ? outer(n, t)
                        : "v" + std::to_string(n) + "_" + show_word(t);
        auto [uit, fresh] = used.emplace(v, t);
        if (!fresh && uit->second != t)
          throw Error("OuterNotInjective",
                      "arity " + std::to_string(n) + " value '" + v +
                          "' assigned to two tuples");
        it = assigned.emplace(t, v).first;
        symbols.push_back(v);
      }
      rows.emplace_back(x, it->second);
    }
  }
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  return VariadicFn::tabulated(a, Codomain::symbols(symbols), L, rows);
}

}  // namespace varfun
