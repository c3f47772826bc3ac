#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "varfun/error.hpp"
#include "varfun/words.hpp"

namespace varfun {

// A codomain value: either a symbol name or a word over the codomain's
// alphabet. The empty string denotes the empty word (words kind only).
using Value = std::string;

class Codomain {
 public:
  enum class Kind { Symbols, Words };

  static Codomain symbols(std::vector<std::string> names) {
    Codomain c;
    c.kind_ = Kind::Symbols;
    c.symbols_ = std::move(names);
    if (c.symbols_.empty()) throw Error("FormatError", "symbols codomain is empty");
    for (std::size_t i = 0; i < c.symbols_.size(); ++i) {
      const auto& s = c.symbols_[i];
      if (s.empty() || s == kEpsToken)
        throw Error("FormatError", "invalid symbol name '" + s + "'");
      if (c.sym_index_.count(s))
        throw Error("FormatError", "duplicate symbol name '" + s + "'");
      c.sym_index_[s] = static_cast<int>(i);
    }
    return c;
  }

  static Codomain words(Alphabet a) {
    Codomain c;
    c.kind_ = Kind::Words;
    c.alpha_ = std::move(a);
    return c;
  }

  Kind kind() const { return kind_; }
  bool is_words() const { return kind_ == Kind::Words; }
  const std::vector<std::string>& symbol_names() const { return symbols_; }
  const Alphabet& alphabet() const { return alpha_; }

  bool valid(const Value& v) const {
    if (kind_ == Kind::Words) return alpha_.word_ok(v);
    return sym_index_.count(v) > 0;
  }

  // Deterministic total order on values: declaration order for symbols,
  // canonical (length, word) order for words.
  bool less(const Value& a, const Value& b) const {
    if (kind_ == Kind::Words) return alpha_.canon_less(a, b);
    return sym_index_.at(a) < sym_index_.at(b);
  }

  std::string show(const Value& v) const {
    return kind_ == Kind::Words ? show_word(v) : v;
  }

  Value parse(const std::string& tok) const {
    if (kind_ == Kind::Words) {
      Value v = parse_word_token(tok);
      if (!alpha_.word_ok(v))
        throw Error("UnknownLetter", "value '" + tok + "' not over codomain alphabet");
      return v;
    }
    if (!sym_index_.count(tok))
      throw Error("FormatError", "unknown symbol '" + tok + "'");
    return tok;
  }

  bool operator==(const Codomain& o) const {
    return kind_ == o.kind_ && symbols_ == o.symbols_ &&
           alpha_.letters() == o.alpha_.letters();
  }

 private:
  Kind kind_ = Kind::Words;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> sym_index_;
  Alphabet alpha_;
};

// A variadic function F: X^{<=L} -> Y with an optional value at the empty
// word. Tabulated bodies are total on lengths 1..L; procedural bodies carry a
// closed-form rule valid up to L. Immutable after construction.
class VariadicFn {
 public:
  using Rule = std::function<Value(const Word&)>;

  static VariadicFn tabulated(Alphabet alpha, Codomain cod, int maxlen,
                              const std::vector<std::pair<Word, Value>>& rows,
                              bool declared_length_preserving = false) {
    VariadicFn f(std::move(alpha), std::move(cod), maxlen,
                 declared_length_preserving);
    f.tabulated_ = true;
    long long expected = 0, pw = 1;
    for (int n = 1; n <= maxlen; ++n) {
      pw *= f.alpha_.size();
      expected += pw;
      if (expected > (1LL << 40)) throw Error("BudgetExceeded", "table too large");
    }
    for (const auto& [w, v] : rows) {
      f.alpha_.require_word(w);
      if (static_cast<int>(w.size()) > maxlen)
        throw Error("FormatError", "entry '" + show_word(w) + "' exceeds maxlen");
      if (!f.cod_.valid(v))
        throw Error("FormatError", "invalid value '" + f.cod_.show(v) + "'");
      if (!f.index_.emplace(w, v).second)
        throw Error("DuplicateEntry", show_word(w));
      if (w.empty()) f.has_eps_ = true;
    }
    long long have = static_cast<long long>(f.index_.size()) - (f.has_eps_ ? 1 : 0);
    if (have < expected) {
      // Identify one missing word for the diagnostic.
      for (int n = 1; n <= maxlen; ++n)
        for (const auto& w : enumerate_words(f.alpha_, n))
          if (!f.index_.count(w)) throw Error("MissingEntry", w);
    }
    f.entries_.assign(rows.begin(), rows.end());
    std::sort(f.entries_.begin(), f.entries_.end(),
              [&f](const auto& a, const auto& b) {
                return f.alpha_.canon_less(a.first, b.first);
              });
    f.check_declared_lp();
    return f;
  }

  // Fast path for enumeration loops: inputs must be exactly all words of
  // lengths 1..maxlen in canonical order; values are trusted.
  static VariadicFn from_rows_unchecked(const Alphabet& alpha, const Codomain& cod,
                                        int maxlen, const std::vector<Word>& inputs,
                                        const std::vector<Value>& values,
                                        bool declared_length_preserving = false) {
    VariadicFn f(alpha, cod, maxlen, declared_length_preserving);
    f.tabulated_ = true;
    f.entries_.reserve(inputs.size());
    f.index_.reserve(inputs.size() * 2);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      f.entries_.emplace_back(inputs[i], values[i]);
      f.index_.emplace(inputs[i], values[i]);
      if (inputs[i].empty()) f.has_eps_ = true;
    }
    return f;
  }

  static VariadicFn procedural(Alphabet alpha, Codomain cod, int maxlen, Rule rule,
                               bool defines_eps,
                               bool declared_length_preserving = false) {
    VariadicFn f(std::move(alpha), std::move(cod), maxlen,
                 declared_length_preserving);
    f.tabulated_ = false;
    f.rule_ = std::move(rule);
    f.has_eps_ = defines_eps;
    return f;
  }

  const Alphabet& alphabet() const { return alpha_; }
  const Codomain& codomain() const { return cod_; }
  int maxlen() const { return maxlen_; }
  bool is_tabulated() const { return tabulated_; }
  bool has_eps_entry() const { return has_eps_; }
  bool declared_length_preserving() const { return declared_lp_; }

  Value eval(const Word& x) const {
    if (static_cast<int>(x.size()) > maxlen_)
      throw Error("OutOfDomain", "input '" + show_word(x) + "' longer than bound " +
                                     std::to_string(maxlen_));
    if (x.empty() && !has_eps_)
      throw Error("OutOfDomain", "no entry for the empty word");
    if (tabulated_) {
      auto it = index_.find(x);
      if (it == index_.end())
        throw Error("OutOfDomain", "no entry for '" + show_word(x) + "'");
      return it->second;
    }
    return rule_(x);
  }

  // Canonical (length, word)-ordered rows; tabulated bodies only.
  const std::vector<std::pair<Word, Value>>& entries() const {
    if (!tabulated_) throw Error("OutOfDomain", "procedural body has no table");
    return entries_;
  }

 private:
  VariadicFn(Alphabet alpha, Codomain cod, int maxlen, bool declared_lp)
      : alpha_(std::move(alpha)), cod_(std::move(cod)), maxlen_(maxlen),
        declared_lp_(declared_lp) {
    if (maxlen_ < 1) throw Error("FormatError", "maxlen must be positive");
  }

  void check_declared_lp() const {
    if (!declared_lp_) return;
    if (!cod_.is_words())
      throw Error("WrongCodomain", "length-preserving declared on symbols codomain");
    for (const auto& [w, v] : entries_)
      if (v.size() != w.size())
        throw Error("NotLengthPreserving",
                    "entry " + show_word(w) + " -> " + show_word(v));
  }

  Alphabet alpha_;
  Codomain cod_;
  int maxlen_ = 0;
  bool declared_lp_ = false;
  bool tabulated_ = false;
  bool has_eps_ = false;
  std::vector<std::pair<Word, Value>> entries_;
  std::unordered_map<Word, Value> index_;
  Rule rule_;
};

// ---------------------------------------------------------------------------
// Table file format

inline VariadicFn load_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::optional<Alphabet> alpha;
  std::optional<Codomain> cod;
  int maxlen = -1;
  bool declared_lp = false;
  std::vector<std::pair<Word, Value>> rows;

  auto trim = [](std::string s) {
    auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  auto fail = [&](const std::string& why) -> Error {
    return Error("FormatError", "line " + std::to_string(lineno) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty()) continue;
    if (!header_seen) {
      if (s != "varfun-table v1") throw fail("expected 'varfun-table v1'");
      header_seen = true;
      continue;
    }
    auto arrow = s.find("->");
    if (arrow != std::string::npos) {
      if (!alpha || !cod || maxlen < 0) throw fail("mapping before header fields");
      std::string lhs = trim(s.substr(0, arrow));
      std::string rhs = trim(s.substr(arrow + 2));
      if (lhs.empty() || rhs.empty()) throw fail("malformed mapping");
      Word w = parse_word_token(lhs);
      alpha->require_word(w);
      rows.emplace_back(w, cod->parse(rhs));
      continue;
    }
    auto colon = s.find(':');
    if (colon == std::string::npos) throw fail("expected 'key: value'");
    std::string key = trim(s.substr(0, colon));
    std::string val = trim(s.substr(colon + 1));
    if (key == "alphabet") {
      alpha = Alphabet(val);
    } else if (key == "codomain") {
      if (val == "words") {
        if (!alpha) throw fail("codomain before alphabet");
        cod = Codomain::words(*alpha);
      } else if (val.rfind("symbols", 0) == 0) {
        std::istringstream toks(val.substr(7));
        std::vector<std::string> names;
        std::string t;
        while (toks >> t) names.push_back(t);
        cod = Codomain::symbols(std::move(names));
      } else {
        throw fail("unknown codomain '" + val + "'");
      }
    } else if (key == "maxlen") {
      try {
        maxlen = std::stoi(val);
      } catch (...) {
        throw fail("bad maxlen");
      }
      if (maxlen < 1) throw fail("maxlen must be positive");
    } else if (key == "length-preserving") {
      if (val != "true" && val != "false") throw fail("bad length-preserving flag");
      declared_lp = (val == "true");
    } else {
      throw fail("unknown key '" + key + "'");
    }
  }
  if (!header_seen) throw Error("FormatError", "empty input");
  if (!alpha || !cod || maxlen < 0)
    throw Error("FormatError", "missing alphabet/codomain/maxlen");
  return VariadicFn::tabulated(*alpha, *cod, maxlen, rows, declared_lp);
}

inline std::string serialize_table(const VariadicFn& f) {
  std::ostringstream out;
  out << "varfun-table v1\n";
  out << "alphabet: " << f.alphabet().letters() << "\n";
  if (f.codomain().is_words()) {
    out << "codomain: words\n";
  } else {
    out << "codomain: symbols";
    for (const auto& s : f.codomain().symbol_names()) out << " " << s;
    out << "\n";
  }
  out << "maxlen: " << f.maxlen() << "\n";
  if (f.declared_length_preserving()) out << "length-preserving: true\n";
  for (const auto& [w, v] : f.entries())
    out << show_word(w) << " -> " << f.codomain().show(v) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Derived views

inline void require_arity(const VariadicFn& f, int n) {
  if (n < 1 || n > f.maxlen())
    throw Error("OutOfDomain", "arity " + std::to_string(n) + " outside 1.." +
                                   std::to_string(f.maxlen()));
}

// The m-diagonal section of F_n as an explicit map on X^{min(n,m)}, in
// canonical input order.
inline std::vector<std::pair<Word, Value>> diagonal_section_m(const VariadicFn& f,
                                                              int n, int m) {
  require_arity(f, n);
  if (m < 1) throw Error("OutOfDomain", "m must be positive");
  int k = std::min(n, m);
  std::vector<std::pair<Word, Value>> out;
  for (const auto& w : enumerate_words(f.alphabet(), k)) {
    Word arg = w.substr(0, static_cast<std::size_t>(k - 1)) +
               power(Word(1, w.back()), n - k + 1);
    out.emplace_back(w, f.eval(arg));
  }
  return out;
}

// ran(F_n) as a deterministic ordered set (codomain value order).
inline std::vector<Value> range_of(const VariadicFn& f, int n) {
  require_arity(f, n);
  std::vector<Value> out;
  for (const auto& w : enumerate_words(f.alphabet(), n)) out.push_back(f.eval(w));
  std::sort(out.begin(), out.end(), [&f](const Value& a, const Value& b) {
    return f.codomain().less(a, b);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Partition of X^n by F-value; classes ordered by lexicographically least
// representative, members in canonical order.
inline std::vector<std::pair<Value, std::vector<Word>>> kernel_partition(
    const VariadicFn& f, int n) {
  require_arity(f, n);
  std::vector<std::pair<Value, std::vector<Word>>> classes;
  std::unordered_map<Value, std::size_t> where;
  for (const auto& w : enumerate_words(f.alphabet(), n)) {
    Value v = f.eval(w);
    auto it = where.find(v);
    if (it == where.end()) {
      where.emplace(v, classes.size());
      classes.push_back({v, {w}});
    } else {
      classes[it->second].second.push_back(w);
    }
  }
  // Members arrive canonically ordered; class order by first member is the
  // least-representative order already.
  return classes;
}

// g composed arity-wise with f: result_n = g[n-1] applied to F_n. Each g_n
// must cover every value F_n reaches.
inline VariadicFn compose_unary(const std::vector<std::map<Value, Value>>& g,
                                const VariadicFn& f, const Codomain& target) {
  if (!f.is_tabulated())
    throw Error("OutOfDomain", "compose_unary requires a tabulated function");
  std::vector<std::pair<Word, Value>> rows;
  for (const auto& [w, v] : f.entries()) {
    if (w.empty()) {
      if (target.valid(v)) rows.emplace_back(w, v);
      continue;
    }
    std::size_t n = w.size();
    if (n > g.size())
      throw Error("PartialOuterMap", "no outer map for arity " + std::to_string(n));
    auto it = g[n - 1].find(v);
    if (it == g[n - 1].end())
      throw Error("PartialOuterMap", "outer map " + std::to_string(n) +
                                         " undefined on " + f.codomain().show(v));
    rows.emplace_back(w, it->second);
  }
  return VariadicFn::tabulated(f.alphabet(), target, f.maxlen(), rows);
}

// Exhaustively evaluate a procedural function into a table.
inline VariadicFn tabulate(const VariadicFn& f, long long entry_budget = 1 << 20) {
  if (f.is_tabulated()) return f;
  long long total = 0, pw = 1;
  for (int n = 1; n <= f.maxlen(); ++n) {
    pw *= f.alphabet().size();
    total += pw;
    if (total > entry_budget)
      throw Error("BudgetExceeded", "tabulation needs more than " +
                                        std::to_string(entry_budget) + " entries");
  }
  std::vector<std::pair<Word, Value>> rows;
  if (f.has_eps_entry()) rows.emplace_back(Word{}, f.eval(Word{}));
  for (int n = 1; n <= f.maxlen(); ++n)
    for (const auto& w : enumerate_words(f.alphabet(), n))
      rows.emplace_back(w, f.eval(w));
  return VariadicFn::tabulated(f.alphabet(), f.codomain(), f.maxlen(), rows,
                               f.declared_length_preserving());
}

}  // namespace varfun
