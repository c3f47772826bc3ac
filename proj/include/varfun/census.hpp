#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "varfun/factor.hpp"
#include "varfun/funcrep.hpp"
#include "varfun/kernels.hpp"
#include "varfun/props.hpp"
#include "varfun/quasi.hpp"
#include "varfun/rng.hpp"

namespace varfun {

struct CensusConfig {
  int alphabet_size = 2;
  enum class Cod { Symbols, Words, LpWords };
  Cod cod = Cod::Symbols;
  int symbols = 2;  // codomain size for Cod::Symbols
  int maxlen = 2;
  bool verify_theorems = false;
  long long budget = 1LL << 20;
  std::optional<long long> sample;  // sampled run instead of exhaustive
  std::uint64_t seed = 0;
  int jobs = 1;
  long long section_sequence_budget = 256;
};

struct CensusReport {
  std::string universe;
  long long functions = 0;
  // Fixed key order for rendering.
  std::vector<std::pair<std::string, long long>> class_counts;
  std::vector<std::pair<std::string, long long>> theorem_checks;  // name -> checks
  std::optional<std::string> counterexample;
  double runtime_s = 0.0;

  std::string render(bool tsv = false, bool timing = false) const {
    std::ostringstream out;
    if (tsv) {
      out << "universe\t" << universe << "\n";
      out << "functions\t" << functions << "\n";
      for (const auto& [k, v] : class_counts) out << "class." << k << "\t" << v << "\n";
      for (const auto& [k, v] : theorem_checks)
        out << "theorem." << k << "\t" << v << "\n";
      out << "violations\t" << (counterexample ? 1 : 0) << "\n";
      if (timing) out << "runtime_s\t" << runtime_s << "\n";
    } else {
      out << "census report\n";
      out << "universe: " << universe << "\n";
      out << "functions: " << functions << "\n";
      for (const auto& [k, v] : class_counts)
        out << "class " << k << ": " << v << "\n";
      for (const auto& [k, v] : theorem_checks)
        out << "theorem " << k << ": verified on " << v << " functions\n";
      if (counterexample)
        out << "VIOLATION\n" << *counterexample;
      else
        out << "violations: none\n";
      if (timing) out << "runtime: " << runtime_s << " s\n";
    }
    return out.str();
  }
};

namespace census_detail {

struct Universe {
  Alphabet alpha;
  Codomain cod;
  int maxlen;
  std::vector<Word> inputs;               // lengths 1..L, canonical
  std::vector<std::vector<Value>> values; // per input: candidate values in order
  bool string_valued;

  long long total(long long cap) const {
    long long t = 1;
    for (const auto& vs : values) {
      t *= static_cast<long long>(vs.size());
      if (t > cap) return -1;  // over cap (possibly overflowed otherwise)
    }
    return t;
  }
};

inline Universe make_universe(const CensusConfig& cfg) {
  static const std::string pool = "abcdefghijklmnop";
  if (cfg.alphabet_size < 1 || cfg.alphabet_size > static_cast<int>(pool.size()))
    throw Error("OutOfDomain", "unsupported alphabet size");
  Universe u{.alpha = Alphabet(pool.substr(0, static_cast<std::size_t>(cfg.alphabet_size))),
             .cod = Codomain::words(Alphabet("a")),  // replaced below
             .maxlen = cfg.maxlen,
             .inputs = {},
             .values = {},
             .string_valued = cfg.cod != CensusConfig::Cod::Symbols};
  u.inputs = enumerate_words_upto(u.alpha, 1, cfg.maxlen);
  if (cfg.cod == CensusConfig::Cod::Symbols) {
    std::vector<std::string> names;
    for (int i = 0; i < cfg.symbols; ++i) names.push_back("v" + std::to_string(i));
    u.cod = Codomain::symbols(names);
    std::vector<Value> vs(names.begin(), names.end());
    u.values.assign(u.inputs.size(), vs);
  } else if (cfg.cod == CensusConfig::Cod::Words) {
    u.cod = Codomain::words(u.alpha);
    std::vector<Value> vs;
    for (const auto& w : enumerate_words_upto(u.alpha, 0, cfg.maxlen))
      vs.push_back(w);
    u.values.assign(u.inputs.size(), vs);
  } else {
    u.cod = Codomain::words(u.alpha);
    for (const auto& w : u.inputs) {
      std::vector<Value> vs;
      for (const auto& v : enumerate_words(u.alpha, static_cast<int>(w.size())))
        vs.push_back(v);
      u.values.push_back(std::move(vs));
    }
  }
  return u;
}

inline VariadicFn function_at(const Universe& u, const std::vector<std::size_t>& digits) {
  std::vector<Value> vals(u.inputs.size());
  for (std::size_t i = 0; i < u.inputs.size(); ++i)
    vals[i] = u.values[i][digits[i]];
  return VariadicFn::from_rows_unchecked(u.alpha, u.cod, u.maxlen, u.inputs, vals);
}

// Digits of the idx-th function in lexicographic value-vector order (first
// input is the most significant digit).
inline std::vector<std::size_t> digits_of_index(const Universe& u, long long idx) {
  std::vector<std::size_t> d(u.inputs.size(), 0);
  for (std::size_t i = u.inputs.size(); i-- > 0;) {
    long long r = static_cast<long long>(u.values[i].size());
    d[i] = static_cast<std::size_t>(idx % r);
    idx /= r;
  }
  return d;
}

// Advance to the next value vector; returns false after the last one.
inline bool next_digits(const Universe& u, std::vector<std::size_t>& d) {
  for (std::size_t i = u.inputs.size(); i-- > 0;) {
    if (d[i] + 1 < u.values[i].size()) {
      ++d[i];
      return true;
    }
    d[i] = 0;
  }
  return false;
}

inline std::vector<std::size_t> sampled_digits(const Universe& u, std::uint64_t seed,
                                               long long j) {
  std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(j)));
  std::vector<std::size_t> d(u.inputs.size());
  for (std::size_t i = 0; i < u.inputs.size(); ++i)
    d[i] = static_cast<std::size_t>(
        std::uniform_int_distribution<std::size_t>(0, u.values[i].size() - 1)(rng));
  return d;
}

struct WorkerTally {
  long long functions = 0;
  long long bpa = 0, preassoc = 0, assoc = 0, assoc_lp = 0, bassoc_single = 0,
            cw_kernel = 0;
  long long fact_equiv = 0, assoc_decomp = 0, section_comp = 0, range_shift = 0, kernel_nest = 0;
  long long first_violation = -1;
  std::string violation_text;

  void merge(const WorkerTally& o) {
    functions += o.functions;
    bpa += o.bpa;
    preassoc += o.preassoc;
    assoc += o.assoc;
    assoc_lp += o.assoc_lp;
    bassoc_single += o.bassoc_single;
    cw_kernel += o.cw_kernel;
    fact_equiv += o.fact_equiv;
    assoc_decomp += o.assoc_decomp;
    section_comp += o.section_comp;
    range_shift += o.range_shift;
    kernel_nest += o.kernel_nest;
    if (o.first_violation >= 0 &&
        (first_violation < 0 || o.first_violation < first_violation)) {
      first_violation = o.first_violation;
      violation_text = o.violation_text;
    }
  }
};

// Does F_k (a single arity) have an m-generated range?
inline bool arity_has_mgen_range(const VariadicFn& f, int k, int m) {
  for (const auto& w : enumerate_words(f.alphabet(), k)) {
    Value v = f.eval(w);
    if (v.size() != w.size() || !in_generated_set(v, m)) return false;
  }
  return true;
}

inline void classify_and_verify(const CensusConfig& cfg, const Universe& u,
                                const VariadicFn& f, long long idx,
                                WorkerTally& t) {
  auto record_violation = [&](const std::string& what) {
    if (t.first_violation >= 0) return;
    t.first_violation = idx;
    t.violation_text = "function #" + std::to_string(idx) + ": " + what + "\n" +
                       serialize_table(f);
  };

  ++t.functions;
  bool bpa = check_b_preassociative(f).passed();
  bool pre = check_preassociative(f).passed();
  if (bpa) ++t.bpa;
  if (pre) ++t.preassoc;
  if (pre && !bpa) record_violation("preassociative but not B-preassociative");

  bool assoc = false, lp = false;
  if (u.string_valued) {
    auto ar = check_associative(f);
    assoc = ar.passed();
    lp = check_length_preserving(f).passed();
    if (assoc) ++t.assoc;
    if (assoc && lp) ++t.assoc_lp;
    if (assoc && !pre) record_violation("associative but not preassociative");

    bool single = true;
    for (const auto& [w, v] : f.entries())
      if (!w.empty() && v.size() > 1) single = false;
    if (single) {
      auto ba = check_b_associative_eps(f);
      if (ba.verdict == Verdict::Pass) ++t.bassoc_single;
    }
  }

  auto detection = detect_componentwise_kernel(f);
  if (detection.relations) ++t.cw_kernel;

  if (!cfg.verify_theorems) return;

  // Factorization equivalence (both directions) with the canonical choices.
  {
    bool factorized = false;
    try {
      Factorization fac = factorize(f);
      factorized = true;
      (void)fac;
    } catch (const PropertyError& e) {
      if (e.code() != "NotBPreassociative") record_violation(e.what());
    } catch (const Error& e) {
      record_violation(std::string("factorize: ") + e.what());
    }
    if (factorized != bpa)
      record_violation("factorize success disagrees with B-preassociativity");
    ++t.fact_equiv;
  }

  // Associativity decomposition on length-preserving string functions.
  if (u.string_valued && lp) {
    bool idem = true;
    for (const auto& [w, v] : f.entries())
      if (!w.empty() && f.eval(v) != v) idem = false;
    if (assoc != (bpa && idem))
      record_violation("associative <=> (B-preassociative and idempotent parts) "
                       "failed");
    ++t.assoc_decomp;
  }

  // Section composition: (iii) => (i) via the canonical sequence; (i) => (ii) over every
  // sequence within the budget.
  {
    std::vector<QuasiInverse> canonical;
    for (int n = 1; n <= f.maxlen(); ++n)
      canonical.push_back(canonical_quasi_inverse(f, n));
    VariadicFn H = section_composition(f, canonical);
    bool h_good = check_associative(H).passed() &&
                  check_length_preserving(H).passed();
    if (h_good != bpa)
      record_violation("section-composition canonical-sequence equivalence failed");
    if (bpa) {
      long long product = 1;
      bool within = true;
      std::vector<std::vector<QuasiInverse>> per_arity;
      for (int n = 1; n <= f.maxlen() && within; ++n) {
        try {
          auto all = enumerate_quasi_inverses(f, n, cfg.section_sequence_budget);
          product *= static_cast<long long>(all.size());
          if (product > cfg.section_sequence_budget) within = false;
          per_arity.push_back(std::move(all));
        } catch (const Error&) {
          within = false;  // per-arity count alone exceeds the cap
        }
      }
      if (within) {
        std::vector<std::size_t> pick(per_arity.size(), 0);
        for (;;) {
          std::vector<QuasiInverse> gs;
          for (std::size_t i = 0; i < per_arity.size(); ++i)
            gs.push_back(per_arity[i][pick[i]]);
          VariadicFn Hs = section_composition(f, gs);
          if (!check_associative(Hs).passed() ||
              !check_length_preserving(Hs).passed()) {
            record_violation("section-composition (i)=>(ii): a quasi-inverse sequence gave a "
                             "non-associative H");
            break;
          }
          std::size_t i = per_arity.size();
          while (i > 0 && pick[i - 1] + 1 == per_arity[i - 1].size()) pick[--i] = 0;
          if (i == 0) break;
          ++pick[i - 1];
        }
      }
    }
    ++t.section_comp;
  }

  // Range-idempotence shift on associative string functions.
  if (u.string_valued && assoc) {
    for (int k = 1; k <= f.maxlen(); ++k) {
      for (int m = 1; m <= f.maxlen(); ++m) {
        if (!arity_has_mgen_range(f, k, m)) continue;
        for (int p = 0; k + p <= f.maxlen(); ++p) {
          if (!check_m_quasi_range_idempotent(f, k + p, m + p).passed())
            record_violation("range-idempotence shift failed at k=" + std::to_string(k) +
                             " m=" + std::to_string(m) + " p=" + std::to_string(p));
        }
      }
    }
    ++t.range_shift;
  }

  // Kernel nesting on componentwise kernels.
  if (detection.relations) {
    bool nested = check_nested_relations(*detection.relations, f.alphabet()).passed();
    if (bpa != nested)
      record_violation("kernel-nesting biconditional failed");
    ++t.kernel_nest;
  }
}

}  // namespace census_detail

inline CensusReport run_census(const CensusConfig& cfg) {
  using namespace census_detail;
  auto t0 = std::chrono::steady_clock::now();
  Universe u = make_universe(cfg);

  long long total = u.total(cfg.budget);
  long long count;
  if (cfg.sample) {
    count = *cfg.sample;
  } else {
    if (total < 0)
      throw Error("BudgetExceeded", "universe exceeds budget " +
                                        std::to_string(cfg.budget) +
                                        "; use sampling");
    count = total;
  }

  int jobs = std::max(1, cfg.jobs);
  std::vector<WorkerTally> tallies(static_cast<std::size_t>(jobs));
  auto work = [&](int w) {
    long long begin = count * w / jobs, end = count * (w + 1) / jobs;
    WorkerTally& t = tallies[static_cast<std::size_t>(w)];
    if (cfg.sample) {
      for (long long j = begin; j < end; ++j) {
        auto d = sampled_digits(u, cfg.seed, j);
        classify_and_verify(cfg, u, function_at(u, d), j, t);
      }
    } else {
      if (begin >= end) return;
      auto d = digits_of_index(u, begin);
      for (long long j = begin; j < end; ++j) {
        classify_and_verify(cfg, u, function_at(u, d), j, t);
        if (!next_digits(u, d)) break;
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();
  }
  WorkerTally sum;
  for (const auto& t : tallies) sum.merge(t);

  std::ostringstream universe;
  universe << "|X|=" << cfg.alphabet_size << " codomain=";
  switch (cfg.cod) {
    case CensusConfig::Cod::Symbols: universe << "symbols:" << cfg.symbols; break;
    case CensusConfig::Cod::Words: universe << "words"; break;
    case CensusConfig::Cod::LpWords: universe << "lp-words"; break;
  }
  universe << " maxlen=" << cfg.maxlen
           << (cfg.sample ? " mode=sampled seed=" + std::to_string(cfg.seed)
                          : " mode=exhaustive");

  CensusReport rep;
  rep.universe = universe.str();
  rep.functions = sum.functions;
  rep.class_counts = {
      {"b-preassociative", sum.bpa},
      {"preassociative", sum.preassoc},
  };
  if (u.string_valued) {
    rep.class_counts.emplace_back("associative", sum.assoc);
    rep.class_counts.emplace_back("associative-length-preserving", sum.assoc_lp);
    rep.class_counts.emplace_back("b-associative-single-letter", sum.bassoc_single);
  }
  rep.class_counts.emplace_back("componentwise-kernel", sum.cw_kernel);
  if (cfg.verify_theorems) {
    rep.theorem_checks = {
        {"factorization-equivalence", sum.fact_equiv},
        {"associativity-decomposition", sum.assoc_decomp},
        {"section-composition", sum.section_comp},
        {"range-idempotence-shift", sum.range_shift},
        {"kernel-nesting", sum.kernel_nest},
    };
  }
  if (sum.first_violation >= 0) rep.counterexample = sum.violation_text;
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Census with the full theorem battery enabled; a violation signals an
// implementation bug, never an expected outcome.
inline CensusReport verify_theorems(CensusConfig cfg) {
  cfg.verify_theorems = true;
  auto rep = run_census(cfg);
  if (rep.counterexample)
    throw Error("TheoremViolation", *rep.counterexample);
  return rep;
}

}  // namespace varfun
