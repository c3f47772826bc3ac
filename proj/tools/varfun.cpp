// varfun: property checking, factorization, and census of variadic functions
// over finite alphabets.
//
// Exit codes: 0 = pass/success, 1 = property fail or counterexample (witness
// printed), 2 = usage/format/domain error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varfun/census.hpp"
#include "varfun/factor.hpp"
#include "varfun/families.hpp"
#include "varfun/funcrep.hpp"
#include "varfun/kernels.hpp"
#include "varfun/props.hpp"
#include "varfun/quasi.hpp"

namespace {

using namespace varfun;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FormatError", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("FormatError", "cannot write '" + path + "'");
  out << text;
}

int report_exit(const PropertyReport& r) {
  std::cout << r.render() << "\n";
  return r.passed() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string file, property;
  int m = 1;
};

int run_check(const CheckArgs& a) {
  VariadicFn f = load_table(read_file(a.file));
  if (a.property == "length-preserving") return report_exit(check_length_preserving(f));
  if (a.property == "associative") return report_exit(check_associative(f));
  if (a.property == "preassociative") return report_exit(check_preassociative(f));
  if (a.property == "b-preassociative") return report_exit(check_b_preassociative(f));
  if (a.property == "b-associative") return report_exit(check_b_associative_eps(f));
  if (a.property == "definetti") return report_exit(check_definetti(f));
  if (a.property == "idempotent-parts") return report_exit(check_idempotent_parts(f));
  if (a.property == "m-generated-range")
    return report_exit(check_m_generated_range(f, a.m));
  if (a.property == "m-quasi-range-idempotent") {
    int worst = 0;
    for (int n = 1; n <= f.maxlen(); ++n) {
      auto r = check_m_quasi_range_idempotent(f, n, a.m);
      std::cout << r.render() << "\n";
      if (!r.passed()) worst = 1;
    }
    return worst;
  }
  throw Error("FormatError", "unknown property '" + a.property + "'");
}

// ---------------------------------------------------------------------------

struct FactorizeArgs {
  std::string file, out_h, out_outer;
  int m = 0;  // 0 = unconstrained
};

int run_factorize(const FactorizeArgs& a) {
  VariadicFn f = load_table(read_file(a.file));
  Factorization fac = a.m > 0 ? factorize_m(f, a.m) : factorize(f);
  std::string h_text = serialize_table(fac.H);
  std::string outer_text = serialize_factorization(f, fac);
  if (a.out_h.empty())
    std::cout << h_text;
  else
    write_file(a.out_h, h_text);
  if (a.out_outer.empty())
    std::cout << outer_text;
  else
    write_file(a.out_outer, outer_text);
  std::cout << "factorization: OK (arities 1.." << f.maxlen() << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct QuasiArgs {
  std::string file;
  int arity = 1;
  bool enumerate = false;
  long long budget = 256;
};

int run_quasi(const QuasiArgs& a) {
  VariadicFn f = load_table(read_file(a.file));
  if (a.enumerate) {
    auto all = enumerate_quasi_inverses(f, a.arity, a.budget);
    std::cout << "count: " << all.size() << "\n";
    for (const auto& g : all) std::cout << g.serialize(f.codomain());
    return 0;
  }
  auto g = canonical_quasi_inverse(f, a.arity);
  std::cout << g.serialize(f.codomain());
  auto r = verify_quasi_inverse(f, a.arity, g);
  std::cout << r.render() << "\n";
  return r.passed() ? 0 : 1;
}

// ---------------------------------------------------------------------------

int run_kernel(const std::string& file) {
  VariadicFn f = load_table(read_file(file));
  auto det = detect_componentwise_kernel(f);
  if (!det.relations) {
    std::cout << "componentwise kernel: NONE\n";
    if (det.violation) {
      const auto& w = *det.violation;
      std::cout << "witness: x=" << show_word(w.x) << " y=" << show_word(w.y)
                << " lhs=" << w.lhs << " rhs=" << w.rhs << "\n";
    }
    return 1;
  }
  std::cout << "componentwise kernel: FOUND\n";
  std::cout << det.relations->serialize(f.alphabet());
  std::cout << check_nested_relations(*det.relations, f.alphabet()).render() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct CensusArgs {
  CensusConfig cfg;
  std::string codomain = "symbols:2";
  long long sample = -1;
  std::string format = "text";
};

int run_cli_census(CensusArgs& a, bool timing) {
  if (a.codomain == "words") {
    a.cfg.cod = CensusConfig::Cod::Words;
  } else if (a.codomain == "lp-words") {
    a.cfg.cod = CensusConfig::Cod::LpWords;
  } else if (a.codomain.rfind("symbols:", 0) == 0) {
    a.cfg.cod = CensusConfig::Cod::Symbols;
    a.cfg.symbols = std::stoi(a.codomain.substr(8));
    if (a.cfg.symbols < 1) throw Error("FormatError", "need at least one symbol");
  } else {
    throw Error("FormatError", "unknown codomain '" + a.codomain + "'");
  }
  if (a.sample >= 0) a.cfg.sample = a.sample;
  if (a.format != "text" && a.format != "tsv")
    throw Error("FormatError", "unknown format '" + a.format + "'");
  auto rep = run_census(a.cfg);
  std::cout << rep.render(a.format == "tsv", timing);
  return rep.counterexample ? 1 : 0;
}

// ---------------------------------------------------------------------------

constexpr long long kTableGuard = 1'000'000;  // |X|^L entry cap for emitted tables

long long table_entries(int alphabet_size, int L) {
  long long total = 0, pw = 1;
  for (int n = 1; n <= L; ++n) {
    pw *= alphabet_size;
    total += pw;
    if (total > kTableGuard) return total;
  }
  return total;
}

struct RemoveLetterArgs {
  std::string letter = "a";
  std::string alphabet, word;
  int maxlen = 3;
  bool show_h = false;
};

int run_remove_letter(const RemoveLetterArgs& a) {
  if (a.letter.size() != 1)
    throw Error("FormatError", "--letter takes a single character");
  std::string letters = a.alphabet;
  if (letters.empty()) {
    // Default alphabet: the distinct letters of --word (sorted), else {a,b}.
    std::set<char> s(a.word.begin(), a.word.end());
    s.insert(a.letter[0]);
    letters.assign(s.begin(), s.end());
  }
  Alphabet alpha(letters);
  int bound = std::max<int>(a.maxlen, static_cast<int>(a.word.size()));
  VariadicFn fn = a.show_h ? remove_letter_H(a.letter[0], alpha, bound)
                           : remove_letter_fn(a.letter[0], alpha, bound);
  if (!a.word.empty()) {
    std::cout << show_word(fn.eval(a.word)) << "\n";
    return 0;
  }
  if (table_entries(alpha.size(), bound) > kTableGuard)
    throw Error("BudgetExceeded", "table would exceed the size guard; pass --word");
  std::cout << serialize_table(tabulate(fn));
  return 0;
}

struct HChainArgs {
  std::string alphabet = "ab";
  std::vector<std::string> chain;
  int maxlen = 0;
};

int run_hchain(const HChainArgs& a) {
  Alphabet alpha(a.alphabet);
  int L = a.maxlen > 0 ? a.maxlen : static_cast<int>(a.chain.size());
  std::vector<UnaryOp> ops(a.chain.begin(), a.chain.end());
  std::cout << hchain_condition(ops, alpha, L).render() << "\n";
  VariadicFn fn = hchain_fn(ops, alpha, L);
  auto assoc = check_associative(fn);
  std::cout << assoc.render() << "\n";
  if (table_entries(alpha.size(), L) <= kTableGuard)
    std::cout << serialize_table(tabulate(fn));
  return assoc.passed() ? 0 : 1;
}

struct PreMeanArgs {
  std::string kind = "sum";
  std::string eval_csv;
  bool check = false;
  long long trials = 10000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = 1e-9;
};

PreMeanSpec spec_of(const std::string& kind) {
  if (kind == "sum") return PreMeanSpec::sum();
  if (kind == "product") return PreMeanSpec::product();
  if (kind == "mean") return PreMeanSpec::mean();
  throw Error("FormatError", "unknown pre-mean kind '" + kind + "'");
}

int run_premean(const PreMeanArgs& a, std::uint64_t global_seed) {
  PreMeanSpec spec = spec_of(a.kind);
  std::uint64_t seed = a.seed_set ? a.seed : global_seed;
  int rc = 0;
  if (!a.eval_csv.empty()) {
    std::vector<double> x;
    std::istringstream ss(a.eval_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) x.push_back(std::stod(tok));
    std::ostringstream out;
    out.precision(15);
    out << premean_eval(spec, x);
    std::cout << out.str() << "\n";
  }
  if (a.check) {
    auto r = premean_check_bpa(spec, a.trials, seed, a.tol);
    std::cout << r.render() << "\n";
    if (!r.passed()) rc = 1;
  }
  if (a.eval_csv.empty() && !a.check)
    throw Error("FormatError", "premean needs --eval or --check");
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variadic-function property checker and factorizer"};
  app.require_subcommand(1);

  int jobs = 1;
  std::uint64_t seed = 0;
  bool timing = false;
  app.add_option("--jobs", jobs, "worker threads where supported");
  app.add_option("--seed", seed, "global random seed");
  app.add_flag("--timing", timing, "include runtime in reports");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "run a property checker on a table");
  check->add_option("file", check_args.file)->required();
  check->add_option("--property", check_args.property)->required();
  check->add_option("--m", check_args.m);

  FactorizeArgs fac_args;
  auto* fac = app.add_subcommand("factorize", "factor F_n = f_n o H_n");
  fac->add_option("file", fac_args.file)->required();
  fac->add_option("--m", fac_args.m);
  fac->add_option("--out", fac_args.out_h);
  fac->add_option("--out-outer", fac_args.out_outer);

  QuasiArgs quasi_args;
  auto* quasi = app.add_subcommand("quasi-inverse", "quasi-inverses of an n-ary part");
  quasi->add_option("file", quasi_args.file)->required();
  quasi->add_option("--arity", quasi_args.arity)->required();
  quasi->add_flag("--enumerate", quasi_args.enumerate);
  quasi->add_option("--budget", quasi_args.budget);

  std::string kernel_file;
  auto* kernel = app.add_subcommand("kernel", "detect a componentwise kernel");
  kernel->add_option("file", kernel_file)->required();

  CensusArgs census_args;
  auto* census = app.add_subcommand("census", "enumerate and classify all functions");
  census->add_option("--alphabet-size", census_args.cfg.alphabet_size)->required();
  census->add_option("--codomain", census_args.codomain)->required();
  census->add_option("--maxlen", census_args.cfg.maxlen)->required();
  census->add_flag("--verify-theorems", census_args.cfg.verify_theorems);
  census->add_option("--budget", census_args.cfg.budget);
  census->add_option("--sample", census_args.sample);

  census->add_option("--format", census_args.format);

  auto* family = app.add_subcommand("family", "built-in function families");
  family->require_subcommand(1);

  RemoveLetterArgs rl_args;
  auto* rl = family->add_subcommand("remove-letter", "letter-removal family");
  rl->add_option("--letter", rl_args.letter);
  rl->add_option("--alphabet", rl_args.alphabet);
  rl->add_option("--word", rl_args.word);
  rl->add_option("--maxlen", rl_args.maxlen);
  rl->add_flag("--show-H", rl_args.show_h);

  HChainArgs hc_args;
  auto* hc = family->add_subcommand("hchain", "letterwise-chain family");
  hc->add_option("--alphabet", hc_args.alphabet);
  hc->add_option("--chain", hc_args.chain,
                 "image words, one per position (e.g. --chain aa ab)")
      ->required();
  hc->add_option("--maxlen", hc_args.maxlen);

  PreMeanArgs pm_args;
  auto add_premean_opts = [&](CLI::App* cmd) {
    cmd->add_option("--kind", pm_args.kind)->required();
    cmd->add_option("--eval", pm_args.eval_csv, "comma-separated arguments");
    cmd->add_flag("--check", pm_args.check);
    cmd->add_option("--trials", pm_args.trials);
    cmd->add_option("--seed", pm_args.seed)->each([&](const std::string&) {
      pm_args.seed_set = true;
    });
    cmd->add_option("--tol", pm_args.tol);
  };
  add_premean_opts(family->add_subcommand("premean", "quasi-arithmetic pre-means"));
  auto* pm_top = app.add_subcommand("premean", "quasi-arithmetic pre-means");
  add_premean_opts(pm_top);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  int rc = 2;
  try {
    if (check->parsed()) rc = run_check(check_args);
    else if (fac->parsed()) rc = run_factorize(fac_args);
    else if (quasi->parsed()) rc = run_quasi(quasi_args);
    else if (kernel->parsed()) rc = run_kernel(kernel_file);
    else if (census->parsed()) {
      census_args.cfg.jobs = jobs;
      census_args.cfg.seed = seed;
      rc = run_cli_census(census_args, timing);
    } else if (family->parsed()) {
      auto subs = family->get_subcommands();
      const std::string& name = subs.at(0)->get_name();
      if (name == "remove-letter") rc = run_remove_letter(rl_args);
      else if (name == "hchain") rc = run_hchain(hc_args);
      else rc = run_premean(pm_args, seed);
    } else if (pm_top->parsed()) {
      rc = run_premean(pm_args, seed);
    }
  } catch (const PropertyError& e) {
    std::cout << e.report().render() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (timing && !census->parsed()) {
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count();
    std::cout << "runtime: " << s << " s\n";
  }
  return rc;
}
