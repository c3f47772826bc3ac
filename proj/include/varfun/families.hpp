#pragma once

#include <boost/rational.hpp>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varfun/funcrep.hpp"
#include "varfun/kernels.hpp"
#include "varfun/props.hpp"
#include "varfun/report.hpp"
#include "varfun/rng.hpp"

namespace varfun {

// ---------------------------------------------------------------------------
// Letter removal (and its length-preserving companion)

// F(x) = x with every occurrence of the chosen letter removed; associative.
inline VariadicFn remove_letter_fn(char letter, const Alphabet& a, int bound) {
  if (!a.contains(letter))
    throw Error("UnknownLetter", std::string("letter '") + letter + "' not in alphabet");
  return VariadicFn::procedural(
      a, Codomain::words(a), bound,
      [letter](const Word& x) {
        Word out;
        for (char c : x)
          if (c != letter) out += c;
        return out;
      },
      /*defines_eps=*/true);
}

// H_n = g_n o F_n with g_n(x) = x a^{n-|x|}: the removed letters migrate to
// the rightmost positions. Length-preserving and associative.
inline VariadicFn remove_letter_H(char letter, const Alphabet& a, int bound) {
  if (!a.contains(letter))
    throw Error("UnknownLetter", std::string("letter '") + letter + "' not in alphabet");
  return VariadicFn::procedural(
      a, Codomain::words(a), bound,
      [letter](const Word& x) {
        Word out;
        for (char c : x)
          if (c != letter) out += c;
        out.append(x.size() - out.size(), letter);
        return out;
      },
      /*defines_eps=*/true, /*declared_length_preserving=*/true);
}

// ---------------------------------------------------------------------------
// Letterwise chains

// F_n(x_1...x_n) = h_1(x_1)...h_n(x_n), F_0(eps) = eps.
inline VariadicFn hchain_fn(const std::vector<UnaryOp>& chain, const Alphabet& a,
                            int L) {
  if (static_cast<int>(chain.size()) < L)
    throw Error("OutOfDomain", "need a unary operation per position 1.." +
                                   std::to_string(L));
  for (const auto& h : chain)
    if (static_cast<int>(h.size()) != a.size() || !a.word_ok(h))
      throw Error("FormatError", "unary operation is not a map on the alphabet");
  std::vector<UnaryOp> ops(chain.begin(), chain.begin() + L);
  return VariadicFn::procedural(
      a, Codomain::words(a), L,
      [a, ops](const Word& x) {
        Word out = x;
        for (std::size_t i = 0; i < out.size(); ++i)
          out[i] = apply_op(a, ops[i], out[i]);
        return out;
      },
      /*defines_eps=*/true, /*declared_length_preserving=*/true);
}

// h_n o h_m = h_n for all m <= n <= L; also evaluates the equivalent
// two-condition form and insists the verdicts agree.
inline PropertyReport hchain_condition(const std::vector<UnaryOp>& chain,
                                       const Alphabet& a, int L) {
  if (static_cast<int>(chain.size()) < L)
    throw Error("OutOfDomain", "chain shorter than L");
  PropertyReport r{.property = "hchain-condition"};
  bool all_pairs = true;
  std::optional<Witness> w;
  for (int n = 1; n <= L && all_pairs; ++n) {
    for (int m = 1; m <= n; ++m) {
      ++r.instances_checked;
      const auto& hn = chain[static_cast<std::size_t>(n - 1)];
      const auto& hm = chain[static_cast<std::size_t>(m - 1)];
      if (compose_ops(a, hn, hm) != hn) {
        all_pairs = false;
        w = Witness{.x = hn, .y = hm,
                    .lhs = "h_" + std::to_string(n) + " o h_" + std::to_string(m),
                    .rhs = "h_" + std::to_string(n)};
        break;
      }
    }
  }
  bool two_form = true;
  for (int n = 1; n <= L && two_form; ++n) {
    const auto& hn = chain[static_cast<std::size_t>(n - 1)];
    if (compose_ops(a, hn, hn) != hn) two_form = false;
    if (n < L) {
      const auto& h2 = chain[static_cast<std::size_t>(n)];
      if (compose_ops(a, h2, hn) != h2) two_form = false;
    }
  }
  if (all_pairs != two_form)
    throw Error("InternalConsistency",
                "pairwise and two-condition chain forms disagree");
  if (!all_pairs) {
    r.verdict = Verdict::Fail;
    r.witness = w;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Single-letter lift

// H_n(x) = F_n(x)^n for an X-valued B-associative function; associative,
// length-preserving, with a 1-generated range.
inline VariadicFn b_assoc_lift(const VariadicFn& f) {
  VariadicFn tab = tabulate(f);
  for (const auto& [w, v] : tab.entries()) {
    if (w.empty()) continue;
    auto letter = detail::value_as_letter_or_eps(tab, v);
    if (!letter || letter->empty())
      throw Error("NotSingleLetterOutputs",
                  "output at '" + show_word(w) + "' is not a single letter");
  }
  auto ba = check_b_associative_eps(tab);
  if (!ba.passed()) throw PropertyError("NotBAssociative", ba);
  std::vector<std::pair<Word, Value>> rows;
  rows.emplace_back(Word{}, Word{});
  for (const auto& [w, v] : tab.entries()) {
    if (w.empty()) continue;
    Word letter = *detail::value_as_letter_or_eps(tab, v);
    rows.emplace_back(w, power(letter, static_cast<int>(w.size())));
  }
  return VariadicFn::tabulated(tab.alphabet(), Codomain::words(tab.alphabet()),
                               tab.maxlen(), rows, true);
}

// ---------------------------------------------------------------------------
// Quasi-arithmetic pre-means

using Rational = boost::rational<long long>;

// F_n(x) = f_n((1/n) sum f(x_i)) for a closed set of inner/outer shapes. The
// closed enumeration keeps injectivity and monotonicity machine-checkable.
class PreMeanSpec {
 public:
  enum class Inner { Identity, Log, Negation, Affine };
  enum class Outer { ScaleN, ExpN, InverseInner };

  PreMeanSpec(Inner inner, Outer outer, double lo, double hi,
              Rational affine_a = Rational(1), Rational affine_b = Rational(0))
      : inner_(inner), outer_(outer), lo_(lo), hi_(hi), affine_a_(affine_a),
        affine_b_(affine_b) {
    if (!(lo < hi)) throw Error("FormatError", "empty domain interval");
    if (inner_ == Inner::Affine && affine_a_ == Rational(0))
      throw Error("FormatError", "affine inner must have nonzero slope");
    if (inner_ == Inner::Log && lo <= 0.0)
      throw Error("DomainViolation", "log inner needs a positive interval");
    if (outer_ == Outer::ExpN && inner_ != Inner::Log)
      throw Error("FormatError", "exp outer is paired with the log inner");
  }

  static PreMeanSpec sum() {
    return PreMeanSpec(Inner::Identity, Outer::ScaleN, -10.0, 10.0);
  }
  static PreMeanSpec product() {
    return PreMeanSpec(Inner::Log, Outer::ExpN, 0.5, 4.0);
  }
  static PreMeanSpec mean() {
    return PreMeanSpec(Inner::Identity, Outer::InverseInner, -10.0, 10.0);
  }

  // True when both legs evaluate in exact rational arithmetic.
  bool exact() const {
    return inner_ != Inner::Log && outer_ != Outer::ExpN;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Inner inner() const { return inner_; }
  Outer outer() const { return outer_; }
  double affine_a() const { return boost::rational_cast<double>(affine_a_); }
  double affine_b() const { return boost::rational_cast<double>(affine_b_); }

  Rational inner_exact(const Rational& x) const {
    switch (inner_) {
      case Inner::Identity: return x;
      case Inner::Negation: return -x;
      case Inner::Affine: return affine_a_ * x + affine_b_;
      default: throw Error("FormatError", "inner is not exact");
    }
  }

  Rational inner_inverse_exact(const Rational& t) const {
    switch (inner_) {
      case Inner::Identity: return t;
      case Inner::Negation: return -t;
      case Inner::Affine: return (t - affine_b_) / affine_a_;
      default: throw Error("FormatError", "inner is not exact");
    }
  }

  double inner_eval(double x) const {
    switch (inner_) {
      case Inner::Identity: return x;
      case Inner::Log: return std::log(x);
      case Inner::Negation: return -x;
      case Inner::Affine:
        return boost::rational_cast<double>(affine_a_) * x +
               boost::rational_cast<double>(affine_b_);
    }
    return x;
  }

  bool in_domain(double x) const {
    if (inner_ == Inner::Log && x <= 0.0) return false;
    return true;
  }

 private:
  Inner inner_;
  Outer outer_;
  double lo_, hi_;
  Rational affine_a_, affine_b_;
};

inline Rational premean_eval_exact(const PreMeanSpec& spec,
                                   const std::vector<Rational>& x) {
  if (!spec.exact()) throw Error("FormatError", "spec has no exact path");
  if (x.empty()) throw Error("OutOfDomain", "n must be at least 1");
  Rational s(0);
  for (const auto& xi : x) s += spec.inner_exact(xi);
  long long n = static_cast<long long>(x.size());
  s /= Rational(n);
  switch (spec.outer()) {
    case PreMeanSpec::Outer::ScaleN: return Rational(n) * s;
    case PreMeanSpec::Outer::InverseInner: return spec.inner_inverse_exact(s);
    default: throw Error("FormatError", "spec has no exact path");
  }
}

inline double premean_eval(const PreMeanSpec& spec, const std::vector<double>& x) {
  if (x.empty()) throw Error("OutOfDomain", "n must be at least 1");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!spec.in_domain(x[i]))
      throw Error("DomainViolation", "argument " + std::to_string(i + 1) +
                                         " outside the domain interval");
  double s = 0.0;
  for (double xi : x) s += spec.inner_eval(xi);
  double n = static_cast<double>(x.size());
  s /= n;
  switch (spec.outer()) {
    case PreMeanSpec::Outer::ScaleN: return n * s;
    case PreMeanSpec::Outer::ExpN: return std::exp(n * s);
    case PreMeanSpec::Outer::InverseInner:
      switch (spec.inner()) {
        case PreMeanSpec::Inner::Identity: return s;
        case PreMeanSpec::Inner::Log: return std::exp(s);
        case PreMeanSpec::Inner::Negation: return -s;
        case PreMeanSpec::Inner::Affine: return (s - spec.affine_b()) / spec.affine_a();
      }
  }
  return s;
}

// Sampled B-preassociativity: construct y' from y by a mean-preserving
// two-point spread (exact in f-space), then require F(xyz) = F(xy'z).
inline PropertyReport premean_check_bpa(const PreMeanSpec& spec, long long trials,
                                        std::uint64_t seed, double tol) {
  if (trials < 1) throw Error("OutOfDomain", "trials must be at least 1");
  PropertyReport r{.property = "premean-b-preassociative"};
  for (long long t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    auto geni = [&](long long lo, long long hi) {
      return std::uniform_int_distribution<long long>(lo, hi)(rng);
    };
    auto gend = [&](double lo, double hi) {
      return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    std::size_t k = static_cast<std::size_t>(geni(2, 5));
    std::size_t nx = static_cast<std::size_t>(geni(0, 2));
    std::size_t nz = static_cast<std::size_t>(geni(0, 2));

    if (spec.exact()) {
      long long lo = static_cast<long long>(std::ceil(spec.lo()));
      long long hi = static_cast<long long>(std::floor(spec.hi()));
      std::vector<Rational> y, x, z;
      for (std::size_t i = 0; i < k; ++i) y.emplace_back(geni(lo, hi));
      for (std::size_t i = 0; i < nx; ++i) x.emplace_back(geni(lo, hi));
      for (std::size_t i = 0; i < nz; ++i) z.emplace_back(geni(lo, hi));
      std::size_t i = static_cast<std::size_t>(geni(0, static_cast<long long>(k) - 1));
      std::size_t j = static_cast<std::size_t>(geni(0, static_cast<long long>(k) - 2));
      if (j >= i) ++j;
      long long yi = boost::rational_cast<long long>(y[i]);
      long long yj = boost::rational_cast<long long>(y[j]);
      long long dlo = std::max(lo - yi, yj - hi);
      long long dhi = std::min(hi - yi, yj - lo);
      long long d = geni(dlo, dhi);
      std::vector<Rational> y2 = y;
      y2[i] = Rational(yi + d);
      y2[j] = Rational(yj - d);
      // Premise holds exactly: the inner sum is preserved.
      auto cat = [](std::vector<Rational> a, const std::vector<Rational>& b,
                    const std::vector<Rational>& c) {
        a.insert(a.end(), b.begin(), b.end());
        a.insert(a.end(), c.begin(), c.end());
        return a;
      };
      ++r.instances_checked;
      if (premean_eval_exact(spec, y) != premean_eval_exact(spec, y2)) {
        r.verdict = Verdict::Fail;
        r.witness = Witness{.y = "trial " + std::to_string(t),
                            .lhs = "premise", .rhs = "violated"};
        return r;
      }
      Rational lhs = premean_eval_exact(spec, cat(x, y, z));
      Rational rhs = premean_eval_exact(spec, cat(x, y2, z));
      if (lhs != rhs) {
        r.verdict = Verdict::Fail;
        std::ostringstream ls, rs;
        ls << lhs;
        rs << rhs;
        r.witness = Witness{.y = "trial " + std::to_string(t),
                            .lhs = ls.str(), .rhs = rs.str()};
        return r;
      }
    } else {
      double flo = spec.inner_eval(spec.lo()), fhi = spec.inner_eval(spec.hi());
      if (flo > fhi) std::swap(flo, fhi);
      std::vector<double> y, x, z;
      for (std::size_t i = 0; i < k; ++i) y.push_back(gend(spec.lo(), spec.hi()));
      for (std::size_t i = 0; i < nx; ++i) x.push_back(gend(spec.lo(), spec.hi()));
      for (std::size_t i = 0; i < nz; ++i) z.push_back(gend(spec.lo(), spec.hi()));
      std::size_t i = static_cast<std::size_t>(geni(0, static_cast<long long>(k) - 1));
      std::size_t j = static_cast<std::size_t>(geni(0, static_cast<long long>(k) - 2));
      if (j >= i) ++j;
      double ti = spec.inner_eval(y[i]), tj = spec.inner_eval(y[j]);
      double dlo = std::max(flo - ti, tj - fhi);
      double dhi = std::min(fhi - ti, tj - flo);
      double d = gend(dlo, dhi);
      std::vector<double> y2 = y;
      // Spread in f-space; for the log inner this is multiply/divide by e^d.
      auto f_inv = [&](double tv) {
        return spec.inner() == PreMeanSpec::Inner::Log ? std::exp(tv) : tv;
      };
      y2[i] = f_inv(ti + d);
      y2[j] = f_inv(tj - d);
      auto cat = [](std::vector<double> a, const std::vector<double>& b,
                    const std::vector<double>& c) {
        a.insert(a.end(), b.begin(), b.end());
        a.insert(a.end(), c.begin(), c.end());
        return a;
      };
      ++r.instances_checked;
      double lhs = premean_eval(spec, cat(x, y, z));
      double rhs = premean_eval(spec, cat(x, y2, z));
      if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(lhs))) {
        r.verdict = Verdict::Fail;
        r.witness = Witness{.y = "trial " + std::to_string(t),
                            .lhs = std::to_string(lhs), .rhs = std::to_string(rhs)};
        return r;
      }
    }
  }
  return r;
}

}  // namespace varfun
