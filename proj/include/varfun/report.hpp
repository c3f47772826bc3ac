#pragma once

#include <optional>
#include <string>

#include "varfun/error.hpp"
#include "varfun/words.hpp"

namespace varfun {

// The tuple instantiating a failed implication. Fields not meaningful for a
// given property are left empty; lhs/rhs hold the two values that were
// expected to coincide, already rendered as text.
struct Witness {
  Word x, y, y2, z;
  std::string lhs, rhs;
};

enum class Verdict { Pass, Fail, InsufficientTabulation };

struct PropertyReport {
  std::string property;
  Verdict verdict = Verdict::Pass;
  std::optional<Witness> witness;
  long long instances_checked = 0;

  bool passed() const { return verdict == Verdict::Pass; }

  std::string render() const {
    std::string v = verdict == Verdict::Pass   ? "PASS"
                    : verdict == Verdict::Fail ? "FAIL"
                                               : "INSUFFICIENT-TABULATION";
    std::string out = "PROPERTY " + property + ": " + v + " (" +
                      std::to_string(instances_checked) + " instances)";
    if (witness) {
      out += "\nwitness: x=" + show_word(witness->x) + " y=" + show_word(witness->y) +
             " y'=" + show_word(witness->y2) + " z=" + show_word(witness->z) +
             " lhs=" + witness->lhs + " rhs=" + witness->rhs;
    }
    return out;
  }
};

// Error that carries the report whose failure triggered it (e.g. a factorize
// call on a function that is not B-preassociative).
class PropertyError : public Error {
 public:
  PropertyError(std::string code, PropertyReport report)
      : Error(std::move(code), report.render()), report_(std::move(report)) {}

  const PropertyReport& report() const { return report_; }

 private:
  PropertyReport report_;
};

}  // namespace varfun
