#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace varfun {

// All library failures carry a stable machine-readable code ("MissingEntry",
// "OutOfDomain", ...) next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace varfun
