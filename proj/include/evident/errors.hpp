#pragma once

#include <stdexcept>
#include <string>

namespace evident {

// Bad user input: malformed vectors, dimension mismatches, out-of-range
// parameters, unreadable or inconsistent files. The CLI maps this class
// to exit code 1; every other exception maps to exit code 2.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what_arg)
      : std::invalid_argument(what_arg) {}
};

}  // namespace evident
