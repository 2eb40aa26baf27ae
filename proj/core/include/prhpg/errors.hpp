#pragma once

#include <stdexcept>
#include <string>

namespace prhpg {

// Raised when a computation leaves its numerical contract: lost positive
// (semi)definiteness, a divergent iteration, or an unstable closed loop
// where stability is a precondition. Shape and argument violations use
// std::invalid_argument; out-of-domain parameters use std::domain_error.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

}  // namespace prhpg
