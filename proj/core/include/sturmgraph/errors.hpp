#pragma once

#include <stdexcept>
#include <string>

namespace sturmgraph {

// Bad arguments or malformed input files. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A solver could not produce a trustworthy answer (grid too coarse, energy
// too close to the spectrum, ...). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sturmgraph
