// Error types shared across the library.
//
// config_error      -> bad user input (CLI exit code 1)
// numerics_error    -> a numerical invariant was breached (CLI exit code 2)

#pragma once

#include <stdexcept>
#include <string>

namespace lglab {

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

class numerics_error : public std::runtime_error {
 public:
  explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lglab
