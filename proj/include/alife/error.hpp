#pragma once

#include <stdexcept>
#include <string>

namespace alife {

/// Runtime failure of a pipeline stage (bad input file, degenerate geometry, ...).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace alife
