#pragma once

#include <stdexcept>
#include <string>

namespace dmt {

/// Error type thrown by all library operations.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dmt
