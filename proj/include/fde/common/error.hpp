#pragma once

#include <stdexcept>
#include <string>

namespace fde {

/// Precondition violated by the caller (bad sizes, duplicate points, ...).
class DomainError : public std::invalid_argument {
  public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or out-of-range serialized input.
class FormatError : public std::runtime_error {
  public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fde
