#pragma once

#include <stdexcept>
#include <string>

namespace bset {

// Bad user input: malformed JSON, out-of-range parameters, missing fields.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure: overflow, exactness cap exceeded, block too large.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bset
