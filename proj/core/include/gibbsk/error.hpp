#pragma once

#include <stdexcept>
#include <string>

namespace gibbsk {

/// Malformed or out-of-range caller input (bad sizes, duplicate points, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Mathematically inadmissible argument, e.g. a potential that is not Kähler.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical procedure failed: non-convergence, loss of definiteness.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gibbsk

namespace gibbsk {

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gibbsk
