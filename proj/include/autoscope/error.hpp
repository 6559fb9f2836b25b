#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace autoscope {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Raised when coset enumeration exceeds its coset limit.
class CosetOverflow : public Error {
 public:
  explicit CosetOverflow(std::size_t limit)
      : Error("coset enumeration exceeded " + std::to_string(limit) +
              " cosets"),
        limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

// Raised when a group is too large for a requested operation.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace autoscope
