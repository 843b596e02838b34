#pragma once

#include <stdexcept>
#include <string>

namespace confset {

/// Malformed text input: group specs, element literals, partition files, laws.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), position_(0) {}

  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed input that violates a mathematical precondition
/// (descriptor mismatch, invalid partition, non-unimodular matrix, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-width coordinate arithmetic left the int64 range.
class OverflowError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace confset
