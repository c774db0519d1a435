#pragma once

#include <stdexcept>
#include <string>

namespace tqe {

/// Malformed or out-of-domain user input (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed its configured resource budget (CLI exit code 3).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested accuracy target cannot be met with the given parameters
/// (e.g. a truncation tail above its configured bound).
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tqe
