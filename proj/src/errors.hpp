#pragma once

#include <stdexcept>
#include <string>

namespace hvf {

struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Hörmander condition failed numerically: no spanning tuple at the tolerance.
struct NoSpanError : std::runtime_error {
  explicit NoSpanError(const std::string& what) : std::runtime_error(what) {}
};

// A suite was requested outside its exponent regime (e.g. Nash with nu <= 2).
struct RegimeError : std::runtime_error {
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hvf
