#pragma once

#include <stdexcept>
#include <string>

namespace otr {

// Shape mismatch between operands: variable sets, form-degrees, arities.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Identifying the two arguments of an expanded Bergman kernel.
class UnrenormalizedDiagonal : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

// Caller violated a documented precondition (unstable key, missing dependency, budget).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Fractional net u-power or a non-homogeneous operator term.
class BookkeepingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A free-energy coefficient received two different forced values.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace otr
