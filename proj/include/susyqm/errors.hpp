#pragma once

#include <stdexcept>
#include <string>

namespace susyqm {

/// Bad user-facing parameters (grid sizes, couplings, wavenumbers, model choice).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A potential or wavefunction produced a non-finite value at a sample point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double x)
      : std::runtime_error(what + " at x = " + std::to_string(x)), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// A numerical precondition was violated (non-Hermitian input, refused algebra check, ...).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// The ground-state profile changes sign, so no superpotential exists.
class NodeError : public ParameterError {
 public:
  NodeError(const std::string& what, double left, double right)
      : ParameterError(what + " between x = " + std::to_string(left) +
                       " and x = " + std::to_string(right)),
        left_(left),
        right_(right) {}
  double left() const noexcept { return left_; }
  double right() const noexcept { return right_; }

 private:
  double left_;
  double right_;
};

}  // namespace susyqm
