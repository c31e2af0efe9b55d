#pragma once

#include <stdexcept>
#include <string>

namespace aqss {

// Mismatched dimensions, non-square inputs, bad factor lists.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of an operation
// (unauthorized set, parameter out of range, alpha == 1, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Operator expected to be positive semidefinite has an eigenvalue below the
// error threshold.
class NotPsdError : public std::invalid_argument {
 public:
  NotPsdError(const std::string& what, double min_eigenvalue)
      : std::invalid_argument(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// Map failing complete positivity or trace preservation.
class NotCptpError : public std::invalid_argument {
 public:
  NotCptpError(const std::string& what, double tp_residual, double choi_min_eigenvalue)
      : std::invalid_argument(what),
        tp_residual_(tp_residual),
        choi_min_eigenvalue_(choi_min_eigenvalue) {}
  double tp_residual() const noexcept { return tp_residual_; }
  double choi_min_eigenvalue() const noexcept { return choi_min_eigenvalue_; }

 private:
  double tp_residual_;
  double choi_min_eigenvalue_;
};

// Iterative numerical routine did not converge.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aqss
