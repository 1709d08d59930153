#ifndef SHORTPATH_TYPES_HPP
#define SHORTPATH_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace shortpath {

using Index = std::int64_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InstanceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Thrown by shifted solves when the shift sits on (or within 1e-8 of) the
/// spectrum of the deflated operator.
class SingularShiftError : public SolverError {
 public:
  SingularShiftError(const std::string& what, double best_residual, double gap_estimate)
      : SolverError(what, best_residual), gap_estimate_(gap_estimate) {}
  double gap_estimate() const { return gap_estimate_; }

 private:
  double gap_estimate_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

enum class Parity { Even, Odd };

inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

inline Parity parity_of(Index u) {
  return (__builtin_popcountll(static_cast<unsigned long long>(u)) & 1) ? Parity::Odd
                                                                        : Parity::Even;
}

/// Process-wide execution knobs. Results never depend on `workers`.
struct ExecutionConfig {
  int workers = 1;
  int max_qubits = 26;
};

ExecutionConfig& execution_config();

}  // namespace shortpath

#endif  // SHORTPATH_TYPES_HPP
