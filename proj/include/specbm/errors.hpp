#pragma once

#include <stdexcept>
#include <string>

namespace specbm {

// Process exit codes used by the CLI; library exceptions map onto these.
enum class ExitCode : int {
  Ok = 0,
  Parameter = 2,
  Numeric = 3,
  Io = 4,
};

// Invalid user-supplied parameters (bad n, probabilities out of range, ...).
class ParameterError : public std::runtime_error {
 public:
  explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: non-convergence, degenerate gap where one is required.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A vertex with degree zero; the normalized Laplacian is undefined there.
class IsolatedVertexError : public NumericError {
 public:
  explicit IsolatedVertexError(int vertex)
      : NumericError("isolated vertex " + std::to_string(vertex + 1) +
                     " (degree 0): normalized Laplacian undefined"),
        vertex_(vertex) {}
  int vertex() const { return vertex_; }

 private:
  int vertex_;
};

// Resolvent (D - lambda I)^{-1} applied where some |d_i - lambda| ~ 0.
class NearSingularResolventError : public NumericError {
 public:
  NearSingularResolventError(int vertex, double pivot)
      : NumericError("near-singular resolvent at vertex " +
                     std::to_string(vertex + 1) +
                     " (|d_i - lambda| = " + std::to_string(pivot) + ")"),
        vertex_(vertex) {}
  int vertex() const { return vertex_; }

 private:
  int vertex_;
};

// delta <= 0 in the Davis-Kahan checker: no complementary eigenvalue gap.
class DegenerateGapError : public NumericError {
 public:
  explicit DegenerateGapError(const std::string& msg) : NumericError(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace specbm
