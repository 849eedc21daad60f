#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace msns {

// Error taxonomy. Solver-level failures are distinct from bad input so the
// CLI can map them to exit codes (1 = validation, 2 = solver failure).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MapNotInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatibleData : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IncompatibleDivergence : IncompatibleData {
  using IncompatibleData::IncompatibleData;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EliminationSingular : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadMode : ValidationError {
  using ValidationError::ValidationError;
};
struct DegenerateWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyData : ValidationError {
  using ValidationError::ValidationError;
};

inline double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace msns
