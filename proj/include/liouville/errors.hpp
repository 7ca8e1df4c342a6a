#ifndef LIOUVILLE_ERRORS_HPP
#define LIOUVILLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace liouville {

// Input fails a structural/schema precondition.
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Configuration violates an admissibility bound (negative curvature
// condition, Seiberg bounds, coercivity threshold).
struct AdmissibilityError : std::domain_error {
  using std::domain_error::domain_error;
};

// Evaluation requested at (or too close to) a prescribed singular point.
struct SingularEvaluationError : std::domain_error {
  using std::domain_error::domain_error;
};

// Iterative procedure failed to reach its tolerance.
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, double diagnostic)
      : std::runtime_error(what), diagnostic(diagnostic) {}
  double diagnostic;
};

}  // namespace liouville

#endif
