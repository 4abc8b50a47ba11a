#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dihedral {

// Argument outside the documented domain (l < 2, alpha outside (0,2), bad
// quadrature order, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested at, or within the guard radius of, a collision
// configuration: the poles (l-adic collision) or an equatorial point with
// theta = 0 mod pi/l (binary collision).
class CollisionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root bracket invalid: f has the same sign at both endpoints.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iteration failed to converge within its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An equilibrium turned out not to be hyperbolic (an eigenvalue real part
// fell below the guard); signals a bug or degenerate parameters.
class HyperbolicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive integration could not continue: the step underflowed (usually an
// approach to the singular set) or the step budget ran out. Carries the last
// accepted point so callers can report how far the run got.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, double tau_reached,
              std::vector<double> last_state)
      : std::runtime_error(what),
        tau_reached(tau_reached),
        last_state(std::move(last_state)) {}

  double tau_reached;
  std::vector<double> last_state;
};

}  // namespace dihedral
