#pragma once

// Reusable numerical kernels: Gauss-Jacobi quadrature with the potential's
// endpoint-singular weight absorbed into the rule, a safeguarded Brent root
// finder, an adaptive Dormand-Prince 5(4) integrator, and eigenvalues of
// small dense matrices.

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace dihedral::numerics {

// Quadrature rule for integrals of the form
//   int_0^1 t^{beta-1} (1-t)^{-beta} f(t) dt  ~=  sum_i weights[i] f(nodes[i])
// with f smooth; the singular weight is part of the rule, callers supply only
// the smooth factor. Exact for polynomials f up to degree 2*order - 1.
struct QuadratureRule {
  std::vector<double> nodes;    // strictly inside (0,1), ascending
  std::vector<double> weights;  // positive
  double beta = 0.5;
  int order = 0;
};

// Builds the rule above by the Golub-Welsch eigenvalue method on the Jacobi
// three-term recurrence. order >= 2, beta in (0,1).
QuadratureRule gauss_jacobi_rule(int order, double beta);

// General Gauss-Jacobi nodes/weights on (0,1) for the weight (1-t)^a t^b,
// a, b > -1. gauss_jacobi_rule is the (a,b) = (-beta, beta-1) case.
void jacobi_rule(int order, double a, double b, std::vector<double>& nodes,
                 std::vector<double>& weights);

// Bracketed scalar root finding (inverse quadratic interpolation with a
// bisection safeguard). Requires f(a), f(b) of opposite sign; returns x with
// bracket width <= tol. Deterministic.
// Throws BracketError on an invalid bracket, ConvergenceError after the
// iteration cap (not reachable for continuous f).
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol);

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0;      // 0 means unrestricted
  long max_steps = 1000000;
};

// dydt must be filled with the derivative at (tau, y).
using VectorField =
    std::function<void(double tau, std::span<const double> y,
                       std::span<double> dydt)>;

// One accepted integration point.
struct IntegrationSample {
  double tau;
  std::vector<double> y;
};

// Adaptive embedded Runge-Kutta (Dormand-Prince order 5 with order-4 error
// estimate). Integrates from tau_span.first to tau_span.second (either
// direction) and returns every accepted step, first entry the initial point.
// A CollisionError thrown by the field during a trial step rejects the step;
// if the step cannot be shrunk further, or max_steps is exhausted,
// StepFailure is thrown carrying the last accepted point. When accepted is
// non-null, samples are mirrored there as they land, so callers that expect
// failure keep the partial run.
std::vector<IntegrationSample> rk_integrate(
    const VectorField& field, std::span<const double> y0,
    std::pair<double, double> tau_span, const IntegratorConfig& cfg,
    std::vector<IntegrationSample>* accepted = nullptr);

// Eigenvalues (with multiplicity) of a dense real matrix, n <= 5, row-major,
// sorted by (real part, imaginary part).
std::vector<std::complex<double>> eig_dense(std::span<const double> m, int n);

}  // namespace dihedral::numerics
