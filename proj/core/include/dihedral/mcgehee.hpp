#pragma once

// The McGehee-regularised flow projected to (v, s, w) with s on the shape
// sphere: the five chart equations, the ambient-space form used as a
// cross-check, energy classification, homothetic solutions and lifting back
// to physical (rho, t).
//
// Sign convention for equilibria: v_bar > 0 is an ejection, v_bar < 0 a
// collision (the homothetic rho(t) has the + sign for ejections).

#include <utility>
#include <vector>

#include "dihedral/central_configs.hpp"
#include "dihedral/numerics.hpp"
#include "dihedral/params.hpp"

namespace dihedral {

// Chart state (v, theta, phi, w1, w2); w = w1 ds/dtheta + w2 ds/dphi, so
// ||w||^2 = w1^2 cos^2 phi + w2^2. Also reused as the derivative container.
struct McGeheeState {
  double v = 0;
  double theta = 0;
  double phi = 0;
  double w1 = 0;
  double w2 = 0;

  double w_norm2() const;
};

// Ambient form: unit s in R^3, scalar v, tangent w (<w, s> = 0). Also reused
// as the derivative container.
struct AmbientState {
  Vec3 s{1, 0, 0};
  double v = 0;
  Vec3 w{0, 0, 0};
};

enum class ManifoldClass { Elliptic, Parabolic, Hyperbolic };

const char* manifold_name(ManifoldClass c);

struct EnergyValue {
  double e = 0;
  ManifoldClass cls = ManifoldClass::Parabolic;
};

// The five right-hand sides of the projected flow in chart coordinates.
// Throws CollisionError within the collision guard or the pole guard
// |phi| > pi/2 - 1e-6 (chart singularity).
McGeheeState vector_field(const ProblemParams& p, const McGeheeState& x);

AmbientState to_ambient(const McGeheeState& x);

// v' = ||w||^2 + beta v^2 - alpha U;  s' = w;
// w' = -||w||^2 s + (beta - 1) v w + grad_s U.
AmbientState vector_field_ambient(const ProblemParams& p,
                                  const AmbientState& x);

// Chart derivative corresponding to an ambient derivative at the chart point
// x (chain rule through s(theta, phi)); the consistency oracle for the two
// field forms.
McGeheeState pull_back_derivative(const McGeheeState& x,
                                  const AmbientState& dx);

// E = (v^2 + ||w||^2)/2 - U(s); class by sign with a 1e-12 dead band
// mapped to Parabolic.
EnergyValue energy(const ProblemParams& p, const McGeheeState& x);

// Rescales (v, w) by sqrt(2U / (v^2 + ||w||^2)) onto the parabolic manifold.
// Throws DomainError when v = w = 0.
McGeheeState project_to_parabolic(const ProblemParams& p,
                                  const McGeheeState& x);

struct Trajectory {
  std::vector<double> tau;
  std::vector<McGeheeState> states;
  std::vector<double> energy;  // E at each sample

  // Filled by lift(): rho[k] and elapsed physical time t[k] (t[0] = 0).
  std::vector<double> rho;
  std::vector<double> t;

  // false when the run ended early at the collision-approach guard
  bool complete = true;

  // Homothetic runs that escape in finite tau set these instead of failing.
  bool blew_up = false;
  double escape_tau = 0;

  std::size_t size() const { return tau.size(); }
};

// Collision-approach cap for flow integration: once U(s) exceeds this along
// a run the trajectory is treated as collision-bound and aborted. Almost
// every parabolic orbit ends this way (the equilibria's stable manifolds
// have positive codimension), so the cap is what turns the approach into a
// clean, fast abort instead of an unbounded stiff crawl.
inline constexpr double kFlowPotentialCap = 100.0;

// Adaptive integration of the chart flow. Propagates StepFailure when the
// step underflows near the singular set or the potential cap is reached.
Trajectory integrate(const ProblemParams& p, const McGeheeState& x0,
                     std::pair<double, double> tau_span,
                     const numerics::IntegratorConfig& cfg);

// Same run, but a collision-bound trajectory comes back truncated
// (complete = false) instead of raising StepFailure.
Trajectory integrate_partial(const ProblemParams& p, const McGeheeState& x0,
                             std::pair<double, double> tau_span,
                             const numerics::IntegratorConfig& cfg);

// Fills rho and t along the samples: rho = rho0 exp(int v dtau) and
// t = int rho^{1+beta} dtau, both by derivative-corrected trapezoid sums on
// the sample grid (O(h^4); sample density is the caller's accuracy knob).
Trajectory lift(const ProblemParams& p, const Trajectory& traj, double rho0);

// Algebraic lift at fixed nonzero energy h:
// rho^alpha = (v^2 + ||w||^2 - 2U)/(2h). Throws DomainError when h = 0 or
// the ratio is not positive.
double rho_algebraic(const ProblemParams& p, const McGeheeState& x, double h);

// Frozen-shape solution through cc: integrates the scalar equation
// v' = beta v^2 - alpha U(s_bar). Finite-tau blow-up (hyperbolic ejection
// branch) is reported through Trajectory::blew_up, not an error.
Trajectory homothetic(const ProblemParams& p, const CentralConfiguration& cc,
                      double v0, std::pair<double, double> tau_span,
                      const numerics::IntegratorConfig& cfg);

// Closed-form parabolic homothetic scale factor
//   rho(t) = ( sign (1+beta) sqrt(2 U(s_bar)) t )^{1/(1+beta)},
// total collision at t = 0; sign = +1 ejection (t > 0), -1 collision (t < 0).
double parabolic_homothetic_rho(const ProblemParams& p,
                                const CentralConfiguration& cc, double t,
                                int sign);

}  // namespace dihedral
