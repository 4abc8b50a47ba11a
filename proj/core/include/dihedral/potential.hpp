#pragma once

// The reduced potential U on the shape sphere, in both of its
// representations, together with its first and second derivatives and the
// l-adic Perron-Frobenius series machinery behind the integral form.
//
// The two value routes are kept permanently: the direct trigonometric sum is
// the ground truth, the singular-integral form is what the theta-derivative's
// clean sign factorisation comes from. They agree to quadrature accuracy and
// are tested against each other.

#include <complex>
#include <vector>

#include "dihedral/numerics.hpp"
#include "dihedral/params.hpp"

namespace dihedral {

// Guard radius around the binary-collision set, measured in
// (theta mod pi/l, 1 - r): inside it evaluation raises CollisionError
// instead of returning huge values.
inline constexpr double kCollisionGuard = 1e-9;

// Distance from theta to the nearest multiple of pi/l.
double theta_collision_distance(int l, double theta);

// True when (theta, phi) lies within the guard radius of a binary collision
// or at a pole.
bool is_collision(const ProblemParams& p, double theta, double phi);

// U(theta, phi) by the direct sum
//   (2 cos phi)^{-alpha} [ c_sphere + sum_{j=1}^{l} (sin^2(j pi/l - theta)
//                                                    + tan^2 phi)^{-alpha/2} ].
// Invariant under h_phi, h_theta, h'_theta and the l-fold rotation.
// Throws CollisionError on the excluded set.
double u_direct(const ProblemParams& p, const SphereConfig& s);

// Optional convergence self-check filled by u_integral: the value recomputed
// at twice the order and the relative change.
struct QuadratureDiagnostics {
  double refined_value = 0;
  double rel_change = 0;
  bool converged = true;  // rel_change below 1e-10
};

// U(theta, r) by the integral representation; r in (0,1] is the latitude
// variable of r_of_phi. The r = 1 case (equator) reroutes to a dedicated
// weight so the extra endpoint singularity stays inside the quadrature
// weight. rule.beta must equal p.beta.
double u_integral(const ProblemParams& p, double theta, double r,
                  const numerics::QuadratureRule& rule,
                  QuadratureDiagnostics* diag = nullptr);

// dU/dtheta from the integral representation:
//   -4 l^2 sin(2 l theta) ((1+r)/2)^alpha (sin(beta pi)/pi) J(r, theta)
// with J strictly positive, so the derivative vanishes exactly where
// sin(2 l theta) does. Preconditions as u_integral.
double du_dtheta(const ProblemParams& p, double theta, double r,
                 const numerics::QuadratureRule& rule);

// dU/dtheta by termwise differentiation of the direct sum.
double du_dtheta_direct(const ProblemParams& p, const SphereConfig& s);

// f_theta(phi) = c_sphere - sum_j cos^2(j pi/l - theta)
//                          (sin^2(j pi/l - theta) + tan^2 phi)^{-(beta+1)},
// the bracket of dU/dphi; it has the sign of dU/dphi for phi > 0, is
// strictly increasing in phi, and tends to c_sphere as phi -> pi/2.
// Throws DomainError at phi = 0 when theta = 0 mod pi/l (divergent limit).
double f_theta(const ProblemParams& p, double theta, double phi);

// dU/dphi = prefactor * f_theta with prefactor = 2 beta tan(phi) /
// (2 cos phi)^alpha; both factors are returned along with the product.
struct PhiDerivative {
  double value = 0;
  double prefactor = 0;
  double f = 0;
};
PhiDerivative du_dphi(const ProblemParams& p, const SphereConfig& s);

// Analytic second partials of the direct sum.
struct Hessian2 {
  double dtheta2 = 0;
  double dtheta_dphi = 0;
  double dphi2 = 0;
};
Hessian2 hessian(const ProblemParams& p, const SphereConfig& s);

// Chart components of the covariant gradient on the sphere:
//   ( (1/cos^2 phi) dU/dtheta , dU/dphi ).
struct SphereGradient {
  double g_theta = 0;
  double g_phi = 0;
  double norm() const;
};
SphereGradient covariant_gradient(const ProblemParams& p,
                                  const SphereConfig& s);

// Ambient R^3 vector g_theta * ds/dtheta + g_phi * ds/dphi; tangent to the
// sphere at s.
Vec3 gradient_ambient(const ProblemParams& p, const SphereConfig& s);

// ---- Appendix machinery -------------------------------------------------

// Fourier coefficient of |1 - r xi|^{-alpha} on the unit circle:
//   b_n = (sin(beta pi)/pi) r^n int_0^1 (1-t)^{-beta} t^{beta-1} t^n
//                                        (1 - t r^2)^{-beta} dt,
// b_{-n} = b_n. Requires n >= 0 and r in [0,1).
double perron_b(const ProblemParams& p, int n, double r,
                const numerics::QuadratureRule& rule);

struct SeriesCoefficients {
  double r = 0;
  int n_max = 0;
  std::vector<double> b;  // b[0..n_max]
};
SeriesCoefficients perron_b_series(const ProblemParams& p, double r, int n_max,
                                   const numerics::QuadratureRule& rule);

// The l-adic Perron-Frobenius operator applied to |1 - r .|^{-alpha},
// evaluated at unit xi, by the closed-form integral
//   (sin(beta pi)/pi) int_0^1 (1-t)^{-beta} t^{beta-1} (1-t r^2)^{-beta}
//                             (1-(tr)^{2l}) / |1-(tr)^l xi|^2 dt.
double perron_apply(const ProblemParams& p, double r, std::complex<double> xi,
                    const numerics::QuadratureRule& rule);

// Same operator by its defining average over the l preimages of xi under
// y -> y^l; the independent cross-check of perron_apply.
double perron_average(const ProblemParams& p, double r,
                      std::complex<double> xi);

// Same operator by the truncated coefficient series sum_n b_{l|n|} xi^n,
// truncated where r^{l n} drops below 1e-12.
double perron_apply_series(const ProblemParams& p, double r,
                           std::complex<double> xi,
                           const numerics::QuadratureRule& rule);

}  // namespace dihedral
