#pragma once

// Problem parameters and coordinate charts for the dihedral 2l-body problem:
// 2l equal masses forming one orbit of the dihedral group D_l, moving in a
// homogeneous potential of degree -alpha. The shape of the configuration is a
// single point on the unit 2-sphere, parametrised by longitude theta and
// latitude phi with y = sin(phi), z = cos(phi) e^{i theta}.

#include <array>
#include <vector>

namespace dihedral {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Fixed problem instance and its derived constants.
struct ProblemParams {
  int l = 2;           // half the body count, l >= 2
  double alpha = 1.0;  // homogeneity: pair potential ~ distance^{-alpha}, alpha in (0,2)
  double beta = 0.5;   // alpha / 2
  double c_group = 0;  // sum_{j=1}^{l-1} (2 sin(j pi / l))^{-alpha}
  double c_sphere = 0; // sum_{j=1}^{l-1} (sin(j pi / l))^{-alpha} = 2^alpha c_group
  int d_l = 0;         // 1 if l is even, 0 if l is odd
};

// Validates (l, alpha) and fills in the derived constants.
// Throws DomainError if l < 2 or alpha is outside the open interval (0,2).
ProblemParams make_params(int l, double alpha);

// Point on the shape sphere. theta in [0, 2 pi), phi in (-pi/2, pi/2).
struct SphereConfig {
  double theta = 0;
  double phi = 0;
};

using Vec3 = std::array<double, 3>;

// One D_l orbit of a shape point, scaled to configuration size rho.
// positions holds 2l points: the l rotated copies first, then the l
// rotated-and-flipped copies. The center of mass is the origin.
struct BodyOrbit {
  std::vector<Vec3> positions;
  double rho = 1.0;
};

// (cos phi cos theta, cos phi sin theta, sin phi); unit norm.
Vec3 sphere_to_cartesian(const SphereConfig& s);

// r = (1 - sin phi) / (1 + sin phi), defined for phi in [0, pi/2) only;
// callers with phi < 0 must reflect first. r lies in (0,1], r = 1 iff phi = 0.
double r_of_phi(double phi);

// Inverse of r_of_phi: sin phi = (1 - r) / (1 + r), for r in (0,1].
double phi_of_r(double r);

// The 2l body positions { rho * g * s : g in D_l }.
BodyOrbit dihedral_orbit(const ProblemParams& p, const SphereConfig& s,
                         double rho);

// Representative of the symmetry class of s inside the closed fundamental
// wedge theta in [0, pi/(2l)], phi >= 0, obtained with the reflections
// h_phi, h_theta, h'_theta and the theta-translation they generate.
SphereConfig canonicalize(const ProblemParams& p, const SphereConfig& s);

}  // namespace dihedral
