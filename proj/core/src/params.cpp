#include "dihedral/params.hpp"

#include <cmath>

#include "dihedral/errors.hpp"

namespace dihedral {

ProblemParams make_params(int l, double alpha) {
  if (l < 2) throw DomainError("make_params: l must be >= 2");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("make_params: alpha must lie strictly inside (0,2)");

  ProblemParams p;
  p.l = l;
  p.alpha = alpha;
  p.beta = alpha / 2.0;
  p.c_group = 0.0;
  p.c_sphere = 0.0;
  for (int j = 1; j < l; ++j) {
    const double s = std::sin(j * kPi / l);
    p.c_group += std::pow(2.0 * s, -alpha);
    p.c_sphere += std::pow(s, -alpha);
  }
  p.d_l = (l % 2 == 0) ? 1 : 0;
  return p;
}

Vec3 sphere_to_cartesian(const SphereConfig& s) {
  const double cp = std::cos(s.phi);
  return {cp * std::cos(s.theta), cp * std::sin(s.theta), std::sin(s.phi)};
}

double r_of_phi(double phi) {
  if (phi < 0.0 || phi >= kPi / 2.0)
    throw DomainError("r_of_phi: phi must lie in [0, pi/2)");
  const double s = std::sin(phi);
  return (1.0 - s) / (1.0 + s);
}

double phi_of_r(double r) {
  if (!(r > 0.0) || r > 1.0) throw DomainError("phi_of_r: r must lie in (0,1]");
  return std::asin((1.0 - r) / (1.0 + r));
}

BodyOrbit dihedral_orbit(const ProblemParams& p, const SphereConfig& s,
                         double rho) {
  if (!(rho > 0.0)) throw DomainError("dihedral_orbit: rho must be positive");

  BodyOrbit orbit;
  orbit.rho = rho;
  orbit.positions.reserve(2 * p.l);
  const double cp = std::cos(s.phi);
  const double y = std::sin(s.phi);
  // zeta^j s : rotate z by 2 pi j / l.
  for (int j = 0; j < p.l; ++j) {
    const double a = s.theta + 2.0 * kPi * j / p.l;
    orbit.positions.push_back(
        {rho * cp * std::cos(a), rho * cp * std::sin(a), rho * y});
  }
  // zeta^j kappa s : kappa conjugates z and flips y.
  for (int j = 0; j < p.l; ++j) {
    const double a = 2.0 * kPi * j / p.l - s.theta;
    orbit.positions.push_back(
        {rho * cp * std::cos(a), rho * cp * std::sin(a), -rho * y});
  }
  return orbit;
}

SphereConfig canonicalize(const ProblemParams& p, const SphereConfig& s) {
  SphereConfig out = s;
  if (out.phi < 0.0) out.phi = -out.phi;  // h_phi

  // U is periodic in theta with period pi/l (rotation combined with the two
  // vertical reflections).
  const double period = kPi / p.l;
  out.theta = std::fmod(out.theta, period);
  if (out.theta < 0.0) out.theta += period;
  if (out.theta > period / 2.0) out.theta = period - out.theta;  // h'_theta
  return out;
}

}  // namespace dihedral
