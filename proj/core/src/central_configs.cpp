#include "dihedral/central_configs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dihedral/errors.hpp"
#include "dihedral/numerics.hpp"

namespace dihedral {

const char* family_name(Family f) {
  switch (f) {
    case Family::NGon2l: return "ngon2l";
    case Family::Prism: return "prism";
    case Family::Antiprism: return "antiprism";
  }
  return "?";
}

int family_multiplicity(const ProblemParams& p, Family f) {
  // 2l planar vertices; 4l prisms (2l longitudes times two latitude signs);
  // 2l antiprisms up to conjugacy.
  switch (f) {
    case Family::NGon2l: return 2 * p.l;
    case Family::Prism: return 4 * p.l;
    case Family::Antiprism: return 2 * p.l;
  }
  return 0;
}

namespace {

CentralConfiguration make_cc(const ProblemParams& p, Family family,
                             double theta, double phi) {
  CentralConfiguration cc;
  cc.family = family;
  cc.s = SphereConfig{theta, phi};
  cc.u_value = u_direct(p, cc.s);
  cc.v_bar = std::sqrt(2.0 * cc.u_value);

  const Hessian2 h = hessian(p, cc.s);
  const double c = std::cos(phi);
  const double m00 = h.dtheta2 / (c * c);
  const double m01 = h.dtheta_dphi;
  const double m11 = h.dphi2;
  const double tr = m00 + m11;
  const double disc = std::sqrt((m00 - m11) * (m00 - m11) + 4.0 * m01 * m01);
  cc.hessian_eigs = {(tr + disc) / 2.0, (tr - disc) / 2.0};
  return cc;
}

double root_of_f(const ProblemParams& p, double theta, double tol,
                 const char* what) {
  const double lo = 1e-6;
  const double hi = kPi / 2.0 - 1e-6;
  const auto f = [&](double phi) { return f_theta(p, theta, phi); };
  try {
    return numerics::brent_root(f, lo, hi, tol);
  } catch (const BracketError&) {
    throw ConvergenceError(std::string(what) +
                           ": no sign change of f on the latitude bracket");
  }
}

}  // namespace

CentralConfiguration find_ngon(const ProblemParams& p) {
  return make_cc(p, Family::NGon2l, kPi / (2.0 * p.l), 0.0);
}

CentralConfiguration find_prism(const ProblemParams& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_prism: tol must be positive");
  const double phi_hat = root_of_f(p, 0.0, tol, "find_prism");
  return make_cc(p, Family::Prism, 0.0, phi_hat);
}

CentralConfiguration find_antiprism(const ProblemParams& p, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_antiprism: tol must be positive");
  const double theta = kPi / (2.0 * p.l);
  const double phi_hat = root_of_f(p, theta, tol, "find_antiprism");
  return make_cc(p, Family::Antiprism, theta, phi_hat);
}

std::vector<CentralConfiguration> find_all(const ProblemParams& p) {
  return {find_ngon(p), find_prism(p), find_antiprism(p)};
}

AntiprismCriterion antiprism_criterion(const ProblemParams& p) {
  AntiprismCriterion out;
  double sum = 0.0;
  for (int j = 1; j <= p.l / 2; ++j) {
    const double su = std::sin(j * kPi / p.l - kPi / (2.0 * p.l));
    const double s2 = su * su;
    const double sj = std::sin(j * kPi / p.l);
    sum += std::pow(s2, -(p.beta + 1.0)) - std::pow(s2, -p.beta) -
           std::pow(sj * sj, -p.beta);
  }
  out.sum_cj = 2.0 * sum;
  out.threshold = static_cast<double>(p.d_l);
  out.holds = out.sum_cj > out.threshold;
  return out;
}

Matrix5 linearization(const ProblemParams& p, const CentralConfiguration& cc,
                      int v_sign) {
  if (v_sign != 1 && v_sign != -1)
    throw DomainError("linearization: v_sign must be +1 or -1");
  const double vbar = v_sign * cc.v_bar;
  const Hessian2 h = hessian(p, cc.s);
  const double c = std::cos(cc.s.phi);

  Matrix5 m{};
  m[0 * 5 + 0] = 2.0 * p.beta * vbar;
  m[1 * 5 + 3] = 1.0;
  m[2 * 5 + 4] = 1.0;
  m[3 * 5 + 1] = h.dtheta2 / (c * c);
  m[3 * 5 + 2] = h.dtheta_dphi;
  m[3 * 5 + 3] = (p.beta - 1.0) * vbar;
  m[4 * 5 + 1] = h.dtheta_dphi;
  m[4 * 5 + 2] = h.dphi2;
  m[4 * 5 + 4] = (p.beta - 1.0) * vbar;
  return m;
}

StabilityReport classify(const ProblemParams& p,
                         const CentralConfiguration& cc, int v_sign) {
  if (v_sign != 1 && v_sign != -1)
    throw DomainError("classify: v_sign must be +1 or -1");
  const double vbar = v_sign * cc.v_bar;

  // Route one: the decoupled radial eigenvalue plus the roots of
  // lambda^2 + (1-beta) vbar lambda = gamma for each Hessian eigenvalue.
  std::vector<std::complex<double>> lam;
  lam.emplace_back(2.0 * p.beta * vbar, 0.0);
  for (const double gamma : cc.hessian_eigs) {
    const double b = (1.0 - p.beta) * vbar;
    const double d = b * b + 4.0 * gamma;
    if (d >= 0.0) {
      const double sq = std::sqrt(d);
      lam.emplace_back((-b + sq) / 2.0, 0.0);
      lam.emplace_back((-b - sq) / 2.0, 0.0);
    } else {
      const double sq = std::sqrt(-d);
      lam.emplace_back(-b / 2.0, sq / 2.0);
      lam.emplace_back(-b / 2.0, -sq / 2.0);
    }
  }
  const auto by_re_im = [](const std::complex<double>& x,
                           const std::complex<double>& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(lam.begin(), lam.end(), by_re_im);

  // Route two: dense eigenvalues of the assembled linearization.
  const Matrix5 m = linearization(p, cc, v_sign);
  const auto dense = numerics::eig_dense(m, 5);
  for (int i = 0; i < 5; ++i) {
    if (std::abs(lam[i] - dense[i]) > 1e-9)
      throw ConvergenceError(
          "classify: quadratic-formula and dense eigenvalues disagree");
  }

  StabilityReport rep;
  rep.v_sign = v_sign;
  for (int i = 0; i < 5; ++i) {
    rep.eigenvalues[i] = lam[i];
    if (std::abs(lam[i].real()) < 1e-10)
      throw HyperbolicityError("classify: eigenvalue real part below guard");
    if (lam[i].real() < 0.0)
      ++rep.dim_stable;
    else
      ++rep.dim_unstable;
  }

  // Intersections with the parabolic manifold: the radial direction 2 beta
  // vbar is the one transverse to P, so it drops out of the count on its
  // side of the flow.
  if (vbar > 0.0) {
    rep.dim_stable_in_p = rep.dim_stable;
    rep.dim_unstable_in_p = rep.dim_unstable - 1;
  } else {
    rep.dim_stable_in_p = rep.dim_stable - 1;
    rep.dim_unstable_in_p = rep.dim_unstable;
  }
  return rep;
}

GridScanResult completeness_scan(const ProblemParams& p, int n_theta,
                                 int n_phi, double exclusion_radius) {
  if (n_theta < 2 || n_phi < 2)
    throw DomainError("completeness_scan: grid must be at least 2x2");
  const auto ccs = find_all(p);

  GridScanResult out;
  out.n_theta = n_theta;
  out.n_phi = n_phi;
  out.min_outside = std::numeric_limits<double>::infinity();
  for (const auto& cc : ccs)
    out.max_cc_residual =
        std::max(out.max_cc_residual, covariant_gradient(p, cc.s).norm());

  const double theta_max = kPi / (2.0 * p.l);
  const double phi_max = kPi / 2.0 - 1e-3;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = (i + 0.5) * theta_max / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * phi_max / n_phi;
      bool near_cc = false;
      for (const auto& cc : ccs) {
        const double dt = theta - cc.s.theta;
        const double dp = phi - cc.s.phi;
        if (dt * dt + dp * dp < exclusion_radius * exclusion_radius) {
          near_cc = true;
          break;
        }
      }
      if (near_cc) continue;
      out.min_outside = std::min(
          out.min_outside, covariant_gradient(p, SphereConfig{theta, phi}).norm());
    }
  }
  return out;
}

}  // namespace dihedral
