#include "dihedral/mcgehee.hpp"

#include <cmath>

#include "dihedral/errors.hpp"
#include "dihedral/potential.hpp"

namespace dihedral {

namespace {

// Chart singularity guard: distinct from the physical l-adic collision at
// the poles, but the (theta, phi) chart degenerates there either way.
constexpr double kPoleGuard = 1e-6;

void require_chart(const McGeheeState& x) {
  if (!(std::abs(x.phi) < kPi / 2.0 - kPoleGuard))
    throw CollisionError("mcgehee: |phi| too close to pi/2 (pole guard)");
}

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

double McGeheeState::w_norm2() const {
  const double c = std::cos(phi);
  return w1 * w1 * c * c + w2 * w2;
}

const char* manifold_name(ManifoldClass c) {
  switch (c) {
    case ManifoldClass::Elliptic: return "elliptic";
    case ManifoldClass::Parabolic: return "parabolic";
    case ManifoldClass::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

McGeheeState vector_field(const ProblemParams& p, const McGeheeState& x) {
  require_chart(x);
  const SphereConfig s{x.theta, x.phi};
  const double u = u_direct(p, s);
  const SphereGradient g = covariant_gradient(p, s);

  const double cphi = std::cos(x.phi);
  const double tphi = std::tan(x.phi);
  const double wn2 = x.w1 * x.w1 * cphi * cphi + x.w2 * x.w2;

  McGeheeState d;
  d.v = wn2 + p.beta * x.v * x.v - p.alpha * u;
  d.theta = x.w1;
  d.phi = x.w2;
  d.w1 = (p.beta - 1.0) * x.v * x.w1 + 2.0 * tphi * x.w1 * x.w2 + g.g_theta;
  d.w2 = (p.beta - 1.0) * x.v * x.w2 -
         0.5 * x.w1 * x.w1 * std::sin(2.0 * x.phi) + g.g_phi;
  return d;
}

AmbientState to_ambient(const McGeheeState& x) {
  const double ct = std::cos(x.theta), st = std::sin(x.theta);
  const double cp = std::cos(x.phi), sp = std::sin(x.phi);
  AmbientState a;
  a.s = {cp * ct, cp * st, sp};
  a.v = x.v;
  // w = w1 ds/dtheta + w2 ds/dphi
  a.w = {-x.w1 * cp * st - x.w2 * sp * ct,
         x.w1 * cp * ct - x.w2 * sp * st,
         x.w2 * cp};
  return a;
}

AmbientState vector_field_ambient(const ProblemParams& p,
                                  const AmbientState& x) {
  const double phi = std::asin(x.s[2]);
  const double theta = std::atan2(x.s[1], x.s[0]);
  const SphereConfig sc{theta, phi};
  if (!(std::abs(phi) < kPi / 2.0 - kPoleGuard))
    throw CollisionError("mcgehee: ambient point at the pole guard");

  const double u = u_direct(p, sc);
  const Vec3 grad = gradient_ambient(p, sc);
  const double wn2 = dot(x.w, x.w);

  AmbientState d;
  d.v = wn2 + p.beta * x.v * x.v - p.alpha * u;
  d.s = x.w;
  for (int i = 0; i < 3; ++i)
    d.w[i] = -wn2 * x.s[i] + (p.beta - 1.0) * x.v * x.w[i] + grad[i];
  return d;
}

McGeheeState pull_back_derivative(const McGeheeState& x,
                                  const AmbientState& dx) {
  const double ct = std::cos(x.theta), st = std::sin(x.theta);
  const double cp = std::cos(x.phi), sp = std::sin(x.phi);
  const Vec3 dth{-cp * st, cp * ct, 0.0};
  const Vec3 dph{-sp * ct, -sp * st, cp};

  McGeheeState d;
  d.v = dx.v;
  d.theta = dot(dx.s, dth) / (cp * cp);
  d.phi = dot(dx.s, dph);

  // w' = w1' s_theta + w2' s_phi + w1 (s_tt theta' + s_tp phi')
  //                              + w2 (s_pt theta' + s_pp phi');
  // subtract the curvature terms, then project on the chart frame.
  // s_tt = -cp^2 s + sp cp s_phi,  s_tp = -(sp/cp) s_theta,  s_pp = -s.
  const Vec3 s{cp * ct, cp * st, sp};
  const double tphi = sp / cp;
  Vec3 rest;
  for (int i = 0; i < 3; ++i) {
    const double s_tt = -cp * cp * s[i] + sp * cp * dph[i];
    const double s_tp = -tphi * dth[i];
    const double s_pp = -s[i];
    rest[i] = dx.w[i] - x.w1 * (s_tt * d.theta + s_tp * d.phi) -
              x.w2 * (s_tp * d.theta + s_pp * d.phi);
  }
  d.w1 = dot(rest, dth) / (cp * cp);
  d.w2 = dot(rest, dph);
  return d;
}

EnergyValue energy(const ProblemParams& p, const McGeheeState& x) {
  const double u = u_direct(p, SphereConfig{x.theta, x.phi});
  EnergyValue out;
  out.e = 0.5 * (x.v * x.v + x.w_norm2()) - u;
  if (std::abs(out.e) < 1e-12)
    out.cls = ManifoldClass::Parabolic;
  else
    out.cls = out.e < 0.0 ? ManifoldClass::Elliptic : ManifoldClass::Hyperbolic;
  return out;
}

McGeheeState project_to_parabolic(const ProblemParams& p,
                                  const McGeheeState& x) {
  const double u = u_direct(p, SphereConfig{x.theta, x.phi});
  const double q = x.v * x.v + x.w_norm2();
  if (q == 0.0)
    throw DomainError("project_to_parabolic: v = w = 0 cannot be rescaled");
  const double scale = std::sqrt(2.0 * u / q);
  McGeheeState out = x;
  out.v *= scale;
  out.w1 *= scale;
  out.w2 *= scale;
  return out;
}

namespace {

Trajectory from_samples(const ProblemParams& p,
                        const std::vector<numerics::IntegrationSample>& samples) {
  Trajectory traj;
  traj.tau.reserve(samples.size());
  traj.states.reserve(samples.size());
  traj.energy.reserve(samples.size());
  for (const auto& s : samples) {
    McGeheeState x{s.y[0], s.y[1], s.y[2], s.y[3], s.y[4]};
    traj.tau.push_back(s.tau);
    traj.states.push_back(x);
    traj.energy.push_back(energy(p, x).e);
  }
  return traj;
}

}  // namespace

namespace {

numerics::VectorField capped_field(const ProblemParams& p) {
  return [&p](double, std::span<const double> y, std::span<double> dy) {
    const McGeheeState x{y[0], y[1], y[2], y[3], y[4]};
    if (u_direct(p, SphereConfig{x.theta, x.phi}) > kFlowPotentialCap)
      throw CollisionError("mcgehee: potential cap reached (collision-bound)");
    const McGeheeState d = vector_field(p, x);
    dy[0] = d.v;
    dy[1] = d.theta;
    dy[2] = d.phi;
    dy[3] = d.w1;
    dy[4] = d.w2;
  };
}

}  // namespace

Trajectory integrate(const ProblemParams& p, const McGeheeState& x0,
                     std::pair<double, double> tau_span,
                     const numerics::IntegratorConfig& cfg) {
  const double y0[5] = {x0.v, x0.theta, x0.phi, x0.w1, x0.w2};
  const auto samples = numerics::rk_integrate(capped_field(p), y0, tau_span, cfg);
  return from_samples(p, samples);
}

Trajectory integrate_partial(const ProblemParams& p, const McGeheeState& x0,
                             std::pair<double, double> tau_span,
                             const numerics::IntegratorConfig& cfg) {
  const double y0[5] = {x0.v, x0.theta, x0.phi, x0.w1, x0.w2};
  std::vector<numerics::IntegrationSample> samples;
  bool complete = true;
  try {
    numerics::rk_integrate(capped_field(p), y0, tau_span, cfg, &samples);
  } catch (const StepFailure&) {
    complete = false;
  }
  Trajectory traj = from_samples(p, samples);
  traj.complete = complete;
  return traj;
}

Trajectory lift(const ProblemParams& p, const Trajectory& traj, double rho0) {
  if (traj.size() == 0) throw DomainError("lift: empty trajectory");
  if (!(rho0 > 0.0)) throw DomainError("lift: rho0 must be positive");

  const std::size_t n = traj.size();
  std::vector<double> vdot(n);
  for (std::size_t k = 0; k < n; ++k)
    vdot[k] = vector_field(p, traj.states[k]).v;

  Trajectory out = traj;
  out.rho.assign(n, 0.0);
  out.t.assign(n, 0.0);

  // log rho by corrected trapezoid: the endpoint-derivative term lifts the
  // sample-grid quadrature to O(h^4).
  double logrho = 0.0;
  out.rho[0] = rho0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = traj.tau[k + 1] - traj.tau[k];
    logrho += 0.5 * h * (traj.states[k].v + traj.states[k + 1].v) +
              h * h / 12.0 * (vdot[k] - vdot[k + 1]);
    out.rho[k + 1] = rho0 * std::exp(logrho);
  }

  // physical time: dt = rho^{1+beta} dtau, with the integrand derivative
  // (1+beta) rho^{1+beta} v available at the samples.
  const double e = 1.0 + p.beta;
  double t_acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = traj.tau[k + 1] - traj.tau[k];
    const double g0 = std::pow(out.rho[k], e);
    const double g1 = std::pow(out.rho[k + 1], e);
    const double gd0 = e * g0 * traj.states[k].v;
    const double gd1 = e * g1 * traj.states[k + 1].v;
    t_acc += 0.5 * h * (g0 + g1) + h * h / 12.0 * (gd0 - gd1);
    out.t[k + 1] = t_acc;
  }
  return out;
}

double rho_algebraic(const ProblemParams& p, const McGeheeState& x, double h) {
  if (h == 0.0) throw DomainError("rho_algebraic: h must be nonzero");
  const double u = u_direct(p, SphereConfig{x.theta, x.phi});
  const double num = x.v * x.v + x.w_norm2() - 2.0 * u;
  const double ratio = num / (2.0 * h);
  if (!(ratio > 0.0))
    throw DomainError("rho_algebraic: state energy inconsistent with h");
  return std::pow(ratio, 1.0 / p.alpha);
}

Trajectory homothetic(const ProblemParams& p, const CentralConfiguration& cc,
                      double v0, std::pair<double, double> tau_span,
                      const numerics::IntegratorConfig& cfg) {
  const double u = cc.u_value;
  const auto field = [&](double, std::span<const double> y,
                         std::span<double> dy) {
    dy[0] = p.beta * y[0] * y[0] - p.alpha * u;
  };
  const double y0[1] = {v0};

  std::vector<numerics::IntegrationSample> samples;
  bool blew_up = false;
  double escape_tau = 0.0;
  try {
    numerics::rk_integrate(field, y0, tau_span, cfg, &samples);
  } catch (const StepFailure& f) {
    blew_up = true;
    escape_tau = f.tau_reached;
  }

  Trajectory traj;
  traj.blew_up = blew_up;
  traj.escape_tau = escape_tau;
  for (const auto& s : samples) {
    McGeheeState x{s.y[0], cc.s.theta, cc.s.phi, 0.0, 0.0};
    traj.tau.push_back(s.tau);
    traj.states.push_back(x);
    traj.energy.push_back(0.5 * x.v * x.v - u);
  }
  return traj;
}

double parabolic_homothetic_rho(const ProblemParams& p,
                                const CentralConfiguration& cc, double t,
                                int sign) {
  if (sign != 1 && sign != -1)
    throw DomainError("parabolic_homothetic_rho: sign must be +1 or -1");
  if (!(sign * t > 0.0))
    throw DomainError("parabolic_homothetic_rho: need sign * t > 0");
  const double e = 1.0 + p.beta;
  return std::pow(sign * e * std::sqrt(2.0 * cc.u_value) * t, 1.0 / e);
}

}  // namespace dihedral
