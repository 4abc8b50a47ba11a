#include "dihedral/potential.hpp"

#include <cmath>

#include "dihedral/errors.hpp"

namespace dihedral {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

// Trigonometric accumulators over j = 1..l with u_j = j pi/l - theta and
// A_j = sin^2 u_j + tan^2 phi. Everything the direct-sum derivatives need.
struct SumSet {
  double s0 = 0;   // sum A^{-beta}
  double s1 = 0;   // sum A^{-beta-1}
  double s2 = 0;   // sum A^{-beta-2}
  double c1 = 0;   // sum cos(2u) A^{-beta-1}
  double z1 = 0;   // sum sin(2u) A^{-beta-1}
  double z2 = 0;   // sum sin(2u) A^{-beta-2}
  double z22 = 0;  // sum sin^2(2u) A^{-beta-2}
};

SumSet accumulate(const ProblemParams& p, double theta, double tan2phi) {
  SumSet s;
  for (int j = 1; j <= p.l; ++j) {
    const double u = j * kPi / p.l - theta;
    const double su = std::sin(u);
    const double a = su * su + tan2phi;
    const double am1 = std::pow(a, -p.beta - 1.0);
    const double am0 = am1 * a;
    const double am2 = am1 / a;
    const double s2u = std::sin(2.0 * u);
    const double c2u = std::cos(2.0 * u);
    s.s0 += am0;
    s.s1 += am1;
    s.s2 += am2;
    s.c1 += c2u * am1;
    s.z1 += s2u * am1;
    s.z2 += s2u * am2;
    s.z22 += s2u * s2u * am2;
  }
  return s;
}

void require_noncollision(const ProblemParams& p, double theta, double phi) {
  if (is_collision(p, theta, phi))
    throw CollisionError("configuration inside the collision guard");
}

}  // namespace

double theta_collision_distance(int l, double theta) {
  const double period = kPi / l;
  double d = std::fmod(std::abs(theta), period);
  return std::min(d, period - d);
}

bool is_collision(const ProblemParams& p, double theta, double phi) {
  if (std::abs(phi) >= kPi / 2.0 - 1e-12) return true;  // pole limit
  const double s = std::sin(std::abs(phi));
  const double one_minus_r = 2.0 * s / (1.0 + s);
  return one_minus_r < kCollisionGuard &&
         theta_collision_distance(p.l, theta) < kCollisionGuard;
}

double u_direct(const ProblemParams& p, const SphereConfig& s) {
  require_noncollision(p, s.theta, s.phi);
  const double t = std::tan(s.phi);
  const double tan2 = t * t;
  double sum = 0.0;
  for (int j = 1; j <= p.l; ++j) {
    const double su = std::sin(j * kPi / p.l - s.theta);
    sum += std::pow(su * su + tan2, -p.beta);
  }
  return std::pow(2.0 * std::cos(s.phi), -p.alpha) * (p.c_sphere + sum);
}

namespace {

// Integral kernel I(r, theta) for r < 1: the Jacobi weight is in the rule,
// the remaining factor is analytic on [0,1].
double kernel_i(const ProblemParams& p, double theta, double r,
                const numerics::QuadratureRule& rule) {
  const double sl = std::sin(p.l * theta);
  const double s2 = sl * sl;
  double acc = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double t = rule.nodes[i];
    const double x = ipow(t * r, p.l);
    const double denom = (1.0 - x) * (1.0 - x) + 4.0 * x * s2;
    acc += rule.weights[i] * std::pow(1.0 - t * r * r, -p.beta) *
           (1.0 - x * x) / denom;
  }
  return acc;
}

// At r = 1 the factor (1 - t r^2)^{-beta} merges with the weight and one
// power of (1 - t) cancels against the numerator zero, leaving the weight
// (1-t)^{1-2 beta} t^{beta-1} and a smooth factor. The dedicated rule keeps
// convergence spectral on the equator.
double kernel_i_equator(const ProblemParams& p, double theta, int order) {
  std::vector<double> nodes, weights;
  numerics::jacobi_rule(order, 1.0 - 2.0 * p.beta, p.beta - 1.0, nodes,
                        weights);
  const double sl = std::sin(p.l * theta);
  const double s2 = sl * sl;
  double acc = 0.0;
  for (int i = 0; i < order; ++i) {
    const double t = nodes[i];
    const double x = ipow(t, p.l);
    double geom = 0.0;  // 1 + t + ... + t^{2l-1}
    double tk = 1.0;
    for (int k = 0; k < 2 * p.l; ++k, tk *= t) geom += tk;
    const double denom = (1.0 - x) * (1.0 - x) + 4.0 * x * s2;
    acc += weights[i] * geom / denom;
  }
  return acc;
}

double kernel_j(const ProblemParams& p, double theta, double r,
                const numerics::QuadratureRule& rule) {
  const double sl = std::sin(p.l * theta);
  const double s2 = sl * sl;
  double acc = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double t = rule.nodes[i];
    const double x = ipow(t * r, p.l);
    const double denom = (1.0 - x) * (1.0 - x) + 4.0 * x * s2;
    acc += rule.weights[i] * std::pow(1.0 - t * r * r, -p.beta) * x *
           (1.0 - x * x) / (denom * denom);
  }
  return acc;
}

double kernel_j_equator(const ProblemParams& p, double theta, int order) {
  std::vector<double> nodes, weights;
  numerics::jacobi_rule(order, 1.0 - 2.0 * p.beta, p.beta - 1.0, nodes,
                        weights);
  const double sl = std::sin(p.l * theta);
  const double s2 = sl * sl;
  double acc = 0.0;
  for (int i = 0; i < order; ++i) {
    const double t = nodes[i];
    const double x = ipow(t, p.l);
    double geom = 0.0;
    double tk = 1.0;
    for (int k = 0; k < 2 * p.l; ++k, tk *= t) geom += tk;
    const double denom = (1.0 - x) * (1.0 - x) + 4.0 * x * s2;
    acc += weights[i] * x * geom / (denom * denom);
  }
  return acc;
}

void check_integral_domain(const ProblemParams& p, double theta, double r,
                           const numerics::QuadratureRule& rule) {
  if (!(r > 0.0) || r > 1.0)
    throw DomainError("potential integral: r must lie in (0,1]");
  if (rule.beta != p.beta)
    throw DomainError("potential integral: rule.beta must equal p.beta");
  if (1.0 - r < kCollisionGuard &&
      theta_collision_distance(p.l, theta) < kCollisionGuard)
    throw CollisionError("potential integral: binary collision at (0,1)");
}

double u_integral_value(const ProblemParams& p, double theta, double r,
                        const numerics::QuadratureRule& rule, int order) {
  const double i_val = (r == 1.0) ? kernel_i_equator(p, theta, order)
                                  : kernel_i(p, theta, r, rule);
  const double pref = std::pow((1.0 + r) * (1.0 + r) / (4.0 * r), p.beta);
  return pref * (p.c_group + p.l * std::pow(r, p.beta) *
                     std::sin(p.beta * kPi) / kPi * i_val);
}

}  // namespace

double u_integral(const ProblemParams& p, double theta, double r,
                  const numerics::QuadratureRule& rule,
                  QuadratureDiagnostics* diag) {
  check_integral_domain(p, theta, r, rule);
  const double value = u_integral_value(p, theta, r, rule, rule.order);
  if (diag) {
    const auto refined_rule =
        (r == 1.0) ? rule : numerics::gauss_jacobi_rule(2 * rule.order, p.beta);
    diag->refined_value =
        u_integral_value(p, theta, r, refined_rule, 2 * rule.order);
    diag->rel_change = std::abs(diag->refined_value / value - 1.0);
    diag->converged = diag->rel_change < 1e-10;
  }
  return value;
}

double du_dtheta(const ProblemParams& p, double theta, double r,
                 const numerics::QuadratureRule& rule) {
  check_integral_domain(p, theta, r, rule);
  const double j_val = (r == 1.0) ? kernel_j_equator(p, theta, rule.order)
                                  : kernel_j(p, theta, r, rule);
  return -4.0 * p.l * p.l * std::sin(2.0 * p.l * theta) *
         std::pow((1.0 + r) / 2.0, p.alpha) * std::sin(p.beta * kPi) / kPi *
         j_val;
}

double du_dtheta_direct(const ProblemParams& p, const SphereConfig& s) {
  require_noncollision(p, s.theta, s.phi);
  const double t = std::tan(s.phi);
  const SumSet sums = accumulate(p, s.theta, t * t);
  return p.beta * std::pow(2.0 * std::cos(s.phi), -p.alpha) * sums.z1;
}

double f_theta(const ProblemParams& p, double theta, double phi) {
  if (!(std::abs(phi) < kPi / 2.0))
    throw DomainError("f_theta: phi must lie inside (-pi/2, pi/2)");
  const double t = std::tan(phi);
  const double tan2 = t * t;
  if (tan2 == 0.0 && theta_collision_distance(p.l, theta) < 1e-12)
    throw DomainError("f_theta: divergent at phi = 0 on theta = 0 mod pi/l");
  double sum = 0.0;
  for (int j = 1; j <= p.l; ++j) {
    const double u = j * kPi / p.l - theta;
    const double su = std::sin(u);
    const double cu = std::cos(u);
    const double a = su * su + tan2;
    if (a == 0.0)
      throw DomainError("f_theta: divergent at phi = 0 on theta = 0 mod pi/l");
    sum += cu * cu * std::pow(a, -(p.beta + 1.0));
  }
  return p.c_sphere - sum;
}

PhiDerivative du_dphi(const ProblemParams& p, const SphereConfig& s) {
  require_noncollision(p, s.theta, s.phi);
  PhiDerivative out;
  out.prefactor = 2.0 * p.beta * std::tan(s.phi) *
                  std::pow(2.0 * std::cos(s.phi), -p.alpha);
  out.f = f_theta(p, s.theta, s.phi);
  out.value = out.prefactor * out.f;
  return out;
}

Hessian2 hessian(const ProblemParams& p, const SphereConfig& s) {
  require_noncollision(p, s.theta, s.phi);
  const double beta = p.beta;
  const double tphi = std::tan(s.phi);
  const double tan2 = tphi * tphi;
  const double sec2 = 1.0 + tan2;
  const double pref = std::pow(2.0 * std::cos(s.phi), -p.alpha);
  const double tp = 2.0 * tphi * sec2;            // (tan^2)'
  const double tpp = 2.0 * sec2 * (sec2 + 2.0 * tan2);  // (tan^2)''
  const SumSet m = accumulate(p, s.theta, tan2);

  Hessian2 h;
  h.dtheta2 = beta * pref * (-2.0 * m.c1 + (beta + 1.0) * m.z22);
  h.dtheta_dphi =
      beta * pref * (2.0 * beta * tphi * m.z1 - (beta + 1.0) * tp * m.z2);
  h.dphi2 = beta * pref *
            ((4.0 * beta * tan2 + 2.0 * sec2) * (p.c_sphere + m.s0) -
             (4.0 * beta * tphi * tp + tpp) * m.s1 +
             (beta + 1.0) * tp * tp * m.s2);
  return h;
}

double SphereGradient::norm() const {
  return std::sqrt(g_theta * g_theta + g_phi * g_phi);
}

SphereGradient covariant_gradient(const ProblemParams& p,
                                  const SphereConfig& s) {
  require_noncollision(p, s.theta, s.phi);
  const double tphi = std::tan(s.phi);
  const double tan2 = tphi * tphi;
  const double cphi = std::cos(s.phi);
  const double pref = std::pow(2.0 * cphi, -p.alpha);
  const SumSet m = accumulate(p, s.theta, tan2);

  const double u_theta = p.beta * pref * m.z1;
  const double tp = 2.0 * tphi * (1.0 + tan2);
  const double u_phi =
      p.beta * pref * (2.0 * tphi * (p.c_sphere + m.s0) - tp * m.s1);
  return {u_theta / (cphi * cphi), u_phi};
}

Vec3 gradient_ambient(const ProblemParams& p, const SphereConfig& s) {
  const SphereGradient g = covariant_gradient(p, s);
  const double ct = std::cos(s.theta), st = std::sin(s.theta);
  const double cp = std::cos(s.phi), sp = std::sin(s.phi);
  // ds/dtheta and ds/dphi
  const Vec3 dth{-cp * st, cp * ct, 0.0};
  const Vec3 dph{-sp * ct, -sp * st, cp};
  return {g.g_theta * dth[0] + g.g_phi * dph[0],
          g.g_theta * dth[1] + g.g_phi * dph[1],
          g.g_theta * dth[2] + g.g_phi * dph[2]};
}

double perron_b(const ProblemParams& p, int n, double r,
                const numerics::QuadratureRule& rule) {
  if (n < 0) throw DomainError("perron_b: n must be >= 0");
  if (r < 0.0 || r >= 1.0) throw DomainError("perron_b: r must lie in [0,1)");
  if (rule.beta != p.beta)
    throw DomainError("perron_b: rule.beta must equal p.beta");
  const double rn = (n == 0) ? 1.0 : std::pow(r, n);
  double acc = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double t = rule.nodes[i];
    acc += rule.weights[i] * std::pow(t, static_cast<double>(n)) *
           std::pow(1.0 - t * r * r, -p.beta);
  }
  return std::sin(p.beta * kPi) / kPi * rn * acc;
}

SeriesCoefficients perron_b_series(const ProblemParams& p, double r, int n_max,
                                   const numerics::QuadratureRule& rule) {
  if (n_max < 0) throw DomainError("perron_b_series: n_max must be >= 0");
  SeriesCoefficients out;
  out.r = r;
  out.n_max = n_max;
  out.b.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) out.b.push_back(perron_b(p, n, r, rule));
  return out;
}

double perron_apply(const ProblemParams& p, double r, std::complex<double> xi,
                    const numerics::QuadratureRule& rule) {
  if (!(r > 0.0 && r < 1.0))
    throw DomainError("perron_apply: r must lie in (0,1)");
  if (std::abs(std::abs(xi) - 1.0) > 1e-9)
    throw DomainError("perron_apply: xi must lie on the unit circle");
  if (rule.beta != p.beta)
    throw DomainError("perron_apply: rule.beta must equal p.beta");
  const double re = xi.real();
  double acc = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double t = rule.nodes[i];
    const double x = ipow(t * r, p.l);
    const double denom = (1.0 - x) * (1.0 - x) + 2.0 * x * (1.0 - re);
    acc += rule.weights[i] * std::pow(1.0 - t * r * r, -p.beta) *
           (1.0 - x * x) / denom;
  }
  return std::sin(p.beta * kPi) / kPi * acc;
}

double perron_average(const ProblemParams& p, double r,
                      std::complex<double> xi) {
  if (!(r >= 0.0 && r < 1.0))
    throw DomainError("perron_average: r must lie in [0,1)");
  const double psi = std::arg(xi);
  double acc = 0.0;
  for (int j = 0; j < p.l; ++j) {
    const double a = (psi + 2.0 * kPi * j) / p.l;
    const double sh = std::sin(a / 2.0);
    const double d2 = (1.0 - r) * (1.0 - r) + 4.0 * r * sh * sh;
    acc += std::pow(d2, -p.beta);
  }
  return acc / p.l;
}

double perron_apply_series(const ProblemParams& p, double r,
                           std::complex<double> xi,
                           const numerics::QuadratureRule& rule) {
  if (!(r > 0.0 && r < 1.0))
    throw DomainError("perron_apply_series: r must lie in (0,1)");
  // truncate where r^{l n} drops below 1e-12 (geometric tail bound)
  const int n_cut = std::min(
      2000, static_cast<int>(std::ceil(-12.0 * std::log(10.0) /
                                       (p.l * std::log(r)))) + 1);
  const double psi = std::arg(xi);
  double acc = perron_b(p, 0, r, rule);
  for (int n = 1; n <= n_cut; ++n)
    acc += 2.0 * perron_b(p, p.l * n, r, rule) * std::cos(n * psi);
  return acc;
}

}  // namespace dihedral
