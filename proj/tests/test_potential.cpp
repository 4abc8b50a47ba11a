#include <cmath>
#include <random>

#include "dihedral/errors.hpp"
#include "dihedral/params.hpp"
#include "dihedral/potential.hpp"
#include "doctest.h"

using namespace dihedral;
using dihedral::numerics::gauss_jacobi_rule;

namespace {

// Independent route to U: build the 2l bodies and sum the pair potential
// with masses m_i^2 = 1/l. Only uses the orbit construction.
double u_brute(const ProblemParams& p, const SphereConfig& s) {
  const auto orbit = dihedral_orbit(p, s, 1.0);
  const double m2 = 1.0 / p.l;
  double u = 0.0;
  for (std::size_t i = 0; i < orbit.positions.size(); ++i)
    for (std::size_t j = i + 1; j < orbit.positions.size(); ++j) {
      double d2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double d = orbit.positions[i][k] - orbit.positions[j][k];
        d2 += d * d;
      }
      u += m2 * std::pow(d2, -p.alpha / 2.0);
    }
  return u;
}

double fd1(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

double fd2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) -
          f(x - 2 * h)) /
         (12.0 * h * h);
}

}  // namespace

TEST_CASE("u_direct: hand-evaluated square of four bodies") {
  const auto p = make_params(2, 1.0);
  const double u = u_direct(p, {kPi / 4.0, 0.0});
  CHECK(u == doctest::Approx((1.0 + 2.0 * std::sqrt(2.0)) / 2.0)
                 .epsilon(1e-14));
}

TEST_CASE("u_direct equals the brute-force pair sum over the orbit") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int l : {2, 3, 4, 5}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const auto p = make_params(l, alpha);
      for (int k = 0; k < 10; ++k) {
        const SphereConfig s{(0.05 + 0.9 * u01(rng)) * kPi / (2.0 * l),
                             0.05 + 1.3 * u01(rng)};
        const double a = u_direct(p, s);
        const double b = u_brute(p, s);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("u_direct: collision guard") {
  const auto p = make_params(2, 1.0);
  CHECK_THROWS_AS(u_direct(p, {0.0, 0.0}), CollisionError);
  CHECK_THROWS_AS(u_direct(p, {kPi / 2.0, 0.0}), CollisionError);  // theta = pi/l
  CHECK_THROWS_AS(u_direct(p, {0.3, kPi / 2.0}), CollisionError);  // pole
  // just outside the guard is fine
  CHECK(u_direct(p, {1e-6, 0.0}) > 0.0);
}

TEST_CASE("u_direct symmetry under the reflections and the rotation") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int l : {2, 3, 5}) {
    const auto p = make_params(l, 1.25);
    for (int k = 0; k < 20; ++k) {
      const double theta = 0.03 + u01(rng) * 2.0 * kPi;
      const double phi = 0.02 + 1.3 * u01(rng);
      const double u0 = u_direct(p, {theta, phi});
      CHECK(u_direct(p, {theta + kPi / l, phi}) ==
            doctest::Approx(u0).epsilon(1e-12));
      CHECK(u_direct(p, {theta, -phi}) == doctest::Approx(u0).epsilon(1e-12));
      CHECK(u_direct(p, {-theta, phi}) == doctest::Approx(u0).epsilon(1e-12));
      CHECK(u_direct(p, {kPi / l - theta, phi}) ==
            doctest::Approx(u0).epsilon(1e-12));
    }
  }
}

TEST_CASE("u_integral matches u_direct at the equator point") {
  const auto p = make_params(2, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);
  const double ui = u_integral(p, kPi / 4.0, 1.0, rule);
  CHECK(ui == doctest::Approx((1.0 + 2.0 * std::sqrt(2.0)) / 2.0)
                  .epsilon(1e-8));
}

TEST_CASE("u_integral matches u_direct on the r-grid") {
  for (int l : {2, 3, 5}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const auto p = make_params(l, alpha);
      const auto rule = gauss_jacobi_rule(64, p.beta);
      for (double r = 0.2; r < 0.95; r += 0.1) {
        for (double theta : {kPi / (4.0 * l), kPi / (2.0 * l)}) {
          const double ud = u_direct(p, {theta, phi_of_r(r)});
          const double ui = u_integral(p, theta, r, rule);
          CHECK(std::abs(ui / ud - 1.0) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("u_integral: domain and collision errors") {
  const auto p = make_params(2, 1.0);
  const auto rule = gauss_jacobi_rule(32, p.beta);
  CHECK_THROWS_AS(u_integral(p, 0.0, 1.0, rule), CollisionError);
  CHECK_THROWS_AS(u_integral(p, 0.3, 0.0, rule), DomainError);
  CHECK_THROWS_AS(u_integral(p, 0.3, 1.2, rule), DomainError);
  const auto wrong = gauss_jacobi_rule(32, 0.3);
  CHECK_THROWS_AS(u_integral(p, 0.3, 0.5, wrong), DomainError);
}

TEST_CASE("u_integral convergence self-check") {
  const auto p = make_params(3, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);

  QuadratureDiagnostics diag;
  u_integral(p, 0.2, 0.5, rule, &diag);
  CHECK(diag.converged);
  CHECK(diag.rel_change < 1e-12);

  // pushing r against the equator degrades convergence visibly
  QuadratureDiagnostics hard;
  u_integral(p, 0.2, 0.9995, rule, &hard);
  CHECK(hard.rel_change > diag.rel_change);
}

TEST_CASE("u_integral order doubling is stable on the test grid") {
  const auto p = make_params(4, 1.25);
  const auto r64 = gauss_jacobi_rule(64, p.beta);
  const auto r128 = gauss_jacobi_rule(128, p.beta);
  for (double r = 0.1; r <= 0.9; r += 0.2)
    for (double theta : {kPi / 16.0, kPi / 8.0}) {
      const double a = u_integral(p, theta, r, r64);
      const double b = u_integral(p, theta, r, r128);
      CHECK(std::abs(b / a - 1.0) < 1e-10);
    }
}

TEST_CASE("du_dtheta: sign structure and the zero at the wedge edge") {
  const auto p = make_params(3, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);

  CHECK(du_dtheta(p, kPi / 12.0, 0.5, rule) < 0.0);
  CHECK(std::abs(du_dtheta(p, kPi / 6.0, 0.5, rule)) < 1e-12);

  for (double r = 0.1; r <= 1.0; r += 0.15) {
    const double rr = std::min(r, 1.0);
    CHECK(du_dtheta(p, 0.3 * kPi / 6.0, rr, rule) < 0.0);
    CHECK(du_dtheta(p, 1.5 * kPi / 6.0, rr, rule) > 0.0);
  }
}

TEST_CASE("du_dtheta matches a finite difference of u_integral") {
  const auto p = make_params(2, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);
  const double a = du_dtheta(p, 0.3, 0.6, rule);
  const double fd = fd1(
      [&](double th) { return u_integral(p, th, 0.6, rule); }, 0.3, 1e-5);
  CHECK(a == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("du_dphi: odd factor vanishes on the equator, FD agreement") {
  const auto p = make_params(3, 1.0);
  CHECK(du_dphi(p, {kPi / 7.0, 0.0}).value == 0.0);

  const double a = du_dphi(p, {kPi / 6.0, 0.4}).value;
  const double fd = fd1(
      [&](double ph) { return u_direct(p, {kPi / 6.0, ph}); }, 0.4, 1e-5);
  CHECK(a == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("f_theta: reductions at l = 2") {
  // theta = 0: f = 1 - tan^{-2(beta+1)} phi, root at phi = pi/4
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto p = make_params(2, alpha);
    CHECK(f_theta(p, 0.0, kPi / 4.0) == doctest::Approx(0.0).epsilon(1e-14));
    const double phi = 0.9;
    const double expect = 1.0 - std::pow(std::tan(phi), -2.0 * (p.beta + 1.0));
    CHECK(f_theta(p, 0.0, phi) == doctest::Approx(expect).epsilon(1e-13));

    // theta = pi/4: two equal terms, f = 1 - (1/2 + tan^2 phi)^{-(beta+1)}
    const double t2 = std::tan(0.3) * std::tan(0.3);
    const double expect2 = 1.0 - std::pow(0.5 + t2, -(p.beta + 1.0));
    CHECK(f_theta(p, kPi / 4.0, 0.3) ==
          doctest::Approx(expect2).epsilon(1e-13));
  }
}

TEST_CASE("f_theta: limit c_sphere at the pole, divergence on the ray") {
  const auto p = make_params(3, 1.0);
  CHECK(f_theta(p, 0.1, kPi / 2.0 - 1e-6) ==
        doctest::Approx(p.c_sphere).epsilon(1e-12));
  CHECK_THROWS_AS(f_theta(p, 0.0, 0.0), DomainError);

  // strictly increasing in phi
  double prev = f_theta(p, kPi / 12.0, 0.05);
  for (double phi = 0.15; phi < 1.5; phi += 0.1) {
    const double cur = f_theta(p, kPi / 12.0, phi);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("hessian matches five-point finite differences") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int l : {2, 3, 5}) {
    const auto p = make_params(l, 1.0);
    for (int k = 0; k < 10; ++k) {
      const double theta = (0.1 + 0.8 * u01(rng)) * kPi / (2.0 * l);
      const double phi = 0.1 + 1.1 * u01(rng);
      const Hessian2 h = hessian(p, {theta, phi});

      const double tt =
          fd2([&](double x) { return u_direct(p, {x, phi}); }, theta, 1e-3);
      const double pp =
          fd2([&](double x) { return u_direct(p, {theta, x}); }, phi, 1e-3);
      const auto cross = [&](double step) {
        return (u_direct(p, {theta + step, phi + step}) -
                u_direct(p, {theta + step, phi - step}) -
                u_direct(p, {theta - step, phi + step}) +
                u_direct(p, {theta - step, phi - step})) /
               (4.0 * step * step);
      };
      const double tp = (4.0 * cross(5e-4) - cross(1e-3)) / 3.0;

      const double scale = std::max(
          {std::abs(h.dtheta2), std::abs(h.dphi2), std::abs(h.dtheta_dphi), 1.0});
      CHECK(std::abs(h.dtheta2 - tt) < 1e-5 * scale);
      CHECK(std::abs(h.dphi2 - pp) < 1e-5 * scale);
      CHECK(std::abs(h.dtheta_dphi - tp) < 1e-5 * scale);
    }
  }
}

TEST_CASE("hessian sign pattern at the symmetric points") {
  const auto p = make_params(3, 1.0);

  const Hessian2 ngon = hessian(p, {kPi / 6.0, 0.0});
  CHECK(ngon.dtheta2 > 0.0);
  CHECK(ngon.dphi2 < 0.0);
  CHECK(std::abs(ngon.dtheta_dphi) < 1e-10);

  // at the antiprism latitude both diagonal entries are positive
  const double t2 = 0.5;  // tan^2 of asin(1/sqrt(3)), the l=3 alpha=1 root
  const Hessian2 anti = hessian(p, {kPi / 6.0, std::atan(std::sqrt(t2))});
  CHECK(anti.dtheta2 > 0.0);
  CHECK(anti.dphi2 > 0.0);
  CHECK(std::abs(anti.dtheta_dphi) < 1e-10);
}

TEST_CASE("covariant_gradient: equator component and ambient tangency") {
  const auto p = make_params(3, 1.0);
  CHECK(covariant_gradient(p, {0.4, 0.0}).g_phi == 0.0);

  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    const SphereConfig s{u01(rng) * 2.0 * kPi + 0.03, 0.05 + 1.2 * u01(rng)};
    const Vec3 g = gradient_ambient(p, s);
    const Vec3 x = sphere_to_cartesian(s);
    CHECK(std::abs(g[0] * x[0] + g[1] * x[1] + g[2] * x[2]) < 1e-12 *
              (1.0 + std::abs(g[0]) + std::abs(g[1]) + std::abs(g[2])));
  }
}

TEST_CASE("covariant_gradient matches finite differences of u_direct") {
  const auto p = make_params(2, 0.75);
  const SphereConfig s{0.41, 0.62};
  const auto g = covariant_gradient(p, s);
  const double c = std::cos(s.phi);
  const double fd_t =
      fd1([&](double x) { return u_direct(p, {x, s.phi}); }, s.theta, 1e-5);
  const double fd_p =
      fd1([&](double x) { return u_direct(p, {s.theta, x}); }, s.phi, 1e-5);
  CHECK(g.g_theta == doctest::Approx(fd_t / (c * c)).epsilon(1e-7));
  CHECK(g.g_phi == doctest::Approx(fd_p).epsilon(1e-7));
}
