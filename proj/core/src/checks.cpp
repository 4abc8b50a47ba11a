#include "dihedral/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include "dihedral/central_configs.hpp"
#include "dihedral/errors.hpp"
#include "dihedral/mcgehee.hpp"
#include "dihedral/numerics.hpp"
#include "dihedral/params.hpp"
#include "dihedral/potential.hpp"

namespace dihedral::checks {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Central difference with one Richardson extrapolation step.
double fd_first(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

// Five-point second derivative.
double fd_second(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) -
          f(x - 2 * h)) /
         (12.0 * h * h);
}

double fd_cross_plain(const std::function<double(double, double)>& f, double x,
                      double y, double h) {
  return (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) +
          f(x - h, y - h)) /
         (4.0 * h * h);
}

double fd_cross(const std::function<double(double, double)>& f, double x,
                double y, double h) {
  const double d1 = fd_cross_plain(f, x, y, h);
  const double d2 = fd_cross_plain(f, x, y, h / 2);
  return (4.0 * d2 - d1) / 3.0;
}

struct TableRow {
  int ws, wu, ws_p, wu_p;
};

TableRow expected_dims(Family fam, int v_sign) {
  const bool anti = fam == Family::Antiprism;
  if (v_sign > 0) return anti ? TableRow{2, 3, 2, 2} : TableRow{3, 2, 3, 1};
  return anti ? TableRow{3, 2, 2, 2} : TableRow{2, 3, 1, 3};
}

std::vector<int> sweep_l(bool quick) {
  return quick ? std::vector<int>{2, 3} : std::vector<int>{2, 3, 4, 5, 6};
}

const std::vector<double> kSweepAlpha{0.5, 1.0, 1.5};

CheckResult check_table1(const CheckOptions& opt) {
  CheckResult res{1, "table-1-dimensions", false, "", 0};
  const auto t0 = Clock::now();
  int records = 0;
  for (int l : sweep_l(opt.quick)) {
    for (double alpha : kSweepAlpha) {
      const auto p = make_params(l, alpha);
      for (const auto& cc : find_all(p)) {
        for (int sign : {+1, -1}) {
          const auto rep = classify(p, cc, sign);
          const auto want = expected_dims(cc.family, sign);
          ++records;
          if (rep.dim_stable != want.ws || rep.dim_unstable != want.wu ||
              rep.dim_stable_in_p != want.ws_p ||
              rep.dim_unstable_in_p != want.wu_p) {
            res.detail = "mismatch at l=" + std::to_string(l) +
                         " alpha=" + fmt(alpha) + " " + family_name(cc.family);
            res.seconds = seconds_since(t0);
            return res;
          }
        }
      }
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = res.seconds < 30.0;
  res.detail = std::to_string(records) + " records match Table 1, " +
               fmt(res.seconds) + " s (budget 30 s)";
  return res;
}

CheckResult check_l2_degenerations(const CheckOptions&) {
  CheckResult res{2, "l2-degenerations", false, "", 0};
  const auto t0 = Clock::now();
  double worst_angle = 0.0, worst_spread = 0.0;
  const double anti_phi = std::asin(1.0 / std::sqrt(3.0));
  for (double alpha : kSweepAlpha) {
    const auto p = make_params(2, alpha);
    const auto prism = find_prism(p);
    const auto anti = find_antiprism(p);
    worst_angle = std::max(worst_angle, std::abs(prism.s.phi - kPi / 4.0));
    worst_angle = std::max(worst_angle, std::abs(anti.s.phi - anti_phi));

    const auto orbit = dihedral_orbit(p, anti.s, 1.0);
    double dmin = 1e300, dmax = 0.0;
    for (std::size_t i = 0; i < orbit.positions.size(); ++i)
      for (std::size_t j = i + 1; j < orbit.positions.size(); ++j) {
        double d2 = 0;
        for (int k = 0; k < 3; ++k) {
          const double d = orbit.positions[i][k] - orbit.positions[j][k];
          d2 += d * d;
        }
        const double d = std::sqrt(d2);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
      }
    worst_spread = std::max(worst_spread, (dmax - dmin) / dmax);
  }
  res.seconds = seconds_since(t0);
  res.passed = worst_angle <= 1e-10 && worst_spread <= 1e-12;
  res.detail = "max angle error " + fmt(worst_angle) +
               " (tol 1e-10), tetrahedron edge spread " + fmt(worst_spread) +
               " (tol 1e-12)";
  return res;
}

CheckResult check_representation(const CheckOptions& opt) {
  CheckResult res{3, "representation-equivalence", false, "", 0};
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int l : {2, 3, 5}) {
    for (double alpha : kSweepAlpha) {
      const auto p = make_params(l, alpha);
      const auto rule = numerics::gauss_jacobi_rule(opt.quad_order, p.beta);
      for (double r = 0.2; r < 0.95; r += 0.1) {
        for (double theta : {kPi / (4.0 * l), kPi / (2.0 * l)}) {
          const double phi = phi_of_r(r);
          const double ud = u_direct(p, SphereConfig{theta, phi});
          const double ui = u_integral(p, theta, r, rule);
          worst = std::max(worst, std::abs(ui / ud - 1.0));
        }
      }
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = worst < 1e-8 && res.seconds < 10.0;
  res.detail = "max |u_integral/u_direct - 1| = " + fmt(worst) +
               " (tol 1e-8), " + fmt(res.seconds) + " s (budget 10 s)";
  return res;
}

CheckResult check_eigen_dual(const CheckOptions& opt) {
  CheckResult res{4, "eigenvalue-dual-path", false, "", 0};
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int l : sweep_l(opt.quick)) {
    for (double alpha : kSweepAlpha) {
      const auto p = make_params(l, alpha);
      for (const auto& cc : find_all(p)) {
        for (int sign : {+1, -1}) {
          const double vbar = sign * cc.v_bar;
          std::vector<std::complex<double>> lam;
          lam.emplace_back(2.0 * p.beta * vbar, 0.0);
          for (const double gamma : cc.hessian_eigs) {
            const double b = (1.0 - p.beta) * vbar;
            const double d = b * b + 4.0 * gamma;
            if (d >= 0.0) {
              lam.emplace_back((-b + std::sqrt(d)) / 2.0, 0.0);
              lam.emplace_back((-b - std::sqrt(d)) / 2.0, 0.0);
            } else {
              lam.emplace_back(-b / 2.0, std::sqrt(-d) / 2.0);
              lam.emplace_back(-b / 2.0, -std::sqrt(-d) / 2.0);
            }
          }
          std::sort(lam.begin(), lam.end(), [](const auto& x, const auto& y) {
            if (x.real() != y.real()) return x.real() < y.real();
            return x.imag() < y.imag();
          });
          const auto dense = numerics::eig_dense(linearization(p, cc, sign), 5);
          for (int i = 0; i < 5; ++i)
            worst = std::max(worst, std::abs(lam[i] - dense[i]));
        }
      }
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = worst < 1e-9;
  res.detail = "max eigenvalue route mismatch " + fmt(worst) + " (tol 1e-9)";
  return res;
}

CheckResult check_hyperbolicity(const CheckOptions& opt) {
  CheckResult res{5, "hyperbolicity-margin", false, "", 0};
  const auto t0 = Clock::now();
  double min_margin = 1e300;
  for (int l : sweep_l(opt.quick)) {
    for (double alpha : kSweepAlpha) {
      const auto p = make_params(l, alpha);
      for (const auto& cc : find_all(p)) {
        for (int sign : {+1, -1}) {
          const auto rep = classify(p, cc, sign);
          for (const auto& ev : rep.eigenvalues)
            min_margin =
                std::min(min_margin, std::abs(ev.real()) / cc.v_bar);
        }
      }
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = min_margin > 1e-6;
  res.detail =
      "min |Re lambda| / sqrt(2U) = " + fmt(min_margin) + " (floor 1e-6)";
  return res;
}

CheckResult check_derivative_oracles(const CheckOptions& opt) {
  CheckResult res{6, "derivative-oracles", false, "", 0};
  const auto t0 = Clock::now();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  const int n_points = opt.quick ? 25 : 100;
  const int ls[3] = {2, 3, 5};
  const double alphas[3] = {0.5, 1.0, 1.5};

  double worst_grad = 0.0, worst_hess = 0.0;
  for (int k = 0; k < n_points; ++k) {
    const auto p = make_params(ls[k % 3], alphas[(k / 3) % 3]);
    const auto rule = numerics::gauss_jacobi_rule(opt.quad_order, p.beta);
    const double theta = (0.08 + 0.84 * u01(rng)) * kPi / (2.0 * p.l);
    const double phi = 0.05 + 1.25 * u01(rng);
    const SphereConfig s{theta, phi};
    const double scale = std::max(1.0, u_direct(p, s));

    const auto u_of_theta = [&](double th) {
      return u_direct(p, SphereConfig{th, phi});
    };
    const auto u_of_phi = [&](double ph) {
      return u_direct(p, SphereConfig{theta, ph});
    };

    const double fd_t = fd_first(u_of_theta, theta, 1e-5);
    const double fd_p = fd_first(u_of_phi, phi, 1e-5);
    const double a_t = du_dtheta_direct(p, s);
    const double a_ti = du_dtheta(p, theta, r_of_phi(phi), rule);
    const double a_p = du_dphi(p, s).value;

    const auto rel = [&](double a, double b) {
      return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3 * scale});
    };
    worst_grad = std::max({worst_grad, rel(a_t, fd_t), rel(a_ti, fd_t),
                           rel(a_p, fd_p)});

    const Hessian2 h = hessian(p, s);
    const double fd_tt = fd_second(u_of_theta, theta, 1e-3);
    const double fd_pp = fd_second(u_of_phi, phi, 1e-3);
    const double fd_tp = fd_cross(
        [&](double th, double ph) { return u_direct(p, SphereConfig{th, ph}); },
        theta, phi, 1e-3);
    const double hscale = std::max(
        {std::abs(h.dtheta2), std::abs(h.dphi2), std::abs(h.dtheta_dphi), 1.0});
    const auto relh = [&](double a, double b) {
      return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3 * hscale});
    };
    worst_hess = std::max({worst_hess, relh(h.dtheta2, fd_tt),
                           relh(h.dphi2, fd_pp), relh(h.dtheta_dphi, fd_tp)});
  }
  res.seconds = seconds_since(t0);
  res.passed = worst_grad < 1e-6 && worst_hess < 1e-5;
  res.detail = "max gradient rel err " + fmt(worst_grad) +
               " (tol 1e-6), max Hessian rel err " + fmt(worst_hess) +
               " (tol 1e-5) at " + std::to_string(n_points) + " points";
  return res;
}

CheckResult check_flow_invariants(const CheckOptions& opt) {
  CheckResult res{7, "parabolic-flow-invariants", false, "", 0};
  const auto t0 = Clock::now();
  const auto p = make_params(3, 1.0);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  numerics::IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  cfg.max_steps = 5000000;

  // Almost every parabolic orbit is collision-bound in finite tau (the
  // stable manifolds of the equilibria have positive codimension in P), so
  // each run goes to tau = 20 or to its clean collision abort; the
  // invariants must hold along every recorded sample either way.
  const int n_traj = opt.quick ? 5 : 20;
  double worst_e = 0.0, worst_v_drop = 0.0;
  int completed = 0, checked = 0;
  std::size_t min_samples = SIZE_MAX;
  for (int k = 0; k < n_traj; ++k) {
    McGeheeState x;
    x.theta = (0.15 + 0.70 * u01(rng)) * kPi / 6.0;
    x.phi = 0.15 + 0.75 * u01(rng);
    x.v = 0.6 + 0.8 * u01(rng);
    x.w1 = -0.25 + 0.5 * u01(rng);
    x.w2 = -0.25 + 0.5 * u01(rng);
    x = project_to_parabolic(p, x);
    const auto traj = integrate_partial(p, x, {0.0, 20.0}, cfg);
    ++checked;
    if (traj.complete) ++completed;
    min_samples = std::min(min_samples, traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      worst_e = std::max(worst_e, std::abs(traj.energy[i]));
      if (i > 0)
        worst_v_drop = std::max(worst_v_drop,
                                traj.states[i - 1].v - traj.states[i].v);
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = checked == n_traj && min_samples >= 20 && worst_e < 1e-6 &&
               worst_v_drop < 1e-9;
  res.detail = std::to_string(checked) + " runs (" +
               std::to_string(completed) +
               " to tau=20, rest to the collision guard), max |E| = " +
               fmt(worst_e) + " (tol 1e-6), max v decrease " +
               fmt(worst_v_drop) + " (slack 1e-9)";
  return res;
}

CheckResult check_homothetic_lift(const CheckOptions&) {
  CheckResult res{8, "homothetic-lift", false, "", 0};
  const auto t0 = Clock::now();
  const auto p = make_params(3, 1.0);
  const auto cc = find_ngon(p);
  const double vbar = cc.v_bar;
  const double e = 1.0 + p.beta;
  const double t_start = 0.1, t_end = 10.0;
  const double tau_end = std::log(t_end / t_start) / (e * vbar);

  numerics::IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-14;
  cfg.max_step = 0.01;

  const auto traj = homothetic(p, cc, vbar, {0.0, tau_end}, cfg);
  const double rho0 = parabolic_homothetic_rho(p, cc, t_start, +1);
  const auto lifted = lift(p, traj, rho0);

  double worst = 0.0;
  for (std::size_t k = 0; k < lifted.size(); ++k) {
    const double t_phys = t_start + lifted.t[k];
    const double expect = parabolic_homothetic_rho(p, cc, t_phys, +1);
    worst = std::max(worst, std::abs(lifted.rho[k] / expect - 1.0));
  }
  res.seconds = seconds_since(t0);
  res.passed = worst < 1e-8;
  res.detail = "max rel error of integrated rho(t) vs closed form on [0.1,10]: " +
               fmt(worst) + " (tol 1e-8)";
  return res;
}

CheckResult check_appendix(const CheckOptions& opt) {
  CheckResult res{9, "appendix-suite", false, "", 0};
  const auto t0 = Clock::now();

  // (a) binomial integral identity
  double worst_binom = 0.0;
  for (double beta : {0.25, 0.5, 0.75}) {
    const auto rule = numerics::gauss_jacobi_rule(opt.quad_order, beta);
    for (int n = 0; n <= 10; ++n) {
      double acc = 0.0;
      for (int i = 0; i < rule.order; ++i)
        acc += rule.weights[i] * std::pow(rule.nodes[i], n);
      const double lhs = std::sin(beta * kPi) / kPi * acc;
      double rhs = 1.0;  // |binom(-beta, n)| by the product formula
      for (int k = 0; k < n; ++k) rhs *= (beta + k) / (k + 1.0);
      worst_binom = std::max(worst_binom, std::abs(lhs - rhs));
    }
  }

  // (b) the b-series reconstructs |1 - r xi|^{-alpha} at r = 0.5
  const auto p1 = make_params(2, 1.0);
  const auto rule1 = numerics::gauss_jacobi_rule(opt.quad_order, p1.beta);
  const auto coeffs = perron_b_series(p1, 0.5, 40, rule1);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  double worst_series = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double psi = ang(rng);
    double s = coeffs.b[0];
    for (int n = 1; n <= coeffs.n_max; ++n)
      s += 2.0 * coeffs.b[n] * std::cos(n * psi);
    const double sh = std::sin(psi / 2.0);
    const double direct =
        std::pow(0.25 + 2.0 * sh * sh, -p1.beta);  // |1-0.5 e^{i psi}|^{-1}
    worst_series = std::max(worst_series, std::abs(s - direct));
  }

  // (c) the l = 2 constant C_1 = 2^beta - 1
  double worst_c1 = 0.0;
  for (double alpha = 0.25; alpha < 1.8; alpha += 0.25) {
    const auto p = make_params(2, alpha);
    const auto crit = antiprism_criterion(p);
    worst_c1 = std::max(
        worst_c1, std::abs(crit.sum_cj / 2.0 - (std::pow(2.0, p.beta) - 1.0)));
  }

  // (d) the existence inequality for l >= 3, and the l = 2 root via the
  // analytic reduction tan^2(phi) = 1/2
  bool holds = true;
  for (int l = 3; l <= 12; ++l)
    for (double alpha = 0.25; alpha < 1.8; alpha += 0.25)
      holds = holds && antiprism_criterion(make_params(l, alpha)).holds;
  double worst_l2_root = 0.0;
  const double anti_phi = std::asin(1.0 / std::sqrt(3.0));
  for (double alpha : kSweepAlpha) {
    const auto p = make_params(2, alpha);
    const auto cc = find_antiprism(p);
    worst_l2_root = std::max(worst_l2_root, std::abs(cc.s.phi - anti_phi));
    const double eps = 1e-6;
    const bool change =
        f_theta(p, kPi / 4.0, cc.s.phi * 0.9) < 0.0 &&
        f_theta(p, kPi / 4.0, std::min(cc.s.phi * 1.1, kPi / 2.0 - eps)) > 0.0;
    holds = holds && change;
  }

  res.seconds = seconds_since(t0);
  res.passed = worst_binom < 1e-12 && worst_series < 1e-6 &&
               worst_c1 < 1e-12 && holds && worst_l2_root < 1e-9;
  res.detail = "binomial " + fmt(worst_binom) + " (1e-12), series " +
               fmt(worst_series) + " (1e-6), C1 " + fmt(worst_c1) +
               " (1e-12), inequality l=3..12 " + (holds ? "holds" : "FAILS") +
               ", l=2 root dev " + fmt(worst_l2_root);
  return res;
}

CheckResult check_completeness(const CheckOptions& opt) {
  CheckResult res{10, "completeness-scan", false, "", 0};
  const auto t0 = Clock::now();
  const int n = opt.quick ? 100 : 200;
  double min_outside = 1e300, max_residual = 0.0;
  for (int l : {2, 3, 5}) {
    const auto p = make_params(l, 1.0);
    const auto scan = completeness_scan(p, n, n, 1e-2);
    min_outside = std::min(min_outside, scan.min_outside);
    max_residual = std::max(max_residual, scan.max_cc_residual);
  }
  res.seconds = seconds_since(t0);
  res.passed = min_outside > 1e-3 && max_residual < 1e-9 && res.seconds < 60.0;
  res.detail = "min gradient norm outside 1e-2 balls " + fmt(min_outside) +
               " (floor 1e-3), max residual at the three points " +
               fmt(max_residual) + ", " + fmt(res.seconds) +
               " s (budget 60 s)";
  return res;
}

}  // namespace

std::vector<CheckResult> run_acceptance(const CheckOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(check_table1(opt));
  out.push_back(check_l2_degenerations(opt));
  out.push_back(check_representation(opt));
  out.push_back(check_eigen_dual(opt));
  out.push_back(check_hyperbolicity(opt));
  out.push_back(check_derivative_oracles(opt));
  out.push_back(check_flow_invariants(opt));
  out.push_back(check_homothetic_lift(opt));
  out.push_back(check_appendix(opt));
  out.push_back(check_completeness(opt));
  return out;
}

}  // namespace dihedral::checks
