#include "dihedral/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dihedral/errors.hpp"

namespace dihedral::numerics {

namespace {

double beta_fn(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

}  // namespace

void jacobi_rule(int order, double a, double b, std::vector<double>& nodes,
                 std::vector<double>& weights) {
  if (order < 2) throw DomainError("jacobi_rule: order must be >= 2");
  if (!(a > -1.0) || !(b > -1.0))
    throw DomainError("jacobi_rule: weight exponents must exceed -1");

  // Monic three-term recurrence for Jacobi polynomials with weight
  // (1-x)^a (1+x)^b on [-1,1] (Gautschi's r_jacobi).
  Eigen::VectorXd diag(order);
  Eigen::VectorXd offdiag(order - 1);
  const double apb = a + b;
  diag[0] = (b - a) / (apb + 2.0);
  for (int n = 1; n < order; ++n)
    diag[n] = (b * b - a * a) / ((2.0 * n + apb) * (2.0 * n + apb + 2.0));
  offdiag[0] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) /
                         ((apb + 2.0) * (apb + 2.0) * (apb + 3.0)));
  for (int n = 2; n < order; ++n) {
    const double den = 2.0 * n + apb;
    offdiag[n - 1] = std::sqrt(4.0 * n * (n + a) * (n + b) * (n + apb) /
                               (den * den * (den + 1.0) * (den - 1.0)));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("jacobi_rule: tridiagonal eigensolve failed");

  // Nodes mapped to (0,1); weights scaled so that sum w_i = B(a+1, b+1),
  // the total mass of (1-t)^a t^b on (0,1).
  const double mass = beta_fn(a + 1.0, b + 1.0);
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < order; ++i) {
    nodes[i] = 0.5 * (1.0 + es.eigenvalues()[i]);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mass * v0 * v0;
  }
}

QuadratureRule gauss_jacobi_rule(int order, double beta) {
  if (order < 2) throw DomainError("gauss_jacobi_rule: order must be >= 2");
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("gauss_jacobi_rule: beta must lie in (0,1)");
  QuadratureRule rule;
  rule.beta = beta;
  rule.order = order;
  jacobi_rule(order, -beta, beta - 1.0, rule.nodes, rule.weights);
  return rule;
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  if (!(tol > 0.0)) throw DomainError("brent_root: tol must be positive");
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw BracketError("brent_root: f(a) and f(b) have the same sign");

  constexpr int kMaxIter = 200;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = b - a;

  for (int iter = 0; iter < kMaxIter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation (secant when a == c)
      const double s = fb / fa;
      double pp, qq;
      if (a == c) {
        pp = 2.0 * xm * s;
        qq = 1.0 - s;
      } else {
        const double q = fa / fc, r = fb / fc;
        pp = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        qq = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (pp > 0.0) qq = -qq;
      pp = std::abs(pp);
      if (2.0 * pp < std::min(3.0 * xm * qq - std::abs(tol1 * qq),
                              std::abs(e * qq))) {
        e = d;
        d = pp / qq;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw ConvergenceError("brent_root: iteration cap reached");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// b - b*: coefficients of the embedded error estimate.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

}  // namespace

std::vector<IntegrationSample> rk_integrate(
    const VectorField& field, std::span<const double> y0,
    std::pair<double, double> tau_span, const IntegratorConfig& cfg,
    std::vector<IntegrationSample>* accepted) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
    throw DomainError("rk_integrate: tolerances must be positive");
  if (cfg.max_steps < 1)
    throw DomainError("rk_integrate: max_steps must be positive");

  const std::size_t n = y0.size();
  const double t0 = tau_span.first, t1 = tau_span.second;
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  std::vector<IntegrationSample> out;
  out.push_back({t0, std::vector<double>(y0.begin(), y0.end())});
  if (accepted) accepted->push_back(out.front());
  if (span == 0.0) return out;

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n);

  double t = t0;
  field(t, y, k1);  // a collision at the initial point is the caller's error

  double h = dir * std::min(0.01 * span, span);
  if (cfg.max_step > 0.0) h = dir * std::min(std::abs(h), cfg.max_step);

  const auto stage = [&](double tt, const std::vector<double>& yy,
                         std::vector<double>& kk) {
    field(tt, yy, kk);
  };

  long attempts = 0;
  while (true) {
    if (++attempts > cfg.max_steps)
      throw StepFailure("rk_integrate: step budget exhausted", t, y);

    const double remaining = t1 - t;
    bool final_step = false;
    if (std::abs(h) >= std::abs(remaining)) {
      h = remaining;
      final_step = true;
    }
    const double hmin =
        16.0 * std::numeric_limits<double>::epsilon() *
        std::max({std::abs(t), std::abs(t1), 1e-12});
    if (std::abs(h) < hmin && !final_step)
      throw StepFailure("rk_integrate: step size underflow", t, y);

    double err = 0.0;
    bool rejected_by_field = false;
    try {
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
      stage(t + kC2 * h, ytmp, k2);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
      stage(t + kC3 * h, ytmp, k3);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
      stage(t + kC4 * h, ytmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] +
                              kA54 * k4[i]);
      stage(t + kC5 * h, ytmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                              kA64 * k4[i] + kA65 * k5[i]);
      stage(t + h, ytmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                              kB5 * k5[i] + kB6 * k6[i]);
      stage(t + h, ynew, k7);  // FSAL

      for (std::size_t i = 0; i < n; ++i) {
        const double ei = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] +
                               kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
        const double sc = cfg.abs_tol +
                          cfg.rel_tol * std::max(std::abs(y[i]),
                                                 std::abs(ynew[i]));
        err += (ei / sc) * (ei / sc);
      }
      err = std::sqrt(err / static_cast<double>(n));
    } catch (const CollisionError&) {
      rejected_by_field = true;
    }

    if (rejected_by_field || !std::isfinite(err)) {
      if (std::abs(h) * 0.5 < hmin)
        throw StepFailure("rk_integrate: singular set reached", t, y);
      h *= 0.5;
      continue;
    }

    const double fac =
        std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = final_step ? t1 : t + h;
      y.swap(ynew);
      k1.swap(k7);
      out.push_back({t, y});
      if (accepted) accepted->push_back(out.back());
      if (final_step) break;
      h *= fac;
      if (cfg.max_step > 0.0 && std::abs(h) > cfg.max_step)
        h = dir * cfg.max_step;
    } else {
      h *= std::min(fac, 1.0);
    }
  }
  return out;
}

std::vector<std::complex<double>> eig_dense(std::span<const double> m, int n) {
  if (n < 1 || n > 5) throw DomainError("eig_dense: dimension must be 1..5");
  if (static_cast<int>(m.size()) != n * n)
    throw DomainError("eig_dense: matrix size does not match dimension");

  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = m[i * n + j];

  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("eig_dense: QR iteration failed");

  std::vector<std::complex<double>> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = es.eigenvalues()[i];
  std::sort(eigs.begin(), eigs.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return eigs;
}

}  // namespace dihedral::numerics
