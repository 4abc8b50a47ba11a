#include <cmath>
#include <complex>
#include <random>

#include "dihedral/errors.hpp"
#include "dihedral/params.hpp"
#include "dihedral/potential.hpp"
#include "doctest.h"

using namespace dihedral;
using dihedral::numerics::gauss_jacobi_rule;

TEST_CASE("perron_b: normalisation and the r^n factor") {
  const auto p = make_params(2, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);
  // b_0 at r = 0 is (sin(beta pi)/pi) B(beta, 1-beta) = 1 exactly
  CHECK(perron_b(p, 0, 0.0, rule) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(perron_b(p, 3, 0.0, rule) == 0.0);

  CHECK_THROWS_AS(perron_b(p, -1, 0.5, rule), DomainError);
  CHECK_THROWS_AS(perron_b(p, 2, 1.0, rule), DomainError);
}

TEST_CASE("perron_b decreases in n at fixed r < 1") {
  const auto p = make_params(3, 1.5);
  const auto rule = gauss_jacobi_rule(64, p.beta);
  double prev = perron_b(p, 0, 0.5, rule);
  CHECK(prev > 0.0);
  for (int n = 1; n <= 20; ++n) {
    const double cur = perron_b(p, n, 0.5, rule);
    CHECK(cur > 0.0);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("b-series reconstructs |1 - r xi|^{-alpha}") {
  const auto p = make_params(2, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);
  const auto coeffs = perron_b_series(p, 0.5, 40, rule);

  const double psi = kPi / 3.0;
  double series = coeffs.b[0];
  for (int n = 1; n <= coeffs.n_max; ++n)
    series += 2.0 * coeffs.b[n] * std::cos(n * psi);

  const std::complex<double> xi = std::polar(1.0, psi);
  const double direct = std::pow(std::abs(1.0 - 0.5 * xi), -p.alpha);
  CHECK(direct == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::abs(series - direct) < 1e-6);
}

TEST_CASE("perron_apply: averaging value at l=2, r=1/2, xi=1") {
  const auto p = make_params(2, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);
  // (|1 - 0.5|^{-1} + |1 + 0.5|^{-1}) / 2 = 4/3
  CHECK(perron_apply(p, 0.5, {1.0, 0.0}, rule) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(perron_average(p, 0.5, {1.0, 0.0}) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("perron_apply agrees with the averaging definition") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (int l : {2, 3, 5}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const auto p = make_params(l, alpha);
      const auto rule = gauss_jacobi_rule(64, p.beta);
      for (double r : {0.2, 0.5, 0.8}) {
        for (int k = 0; k < 5; ++k) {
          const auto xi = std::polar(1.0, ang(rng));
          const double a = perron_apply(p, r, xi, rule);
          const double b = perron_average(p, r, xi);
          CHECK(a == doctest::Approx(b).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("perron_apply agrees with the truncated coefficient series") {
  const auto p = make_params(3, 1.0);
  const auto rule = gauss_jacobi_rule(64, p.beta);
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (double r : {0.3, 0.5, 0.7}) {
    for (int k = 0; k < 5; ++k) {
      const auto xi = std::polar(1.0, ang(rng));
      const double closed = perron_apply(p, r, xi, rule);
      const double series = perron_apply_series(p, r, xi, rule);
      CHECK(std::abs(closed - series) < 1e-8);
    }
  }
}

TEST_CASE("monomial selection rule of the l-adic average") {
  // averaging xi^k over the l preimages kills every k not divisible by l
  for (int l : {2, 3, 5}) {
    for (int k = 0; k <= 12; ++k) {
      const double psi = 0.73;  // argument of the base point
      std::complex<double> acc = 0.0;
      for (int j = 0; j < l; ++j)
        acc += std::pow(std::polar(1.0, (psi + 2.0 * kPi * j) / l),
                        static_cast<double>(k));
      acc /= static_cast<double>(l);
      if (k % l == 0) {
        const auto expect = std::polar(1.0, psi * (k / l));
        CHECK(std::abs(acc - expect) < 1e-12);
      } else {
        CHECK(std::abs(acc) < 1e-12);
      }
    }
  }
}

TEST_CASE("binomial integral identity") {
  for (double beta : {0.25, 0.5, 0.75}) {
    const auto rule = gauss_jacobi_rule(64, beta);
    for (int n = 0; n <= 10; ++n) {
      double quad = 0.0;
      for (int i = 0; i < rule.order; ++i)
        quad += rule.weights[i] * std::pow(rule.nodes[i], n);
      quad *= std::sin(beta * kPi) / kPi;
      double expect = 1.0;
      for (int k = 0; k < n; ++k) expect *= (beta + k) / (k + 1.0);
      CHECK(std::abs(quad - expect) < 1e-12);
    }
  }
}
