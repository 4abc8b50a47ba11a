#pragma once

// Central configurations of the dihedral problem and their stability. All of
// them are symmetric under one of the three reflections, which pins the
// planar 2l-gon to (theta, phi) = (pi/(2l), 0), prisms to theta = 0 and
// antiprisms to theta = pi/(2l) with phi > 0; the latter two latitudes are
// the unique roots of f_theta in (0, pi/2).

#include <array>
#include <complex>
#include <vector>

#include "dihedral/params.hpp"
#include "dihedral/potential.hpp"

namespace dihedral {

enum class Family { NGon2l, Prism, Antiprism };

const char* family_name(Family f);

// Number of copies of a family representative on the whole shape sphere
// (orbit of the representative under the symmetry group).
int family_multiplicity(const ProblemParams& p, Family f);

struct CentralConfiguration {
  Family family = Family::NGon2l;
  SphereConfig s;
  double u_value = 0;                        // U at s
  double v_bar = 0;                          // +sqrt(2 u_value)
  std::array<double, 2> hessian_eigs{0, 0};  // gamma_1 >= gamma_2 (see below)
};

// The canonical representative of each family in the fundamental wedge.
// hessian_eigs are the eigenvalues of the linearization sub-block
//   [ U_tt / cos^2(phi)   U_tp ]
//   [ U_tp                U_pp ],
// which is diagonal at every central configuration.
CentralConfiguration find_ngon(const ProblemParams& p);
CentralConfiguration find_prism(const ProblemParams& p, double tol = 1e-12);
CentralConfiguration find_antiprism(const ProblemParams& p,
                                    double tol = 1e-12);

// One representative per family: { 2l-gon, prism, antiprism }.
std::vector<CentralConfiguration> find_all(const ProblemParams& p);

// The antiprism existence inequality 2 sum_{j<=l/2} C_j > d_l, with
//   C_j = s_j^{-(beta+1)} - s_j^{-beta} - (sin^2(j pi/l))^{-beta},
//   s_j = sin^2(j pi/l - pi/(2l)),
// and d_l the parity constant stored in ProblemParams. At l = 2 the
// inequality with d_2 = 1 can fail for small alpha even though the root
// always exists there (f reduces to 1 - (1/2 + tan^2 phi)^{-(beta+1)}).
struct AntiprismCriterion {
  double sum_cj = 0;    // 2 * sum_{j=1}^{floor(l/2)} C_j
  double threshold = 0; // d_l
  bool holds = false;
};
AntiprismCriterion antiprism_criterion(const ProblemParams& p);

// 5x5 linearization of the projected flow at (v_sign * v_bar, s, 0),
// row-major, state order (v, theta, phi, w1, w2).
using Matrix5 = std::array<double, 25>;
Matrix5 linearization(const ProblemParams& p, const CentralConfiguration& cc,
                      int v_sign);

struct StabilityReport {
  int v_sign = +1;
  std::array<std::complex<double>, 5> eigenvalues{};  // sorted by (re, im)
  int dim_stable = 0;
  int dim_unstable = 0;
  int dim_stable_in_p = 0;
  int dim_unstable_in_p = 0;
};

// Eigenvalues computed both from the quadratic lambda^2 + (1-beta) v lambda
// = gamma per Hessian eigenvalue (plus the decoupled 2 beta v) and from the
// dense eigensolver on the assembled matrix; the two routes must agree to
// 1e-9 or ConvergenceError is thrown. HyperbolicityError if any eigenvalue
// real part is below 1e-10 in magnitude.
StabilityReport classify(const ProblemParams& p,
                         const CentralConfiguration& cc, int v_sign);

// Dense scan of || covariant gradient || over the fundamental wedge,
// excluding exclusion_radius-balls around the three central configurations.
// min_outside is the smallest norm seen outside the balls; a strictly
// positive floor there means the three representatives are the only zeros.
struct GridScanResult {
  double min_outside = 0;
  double max_cc_residual = 0;  // gradient norm at the three representatives
  int n_theta = 0;
  int n_phi = 0;
};
GridScanResult completeness_scan(const ProblemParams& p, int n_theta = 200,
                                 int n_phi = 200,
                                 double exclusion_radius = 1e-2);

}  // namespace dihedral
