#pragma once

// Command-line surface: central-configuration tables, potential grids, flow
// runs, Perron-operator residual reports and the acceptance suite, with CSV
// or JSON output for external plotting.

#include <iosfwd>
#include <string>
#include <vector>

namespace dihedral::cli {

enum class Command { Cc, Potential, Flow, Perron, Check };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  Command command = Command::Cc;
  int l = 2;
  double alpha = 1.0;
  int quad_order = 64;  // overridable via DIHEDRAL_QUAD_ORDER
  OutputFormat format = OutputFormat::Csv;
  std::string output = "-";  // "-" = stdout
  double tol = 1e-12;

  // potential grid
  int n_theta = 50;
  int n_phi = 50;
  double theta_min = -1.0;  // < 0: auto-inset wedge grid (cell centers)
  double theta_max = -1.0;
  double phi_min = -1.0;
  double phi_max = -1.0;
  bool allow_clip = false;

  // flow
  double v = 0.0, theta = 0.5, phi = 0.3, w1 = 0.0, w2 = 0.0;
  double tau_end = 10.0;
  double rel_tol = 1e-10, abs_tol = 1e-12, max_step = 0.0;
  bool parabolic = false;
  bool do_lift = false;
  double rho0 = 1.0;
  bool homothetic = false;
  std::string family = "ngon2l";
  double v0 = 0.0;
  bool v0_set = false;

  // perron
  double r = 0.5;
  int n_max = 10;

  // check
  bool quick = false;
};

// Exit codes: 0 ok, 1 usage or parameter errors, 2 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace dihedral::cli
