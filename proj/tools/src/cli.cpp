#include "cli.hpp"

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "dihedral/central_configs.hpp"
#include "dihedral/checks.hpp"
#include "dihedral/errors.hpp"
#include "dihedral/mcgehee.hpp"
#include "dihedral/numerics.hpp"
#include "dihedral/params.hpp"
#include "dihedral/potential.hpp"
#include "json.hpp"

namespace dihedral::cli {

namespace {

using nlohmann::ordered_json;

// Full-precision decimal rendering so regression diffs and round-trips are
// byte-stable.
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path == "-" || path.empty()) {
      os_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw DomainError("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

// One tabular payload rendered as CSV or a JSON array of records. Values are
// kept typed so JSON output carries real numbers.
struct Table {
  std::vector<std::string> columns;
  using Cell = std::variant<long long, double, std::string>;
  std::vector<std::vector<Cell>> rows;

  void write(std::ostream& os, OutputFormat format) const {
    if (format == OutputFormat::Csv) {
      for (std::size_t c = 0; c < columns.size(); ++c)
        os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (const auto* i = std::get_if<long long>(&row[c]))
            os << *i;
          else if (const auto* d = std::get_if<double>(&row[c]))
            os << fmt17(*d);
          else
            os << std::get<std::string>(row[c]);
          os << (c + 1 < row.size() ? "," : "\n");
        }
      }
    } else {
      ordered_json arr = ordered_json::array();
      for (const auto& row : rows) {
        ordered_json rec;
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (const auto* i = std::get_if<long long>(&row[c]))
            rec[columns[c]] = *i;
          else if (const auto* d = std::get_if<double>(&row[c]))
            rec[columns[c]] = *d;
          else
            rec[columns[c]] = std::get<std::string>(row[c]);
        }
        arr.push_back(std::move(rec));
      }
      os << arr.dump(2) << "\n";
    }
  }
};

Family family_from_name(const std::string& name) {
  if (name == "ngon2l" || name == "ngon") return Family::NGon2l;
  if (name == "prism") return Family::Prism;
  if (name == "antiprism") return Family::Antiprism;
  throw DomainError("unknown family: " + name +
                    " (expected ngon2l, prism or antiprism)");
}

CentralConfiguration find_family(const ProblemParams& p, Family f) {
  switch (f) {
    case Family::NGon2l: return find_ngon(p);
    case Family::Prism: return find_prism(p);
    case Family::Antiprism: return find_antiprism(p);
  }
  throw DomainError("unknown family");
}

int cmd_cc(const RunConfig& cfg, std::ostream& out) {
  const auto p = make_params(cfg.l, cfg.alpha);

  Table t;
  t.columns = {"l",        "alpha",     "family",   "theta",
               "phi",      "u",         "v_bar_sign"};
  t.columns.push_back("gamma1");
  t.columns.push_back("gamma2");
  for (int i = 1; i <= 5; ++i) {
    t.columns.push_back("eig" + std::to_string(i) + "_re");
    t.columns.push_back("eig" + std::to_string(i) + "_im");
  }
  t.columns.insert(t.columns.end(),
                   {"dim_stable", "dim_unstable", "dim_stable_in_P",
                    "dim_unstable_in_P"});

  for (const auto& cc : find_all(p)) {
    for (int sign : {+1, -1}) {
      const auto rep = classify(p, cc, sign);
      std::vector<Table::Cell> row;
      row.emplace_back(static_cast<long long>(p.l));
      row.emplace_back(p.alpha);
      row.emplace_back(std::string(family_name(cc.family)));
      row.emplace_back(cc.s.theta);
      row.emplace_back(cc.s.phi);
      row.emplace_back(cc.u_value);
      row.emplace_back(static_cast<long long>(sign));
      row.emplace_back(cc.hessian_eigs[0]);
      row.emplace_back(cc.hessian_eigs[1]);
      for (const auto& ev : rep.eigenvalues) {
        row.emplace_back(ev.real());
        row.emplace_back(ev.imag());
      }
      row.emplace_back(static_cast<long long>(rep.dim_stable));
      row.emplace_back(static_cast<long long>(rep.dim_unstable));
      row.emplace_back(static_cast<long long>(rep.dim_stable_in_p));
      row.emplace_back(static_cast<long long>(rep.dim_unstable_in_p));
      t.rows.push_back(std::move(row));
    }
  }
  t.write(out, cfg.format);
  return 0;
}

int cmd_potential(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto p = make_params(cfg.l, cfg.alpha);
  if (cfg.n_theta < 1 || cfg.n_phi < 1)
    throw DomainError("potential: grid must be at least 1x1");

  const bool explicit_bounds = cfg.theta_min >= 0.0 || cfg.phi_min >= 0.0 ||
                               cfg.theta_max >= 0.0 || cfg.phi_max >= 0.0;
  const double tmin = cfg.theta_min >= 0.0 ? cfg.theta_min : 0.0;
  const double tmax = cfg.theta_max >= 0.0 ? cfg.theta_max : kPi / (2.0 * p.l);
  const double pmin = cfg.phi_min >= 0.0 ? cfg.phi_min : 0.0;
  const double pmax = cfg.phi_max >= 0.0 ? cfg.phi_max : kPi / 2.0 - 0.01;

  Table t;
  t.columns = {"theta", "phi", "U", "dU_dtheta", "dU_dphi"};
  int clipped = 0;
  for (int i = 0; i < cfg.n_theta; ++i) {
    // auto-inset grids sample cell centers; explicit bounds are inclusive
    const double theta =
        explicit_bounds
            ? tmin + (cfg.n_theta == 1 ? 0.0
                                       : i * (tmax - tmin) / (cfg.n_theta - 1))
            : tmin + (i + 0.5) * (tmax - tmin) / cfg.n_theta;
    for (int j = 0; j < cfg.n_phi; ++j) {
      const double phi =
          explicit_bounds
              ? pmin + (cfg.n_phi == 1 ? 0.0
                                       : j * (pmax - pmin) / (cfg.n_phi - 1))
              : pmin + (j + 0.5) * (pmax - pmin) / cfg.n_phi;
      if (is_collision(p, theta, phi)) {
        if (!cfg.allow_clip) {
          err << "potential: grid point (theta=" << fmt17(theta)
              << ", phi=" << fmt17(phi)
              << ") lies in the collision set; re-run with --allow-clip to "
                 "skip such points\n";
          return 1;
        }
        ++clipped;
        continue;
      }
      const SphereConfig s{theta, phi};
      t.rows.push_back({theta, phi, u_direct(p, s), du_dtheta_direct(p, s),
                        du_dphi(p, s).value});
    }
  }
  t.write(out, cfg.format);
  if (clipped > 0)
    err << "potential: clipped " << clipped << " collision grid points\n";
  return 0;
}

int cmd_flow(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto p = make_params(cfg.l, cfg.alpha);

  numerics::IntegratorConfig icfg;
  icfg.rel_tol = cfg.rel_tol;
  icfg.abs_tol = cfg.abs_tol;
  icfg.max_step = cfg.max_step;

  Trajectory traj;
  bool truncated = false;
  if (cfg.homothetic) {
    const auto cc = find_family(p, family_from_name(cfg.family));
    const double v0 = cfg.v0_set ? cfg.v0 : cc.v_bar;
    traj = homothetic(p, cc, v0, {0.0, cfg.tau_end}, icfg);
    if (traj.blew_up)
      err << "flow: homothetic branch escaped in finite time, tau ~ "
          << fmt17(traj.escape_tau) << "\n";
  } else {
    McGeheeState x0{cfg.v, cfg.theta, cfg.phi, cfg.w1, cfg.w2};
    if (cfg.parabolic) x0 = project_to_parabolic(p, x0);
    traj = integrate_partial(p, x0, {0.0, cfg.tau_end}, icfg);
    truncated = !traj.complete;
    if (truncated && traj.size() > 0) {
      const auto& x = traj.states.back();
      err << "flow: aborted near the singular set; last good sample at tau = "
          << fmt17(traj.tau.back()) << " state = (" << fmt17(x.v) << ", "
          << fmt17(x.theta) << ", " << fmt17(x.phi) << ", " << fmt17(x.w1)
          << ", " << fmt17(x.w2) << ")\n";
    }
  }

  if (cfg.do_lift) traj = lift(p, traj, cfg.rho0);

  Table t;
  t.columns = {"tau", "v", "theta", "phi", "w1", "w2", "E"};
  if (cfg.do_lift) {
    t.columns.push_back("rho");
    t.columns.push_back("t");
  }
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& x = traj.states[k];
    std::vector<Table::Cell> row{traj.tau[k], x.v,  x.theta, x.phi,
                                 x.w1,        x.w2, traj.energy[k]};
    if (cfg.do_lift) {
      row.emplace_back(traj.rho[k]);
      row.emplace_back(traj.t[k]);
    }
    t.rows.push_back(std::move(row));
  }
  t.write(out, cfg.format);
  return truncated ? 2 : 0;
}

int cmd_perron(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto p = make_params(cfg.l, cfg.alpha);
  if (!(cfg.r > 0.0 && cfg.r < 1.0))
    throw DomainError("perron: r must lie in (0,1)");
  const auto rule = numerics::gauss_jacobi_rule(cfg.quad_order, p.beta);
  const auto rule2 = numerics::gauss_jacobi_rule(2 * cfg.quad_order, p.beta);

  Table t;
  t.columns = {"kind", "index", "value", "reference", "residual"};
  double max_residual = 0.0;

  // b_n against the order-doubled rule
  for (int n = 0; n <= cfg.n_max; ++n) {
    const double b = perron_b(p, n, cfg.r, rule);
    const double b2 = perron_b(p, n, cfg.r, rule2);
    t.rows.push_back({std::string("b_n"), static_cast<long long>(n), b, b2,
                      std::abs(b - b2)});
  }

  // closed form against the averaging definition and the coefficient series
  for (int k = 0; k < 8; ++k) {
    const double psi = 2.0 * kPi * k / 8.0;
    const auto xi = std::polar(1.0, psi);
    const double closed = perron_apply(p, cfg.r, xi, rule);
    const double avg = perron_average(p, cfg.r, xi);
    const double series = perron_apply_series(p, cfg.r, xi, rule);
    t.rows.push_back({std::string("closed_vs_average"),
                      static_cast<long long>(k), closed, avg,
                      std::abs(closed - avg)});
    t.rows.push_back({std::string("closed_vs_series"),
                      static_cast<long long>(k), closed, series,
                      std::abs(closed - series)});
    max_residual = std::max({max_residual, std::abs(closed - avg),
                             std::abs(closed - series)});
  }
  t.write(out, cfg.format);

  if (max_residual > 1e-8)
    err << "perron: warning, max residual " << fmt17(max_residual)
        << " exceeds 1e-8; consider raising --quad-order (r close to 1 "
           "converges slowly)\n";
  return 0;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  checks::CheckOptions opt;
  opt.quick = cfg.quick;
  opt.quad_order = cfg.quad_order;
  const auto results = checks::run_acceptance(opt);

  bool all_ok = true;
  if (cfg.format == OutputFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
      all_ok = all_ok && r.passed;
      arr.push_back({{"id", r.id},
                     {"name", r.name},
                     {"passed", r.passed},
                     {"detail", r.detail},
                     {"seconds", r.seconds}});
    }
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      all_ok = all_ok && r.passed;
      char line[512];
      std::snprintf(line, sizeof line, "%s  %2d  %-28s %s  [%.2f s]\n",
                    r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str(), r.seconds);
      out << line;
    }
    out << (all_ok ? "all criteria passed\n" : "FAILURES present\n");
  }
  return all_ok ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("DIHEDRAL_QUAD_ORDER")) {
    const int v = std::atoi(env);
    if (v >= 2) cfg.quad_order = v;
  }

  CLI::App app{"dihedral 2l-body problem: potentials, central "
               "configurations, stability and regularised flow"};
  app.require_subcommand(1);

  const std::map<std::string, OutputFormat> format_names{
      {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};

  const auto add_common = [&](CLI::App* c) {
    c->add_option("--l", cfg.l, "half the body count (>= 2)");
    c->add_option("--alpha", cfg.alpha, "potential exponent in (0,2)");
    c->add_option("--quad-order", cfg.quad_order, "Gauss-Jacobi order");
    c->add_option("--format", cfg.format, "output format")
        ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
    c->add_option("--output", cfg.output, "output path ('-' = stdout)");
  };

  auto* cc = app.add_subcommand("cc", "central configurations and stability");
  add_common(cc);
  cc->add_option("--tol", cfg.tol, "latitude root tolerance");

  auto* pot = app.add_subcommand("potential", "potential grid over the wedge");
  add_common(pot);
  pot->add_option("--n-theta", cfg.n_theta);
  pot->add_option("--n-phi", cfg.n_phi);
  pot->add_option("--theta-min", cfg.theta_min);
  pot->add_option("--theta-max", cfg.theta_max);
  pot->add_option("--phi-min", cfg.phi_min);
  pot->add_option("--phi-max", cfg.phi_max);
  pot->add_flag("--allow-clip", cfg.allow_clip,
                "skip grid points inside the collision guard");

  auto* flow = app.add_subcommand("flow", "integrate the projected flow");
  add_common(flow);
  flow->add_option("--v", cfg.v);
  flow->add_option("--theta", cfg.theta);
  flow->add_option("--phi", cfg.phi);
  flow->add_option("--w1", cfg.w1);
  flow->add_option("--w2", cfg.w2);
  flow->add_option("--tau-end", cfg.tau_end);
  flow->add_option("--rel-tol", cfg.rel_tol);
  flow->add_option("--abs-tol", cfg.abs_tol);
  flow->add_option("--max-step", cfg.max_step);
  flow->add_flag("--parabolic", cfg.parabolic,
                 "project the start onto the parabolic manifold");
  flow->add_flag("--lift", cfg.do_lift, "append rho and physical time");
  flow->add_option("--rho0", cfg.rho0, "initial scale for --lift");
  flow->add_flag("--homothetic", cfg.homothetic,
                 "frozen-shape run from a central configuration");
  flow->add_option("--family", cfg.family, "ngon2l | prism | antiprism");
  flow->add_option("--v0", cfg.v0, "homothetic initial v (default +v_bar)")
      ->each([&](const std::string&) { cfg.v0_set = true; });

  auto* per = app.add_subcommand("perron", "Perron-operator residual report");
  add_common(per);
  per->add_option("--r", cfg.r, "radius in (0,1)");
  per->add_option("--n-max", cfg.n_max, "largest coefficient index");

  auto* chk = app.add_subcommand("check", "run the acceptance suite");
  chk->add_option("--quad-order", cfg.quad_order);
  chk->add_option("--format", cfg.format, "output format")
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
  chk->add_flag("--quick", cfg.quick, "smaller sweeps");
  chk->add_flag_callback("--json",
                         [&] { cfg.format = OutputFormat::Json; },
                         "shorthand for --format json");

  std::vector<const char*> argv;
  argv.push_back("dihedral");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    const int code = app.exit(e, os, os);
    (code == 0 ? out : err) << os.str();
    return code == 0 ? 0 : 1;
  }

  try {
    OutputTarget target(cfg.output, out);
    if (cc->parsed()) return cmd_cc(cfg, target.stream());
    if (pot->parsed()) return cmd_potential(cfg, target.stream(), err);
    if (flow->parsed()) return cmd_flow(cfg, target.stream(), err);
    if (per->parsed()) return cmd_perron(cfg, target.stream(), err);
    if (chk->parsed()) return cmd_check(cfg, target.stream());
  } catch (const StepFailure& e) {
    err << "numerical failure: " << e.what() << " (tau = "
        << fmt17(e.tau_reached) << ")\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const HyperbolicityError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dihedral::cli
