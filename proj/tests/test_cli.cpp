#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dihedral/central_configs.hpp"
#include "dihedral/params.hpp"
#include "doctest.h"
#include "json.hpp"

using dihedral::cli::run_cli;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream is(line);
  std::string cell;
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

TEST_CASE("cli cc: six records, family-then-sign order, tetrahedron angle") {
  const auto res = run({"cc", "--l", "2", "--alpha", "1", "--format", "json"});
  REQUIRE(res.code == 0);
  const json arr = json::parse(res.out);
  REQUIRE(arr.size() == 6);

  const std::vector<std::string> fam{"ngon2l",    "ngon2l", "prism",
                                     "prism",     "antiprism", "antiprism"};
  for (int i = 0; i < 6; ++i) {
    CHECK(arr[i]["family"] == fam[i]);
    CHECK(arr[i]["v_bar_sign"] == (i % 2 == 0 ? 1 : -1));
    CHECK(arr[i]["dim_stable"].get<int>() +
              arr[i]["dim_unstable"].get<int>() ==
          5);
  }
  CHECK(std::abs(arr[4]["phi"].get<double>() - 0.61547970867038734) < 1e-9);
}

TEST_CASE("cli cc: csv has a header and six parseable rows") {
  const auto res = run({"cc", "--l", "3", "--alpha", "1", "--format", "csv"});
  REQUIRE(res.code == 0);
  const auto lines = split_lines(res.out);
  REQUIRE(lines.size() == 7);
  const auto header = split_csv(lines[0]);
  CHECK(header.front() == "l");
  CHECK(header.back() == "dim_unstable_in_P");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split_csv(lines[k]);
    REQUIRE(cells.size() == header.size());
    CHECK(std::stod(cells[5]) > 0.0);  // u
  }
}

TEST_CASE("cli: identical invocations produce identical bytes") {
  const std::vector<std::string> args{"cc", "--l", "4", "--alpha", "0.75"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const auto f1 = run({"flow", "--l", "2", "--alpha", "1", "--v", "0.4",
                       "--theta", "0.5", "--phi", "0.4", "--w1", "0.1",
                       "--tau-end", "2"});
  const auto f2 = run({"flow", "--l", "2", "--alpha", "1", "--v", "0.4",
                       "--theta", "0.5", "--phi", "0.4", "--w1", "0.1",
                       "--tau-end", "2"});
  CHECK(f1.code == f2.code);
  CHECK(!f1.out.empty());
  CHECK(f1.out == f2.out);
}

TEST_CASE("cli csv round-trips doubles exactly") {
  const auto res = run({"cc", "--l", "2", "--alpha", "1", "--format", "csv"});
  const auto lines = split_lines(res.out);
  const auto cells = split_csv(lines[5]);  // antiprism, +1
  const double phi = std::stod(cells[4]);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", phi);
  CHECK(cells[4] == buf);
}

TEST_CASE("cli potential: wedge grid is finite everywhere") {
  const auto res = run({"potential", "--l", "3", "--alpha", "1", "--n-theta",
                        "20", "--n-phi", "20"});
  REQUIRE(res.code == 0);
  const auto lines = split_lines(res.out);
  REQUIRE(lines.size() == 401);
  for (std::size_t k = 1; k < lines.size(); ++k)
    for (const auto& cell : split_csv(lines[k]))
      CHECK(std::isfinite(std::stod(cell)));
}

TEST_CASE("cli potential: symmetric grid rows pair up across pi/(2l)") {
  // an explicit symmetric span over [eps, pi/l - eps]
  const double eps = 1e-3;
  const double tmax = dihedral::kPi / 3.0 - eps;
  const auto res =
      run({"potential", "--l", "3", "--alpha", "1", "--n-theta", "9",
           "--n-phi", "5", "--theta-min", num(eps), "--theta-max", num(tmax),
           "--phi-min", "0.2", "--phi-max", "1.0"});
  REQUIRE(res.code == 0);
  const auto lines = split_lines(res.out);
  REQUIRE(lines.size() == 46);
  // row blocks are theta-major: block i pairs with block 8 - i
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 5; ++j) {
      const auto a = split_csv(lines[1 + i * 5 + j]);
      const auto b = split_csv(lines[1 + (8 - i) * 5 + j]);
      const double ua = std::stod(a[2]);
      const double ub = std::stod(b[2]);
      CHECK(std::abs(ua / ub - 1.0) < 1e-12);
    }
}

TEST_CASE("cli potential: clip handling at a collision grid point") {
  const auto bad =
      run({"potential", "--l", "2", "--alpha", "1", "--n-theta", "3",
           "--n-phi", "3", "--theta-min", "0", "--theta-max", "0.5",
           "--phi-min", "0", "--phi-max", "0.5"});
  CHECK(bad.code == 1);

  const auto ok =
      run({"potential", "--l", "2", "--alpha", "1", "--n-theta", "3",
           "--n-phi", "3", "--theta-min", "0", "--theta-max", "0.5",
           "--phi-min", "0", "--phi-max", "0.5", "--allow-clip"});
  CHECK(ok.code == 0);
  CHECK(split_lines(ok.out).size() == 9);  // 3x3 minus the clipped corner
}

TEST_CASE("cli flow: equilibrium start keeps constant columns") {
  const auto p = dihedral::make_params(2, 1.0);
  const auto cc = dihedral::find_ngon(p);
  const auto res = run({"flow", "--l", "2", "--alpha", "1", "--v",
                        num(cc.v_bar), "--theta", num(cc.s.theta), "--phi",
                        "0", "--tau-end", "3"});
  REQUIRE(res.code == 0);
  const auto lines = split_lines(res.out);
  REQUIRE(lines.size() > 2);
  const auto first = split_csv(lines[1]);
  const auto last = split_csv(lines.back());
  CHECK(std::abs(std::stod(last[1]) - std::stod(first[1])) < 1e-8);
  CHECK(std::abs(std::stod(last[2]) - std::stod(first[2])) < 1e-8);
}

TEST_CASE("cli flow: --parabolic keeps |E| small column-wide") {
  // this start is collision-bound before tau = 10, so the run is truncated
  // at the guard (exit 2) with every recorded row still on the manifold
  const auto res = run({"flow", "--l", "3", "--alpha", "1", "--v", "1",
                        "--theta", "0.3", "--phi", "0.5", "--w1", "0.2",
                        "--w2", "-0.1", "--parabolic", "--tau-end", "10"});
  REQUIRE(res.code == 2);
  const auto lines = split_lines(res.out);
  REQUIRE(lines.size() > 50);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split_csv(lines[k]);
    CHECK(std::abs(std::stod(cells[6])) < 1e-6);
  }

  // a short horizon completes with exit 0
  const auto ok = run({"flow", "--l", "3", "--alpha", "1", "--v", "1",
                       "--theta", "0.3", "--phi", "0.5", "--w1", "0.2",
                       "--w2", "-0.1", "--parabolic", "--tau-end", "0.2"});
  CHECK(ok.code == 0);
}

TEST_CASE("cli flow: homothetic lift matches the closed form") {
  const auto p = dihedral::make_params(2, 1.0);
  const auto cc = dihedral::find_ngon(p);
  const double rho0 = 1.3;
  const auto res = run({"flow", "--l", "2", "--alpha", "1", "--homothetic",
                        "--family", "ngon2l", "--lift", "--rho0",
                        std::to_string(rho0), "--tau-end", "2", "--max-step",
                        "0.02"});
  REQUIRE(res.code == 0);
  const auto lines = split_lines(res.out);
  const auto header = split_csv(lines[0]);
  REQUIRE(header.size() == 9);
  CHECK(header[7] == "rho");
  CHECK(header[8] == "t");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split_csv(lines[k]);
    const double tau = std::stod(cells[0]);
    const double rho = std::stod(cells[7]);
    CHECK(std::abs(rho - rho0 * std::exp(cc.v_bar * tau)) <
          1e-9 * rho0 * std::exp(cc.v_bar * tau));
  }
}

TEST_CASE("cli flow: collision-bound run exits with code 2") {
  const auto res = run({"flow", "--l", "2", "--alpha", "1", "--v", "0",
                        "--theta", "0.3", "--phi", "0", "--w1", "-2",
                        "--tau-end", "10"});
  CHECK(res.code == 2);
  CHECK(res.err.find("last good sample") != std::string::npos);
}

TEST_CASE("cli perron: residual table stays tiny at r = 1/2") {
  const auto res = run({"perron", "--l", "2", "--alpha", "1", "--r", "0.5",
                        "--format", "json"});
  REQUIRE(res.code == 0);
  const json arr = json::parse(res.out);
  bool saw_b0 = false;
  for (const auto& rec : arr) {
    if (rec["kind"] == "b_n" && rec["index"] == 0) {
      saw_b0 = true;
      CHECK(rec["value"].get<double>() > 0.9);
    }
    if (rec["kind"] != "b_n")
      CHECK(rec["residual"].get<double>() < 1e-8);
  }
  CHECK(saw_b0);
}

TEST_CASE("cli cc: dimension columns reproduce the census table") {
  for (const char* l : {"2", "3"}) {
    const auto res = run({"cc", "--l", l, "--alpha", "1", "--format", "json"});
    REQUIRE(res.code == 0);
    const json arr = json::parse(res.out);
    for (const auto& rec : arr) {
      const bool anti = rec["family"] == "antiprism";
      const bool plus = rec["v_bar_sign"].get<int>() > 0;
      const int ws = anti == plus ? 2 : 3;
      CHECK(rec["dim_stable"] == ws);
      CHECK(rec["dim_unstable"] == 5 - ws);
      if (anti) {
        CHECK(rec["dim_stable_in_P"] == 2);
        CHECK(rec["dim_unstable_in_P"] == 2);
      } else {
        CHECK(rec["dim_stable_in_P"] == (plus ? 3 : 1));
        CHECK(rec["dim_unstable_in_P"] == (plus ? 1 : 3));
      }
    }
  }
}

TEST_CASE("cli: --output writes the same bytes to a file") {
  const std::string path = "cli_test_out.csv";
  const auto to_file = run({"cc", "--l", "3", "--alpha", "1.25", "--output",
                            path});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  const auto to_stdout = run({"cc", "--l", "3", "--alpha", "1.25"});

  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == to_stdout.out);
  std::remove(path.c_str());
}

TEST_CASE("cli perron: slow-convergence warning close to the equator") {
  const auto res = run({"perron", "--l", "2", "--alpha", "1", "--r", "0.999"});
  CHECK(res.code == 0);
  CHECK(res.err.find("warning") != std::string::npos);
}

TEST_CASE("cli check: quick mode emits one JSON record per criterion") {
  const auto res = run({"check", "--quick", "--json"});
  CHECK(res.code == 0);
  const json arr = json::parse(res.out);
  REQUIRE(arr.size() == 10);
  for (const auto& rec : arr) CHECK(rec["passed"] == true);
}

TEST_CASE("cli: bad parameters exit with code 1") {
  CHECK(run({"cc", "--l", "1", "--alpha", "1"}).code == 1);
  CHECK(run({"cc", "--l", "2", "--alpha", "2"}).code == 1);
  CHECK(run({"nonsense"}).code == 1);
}

TEST_CASE("cli: DIHEDRAL_QUAD_ORDER is honoured") {
  setenv("DIHEDRAL_QUAD_ORDER", "32", 1);
  const auto res = run({"perron", "--l", "2", "--alpha", "1", "--r", "0.5"});
  unsetenv("DIHEDRAL_QUAD_ORDER");
  CHECK(res.code == 0);
}
