#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "softpack/errors.hpp"
#include "softpack/io.hpp"
#include "softpack/lattice.hpp"

namespace fs = std::filesystem;
using namespace softpack;

namespace {

struct Run {
  int code;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("softpack_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Run run(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(SOFTPACK_CLI) + " " + args + " --out-dir " + dir.string() + " >/dev/null 2>" +
                          err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(err);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Data rows of a softpack CSV as string cells, after the comment and column lines.
std::vector<std::vector<std::string>> rows(const fs::path& p, std::vector<std::string>* columns = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<std::string>> out;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (header) {
      if (columns) *columns = cells;
      header = false;
    } else {
      out.push_back(cells);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("io primitives") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(io::hex64(255) == "00000000000000ff");
  CHECK(std::regex_match(io::header_line("x"), std::regex("# softpack [0-9]+\\.[0-9]+\\.[0-9]+ config=[0-9a-f]{16}")));
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23}) CHECK(std::stod(io::fmt(x)) == x);
  CHECK(io::fmt(std::nan("")) == "nan");
  io::CsvTable t("cfg", {"a", "b"});
  t.add_row({"1", "2"});
  CHECK_THROWS_AS(t.add_row({"1"}), InputError);
  CHECK(t.str() == io::header_line("cfg") + "\na,b\n1,2\n");
  io::SvgFigure svg(-1, -1, 1, 1, 100);
  svg.circle({0, 0}, 0.5, "black");
  CHECK(svg.str().find("<circle cx=\"50.000\" cy=\"50.000\" r=\"25\"") != std::string::npos);
  const fs::path d = fresh_dir("atomic");
  io::write_file_atomic((d / "f.txt").string(), "abc");
  CHECK(slurp(d / "f.txt") == "abc");
  CHECK_FALSE(fs::exists(d / "f.txt.partial"));
  CHECK_THROWS_AS(io::write_file_atomic((d / "missing" / "f.txt").string(), "x"), InputError);
}

TEST_CASE("dowker command") {
  const fs::path d = fresh_dir("dowker");
  CHECK(run("dowker --body builtin:disk --lambda 0.1 --n-min 3 --n-max 10", d).code == 0);
  const auto r = rows(d / "dowker.csv");
  REQUIRE(r.size() == 8);
  for (const auto& row : r) {
    if (row[2] != "nan") CHECK(std::stod(row[2]) >= -1e-6);
  }
  CHECK(std::stod(r[3][1]) == doctest::Approx(3.4312529515578127).epsilon(1e-9));
  CHECK(slurp(d / "dowker.svg").rfind("<?xml", 0) == 0);

  const fs::path one = fresh_dir("dowker_one");
  CHECK(run("dowker --lambda 0.1 --n-min 3 --n-max 3", one).code == 0);
  CHECK(rows(one / "dowker.csv").size() == 1);

  const fs::path missing = fresh_dir("dowker_missing");
  CHECK(run("dowker --body /definitely/not/here.json", missing).code == 2);
  CHECK(fs::is_empty(missing));

  const fs::path bad = fresh_dir("dowker_bad");
  std::ofstream(bad / "body.json") << "{\n  \"kind\": \"polygon\",\n  \"vertices\": [[1,0],\n}";
  const auto res = run("dowker --body " + (bad / "body.json").string(), bad);
  CHECK(res.code == 2);
  CHECK(res.err.find("line") != std::string::npos);
  CHECK_FALSE(fs::exists(bad / "dowker.csv"));

  CHECK(run("dowker --lambda 0.1 --n-min 2", fresh_dir("dowker_n")).code == 2);
  CHECK(run("dowker --no-such-flag", fresh_dir("dowker_flag")).code == 2);
}

TEST_CASE("lattice command") {
  const std::string quick = " --resolution 240 --samples 512 --starts 4";
  const fs::path d = fresh_dir("lattice");
  CHECK(run("lattice --body builtin:disk --lambda-grid 0.1,1.0" + quick, d).code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "lattice.json"));
  REQUIRE(j["results"].size() == 2);
  CHECK(j["results"][0]["delta_truncated"].get<double>() == doctest::Approx(disk_closed_form(0.1)).epsilon(1e-6));
  CHECK(j["results"][1]["delta_truncated"].get<double>() == doctest::Approx(0.9068996821171089).epsilon(1e-6));
  CHECK(fs::exists(d / "lattice_0.svg"));
  CHECK(fs::exists(d / "lattice_1.svg"));

  const fs::path sq = fresh_dir("lattice_square");
  CHECK(run("lattice --body builtin:square:0.1 --lambda 0.1" + quick, sq).code == 0);
  const auto s = nlohmann::json::parse(slurp(sq / "lattice.json"))["results"][0];
  CHECK(s["agreement"].get<double>() <= 1e-3);
  CHECK_FALSE(s["sixgon"]["spans_lattice"].get<bool>());
  CHECK(s["bound_gap"].get<double>() >= 0.0);

  // Strict mode treats the B-6-gon mismatch as a failure to converge.
  const fs::path st = fresh_dir("lattice_strict");
  CHECK(run("lattice --body builtin:square:0.1 --lambda 0.1 --strict" + quick, st).code == 3);
  const auto f = nlohmann::json::parse(slurp(st / "lattice.json"))["results"][0];
  CHECK_FALSE(f["converged"].get<bool>());

  CHECK(run("lattice --lambda 1.5", fresh_dir("lattice_range")).code == 2);
}

TEST_CASE("constcurv command") {
  const fs::path d = fresh_dir("constcurv");
  CHECK(run("constcurv --kappa 0 --r 1 --lambda 0.1", d).code == 0);
  std::vector<std::string> cols;
  auto r = rows(d / "constcurv.csv", &cols);
  REQUIRE(r.size() == 1);
  CHECK(cols[4] == "sigma_reg");
  CHECK(std::stod(r[0][4]) == doctest::Approx(disk_closed_form(0.1)).epsilon(1e-10));
  CHECK(r[0][7] == "0");
  CHECK(r[0][11] == "0");
  CHECK(r[0][12] == "0");

  const fs::path s = fresh_dir("constcurv_sphere");
  CHECK(run("constcurv --kappa 1 --r 0.5 --lambda 0.1", s).code == 0);
  r = rows(s / "constcurv.csv");
  REQUIRE(r.size() == 1);
  CHECK(r[0][7] == "0");
  CHECK(run("constcurv --kappa 1 --r 1.2", fresh_dir("constcurv_bad")).code == 2);
  CHECK(run("constcurv --kappa 2", fresh_dir("constcurv_k")).code == 2);
}

TEST_CASE("ball3d command and reproducibility") {
  const fs::path a = fresh_dir("ball_a"), b = fresh_dir("ball_b"), c = fresh_dir("ball_c");
  const std::string args = "ball3d --lambda-grid 0.05,0.1755 --samples 200000 --seed 7";
  CHECK(run(args, a).code == 0);
  CHECK(run(args, b).code == 0);
  CHECK(slurp(a / "ball3d.csv") == slurp(b / "ball3d.csv"));
  const auto r = rows(a / "ball3d.csv");
  REQUIRE(r.size() == 2);
  CHECK(std::stod(r[0][1]) == doctest::Approx(0.8815426997245177).epsilon(1e-12));
  CHECK(r[0][3] == "true");
  CHECK(std::stod(r[1][1]) == doctest::Approx(0.7605).epsilon(1e-3));
  CHECK(r[1][3] == "na");  // beyond the range of tau_hat
  CHECK(r[0][7] == "true");

  // A different seed changes the config hash in the header line.
  CHECK(run("ball3d --lambda-grid 0.05,0.1755 --samples 200000 --seed 8", c).code == 0);
  const auto first_line = [](const fs::path& p) { return slurp(p).substr(0, slurp(p).find('\n')); };
  CHECK(first_line(a / "ball3d.csv") != first_line(c / "ball3d.csv"));

  CHECK(run("ball3d --lambda 0.2", fresh_dir("ball_bad")).code == 2);

  const fs::path d1 = fresh_dir("dk_a"), d2 = fresh_dir("dk_b");
  CHECK(run("dowker --body builtin:hexagon --lambda 0.1 --n-max 6 --resolution 240", d1).code == 0);
  CHECK(run("dowker --body builtin:hexagon --lambda 0.1 --n-max 6 --resolution 240", d2).code == 0);
  CHECK(slurp(d1 / "dowker.csv") == slurp(d2 / "dowker.csv"));
  CHECK(slurp(d1 / "dowker.svg") == slurp(d2 / "dowker.svg"));
}
