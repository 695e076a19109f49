// softpack: tables and figures for truncated packing densities.
//
//   softpack dowker    --body FILE --lambda L [--n-min 3 --n-max 10]
//   softpack lattice   --body FILE --lambda-grid 0.05,0.1
//   softpack constcurv --kappa 1 --r 0.4 --lambda 0.1
//   softpack ball3d    --lambda-grid 0.05:0.15:0.05
//
// Exit codes: 0 success, 2 bad input, 3 numerical non-convergence.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "softpack/ball3d.hpp"
#include "softpack/bisector.hpp"
#include "softpack/body.hpp"
#include "softpack/constcurv.hpp"
#include "softpack/dowker.hpp"
#include "softpack/errors.hpp"
#include "softpack/io.hpp"
#include "softpack/lattice.hpp"

using namespace softpack;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;

struct RunConfig {
  std::string command;
  std::string body = "builtin:disk";
  double lambda = 0.1;
  std::string lambda_grid;
  bool lambda_given = false;
  int n_min = 3;
  int n_max = 10;
  int kappa = 0;
  double r = 1.0;
  int resolution = 0;  // 0: the command's default
  long long samples = 0;
  int starts = 32;
  std::uint64_t seed = 1;
  bool strict = false;
  std::string out_dir = ".";
};

struct LoadedBody {
  ConvexBody body;
  std::string id;  // enters the config hash; file contents rather than path
};

LoadedBody load_body(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) {
    std::string name = spec.substr(8);
    double s = kDefaultSmoothing;
    if (auto colon = name.find(':'); colon != std::string::npos) {
      try {
        s = std::stod(name.substr(colon + 1));
      } catch (const std::exception&) {
        throw InputError("bad smoothing in body spec: " + spec);
      }
      name = name.substr(0, colon);
    }
    if (name == "disk") return {ConvexBody::disk(), "disk"};
    if (name == "square") return {ConvexBody::smoothed_square(s), "square:" + io::fmt(s)};
    if (name == "hexagon") return {ConvexBody::smoothed_hexagon(s), "hexagon:" + io::fmt(s)};
    throw InputError("unknown builtin body '" + name + "' (disk, square, hexagon)");
  }
  std::ifstream in(spec, std::ios::binary);
  if (!in) throw InputError("cannot open body file: " + spec);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return {parse_body_json(text), "file:" + io::hex64(io::fnv1a64(text))};
  } catch (const InputError& e) {
    throw InputError(spec + ": " + e.what());
  }
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InputError("not a number: '" + s + "'");
  return v;
}

/// "a,b,c" or "start:stop:step" (inclusive, with a 1e−9 step slack).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InputError("grid range must be start:stop:step");
    const double a = parse_number(parts[0]), b = parse_number(parts[1]), h = parse_number(parts[2]);
    if (!(h > 0) || b < a) throw InputError("grid range needs step > 0 and stop >= start");
    for (int k = 0; a + k * h <= b + 1e-9 * h; ++k) out.push_back(a + k * h);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p));
  }
  if (out.empty()) throw InputError("empty lambda grid");
  return out;
}

std::vector<double> lambdas(const RunConfig& c) {
  return c.lambda_grid.empty() ? std::vector<double>{c.lambda} : parse_grid(c.lambda_grid);
}

std::string grid_key(const std::vector<double>& g) {
  std::string s;
  for (double x : g) s += (s.empty() ? "" : ",") + io::fmt(x);
  return s;
}

std::string path_in(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

void require_out_dir(const RunConfig& c) {
  if (!std::filesystem::is_directory(c.out_dir)) throw InputError("output directory does not exist: " + c.out_dir);
}

std::vector<Vec2> outline(const ConvexBody& m, double factor, Vec2 shift = {}) {
  std::vector<Vec2> pts;
  constexpr int kPts = 256;
  for (int k = 0; k < kPts; ++k) {
    const double phi = kTwoPi * k / kPts;
    pts.push_back(shift + factor * m.radial(phi) * unit(phi));
  }
  return pts;
}

const char* const kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};

int cmd_dowker(const RunConfig& c) {
  const LoadedBody lb = load_body(c.body);
  if (!(c.lambda > 0)) throw InputError("dowker: lambda must be positive");
  if (c.n_min < 3 || c.n_max < c.n_min) throw InputError("dowker: need 3 <= n-min <= n-max");
  require_out_dir(c);
  DowkerOptions opt;
  if (c.resolution > 0) opt.resolution = c.resolution;
  const auto table = dowker_table(lb.body, c.lambda, c.n_min, c.n_max, opt);

  const std::string config = "dowker;body=" + lb.id + ";lambda=" + io::fmt(c.lambda) + ";n=" +
                             std::to_string(c.n_min) + ".." + std::to_string(c.n_max) +
                             ";resolution=" + std::to_string(opt.resolution);
  io::CsvTable csv(config, {"n", "A_n", "convexity_defect", "symmetric_A_n", "symmetric_agrees", "direct_area"});
  for (const auto& row : table.rows) {
    csv.add_row({std::to_string(row.n), io::fmt(row.value), io::fmt(row.defect), io::fmt(row.symmetric_value),
                 row.n % 2 == 0 ? (row.symmetric_agrees ? "true" : "false") : "na", io::fmt(row.direct_area)});
  }

  const double view = 1.9 * (1 + c.lambda) * lb.body.circumradius();
  io::SvgFigure svg(-view, -view, view, view);
  int k = 0;
  for (const auto& row : table.rows) {
    const BNGon gon = build_bngon(lb.body, row.tiling.generators);
    const auto shaded = truncated_region(lb.body, gon, c.lambda, 1e-4).vertices();
    const char* color = kPalette[k++ % 8];
    svg.polygon(gon.boundary.vertices(), color, "none", 1.0);
    if (row.n == table.rows.front().n) svg.polygon(shaded, "none", "#dddddd");
    svg.text({-view * 0.95, view * (0.92 - 0.07 * (k - 1))}, ("n=" + std::to_string(row.n)).c_str());
    svg.polygon({{-view * 0.99, view * (0.93 - 0.07 * (k - 1))}, {-view * 0.97, view * (0.93 - 0.07 * (k - 1))}},
                color, "none", 3.0);
  }
  svg.polygon(outline(lb.body, 1.0), "black", "none", 1.5);
  svg.polygon(outline(lb.body, 1.0 + c.lambda), "black", "none", 1.0, "4 3");

  io::write_file_atomic(path_in(c, "dowker.csv"), csv.str());
  io::write_file_atomic(path_in(c, "dowker.svg"), svg.str());
  std::cout << "dowker: " << table.rows.size() << " rows, min defect " << io::fmt(table.min_defect)
            << (table.convex ? " (convex)" : " (NOT convex)") << "\n";
  return 0;
}

json basis_json(const LatticePacking& b) { return {{"u", {b.u.x, b.u.y}}, {"v", {b.v.x, b.v.y}}}; }

std::string lattice_svg(const ConvexBody& m, const LatticeOptimum& opt, double lambda) {
  const LatticePacking b = opt.basis;
  const double view = 2.6 * (1 + lambda) * m.circumradius();
  io::SvgFigure svg(-view, -view, view, view);
  svg.polygon(opt.report.cell.vertices(), "none", "#dddddd");
  const auto core = outline(m, 1.0), soft = outline(m, 1.0 + lambda);
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      const Vec2 p = static_cast<double>(i) * b.u + static_cast<double>(j) * b.v;
      if (std::abs(p.x) > view + 2 || std::abs(p.y) > view + 2) continue;
      std::vector<Vec2> a = core, s = soft;
      for (auto& q : a) q = q + p;
      for (auto& q : s) q = q + p;
      svg.polygon(a, "black", "none", 1.2);
      svg.polygon(s, "#555555", "none", 0.8, "4 3");
    }
  }
  svg.polygon({{0, 0}, b.u, b.u + b.v, b.v}, "#d95f02", "none", 1.8);
  return svg.str();
}

int cmd_lattice(const RunConfig& c) {
  const LoadedBody lb = load_body(c.body);
  const auto grid = lambdas(c);
  for (double l : grid)
    if (!(l > 0 && l <= 1)) throw InputError("lattice: lambda " + io::fmt(l) + " outside (0, 1]");
  require_out_dir(c);
  LatticeOptions opt;
  if (c.resolution > 0) opt.resolution = c.resolution;
  if (c.samples > 0) opt.samples = static_cast<int>(c.samples);
  opt.starts = c.starts;
  opt.seed = c.seed;
  opt.strict = c.strict;

  const std::string config = "lattice;body=" + lb.id + ";lambda=" + grid_key(grid) + ";resolution=" +
                             std::to_string(opt.resolution) + ";samples=" + std::to_string(opt.samples) +
                             ";starts=" + std::to_string(opt.starts) + ";seed=" + std::to_string(opt.seed) +
                             ";strict=" + (opt.strict ? "1" : "0");
  json report;
  report["header"] = io::header_line(config);
  report["body"] = lb.id;
  report["results"] = json::array();
  bool failed = false;
  std::vector<std::pair<std::string, std::string>> figures;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lambda = grid[i];
    json r;
    r["lambda"] = lambda;
    try {
      const auto o = optimize_lattice(lb.body, lambda, opt);
      r["converged"] = true;
      r["basis"] = basis_json(o.basis);
      r["delta_truncated"] = o.report.delta_truncated;
      r["delta_soft"] = o.report.delta_soft;
      r["delta_packing"] = o.report.delta_packing;
      r["det"] = o.report.det;
      r["sixgon_bound"] = o.dowker_density;
      r["bound_gap"] = o.dowker_density - o.report.delta_truncated;
      r["equilateral_density"] = o.equilateral_density;
      if (std::isnan(o.search_density)) {
        r["search_density"] = nullptr;
        r["agreement"] = nullptr;
      } else {
        r["search_density"] = o.search_density;
        r["agreement"] = std::abs(o.search_density - o.equilateral_density);
        r["agreement_ok"] = std::abs(o.search_density - o.equilateral_density) <= 1e-3;
      }
      r["sixgon"] = {{"residual", o.sixgon.residual},
                     {"mismatch", {o.sixgon.mismatch.x, o.sixgon.mismatch.y}},
                     {"spans_lattice", o.sixgon.spans_lattice},
                     {"pair_packs", o.sixgon.valid},
                     {"pair_density", o.sixgon.valid ? json(o.sixgon.density) : json(nullptr)}};
      figures.emplace_back("lattice_" + std::to_string(i) + ".svg", lattice_svg(lb.body, o, lambda));
    } catch (const NonConvergence& e) {
      r["converged"] = false;
      r["error"] = e.what();
      failed = true;
    } catch (const ConstraintViolation& e) {
      if (!opt.strict) throw;
      r["converged"] = false;
      r["error"] = e.what();
      failed = true;
    }
    report["results"].push_back(r);
  }
  io::write_file_atomic(path_in(c, "lattice.json"), report.dump(2) + "\n");
  for (const auto& [name, text] : figures) io::write_file_atomic(path_in(c, name), text);
  for (const auto& r : report["results"]) {
    std::cout << "lattice: lambda=" << io::fmt(r["lambda"].get<double>());
    if (r["converged"].get<bool>()) {
      std::cout << " delta=" << io::fmt(r["delta_truncated"].get<double>());
    } else {
      std::cout << " failed: " << r["error"].get<std::string>();
    }
    std::cout << "\n";
  }
  return failed ? kExitNonConvergence : 0;
}

int cmd_constcurv(const RunConfig& c) {
  if (c.kappa < -1 || c.kappa > 1) throw InputError("constcurv: kappa must be -1, 0 or 1");
  const auto grid = lambdas(c);
  for (double l : grid) validate_config({c.r, l, base_point(c.kappa)});
  require_out_dir(c);
  const int samples = c.samples > 0 ? static_cast<int>(c.samples) : 200;
  const double big = circumradius_regular_triangle(c.kappa, c.r);
  const double top = c.kappa > 0 ? 1.4 : 1.5 * std::max(1.0, c.r);
  std::vector<double> s_grid;
  for (int i = 1; i <= 15; ++i) s_grid.push_back(top * i / 15.0);
  std::vector<double> p_dists{c.r, 1.3 * c.r};
  if (c.kappa > 0 && !(1.3 * c.r < 0.5 * kPi)) p_dists.pop_back();

  const std::string config = "constcurv;kappa=" + std::to_string(c.kappa) + ";r=" + io::fmt(c.r) +
                             ";lambda=" + grid_key(grid) + ";samples=" + std::to_string(samples) +
                             ";seed=" + std::to_string(c.seed);
  io::CsvTable csv(config, {"kappa", "r", "lambda", "R", "sigma_reg", "sigma_bar_reg", "monotone_evaluations",
                            "monotone_violations", "right_triangle_rho_holds", "right_triangle_rho_hat_holds", "triangles",
                            "rho_violations", "rho_hat_violations", "max_rho_excess", "max_rho_hat_excess"});
  for (double lambda : grid) {
    const SigmaReg s = sigma_reg(c.kappa, c.r, lambda);
    int evals = 0, viol = 0;
    for (double p : p_dists) {
      const auto m = perpendicular_monotonicity(c.kappa, c.r, lambda, p, s_grid);
      evals += m.evaluations;
      viol += m.violations;
    }
    const auto l4 = fixed_hypotenuse_comparison(c.kappa, c.r, lambda, c.r, c.r + 0.9 * (big - c.r));
    const auto b = check_triangle_bound(c.kappa, c.r, lambda, samples, c.seed);
    csv.add_row({std::to_string(c.kappa), io::fmt(c.r), io::fmt(lambda), io::fmt(big), io::fmt(s.sigma),
                 io::fmt(s.sigma_bar), std::to_string(evals), std::to_string(viol), l4.rho_holds ? "true" : "false",
                 l4.rho_hat_holds ? "true" : "false", std::to_string(b.samples), std::to_string(b.rho_violations),
                 std::to_string(b.rho_hat_violations), io::fmt(b.max_rho_excess), io::fmt(b.max_rho_hat_excess)});
  }
  io::write_file_atomic(path_in(c, "constcurv.csv"), csv.str());
  std::cout << "constcurv: " << csv.rows() << " rows\n";
  return 0;
}

int cmd_ball3d(const RunConfig& c) {
  const auto grid = c.lambda_grid.empty() && !c.lambda_given
                        ? std::vector<double>{0.05, 0.10, 0.15, dodec_constants().midradius - 1.0}
                        : lambdas(c);
  const double top = dodec_constants().midradius - 1.0;
  for (double l : grid)
    if (!(l > 0 && l <= top + 1e-12))
      throw InputError("ball3d: lambda " + io::fmt(l) + " outside (0, r_mid - 1 = " + io::fmt(top) + "]");
  require_out_dir(c);
  MonteCarloOptions mc;
  if (c.samples > 0) mc.samples = c.samples;
  mc.seed = c.seed;
  const double hat_top = 2.0 / std::sqrt(3.0) - 1.0;

  const std::string config = "ball3d;lambda=" + grid_key(grid) + ";samples=" + std::to_string(mc.samples) +
                             ";seed=" + std::to_string(mc.seed);
  io::CsvTable csv(config, {"lambda", "tau", "tau_hat", "tau_lt_tau_hat", "fcc_density_mc", "fcc_std_error",
                            "fcc_density_exact", "fcc_le_tau"});
  const auto fcc = fcc_cell();
  for (double lambda : grid) {
    const double t = tau(std::min(lambda, top));  // grid values may exceed top by rounding
    const double th = lambda <= hat_top ? tau_hat(lambda) : std::nan("");
    const auto d = truncated_cell_density(fcc, std::min(lambda, top), mc);
    csv.add_row({io::fmt(lambda), io::fmt(t), io::fmt(th), std::isnan(th) ? "na" : (t < th ? "true" : "false"),
                 io::fmt(d.density_mc), io::fmt(d.density_std_error), io::fmt(d.density_exact),
                 d.density_mc <= t + 4 * d.density_std_error ? "true" : "false"});
  }
  io::write_file_atomic(path_in(c, "ball3d.csv"), csv.str());
  std::cout << "ball3d: " << csv.rows() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated packing densities: Dowker tables, lattices, curved planes and 3-space bounds"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--out-dir", c.out_dir, "Directory for output files")->capture_default_str();
    s->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  };
  auto add_lambda = [&](CLI::App* s) {
    s->add_option("--lambda", c.lambda, "Soft parameter")->capture_default_str();
    s->add_option("--lambda-grid", c.lambda_grid, "Comma list or start:stop:step; overrides --lambda");
  };

  auto* dowker = app.add_subcommand("dowker", "A_n table with convexity defects (CSV) and B-n-gons (SVG)");
  dowker->add_option("--body", c.body, "Body JSON file or builtin:disk|square[:s]|hexagon[:s]")->capture_default_str();
  dowker->add_option("--lambda", c.lambda, "Soft parameter")->capture_default_str();
  dowker->add_option("--n-min", c.n_min)->capture_default_str();
  dowker->add_option("--n-max", c.n_max)->capture_default_str();
  dowker->add_option("--resolution", c.resolution, "Circle discretization (default 720)");
  add_common(dowker);

  auto* lattice = app.add_subcommand("lattice", "Optimal lattice per lambda (JSON) and packing figures (SVG)");
  lattice->add_option("--body", c.body, "Body JSON file or builtin:disk|square[:s]|hexagon[:s]")->capture_default_str();
  add_lambda(lattice);
  lattice->add_option("--resolution", c.resolution, "Circle discretization for A_6 (default 720)");
  lattice->add_option("--samples", c.samples, "Polar samples of the search objective (default 1024)");
  lattice->add_option("--starts", c.starts, "Random starts of the basis search")->capture_default_str();
  lattice->add_flag("--strict", c.strict, "Fail when the B-6-gon generators do not form a lattice");
  add_common(lattice);

  auto* constcurv = app.add_subcommand("constcurv", "Regular-triangle bounds and harness summaries (CSV)");
  constcurv->add_option("--kappa", c.kappa, "Curvature: -1, 0 or 1")->capture_default_str();
  constcurv->add_option("--r", c.r, "Disk radius")->capture_default_str();
  add_lambda(constcurv);
  constcurv->add_option("--samples", c.samples, "Random admissible triangles (default 200)");
  add_common(constcurv);

  auto* ball = app.add_subcommand("ball3d", "tau, tau_hat and the FCC truncated density (CSV)");
  add_lambda(ball);
  ball->add_option("--samples", c.samples, "Monte Carlo samples per lambda (default 10^7)");
  add_common(ball);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  c.lambda_given = ball->count("--lambda") > 0;
  try {
    if (*dowker) return cmd_dowker(c);
    if (*lattice) return cmd_lattice(c);
    if (*constcurv) return cmd_constcurv(c);
    if (*ball) return cmd_ball3d(c);
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
