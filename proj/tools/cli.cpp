#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "roughstruct/errors.hpp"
#include "roughstruct/integration.hpp"
#include "roughstruct/rde_solver.hpp"
#include "roughstruct/reconstruction.hpp"
#include "roughstruct/serialization.hpp"

namespace roughstruct {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  int grid_level = 10;
  double alpha = 0.4;
  double beta = 0.45;
  std::uint64_t seed = 0;
  std::string out;
  bool json = false;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse number '" + item + "'");
    }
  }
  if (v.empty()) throw InvalidArgument("empty number list");
  return v;
}

// Rows separated by ';', coefficients by ','.
std::vector<std::vector<double>> parse_rows(const std::string& s) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_list(row));
  if (rows.empty()) throw InvalidArgument("empty coefficient list");
  return rows;
}

bool is_json_file(const std::string& f) { return fs::path(f).extension() == ".json"; }

RoughPath load_driver(const std::string& file, double alpha) {
  if (is_json_file(file)) return read_rough_path(file);
  return lift_piecewise_smooth(read_path_csv(file), LinearLift{}, alpha);
}

// Integrand from files, or y^{1j} = W^j with y'^{(1j),k} = delta_jk.
ControlledPath load_integrand(const std::string& y_file, const std::string& yp_file, const RoughPath& rp) {
  const auto& W = rp.path();
  const std::size_t n = W.dim();
  const auto& g = W.grid();
  if (y_file.empty()) {
    std::vector<double> yp(g.size() * n * n, 0.0);
    for (std::size_t k = 0; k < g.size(); ++k)
      for (std::size_t j = 0; j < n; ++j) yp[(k * n + j) * n + j] = 1.0;
    return ControlledPath(W, SampledPath(g, n * n, std::move(yp)), W);
  }
  auto y = read_path_csv(y_file);
  if (!(y.grid() == g)) throw InvalidArgument("integrand and driver grids differ");
  if (y.dim() % n != 0) throw InvalidArgument("integrand needs d * n columns");
  SampledPath yp = yp_file.empty() ? SampledPath::zeros(g, y.dim() * n) : read_path_csv(yp_file);
  if (!(yp.grid() == g)) throw InvalidArgument("derivative and driver grids differ");
  return ControlledPath(std::move(y), std::move(yp), W);
}

// Writes text to file, or to out when file is empty.
void emit(const std::string& file, const std::string& text, std::ostream& out) {
  if (file.empty()) {
    out << text;
    return;
  }
  std::ofstream f(file);
  if (!f) throw InvalidArgument("cannot open " + file + " for writing");
  f << text;
}

std::string integral_csv(const SampledPath& I) {
  std::ostringstream s;
  s << 't';
  for (std::size_t i = 0; i < I.dim(); ++i) s << ",I" << i + 1;
  s << '\n';
  for (std::size_t k = 0; k < I.size(); ++k) {
    s << format_double(I.grid().node(static_cast<long>(k)));
    for (std::size_t i = 0; i < I.dim(); ++i) s << ',' << format_double(I(k, i));
    s << '\n';
  }
  return s.str();
}

std::vector<std::pair<double, double>> read_table_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot open " + file);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto v = parse_list(line);
    if (v.size() != 2) throw InvalidArgument("table rows need scale,error");
    rows.emplace_back(v[0], v[1]);
  }
  return rows;
}

void print_report(const json& report, bool as_json, std::ostream& out) {
  if (report.is_null()) return;
  if (as_json) {
    out << report.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : report.items())
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals G;
  CLI::App app{"Rough paths, wavelet reconstruction and RDE solving on dyadic grids", "roughstruct"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--grid-level", G.grid_level, "Dyadic grid level J (2^J intervals)")->check(CLI::Range(0, 24));
  app.add_option("--alpha", G.alpha, "Hölder exponent");
  app.add_option("--beta", G.beta, "Solver exponent, alpha < beta <= 1/2");
  app.add_option("--seed", G.seed, "Random seed");
  app.add_option("--out", G.out, "Output file (stdout when absent)");
  app.add_flag("--json", G.json, "Machine-readable report");

  json report;
  std::string driver_file;
  // Primary output: the --out file, else stdout unless stdout carries the JSON report.
  auto emit_main = [&](const std::string& text) {
    if (G.out.empty() && G.json) return;
    emit(G.out, text, out);
  };

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a path CSV");
  std::string kind = "sin_cos", coeffs = "0,1";
  std::size_t dim = 0;
  double horizon = 1.0, hurst = 0.5, amplitude = 1.0;
  gen->add_option("--kind", kind, "sin_cos | fbm | polynomial")->check(CLI::IsMember({"sin_cos", "fbm", "polynomial"}));
  gen->add_option("--dim", dim, "Path dimension (default 2 for sin_cos, else 1)");
  gen->add_option("--horizon", horizon, "Time horizon T");
  gen->add_option("--hurst", hurst, "Hurst index for fbm");
  gen->add_option("--amplitude", amplitude, "Amplitude for sin_cos");
  gen->add_option("--coeffs", coeffs, "Polynomial coefficients, rows separated by ';'");
  gen->callback([&] {
    const std::size_t n = dim != 0 ? dim : (kind == "sin_cos" ? 2 : 1);
    const auto g = make_dyadic_grid(horizon, G.grid_level);
    PathKind pk = SinCosKind{amplitude};
    if (kind == "fbm") pk = FbmKind{hurst, G.seed};
    if (kind == "polynomial") pk = PolynomialKind{parse_rows(coeffs)};
    const auto p = generate_path(pk, g, n);
    std::ostringstream s;
    write_path_csv(p, s);
    emit_main(s.str());
    if (!G.out.empty() || G.json) report = {{"out", G.out}, {"rows", p.size()}, {"dim", n}};
  });

  // holder
  auto* holder = app.add_subcommand("holder", "Hölder seminorm report");
  holder->add_option("path", driver_file, "Path CSV")->required();
  holder->callback([&] {
    const auto p = read_path_csv(driver_file);
    report = {{"alpha", G.alpha},
              {"holder_seminorm", holder_seminorm(p, G.alpha)},
              {"estimated_exponent", estimate_holder_exponent(p)},
              {"sup_norm", p.sup_norm()}};
  });

  // lift
  auto* lift = app.add_subcommand("lift", "Lift a path CSV to a rough path JSON");
  std::string mode = "piecewise-linear", analytic = "sin_cos";
  int J = -1, taps = 6;
  lift->add_option("path", driver_file, "Path CSV")->required();
  lift->add_option("--mode", mode, "piecewise-linear | analytic | wavelet")
      ->check(CLI::IsMember({"piecewise-linear", "analytic", "wavelet"}));
  lift->add_option("--analytic", analytic, "sin_cos | polynomial")->check(CLI::IsMember({"sin_cos", "polynomial"}));
  lift->add_option("--amplitude", amplitude, "Amplitude of the sin_cos form");
  lift->add_option("--coeffs", coeffs, "Polynomial coefficients, rows separated by ';'");
  lift->add_option("--J", J, "Wavelet truncation level (default grid level - 2)");
  lift->add_option("--taps", taps, "Daubechies taps: 6, 8 or 10");
  lift->callback([&] {
    const auto p = read_path_csv(driver_file);
    RoughPath rp = [&] {
      if (mode == "piecewise-linear") return lift_piecewise_smooth(p, LinearLift{}, G.alpha);
      if (mode == "analytic") {
        if (analytic == "sin_cos") return lift_piecewise_smooth(p, SinCosLift{amplitude}, G.alpha);
        return lift_piecewise_smooth(p, PolynomialLift{parse_rows(coeffs)}, G.alpha);
      }
      const auto basis = WaveletBasis::daubechies(taps);
      return wavelet_lift(p, G.alpha, basis, J < 0 ? default_truncation_level(p.grid(), basis) : J);
    }();
    // Without --out the JSON goes to stdout and path_csv stays as given.
    if (G.out.empty()) {
      out << rough_path_to_json(rp, driver_file).dump(1) << '\n';
      return;
    }
    const fs::path dir = fs::absolute(G.out).parent_path();
    const std::string rel = fs::relative(fs::absolute(driver_file), dir).generic_string();
    emit(G.out, rough_path_to_json(rp, rel).dump(1) + "\n", out);
    const auto sn = rough_path_seminorm(rp);
    report = {{"out", G.out}, {"mode", mode}, {"chen_defect", chen_defect(rp)},
              {"path_seminorm", sn.path}, {"second_seminorm", sn.second}};
  });

  // chen
  auto* chen = app.add_subcommand("chen", "Chen defect of a rough path JSON");
  double tol = -1.0;
  chen->add_option("rough_path", driver_file, "Rough-path JSON")->required();
  chen->add_option("--tol", tol, "Failure threshold (default 1e-8 (1 + |W|_inf^2))");
  chen->callback([&] {
    const auto rp = read_rough_path(driver_file);
    const double sup = rp.path().sup_norm();
    const double threshold = tol >= 0.0 ? tol : 1e-8 * (1.0 + sup * sup);
    const double defect = chen_defect(rp);
    report = {{"chen_defect", defect}, {"tolerance", threshold}};
    if (defect > threshold)
      throw NumericalFailure("Chen defect " + format_double(defect) + " exceeds " + format_double(threshold));
  });

  // integrate
  auto* integrate = app.add_subcommand("integrate", "Integrate against a driver");
  std::string route = "rough-riemann", y_file, yp_file;
  int mesh = -1;
  integrate->add_option("driver", driver_file, "Driver CSV (lifted piecewise-linearly) or rough-path JSON")->required();
  integrate->add_option("--route", route, "young | rough-riemann | rough-wavelet")
      ->check(CLI::IsMember({"young", "rough-riemann", "rough-wavelet"}));
  integrate->add_option("--y", y_file, "Integrand CSV with d n columns (default y = W)");
  integrate->add_option("--yp", yp_file, "Gubinelli derivative CSV with d n n columns (default 0)");
  integrate->add_option("--mesh-level", mesh, "Mesh level of the compensated sums (default grid level)");
  integrate->add_option("--J", J, "Wavelet truncation level (default grid level - 2)");
  integrate->callback([&] {
    const auto rp = load_driver(driver_file, G.alpha);
    const auto cp = load_integrand(y_file, yp_file, rp);
    const auto& g = rp.grid();
    const std::size_t d = cp.dim() / rp.dim();
    SampledPath I = SampledPath::zeros(g, d);
    report = json::object();
    if (route == "young") {
      std::vector<double> v(g.size() * d, 0.0);
      json warnings = json::array();
      for (std::size_t k = 1; k < g.size(); ++k) {
        const auto r = young_integral(cp.y(), rp.path(), 0, k);
        for (std::size_t i = 0; i < d; ++i) v[k * d + i] = r.value[i];
        if (k + 1 == g.size())
          for (const auto& w : r.warnings) warnings.push_back(w);
      }
      I = SampledPath(g, d, std::move(v));
      report["warnings"] = warnings;
    } else if (route == "rough-riemann") {
      I = rough_integral_path(cp, rp, mesh < 0 ? g.level() : mesh);
    } else {
      const auto basis = WaveletBasis::daubechies(6);
      auto r = wavelet_rough_integral(cp, rp, basis, J < 0 ? default_truncation_level(g, basis) : J);
      report["three_point_certificate"] = r.certificate;
      I = std::move(r.integral);
    }
    emit_main(integral_csv(I));
    std::vector<double> last(I.row(g.intervals()).begin(), I.row(g.intervals()).end());
    report["route"] = route;
    report["value"] = last;
    if (G.out.empty() && !G.json) report = json();
  });

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "Reconstruction error certificate of y * Wdot");
  recon->add_option("driver", driver_file, "Driver CSV or rough-path JSON")->required();
  recon->add_option("--y", y_file, "Integrand CSV with d n columns (default y = W)");
  recon->add_option("--yp", yp_file, "Gubinelli derivative CSV (default 0)");
  recon->add_option("--J", J, "Truncation level (default grid level - 2)");
  recon->callback([&] {
    const auto rp = load_driver(driver_file, G.alpha);
    const auto cp = load_integrand(y_file, yp_file, rp);
    const auto basis = WaveletBasis::daubechies(6);
    const double a = rp.alpha();
    const auto f = multiply_by_Wdot(to_modelled(cp, a), rp.dim(), a);
    const auto rec = reconstruct(f, Model::rough(rp), basis, J < 0 ? default_truncation_level(rp.grid(), basis) : J);
    std::ostringstream s;
    write_certificate_csv(rec.certificate, s);
    emit_main(s.str());
    json scales = json::array();
    for (const auto& [lambda, r] : rec.certificate_by_scale()) scales.push_back({lambda, r});
    report = {{"gamma", f.gamma()}, {"max_ratio_by_scale", scales}};
    if (G.out.empty() && !G.json) report = json();
  });

  // solve
  auto* solve = app.add_subcommand("solve", "Solve dy = F(y) dW");
  std::string F_name = "linear", xi_list = "1", diag_file, solve_route = "riemann";
  double c_value = 1.0, fp_tol = 1e-10;
  std::size_t window = 0;
  int max_iters = 100;
  solve->add_option("driver", driver_file, "Driver CSV or rough-path JSON")->required();
  solve->add_option("--F", F_name, "linear | sin | tanh | rotation | constant");
  solve->add_option("--c", c_value, "Value of the constant field");
  solve->add_option("--xi", xi_list, "Initial value, comma separated");
  solve->add_option("--route", solve_route, "riemann | wavelet")->check(CLI::IsMember({"riemann", "wavelet"}));
  solve->add_option("--tol", fp_tol, "Fixed-point tolerance");
  solve->add_option("--window", window, "Initial window in cells (power of two, 0 = whole grid)");
  solve->add_option("--max-iters", max_iters, "Picard iterations per window");
  solve->add_option("--diagnostics", diag_file, "Diagnostics JSON file");
  solve->callback([&] {
    const auto rp = load_driver(driver_file, G.alpha);
    const auto xi = parse_list(xi_list);
    const auto F = builtin_function(F_name, xi.size(), rp.dim(), c_value);
    SolverConfig cfg;
    cfg.alpha = G.alpha;
    cfg.beta = G.beta;
    cfg.fixed_point_tol = fp_tol;
    cfg.initial_window_cells = window;
    cfg.max_picard_iters = max_iters;
    cfg.route = solve_route == "wavelet" ? IntegralRoute::wavelet : IntegralRoute::riemann;
    const auto r = solve_rde(xi, F, rp, cfg);
    std::ostringstream s;
    write_solution_csv(r.solution, s);
    emit_main(s.str());
    const auto diag = diagnostics_to_json(r.diagnostics);
    if (!diag_file.empty()) emit(diag_file, diag.dump(1) + "\n", out);
    const auto row = r.solution.y().row(rp.grid().intervals());
    report = {{"y_final", std::vector<double>(row.begin(), row.end())}, {"diagnostics", diag}};
    if (G.out.empty() && !G.json) report = json();
  });

  // convergence
  auto* conv = app.add_subcommand("convergence", "Order fit of an error table or a built-in experiment");
  std::string table, experiment = "refinement";
  conv->add_option("driver", driver_file, "Driver CSV or rough-path JSON (experiments)");
  conv->add_option("--table", table, "CSV with scale,error rows");
  conv->add_option("--experiment", experiment, "refinement | three-point")
      ->check(CLI::IsMember({"refinement", "three-point"}));
  conv->add_option("--y", y_file, "Integrand CSV (default y = W)");
  conv->add_option("--yp", yp_file, "Gubinelli derivative CSV (default 0)");
  conv->callback([&] {
    std::vector<std::pair<double, double>> rows;
    if (!table.empty()) {
      rows = read_table_csv(table);
    } else {
      if (driver_file.empty()) throw InvalidArgument("convergence needs --table or a driver");
      const auto rp = load_driver(driver_file, G.alpha);
      const auto cp = load_integrand(y_file, yp_file, rp);
      if (experiment == "refinement") {
        rows = refinement_table(cp, rp, 0, rp.grid().intervals());
        rows.erase(rows.begin(), rows.begin() + std::min<std::size_t>(2, rows.size()));
      } else {
        const auto basis = WaveletBasis::daubechies(6);
        const auto r = wavelet_rough_integral(cp, rp, basis, default_truncation_level(rp.grid(), basis));
        for (const auto& e : r.defects) rows.emplace_back(e.length, e.defect);
      }
    }
    std::ostringstream s;
    write_convergence_csv(rows, s);
    if (!G.out.empty()) emit_main(s.str());
    const auto fit = convergence_order_fit(rows);
    report = {{"slope", std::isfinite(fit.slope) ? json(fit.slope) : json("inf")}, {"r2", fit.r2}, {"samples", rows.size()}};
  });

  // Any partial report (a measured defect, say) is kept alongside the error.
  auto fail = [&](const std::string& kind_name, const std::string& msg, int code) {
    if (G.json) {
      json j = report.is_object() ? report : json::object();
      j["error"] = msg;
      j["kind"] = kind_name;
      out << j.dump(2) << '\n';
    } else {
      print_report(report, false, out);
      err << "error: " << msg << '\n';
    }
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string help;
    if (!G.json) help = "\n" + app.help();
    return fail("usage", e.what() + help, 1);
  } catch (const InvalidArgument& e) {
    return fail("invalid_argument", e.what(), 1);
  } catch (const NumericalFailure& e) {
    return fail("numerical_failure", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("invalid_argument", e.what(), 1);
  }
  print_report(report, G.json, out);
  return 0;
}

}  // namespace roughstruct
