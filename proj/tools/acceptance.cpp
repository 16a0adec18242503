// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "roughstruct/integration.hpp"
#include "roughstruct/rde_solver.hpp"
#include "roughstruct/reconstruction.hpp"

using namespace roughstruct;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const WaveletBasis& db3() {
  static const WaveletBasis b = WaveletBasis::daubechies(6);
  return b;
}

SampledPath map_path(const SampledPath& p, const std::function<double(double)>& f) {
  std::vector<double> v = p.values();
  for (double& x : v) x = f(x);
  return SampledPath(p.grid(), p.dim(), std::move(v));
}

// y = cos(W), y' = -sin(W) for a scalar driver.
ControlledPath cosine_of_driver(const SampledPath& w) {
  return ControlledPath(map_path(w, [](double x) { return std::cos(x); }),
                        map_path(w, [](double x) { return -std::sin(x); }), w);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome chen_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = make_dyadic_grid(1.0, 8);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rp = lift_piecewise_smooth(generate_path(FbmKind{0.4, seed}, g, 2), LinearLift{}, 0.4);
    worst = std::max(worst, chen_defect(rp));
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-10 && dt < 5.0, fmt("max defect %.3e over 20 paths, %.2f s", worst, dt)};
}

Outcome levy_area_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> errs;
  for (int J : {6, 8, 10}) {
    const auto g = make_dyadic_grid(M_PI / 2, J + 2);
    const auto rp = wavelet_lift(generate_path(SinCosKind{}, g, 2), 0.45, db3(), J);
    errs.push_back(std::abs(rp.area(0, g.intervals())[1] + M_PI / 4));
  }
  const double dt = seconds_since(t0);
  const bool decreasing = errs[1] < errs[0] && errs[2] < errs[1];
  return {decreasing && errs[2] <= 5e-3 && dt < 30.0,
          fmt("errors %.3e %.3e %.3e, %.2f s", errs[0], errs[1], errs[2], dt)};
}

Outcome scalar_lift_identity() {
  const int J = 10;
  const auto g = make_dyadic_grid(1.0, J + 2);
  const auto w = generate_path(SinCosKind{}, g, 1);
  const auto rp = wavelet_lift(w, 0.45, db3(), J);
  const std::size_t N = g.intervals(), stride = N / 256;
  double err = 0.0;
  for (std::size_t s = 0; s <= N; s += stride)
    for (std::size_t t = s + stride; t <= N; t += stride) {
      const double inc = w.increment(s, t, 0);
      err = std::max(err, std::abs(rp.area(s, t)[0] - 0.5 * inc * inc));
    }
  const double sup = w.sup_norm();
  const double bound = 1e-3 * (1.0 + sup * sup);
  return {err <= bound, fmt("max |W2 - dW^2/2| %.3e, bound %.3e", err, bound)};
}

Outcome three_point_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 12);
  const auto w = generate_path(SinCosKind{}, g, 1);
  const auto I = wavelet_rough_integral(cosine_of_driver(w), lift_piecewise_smooth(w, LinearLift{}, alpha), db3(), 10);
  // Lengths 2^-2 .. 2^-5.
  std::vector<std::pair<double, double>> samples;
  for (std::size_t m = 2; m <= 5; ++m) samples.emplace_back(I.defects[m].length, I.defects[m].defect);
  const auto fit = convergence_order_fit(samples);
  const double dt = seconds_since(t0);
  return {fit.slope >= 3 * alpha - 0.1 && dt < 10.0, fmt("slope %.3f (r2 %.3f), %.2f s", fit.slope, fit.r2, dt)};
}

Outcome route_agreement() {
  const auto g = make_dyadic_grid(M_PI / 2, 12);
  const auto w = generate_path(SinCosKind{}, g, 2);
  const auto rp = lift_piecewise_smooth(w, SinCosLift{}, 0.45);
  // y^{ij} = W^1 delta_ij, so I^i = int W^1 dW^i.
  std::vector<double> y(g.size() * 4, 0.0), yp(g.size() * 8, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) {
      y[k * 4 + i * 2 + i] = w(k, 0);
      yp[k * 8 + (i * 2 + i) * 2 + 0] = 1.0;
    }
  const ControlledPath cp(SampledPath(g, 4, y), SampledPath(g, 8, yp), w);
  const auto riemann = rough_integral_sum(cp, rp, 0, g.intervals(), g.level());
  const auto wavelet = wavelet_rough_integral(cp, rp, db3(), 10).integral.row(g.intervals());
  const double diff = std::abs(riemann[0] - wavelet[0]) + std::abs(riemann[1] - wavelet[1]);
  const double rel = diff / (std::abs(riemann[0]) + std::abs(riemann[1]));
  return {rel <= 1e-3, fmt("relative difference %.3e (riemann %.6f %.6f)", rel, riemann[0], riemann[1])};
}

Outcome reconstruction_bound() {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 12);
  const auto w = generate_path(SinCosKind{}, g, 1);
  const auto f = multiply_by_Wdot(to_modelled(cosine_of_driver(w), alpha), 1, alpha);
  const auto rec = reconstruct(f, Model::rough(lift_piecewise_smooth(w, LinearLift{}, alpha)), db3(), 10);
  const auto by_scale = rec.certificate_by_scale();
  const double C = by_scale.front().second;
  double worst = 0.0;
  std::string list;
  for (const auto& [lambda, r] : by_scale) {
    worst = std::max(worst, r);
    list += fmt(" %.2e", r);
  }
  const bool pass = by_scale.size() == 6 && C > 0.0 && worst <= 3.0 * C;
  return {pass, fmt("gamma %.2f, ratios by lambda 2^-1..2^-6:%s", f.gamma(), list.c_str())};
}

Outcome exponential_rde() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = make_dyadic_grid(1.0, 10);
  const auto rp = lift_piecewise_smooth(generate_path(PolynomialKind{{{0.0, 1.0}}}, g, 1), LinearLift{}, 0.45);
  const auto r = solve_rde({1.0}, linear_function(1, 1), rp);
  const double dt = seconds_since(t0);
  double ratio = 0.0;
  for (const auto& win : r.diagnostics.windows) ratio = std::max(ratio, win.ratio);
  const double err = std::abs(r.solution.y()(g.intervals(), 0) - std::exp(1.0));
  return {err <= 1e-3 && ratio < 1.0 && dt < 10.0,
          fmt("|y(1) - e| %.3e, max ratio %.3f over %zu windows, %.2f s", err, ratio, r.diagnostics.windows.size(), dt)};
}

Outcome norm_equivalence() {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 7);
  double lo = 1e300, hi = 0.0;
  bool pass = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto w = generate_path(FbmKind{0.45, seed}, g, 2);
    const ControlledPath cp(generate_path(FbmKind{0.45, seed + 100}, g, 1),
                            generate_path(FbmKind{0.45, seed + 200}, g, 2), w);
    const double md = md_seminorm(to_modelled(cp, alpha), Model::rough(lift_piecewise_smooth(w, LinearLift{}, alpha))).value;
    const double c = controlled_norm(cp, alpha).value();
    pass = pass && md <= c && c <= 2.0 * md;
    lo = std::min(lo, c / md);
    hi = std::max(hi, c / md);
  }
  return {pass, fmt("controlled / modelled in [%.3f, %.3f]", lo, hi)};
}

ModelledDistribution sample_controlled(const SampledPath& w, double a, double b, double c, double alpha) {
  const auto& g = w.grid();
  std::vector<double> y, yp;
  for (std::size_t k = 0; k < g.size(); ++k) {
    y.push_back(a * w(k, 0) + b * std::sin(2 * M_PI * g.node(static_cast<long>(k))) + c);
    yp.push_back(a);
  }
  return to_modelled(ControlledPath(SampledPath(g, 1, y), SampledPath(g, 1, yp), w), alpha);
}

Outcome composition_lipschitz() {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 7);
  const auto w = generate_path(FbmKind{0.45, 2}, g, 1);
  const auto model = Model::rough(lift_piecewise_smooth(w, LinearLift{}, alpha));
  const auto F = sin_function(1, 1);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> ratios;
  bool in_ball = true;
  for (int trial = 0; trial < 20; ++trial) {
    const auto Y = sample_controlled(w, 0.2 * u(rng), 0.05 * u(rng), 0.3 * u(rng), alpha);
    const auto Yt = sample_controlled(w, 0.2 * u(rng), 0.05 * u(rng), 0.3 * u(rng), alpha);
    in_ball = in_ball && md_norm(Y, model) <= 1.0 && md_norm(Yt, model) <= 1.0;
    ratios.push_back(md_norm(compose(F, Y) - compose(F, Yt), model) / md_norm(Y - Yt, model));
  }
  // C from the first pair; every ratio within a factor 2 of it.
  const double C = ratios[0];
  double lo = 1e300, hi = 0.0;
  for (double r : ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {in_ball && hi <= 2.0 * C && lo >= 0.5 * C, fmt("C %.4f, ratios in [%.4f, %.4f]", C, lo, hi)};
}

Outcome lift_continuity() {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 10);
  const auto w = generate_path(FbmKind{0.45, 11}, g, 2);
  const auto v = generate_path(FbmKind{0.45, 12}, g, 2);
  std::vector<double> gaps;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    std::vector<double> x = w.values();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += eps * v.values()[i];
    gaps.push_back(lift_continuity_gap(w, SampledPath(g, 2, x), alpha, db3(), 8));
  }
  const double hi = std::max({gaps[0], gaps[1], gaps[2]}), lo = std::min({gaps[0], gaps[1], gaps[2]});
  return {hi <= 3.0 * lo, fmt("gaps %.4f %.4f %.4f", gaps[0], gaps[1], gaps[2])};
}

Outcome young_oracle() {
  const auto g = make_dyadic_grid(1.0, 10);
  const auto y = generate_path(PolynomialKind{{{0.0, 1.0}}}, g, 1);
  const auto W = generate_path(PolynomialKind{{{0.0, 0.0, 1.0}}}, g, 1);
  const auto r = young_integral(y, W, 0, g.intervals());
  const double err = std::abs(r.value[0] - 2.0 / 3.0);
  return {err <= 1e-3, fmt("value %.6f, error %.3e", r.value[0], err)};
}

Outcome group_law() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<RegularityStructure> structures{RegularityStructure::rough(0.4, 2),
                                                    RegularityStructure::polynomial(4)};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial)
    for (const auto& rs : structures) {
      const std::size_t d = rs.kind() == StructureKind::polynomial ? 1 : rs.dim();
      StructureGroupElement a, b, sum;
      for (std::size_t i = 0; i < d; ++i) {
        a.h.push_back(u(rng));
        b.h.push_back(u(rng));
        sum.h.push_back(a.h[i] + b.h[i]);
      }
      for (const auto& s : rs.symbols()) {
        const ModelSpaceVector e(s, 1.0);
        const auto lhs = gamma_apply(a, gamma_apply(b, e));
        const auto rhs = gamma_apply(sum, e);
        for (const auto& t : rs.symbols()) worst = std::max(worst, std::abs(lhs.coefficient(t) - rhs.coefficient(t)));
      }
    }
  return {worst <= 1e-14, fmt("max coefficient error %.3e over 1000 pairs", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"Chen exactness of piecewise-linear lifts", chen_exactness},
      {"trigonometric Levy area", levy_area_oracle},
      {"scalar lift identity", scalar_lift_identity},
      {"three-point defect slope", three_point_bound},
      {"Riemann and wavelet routes agree", route_agreement},
      {"reconstruction certificate", reconstruction_bound},
      {"exponential RDE", exponential_rde},
      {"norm equivalence", norm_equivalence},
      {"composition Lipschitz", composition_lipschitz},
      {"lift continuity", lift_continuity},
      {"Young integral of t against t^2", young_oracle},
      {"structure group law", group_law},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
