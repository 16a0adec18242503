#include "roughstruct/rde_solver.hpp"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "roughstruct/errors.hpp"

namespace roughstruct {
namespace {

RoughPath time_driver(int level, double horizon = 1.0) {
  const auto g = make_dyadic_grid(horizon, level);
  return lift_piecewise_smooth(generate_path(PolynomialKind{{{0.0, 1.0}}}, g, 1), LinearLift{}, 0.45);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.beta = c.alpha;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.alpha = 0.3;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.initial_window_cells = 24;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.min_window_cells = 8;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(PicardStep, ZeroFieldGivesInitialValue) {
  const auto rp = time_driver(6);
  const auto g = rp.grid();
  const auto Y = to_modelled(ControlledPath(generate_path(SinCosKind{}, g, 1), SampledPath::zeros(g, 1), rp.path()), 0.4);
  const auto N = picard_step(Y, {0.7}, constant_function(1, 1, 0.0), rp, {});
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_EQ(N.at(k, 0).entries(), ModelSpaceVector(Symbol::one(), 0.7).entries());
}

TEST(Solve, ZeroField) {
  const auto g = make_dyadic_grid(1.0, 7);
  const auto rp = lift_piecewise_smooth(generate_path(FbmKind{0.45, 1}, g, 2), LinearLift{}, 0.45);
  const auto r = solve_rde({0.3, -1.0}, constant_function(2, 2, 0.0), rp);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(r.solution.y()(k, 0), 0.3);
    EXPECT_EQ(r.solution.y()(k, 1), -1.0);
  }
  ASSERT_EQ(r.diagnostics.windows.size(), 1u);
  EXPECT_EQ(r.diagnostics.windows[0].iterations, 1);
}

TEST(Solve, ConstantField) {
  const auto g = make_dyadic_grid(1.0, 8);
  const auto w = generate_path(FbmKind{0.45, 3}, g, 1);
  const auto rp = lift_piecewise_smooth(w, LinearLift{}, 0.45);
  const auto r = solve_rde({2.0}, constant_function(1, 1, 0.5), rp);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(r.solution.y()(k, 0), 2.0 + 0.5 * w(k, 0), 1e-14);
    EXPECT_EQ(r.solution.y_prime()(k, 0), 0.5);
  }
  EXPECT_LE(solution_residual(r.solution, {2.0}, constant_function(1, 1, 0.5), rp), 1e-12);
}

TEST(Solve, Exponential) {
  const auto rp = time_driver(10);
  const auto F = linear_function(1, 1);
  const auto r = solve_rde({1.0}, F, rp);
  EXPECT_NEAR(r.solution.y()(rp.grid().intervals(), 0), std::exp(1.0), 1e-3);
  for (const auto& w : r.diagnostics.windows) EXPECT_LT(w.ratio, 1.0);
  EXPECT_LE(r.diagnostics.residual, 10 * SolverConfig{}.fixed_point_tol);
  EXPECT_LE(r.diagnostics.fixed_point_identity, 2 * SolverConfig{}.fixed_point_tol);
}

TEST(Solve, Rotation) {
  const auto rp = time_driver(10);
  const auto r = solve_rde({1.0, 0.0}, rotation_function(), rp);
  const auto& g = rp.grid();
  for (std::size_t k = 0; k < g.size(); k += 64) {
    const double t = g.node(static_cast<long>(k));
    EXPECT_NEAR(r.solution.y()(k, 0), std::cos(t), 1e-3);
    EXPECT_NEAR(r.solution.y()(k, 1), std::sin(t), 1e-3);
  }
}

TEST(Solve, WindowInvariance) {
  const auto g = make_dyadic_grid(1.0, 9);
  const auto rp = lift_piecewise_smooth(generate_path(FbmKind{0.45, 5}, g, 1), LinearLift{}, 0.45);
  const auto F = sin_function(1, 1);
  SolverConfig one, two;
  two.initial_window_cells = 256;
  const auto a = solve_rde({0.2}, F, rp, one);
  const auto b = solve_rde({0.2}, F, rp, two);
  EXPECT_GE(b.diagnostics.windows.size(), 2u);
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_NEAR(a.solution.y()(k, 0), b.solution.y()(k, 0), 10 * one.fixed_point_tol);
}

TEST(Solve, RoughDriverHalvesWindows) {
  const auto g = make_dyadic_grid(1.0, 9);
  auto w = generate_path(FbmKind{0.45, 9}, g, 1);
  std::vector<double> v = w.values();
  for (double& x : v) x *= 2.0;
  const auto rp = lift_piecewise_smooth(SampledPath(g, 1, v), LinearLift{}, 0.45);
  const auto r = solve_rde({0.5}, linear_function(1, 1), rp);
  EXPECT_GT(r.diagnostics.halvings, 0);
  for (const auto& win : r.diagnostics.windows) EXPECT_LT(win.ratio, 1.0);
  EXPECT_LE(r.diagnostics.residual, 10 * SolverConfig{}.fixed_point_tol);
}

TEST(Solve, NonContractionFails) {
  const auto g = make_dyadic_grid(1.0, 6);
  const auto rp = time_driver(6);
  SolverConfig c;
  c.max_picard_iters = 1;
  EXPECT_THROW(solve_rde({1.0}, linear_function(1, 1), rp, c), NumericalFailure);
}

TEST(Solve, DeclaredDomainExceeded) {
  const auto rp = time_driver(6);
  auto F = linear_function(1, 1);
  F.domain = Box{{0.0}, {2.0}};
  EXPECT_THROW(solve_rde({1.0}, F, rp), NumericalFailure);
}

TEST(Solve, DimensionMismatch) {
  const auto rp = time_driver(6);
  EXPECT_THROW(solve_rde({1.0, 2.0}, linear_function(1, 1), rp), InvalidArgument);
}

TEST(Solve, WaveletRouteMatchesRiemann) {
  const auto rp = time_driver(10);
  SolverConfig c;
  c.route = IntegralRoute::wavelet;
  c.fixed_point_tol = 1e-9;
  const auto r = solve_rde({1.0}, linear_function(1, 1), rp, c);
  EXPECT_NEAR(r.solution.y()(rp.grid().intervals(), 0), std::exp(1.0), 1e-2);
}

TEST(Solve, MollifiedDriversConverge) {
  // W smooth; W_delta = W + delta sin(t / delta) shrinks to W as delta -> 0.
  const auto g = make_dyadic_grid(1.0, 10);
  const auto base = generate_path(SinCosKind{}, g, 1);
  const auto F = sin_function(1, 1);
  const auto ref = solve_rde({0.3}, F, lift_piecewise_smooth(base, LinearLift{}, 0.45));
  double prev = 1e300;
  for (double delta : {0.1, 0.03, 0.01}) {
    std::vector<double> v = base.values();
    for (std::size_t k = 0; k < g.size(); ++k) v[k] += delta * delta * std::sin(g.node(static_cast<long>(k)) / delta);
    const auto r = solve_rde({0.3}, F, lift_piecewise_smooth(SampledPath(g, 1, v), LinearLift{}, 0.45));
    double dist = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) dist = std::max(dist, std::abs(r.solution.y()(k, 0) - ref.solution.y()(k, 0)));
    EXPECT_LT(dist, prev) << delta;
    prev = dist;
  }
}

TEST(Residual, DetectsCorruption) {
  const auto rp = time_driver(8);
  const auto F = linear_function(1, 1);
  const auto r = solve_rde({1.0}, F, rp);
  std::vector<double> y = r.solution.y().values();
  y[100] += 0.1;
  const ControlledPath bad(SampledPath(rp.grid(), 1, y), r.solution.y_prime(), rp.path());
  EXPECT_GE(solution_residual(bad, {1.0}, F, rp), 0.05);
}

TEST(Solution, Csv) {
  const auto g = make_dyadic_grid(1.0, 1);
  const ControlledPath cp(SampledPath(g, 1, {1, 2, 3}), SampledPath(g, 2, {0, 1, 0, 1, 0, 1}),
                          SampledPath::zeros(g, 2));
  std::ostringstream out;
  write_solution_csv(cp, out);
  EXPECT_EQ(out.str(), "t,y1,yp11,yp12\n0,1,0,1\n0.5,2,0,1\n1,3,0,1\n");
}

}  // namespace
}  // namespace roughstruct
