#include "roughstruct/modelled_distributions.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "roughstruct/errors.hpp"

namespace roughstruct {
namespace {

SampledPath map_path(const SampledPath& p, double (*f)(double)) {
  std::vector<double> v = p.values();
  for (double& x : v) x = f(x);
  return SampledPath(p.grid(), p.dim(), std::move(v));
}

// y = sin(W), y' = cos(W) for a scalar driver.
ControlledPath sine_of_driver(const SampledPath& w) {
  return ControlledPath(map_path(w, [](double x) { return std::sin(x); }),
                        map_path(w, [](double x) { return std::cos(x); }), w);
}

double level(const MdSeminorm& s, double beta) {
  for (const auto& [b, q] : s.levels)
    if (std::abs(b - beta) < 1e-12) return q;
  ADD_FAILURE() << "no level " << beta;
  return -1.0;
}

Model rough_model(const SampledPath& w, double alpha) {
  return Model::rough(lift_piecewise_smooth(w, LinearLift{}, alpha));
}

TEST(ControlledPath, RejectsMismatchedDerivative) {
  const auto g = make_dyadic_grid(1.0, 3);
  EXPECT_THROW(ControlledPath(SampledPath::zeros(g, 2), SampledPath::zeros(g, 2), SampledPath::zeros(g, 2)),
               InvalidArgument);
}

TEST(ToModelled, ConstantHasZeroSeminorm) {
  const auto g = make_dyadic_grid(1.0, 6);
  const auto w = generate_path(FbmKind{0.4, 1}, g, 2);
  const ControlledPath cp(generate_path(PolynomialKind{{{3.0}}}, g, 1), SampledPath::zeros(g, 2), w);
  const auto f = to_modelled(cp, 0.4);
  EXPECT_EQ(f.gamma(), 0.8);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(f.at(k, 0).coefficient(Symbol::one()), 3.0);
    EXPECT_EQ(f.at(k, 0).entries().size(), 1u);
  }
  EXPECT_EQ(md_seminorm(f, rough_model(w, 0.4)).value, 0.0);
}

TEST(ToModelled, DriverItselfHasNoRemainder) {
  const auto g = make_dyadic_grid(1.0, 7);
  const auto w = generate_path(FbmKind{0.4, 3}, g, 1);
  const ControlledPath cp(w, generate_path(PolynomialKind{{{1.0}}}, g, 1), w);
  const auto s = md_seminorm(to_modelled(cp, 0.4), rough_model(w, 0.4));
  EXPECT_NEAR(level(s, 0.0), 0.0, 1e-12);
}

TEST(ToModelled, SeminormIsMaxOfControlledParts) {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 8);
  const auto w = generate_path(FbmKind{0.45, 5}, g, 1);
  const auto cp = sine_of_driver(w);
  const auto md = md_seminorm(to_modelled(cp, alpha), rough_model(w, alpha)).value;
  // Independent recomputation of both quotients.
  double dq = 0.0, rq = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s)
    for (std::size_t t = s + 1; t < g.size(); ++t) {
      const double dt = g.node(static_cast<long>(t)) - g.node(static_cast<long>(s));
      const double ws = w(s, 0), wt = w(t, 0);
      dq = std::max(dq, std::abs(std::cos(wt) - std::cos(ws)) / std::pow(dt, alpha));
      rq = std::max(rq, std::abs(std::sin(wt) - std::sin(ws) - std::cos(ws) * (wt - ws)) / std::pow(dt, 2 * alpha));
    }
  EXPECT_NEAR(md, std::max(dq, rq), 1e-12 * md);
  const auto cn = controlled_norm(cp, alpha);
  EXPECT_NEAR(cn.derivative, dq, 1e-12 * dq);
  EXPECT_NEAR(cn.remainder, rq, 1e-12 * rq);
}

TEST(FromModelled, RoundTrip) {
  const auto g = make_dyadic_grid(1.0, 5);
  const auto w = generate_path(FbmKind{0.4, 8}, g, 2);
  const ControlledPath cp(generate_path(FbmKind{0.4, 9}, g, 3), generate_path(FbmKind{0.4, 10}, g, 6), w);
  const auto back = from_modelled(to_modelled(cp, 0.4), w);
  EXPECT_EQ(back.y().values(), cp.y().values());
  EXPECT_EQ(back.y_prime().values(), cp.y_prime().values());
}

TEST(FromModelled, RejectsOtherSymbols) {
  const auto g = make_dyadic_grid(1.0, 2);
  std::vector<ModelSpaceVector> v(g.size(), ModelSpaceVector(Symbol::WWdot(0, 0), 1.0));
  EXPECT_THROW(from_modelled(ModelledDistribution(g, 0.8, 1, v), SampledPath::zeros(g, 1)), InvalidArgument);
}

TEST(NormEquivalence, WithinFactorTwo) {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 7);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto w = generate_path(FbmKind{0.45, seed}, g, 2);
    const ControlledPath cp(generate_path(FbmKind{0.45, seed + 100}, g, 1),
                            generate_path(FbmKind{0.45, seed + 200}, g, 2), w);
    const double md = md_seminorm(to_modelled(cp, alpha), rough_model(w, alpha)).value;
    const double c = controlled_norm(cp, alpha).value();
    EXPECT_LE(md, c);
    EXPECT_LE(c, 2.0 * md);
  }
}

TEST(MdSeminorm, PolynomialJetsOfSquare) {
  // f(t) = t^2 1 + 2t X: level 0 quotient (t-s)^2 / (t-s)^2 = 1, level 1
  // quotient 2|t-s| / |t-s| = 2.
  const auto g = make_dyadic_grid(1.0, 6);
  std::vector<ModelSpaceVector> v;
  for (double t : g.nodes()) {
    ModelSpaceVector x(Symbol::one(), t * t);
    x.add(Symbol::X({1}), 2.0 * t);
    v.push_back(x);
  }
  const auto s = md_seminorm(ModelledDistribution(g, 2.0, 1, v), Model::polynomial(g, 1));
  ASSERT_EQ(s.levels.size(), 2u);
  EXPECT_NEAR(level(s, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(level(s, 1.0), 2.0, 1e-12);
}

TEST(MultiplyByWdot, Unit) {
  const auto g = make_dyadic_grid(1.0, 3);
  const auto w = generate_path(FbmKind{0.4, 1}, g, 1);
  const ControlledPath cp(generate_path(PolynomialKind{{{1.0}}}, g, 1), SampledPath::zeros(g, 1), w);
  const auto p = multiply_by_Wdot(to_modelled(cp, 0.4), 1, 0.4);
  EXPECT_NEAR(p.gamma(), 3 * 0.4 - 1, 1e-15);
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_EQ(p.at(k, 0).entries(), ModelSpaceVector(Symbol::Wdot(0), 1.0).entries());
}

TEST(MultiplyByWdot, DriverTimesNoise) {
  const auto g = make_dyadic_grid(1.0, 3);
  const auto w = generate_path(FbmKind{0.4, 1}, g, 1);
  const ControlledPath cp(w, generate_path(PolynomialKind{{{1.0}}}, g, 1), w);
  const auto p = multiply_by_Wdot(to_modelled(cp, 0.4), 1, 0.4);
  for (std::size_t k = 0; k < g.size(); ++k) {
    ModelSpaceVector expected(Symbol::Wdot(0), w(k, 0));
    expected.add(Symbol::WWdot(0, 0), 1.0);
    EXPECT_EQ(p.at(k, 0).entries(), expected.entries());
  }
}

TEST(MultiplyByWdot, HomogeneityShiftsByAlphaMinusOne) {
  const double alpha = 0.45;
  const auto g = make_dyadic_grid(1.0, 4);
  const auto w = generate_path(FbmKind{0.4, 2}, g, 2);
  const ControlledPath cp(generate_path(FbmKind{0.4, 3}, g, 2), generate_path(FbmKind{0.4, 4}, g, 4), w);
  const auto f = to_modelled(cp, alpha);
  // Components as a 1 x 2 matrix field per row: reinterpret d = 2 as d n with n = 2.
  const auto p = multiply_by_Wdot(f, 2, alpha);
  EXPECT_EQ(p.components(), 1u);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (const auto& [s, c] : p.at(k, 0).entries()) {
      const double h = s.homogeneity(alpha);
      EXPECT_TRUE(std::abs(h - (alpha - 1)) < 1e-15 || std::abs(h - (2 * alpha - 1)) < 1e-15);
    }
  EXPECT_THROW(multiply_by_Wdot(f, 3, alpha), InvalidArgument);
  EXPECT_THROW(multiply_by_Wdot(p, 1, alpha), InvalidArgument);
}

TEST(MultiplyByWdot, ProductLiesInLowerSpace) {
  // The graded quotients of Y * Wdot at gamma = 3 alpha - 1 are those of Y.
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 7);
  const auto w = generate_path(FbmKind{0.45, 6}, g, 1);
  const auto model = rough_model(w, alpha);
  const auto f = to_modelled(sine_of_driver(w), alpha);
  const auto a = md_seminorm(f, model);
  const auto b = md_seminorm(multiply_by_Wdot(f, 1, alpha), model);
  // Levels below 3 alpha - 1 are alpha - 1, 2 alpha - 1 and 0; the last is empty.
  ASSERT_EQ(b.levels.size(), 3u);
  EXPECT_NEAR(level(b, alpha - 1), level(a, 0.0), 1e-12 * a.value);
  EXPECT_NEAR(level(b, 2 * alpha - 1), level(a, alpha), 1e-12 * a.value);
  EXPECT_EQ(level(b, 0.0), 0.0);
}

TEST(Compose, ConstantField) {
  const auto g = make_dyadic_grid(1.0, 6);
  const auto w = generate_path(FbmKind{0.4, 1}, g, 1);
  const auto f = to_modelled(sine_of_driver(w), 0.4);
  const auto c = compose(constant_function(1, 1, 2.5), f);
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_EQ(c.at(k, 0).entries(), ModelSpaceVector(Symbol::one(), 2.5).entries());
  EXPECT_EQ(md_seminorm(c, rough_model(w, 0.4)).value, 0.0);
}

TEST(Compose, IdentityField) {
  const auto g = make_dyadic_grid(1.0, 5);
  const auto w = generate_path(FbmKind{0.4, 1}, g, 2);
  const ControlledPath cp(generate_path(FbmKind{0.4, 2}, g, 1), generate_path(FbmKind{0.4, 3}, g, 2), w);
  const auto f = to_modelled(cp, 0.4);
  auto id = linear_function(1, 1);
  const auto c = compose(id, f);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (const auto& [s, v] : f.at(k, 0).entries()) EXPECT_DOUBLE_EQ(c.at(k, 0).coefficient(s), v);
}

TEST(Compose, SineOfDriverBounds) {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 8);
  const auto w = generate_path(FbmKind{0.45, 12}, g, 1);
  const ControlledPath cp(w, generate_path(PolynomialKind{{{1.0}}}, g, 1), w);
  const auto c = compose(sin_function(1, 1), to_modelled(cp, alpha));
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(c.at(k, 0).coefficient(Symbol::one()), std::sin(w(k, 0)));
    EXPECT_EQ(c.at(k, 0).coefficient(Symbol::W(0)), std::cos(w(k, 0)));
  }
  const auto s = md_seminorm(c, rough_model(w, alpha));
  // Brute-force remainder quotient of F(y), against the bound from the proof
  // with |F'|, |F''| <= 1.
  double delta = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      const double dt = g.node(static_cast<long>(b)) - g.node(static_cast<long>(a));
      const double ws = w(a, 0), wt = w(b, 0);
      delta = std::max(delta, std::abs(std::sin(wt) - std::sin(ws) - std::cos(ws) * (wt - ws)) / std::pow(dt, 2 * alpha));
    }
  EXPECT_NEAR(level(s, 0.0), delta, 1e-12 * delta);
  const double holder = holder_seminorm(w, alpha);
  EXPECT_LE(delta, 0.5 * holder * holder + controlled_norm(cp, alpha).remainder);
  // Derivative level: |F'(y_t) y'_t - F'(y_s) y'_s| <= (|F'| |y'|_a + |y'|_inf |F''| |y|_a) |t-s|^a.
  EXPECT_LE(level(s, alpha), holder + holder);
}

TEST(Compose, RejectsMissingDerivativesAndDomain) {
  const auto g = make_dyadic_grid(1.0, 4);
  const auto w = generate_path(FbmKind{0.4, 1}, g, 1);
  const auto f = to_modelled(sine_of_driver(w), 0.4);
  auto F = sin_function(1, 1);
  F.hessian = nullptr;
  EXPECT_THROW(compose(F, f), InvalidArgument);
  auto G = sin_function(1, 1);
  G.domain = Box{{5.0}, {6.0}};
  EXPECT_THROW(compose(G, f), NumericalFailure);
  EXPECT_THROW(compose(sin_function(2, 1), f), InvalidArgument);
}

// Controlled path y = a W + b sin(2 pi t) + c, y' = a.
ModelledDistribution sample_controlled(const SampledPath& w, double a, double b, double c, double alpha) {
  const auto& g = w.grid();
  std::vector<double> y, yp;
  for (std::size_t k = 0; k < g.size(); ++k) {
    y.push_back(a * w(k, 0) + b * std::sin(2 * M_PI * g.node(static_cast<long>(k))) + c);
    yp.push_back(a);
  }
  return to_modelled(ControlledPath(SampledPath(g, 1, y), SampledPath(g, 1, yp), w), alpha);
}

TEST(Compose, LipschitzRatioStable) {
  const double alpha = 0.4;
  const auto g = make_dyadic_grid(1.0, 7);
  const auto w = generate_path(FbmKind{0.45, 2}, g, 1);
  const auto model = rough_model(w, alpha);
  const auto F = sin_function(1, 1);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> ratios;
  for (int trial = 0; trial < 20; ++trial) {
    const auto Y = sample_controlled(w, 0.2 * u(rng), 0.05 * u(rng), 0.3 * u(rng), alpha);
    const auto Yt = sample_controlled(w, 0.2 * u(rng), 0.05 * u(rng), 0.3 * u(rng), alpha);
    ASSERT_LE(md_norm(Y, model), 1.0);
    ASSERT_LE(md_norm(Yt, model), 1.0);
    ratios.push_back(md_norm(compose(F, Y) - compose(F, Yt), model) / md_norm(Y - Yt, model));
  }
  // C estimated on the first pair, every other ratio within a factor 2 of it.
  for (double r : ratios) {
    EXPECT_LE(r, 2.0 * ratios[0]);
    EXPECT_GE(r, 0.5 * ratios[0]);
  }
}

TEST(Functions, BuiltinsAndBounds) {
  EXPECT_THROW(builtin_function("cube", 1, 1), InvalidArgument);
  EXPECT_THROW(builtin_function("rotation", 1, 1), InvalidArgument);
  const auto R = builtin_function("rotation", 2, 1);
  const double y[2] = {1.0, 2.0};
  EXPECT_EQ(R.eval(y), (std::vector<double>{-2.0, 1.0}));
  const auto b = bounds_on_box(sin_function(1, 1), Box{{-10.0}, {10.0}});
  EXPECT_NEAR(b.value, 1.0, 1e-3);
  EXPECT_NEAR(b.first, 1.0, 1e-3);
  const auto t = bounds_on_box(tanh_function(1, 1), Box{{-3.0}, {3.0}});
  EXPECT_NEAR(t.first, 1.0, 1e-5);  // lattice misses 0 by half a spacing
  EXPECT_THROW(bounds_on_box(sin_function(1, 1), Box{}), InvalidArgument);
}

}  // namespace
}  // namespace roughstruct
