#include "roughstruct/regularity_structure.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "roughstruct/errors.hpp"

namespace roughstruct {
namespace {

ModelSpaceVector random_vector(const RegularityStructure& rs, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ModelSpaceVector v;
  for (const auto& s : rs.symbols()) v.add(s, nd(rng));
  return v;
}

TEST(Symbol, Homogeneities) {
  const double a = 0.4;
  EXPECT_EQ(Symbol::one().homogeneity(a), 0.0);
  EXPECT_EQ(Symbol::W(1).homogeneity(a), a);
  EXPECT_EQ(Symbol::Wdot(0).homogeneity(a), a - 1.0);
  EXPECT_EQ(Symbol::WWdot(0, 1).homogeneity(a), 2.0 * a - 1.0);
  EXPECT_EQ(Symbol::X({2, 1}).homogeneity(a), 3.0);
  EXPECT_EQ(Symbol::X({0, 0}), Symbol::one());
}

TEST(ModelSpaceVector, ZeroHasEmptySupport) {
  ModelSpaceVector v(Symbol::W(0), 2.0);
  v.add(Symbol::W(0), -2.0);
  EXPECT_TRUE(v.empty());
  EXPECT_TRUE((0.0 * ModelSpaceVector(Symbol::one(), 3.0)).empty());
}

TEST(ModelSpaceVector, GradedNorm) {
  ModelSpaceVector v;
  v.add(Symbol::W(0), 2.0);
  v.add(Symbol::W(1), -3.0);
  v.add(Symbol::one(), 0.5);
  EXPECT_EQ(v.component_norm(0.4, 0.4), 5.0);
  EXPECT_EQ(v.component_norm(0.0, 0.4), 0.5);
  EXPECT_EQ(v.levels(0.4), (std::vector<double>{0.0, 0.4}));
}

TEST(GammaApply, IdentityAtZero) {
  std::mt19937_64 rng(1);
  const auto rs = RegularityStructure::rough(0.4, 3);
  const auto v = random_vector(rs, rng);
  EXPECT_EQ(gamma_apply({{0.0, 0.0, 0.0}}, v).entries(), v.entries());
}

TEST(GammaApply, IteratedIntegralSymbol) {
  const auto out = gamma_apply({{1.0, 0.0}}, ModelSpaceVector(Symbol::WWdot(0, 1), 1.0));
  ModelSpaceVector expected(Symbol::WWdot(0, 1), 1.0);
  expected.add(Symbol::Wdot(1), 1.0);
  EXPECT_EQ(out.entries(), expected.entries());
}

TEST(GammaApply, PolynomialBinomial) {
  const double h = 0.7;
  const auto out = gamma_apply({{h}}, ModelSpaceVector(Symbol::X({2}), 1.0));
  EXPECT_EQ(out.coefficient(Symbol::X({2})), 1.0);
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::X({1})), 2.0 * h);
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::one()), h * h);
}

TEST(GammaApply, MultiIndexBinomial) {
  const auto out = gamma_apply({{2.0, 3.0}}, ModelSpaceVector(Symbol::X({1, 2}), 1.0));
  // (x + 2)(y + 3)^2
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::X({1, 2})), 1.0);
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::X({1, 1})), 6.0);
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::X({1, 0})), 9.0);
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::X({0, 2})), 2.0);
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::X({0, 1})), 12.0);
  EXPECT_DOUBLE_EQ(out.coefficient(Symbol::one()), 18.0);
}

TEST(GammaApply, DimensionMismatch) {
  EXPECT_THROW(gamma_apply({{1.0}}, ModelSpaceVector(Symbol::W(1), 1.0)), InvalidArgument);
  EXPECT_THROW(gamma_apply({{1.0}}, ModelSpaceVector(Symbol::X({1, 1}), 1.0)), InvalidArgument);
}

TEST(GammaApply, GroupLaw) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  const auto rs = RegularityStructure::rough(0.4, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const StructureGroupElement g{{nd(rng), nd(rng)}}, g2{{nd(rng), nd(rng)}};
    const auto v = random_vector(rs, rng);
    const auto lhs = gamma_apply(g, gamma_apply(g2, v));
    const auto rhs = gamma_apply(g.compose(g2), v);
    for (const auto& s : rs.symbols())
      EXPECT_NEAR(lhs.coefficient(s), rhs.coefficient(s), 1e-14 * (1.0 + std::abs(rhs.coefficient(s))));
    // Inverse undoes the action.
    const auto back = gamma_apply(g.inverse(), gamma_apply(g, v));
    for (const auto& s : rs.symbols()) EXPECT_NEAR(back.coefficient(s), v.coefficient(s), 1e-13);
  }
}

TEST(GammaApply, Triangular) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  const double alpha = 0.45;
  for (const auto& rs : {RegularityStructure::rough(alpha, 2), RegularityStructure::polynomial(3)}) {
    for (const auto& s : rs.symbols()) {
      const std::size_t n = s.tag == SymbolTag::X || rs.kind() == StructureKind::polynomial ? 1 : 2;
      StructureGroupElement g;
      for (std::size_t i = 0; i < n; ++i) g.h.push_back(nd(rng));
      const auto diff = gamma_apply(g, ModelSpaceVector(s, 1.0)) - ModelSpaceVector(s, 1.0);
      for (const auto& [t, c] : diff.entries()) EXPECT_LT(t.homogeneity(alpha), s.homogeneity(alpha));
    }
  }
}

TEST(Structure, IndexSets) {
  const auto r = RegularityStructure::rough(0.4, 2);
  const auto a = r.index_set();
  ASSERT_EQ(a.size(), 4u);
  EXPECT_DOUBLE_EQ(a[0], -0.6);
  EXPECT_DOUBLE_EQ(a[1], -0.2);
  EXPECT_EQ(r.symbols().size(), 1u + 2u + 2u + 4u);
  EXPECT_EQ(RegularityStructure::polynomial(2).index_set(), (std::vector<double>{0.0, 1.0, 2.0}));
  EXPECT_THROW(RegularityStructure::rough(0.3, 1), InvalidArgument);
}

TEST(Model, PairingOneIsMass) {
  const auto g = make_dyadic_grid(1.0, 10);
  const auto model = Model::first_order(generate_path(FbmKind{0.4, 2}, g, 1), 0.4);
  const TestFunction f(unit_mass_bump_profile(), 0.5, 0.25);
  EXPECT_NEAR(pi_pair(model, 0.5, ModelSpaceVector(Symbol::one(), 1.0), f), 1.0, 1e-6);
}

TEST(Model, OddMomentOfEvenBumpVanishes) {
  const auto g = make_dyadic_grid(1.0, 10);
  const auto w = generate_path(PolynomialKind{{{0.0, 1.0}}}, g, 1);
  const auto model = Model::first_order(w, 0.5);
  for (double lambda : {0.5, 0.125}) {
    const TestFunction f(bump_profile(), 0.0, lambda);
    EXPECT_NEAR(pi_pair(model, 0.0, ModelSpaceVector(Symbol::W(0), 1.0), f), 0.0, 1e-6);
  }
}

TEST(Model, LebesgueDriverMatchesMass) {
  const auto g = make_dyadic_grid(1.0, 10);
  const auto model = Model::first_order(generate_path(PolynomialKind{{{0.0, 1.0}}}, g, 1), 0.5);
  const TestFunction f(bump_profile(), 0.3, 0.2);
  EXPECT_NEAR(pi_pair(model, 0.0, ModelSpaceVector(Symbol::Wdot(0), 1.0), f),
              pi_pair(model, 0.0, ModelSpaceVector(Symbol::one(), 1.0), f), 1e-12);
}

TEST(Model, PolynomialPairing) {
  const auto model = Model::polynomial(make_dyadic_grid(1.0, 8), 2);
  const TestFunction f(bump_profile(), 0.5, 0.25);
  // Brute-force oracle: midpoint rule with 10^5 points.
  double ref = 0.0;
  const int m = 100000;
  for (int q = 0; q < m; ++q) {
    const double t = 0.25 + (q + 0.5) * 0.5 / m;
    ref += f(t) * (t - 0.1) * (t - 0.1) * 0.5 / m;
  }
  EXPECT_NEAR(pi_pair(model, 0.1, ModelSpaceVector(Symbol::X({2}), 1.0), f), ref, 1e-9);
}

TEST(Model, MissingSecondOrderProcess) {
  const auto g = make_dyadic_grid(1.0, 6);
  const auto model = Model::first_order(generate_path(FbmKind{0.4, 2}, g, 2), 0.4);
  const TestFunction f(bump_profile(), 0.5, 0.25);
  EXPECT_THROW(pi_pair(model, 0.5, ModelSpaceVector(Symbol::WWdot(0, 1), 1.0), f), InvalidArgument);
  EXPECT_THROW(model.rough_path(), InvalidArgument);
}

TEST(Model, RejectsOutsidePaddedHorizon) {
  const auto g = make_dyadic_grid(0.25, 6);
  const auto model = Model::first_order(generate_path(FbmKind{0.4, 2}, g, 1), 0.4);
  EXPECT_THROW(pi_pair(model, 0.0, ModelSpaceVector(Symbol::one(), 1.0), TestFunction(bump_profile(), 0.0, 0.5)),
               InvalidArgument);
}

TEST(Model, BasePointsMustBeNodes) {
  const auto g = make_dyadic_grid(1.0, 4);
  const auto model = Model::first_order(generate_path(FbmKind{0.4, 2}, g, 1), 0.4);
  EXPECT_THROW(model.gamma(0.1, 0.5), InvalidArgument);
}

// Pi_s Gamma_{s,t} = Pi_t on every symbol, for a smooth and a rough driver.
void check_algebraic_identity(const Model& model, double tol) {
  const auto& g = model.grid();
  const std::vector<double> bases = {g.node(0), g.node(37), g.node(64), g.node(128)};
  for (double s : bases)
    for (double t : bases)
      for (const auto& tau : model.structure().symbols())
        for (double lambda : {0.5, 0.0625}) {
          const TestFunction f(bump_profile(), t, lambda);
          const ModelSpaceVector v(tau, 1.0);
          const double lhs = pi_pair(model, s, gamma_apply(model.gamma(s, t), v), f);
          const double rhs = pi_pair(model, t, v, f);
          EXPECT_NEAR(lhs, rhs, tol * (1.0 + std::abs(rhs))) << tau.name() << " " << s << " " << t;
        }
}

TEST(Model, AlgebraicIdentityRough) {
  const auto g = make_dyadic_grid(1.0, 7);
  check_algebraic_identity(Model::rough(lift_piecewise_smooth(generate_path(SinCosKind{}, g, 2), SinCosLift{}, 0.5)),
                           1e-10);
  check_algebraic_identity(
      Model::rough(lift_piecewise_smooth(generate_path(FbmKind{0.4, 5}, g, 2), LinearLift{}, 0.4)), 1e-10);
}

TEST(Model, AlgebraicIdentityPolynomial) {
  check_algebraic_identity(Model::polynomial(make_dyadic_grid(1.0, 7), 3), 1e-8);
}

TEST(Model, CocycleExact) {
  const auto g = make_dyadic_grid(1.0, 6);
  const auto model = Model::rough(lift_piecewise_smooth(generate_path(FbmKind{0.4, 3}, g, 2), LinearLift{}, 0.4));
  const auto rs = model.structure();
  std::mt19937_64 rng(4);
  const auto v = random_vector(rs, rng);
  for (long s : {0L, 5L, 30L})
    for (long t : {3L, 64L})
      for (long u : {0L, 17L}) {
        const auto lhs = gamma_apply(model.gamma(g.node(s), g.node(t)),
                                     gamma_apply(model.gamma(g.node(t), g.node(u)), v));
        const auto rhs = gamma_apply(model.gamma(g.node(s), g.node(u)), v);
        for (const auto& sym : rs.symbols()) EXPECT_NEAR(lhs.coefficient(sym), rhs.coefficient(sym), 1e-13);
      }
}

TEST(ModelBounds, PolynomialGammaQuotientIsOne) {
  const auto model = Model::polynomial(make_dyadic_grid(1.0, 6), 1);
  const auto b = model_bound_estimate(model, 2.0, default_probe_battery());
  ASSERT_EQ(b.gamma_by_symbol.size(), 2u);
  EXPECT_EQ(b.gamma_by_symbol[1].first, Symbol::X({1}));
  EXPECT_NEAR(b.gamma_by_symbol[1].second, 1.0, 1e-14);
}

TEST(ModelBounds, RoughGammaQuotientOfWIsHolderNorm) {
  const auto g = make_dyadic_grid(1.0, 8);
  const auto w = generate_path(FbmKind{0.45, 12}, g, 1);
  const auto model = Model::rough(lift_piecewise_smooth(w, LinearLift{}, 0.4));
  ProbeBattery probes = default_probe_battery();
  probes.base_points = g.size();
  const auto b = model_bound_estimate(model, 0.5, probes);
  double q = 0.0;
  for (const auto& [s, v] : b.gamma_by_symbol)
    if (s == Symbol::W(0)) q = v;
  EXPECT_NEAR(q, holder_seminorm(w, 0.4), 1e-12);
}

TEST(ModelBounds, ZeroPathHasNoNoisePairing) {
  const auto g = make_dyadic_grid(1.0, 6);
  const auto model = Model::rough(lift_piecewise_smooth(SampledPath::zeros(g, 1), LinearLift{}, 0.4));
  const auto b = model_bound_estimate(model, 0.8, default_probe_battery());
  for (const auto& [s, v] : b.pi_by_symbol)
    if (s.tag != SymbolTag::one) EXPECT_EQ(v, 0.0) << s.name();
  EXPECT_THROW(model_bound_estimate(model, 0.8, ProbeBattery{}), InvalidArgument);
}

}  // namespace
}  // namespace roughstruct
