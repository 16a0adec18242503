#include "roughstruct/grid_paths.hpp"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "roughstruct/errors.hpp"

namespace roughstruct {
namespace {

// Integral of exp(-1/(1-u^2)) over (-1, 1), 30-digit quadrature.
constexpr double kBumpIntegral = 0.443993816168079437823;

TEST(TimeGrid, SmallestGrid) {
  const auto g = make_dyadic_grid(1.0, 0);
  EXPECT_EQ(g.nodes(), (std::vector<double>{0.0, 1.0}));
}

TEST(TimeGrid, Quarters) {
  const auto g = make_dyadic_grid(1.0, 2);
  EXPECT_EQ(g.nodes(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(g.intervals(), 4u);
}

TEST(TimeGrid, HorizonTwo) {
  EXPECT_EQ(make_dyadic_grid(2.0, 1).nodes(), (std::vector<double>{0.0, 1.0, 2.0}));
}

TEST(TimeGrid, RejectsBadArguments) {
  EXPECT_THROW(make_dyadic_grid(0.0, 3), InvalidArgument);
  EXPECT_THROW(make_dyadic_grid(-1.0, 3), InvalidArgument);
  EXPECT_THROW(make_dyadic_grid(1.0, -1), InvalidArgument);
  EXPECT_THROW(make_dyadic_grid(1.0, 25), InvalidArgument);
}

TEST(TimeGrid, NodesIncreaseFromZeroToHorizon) {
  const auto g = make_dyadic_grid(3.7, 9);
  const auto t = g.nodes();
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 3.7);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LT(t[k - 1], t[k]);
}

SampledPath from_function(const TimeGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v;
  for (double t : g.nodes()) v.push_back(f(t));
  return SampledPath(g, 1, v);
}

TEST(Holder, LinearPath) {
  const auto p = from_function(make_dyadic_grid(1.0, 6), [](double t) { return t; });
  EXPECT_NEAR(holder_seminorm(p, 1.0), 1.0, 1e-14);
}

TEST(Holder, ConstantPath) {
  const auto p = from_function(make_dyadic_grid(1.0, 6), [](double) { return 3.0; });
  EXPECT_EQ(holder_seminorm(p, 0.3), 0.0);
}

TEST(Holder, SquareRootAttainsOne) {
  const auto p = from_function(make_dyadic_grid(1.0, 10), [](double t) { return std::sqrt(t); });
  EXPECT_NEAR(holder_seminorm(p, 0.5), 1.0, 1e-12);
}

TEST(Holder, RejectsAlpha) {
  const auto p = from_function(make_dyadic_grid(1.0, 3), [](double t) { return t; });
  EXPECT_THROW(holder_seminorm(p, 0.0), InvalidArgument);
  EXPECT_THROW(holder_seminorm(p, 1.5), InvalidArgument);
}

TEST(Holder, MonotoneUnderRefinement) {
  const auto f = [](double t) { return std::sin(7.0 * t) + std::sqrt(t); };
  double prev = 0.0;
  for (int J = 3; J <= 9; ++J) {
    const double v = holder_seminorm(from_function(make_dyadic_grid(1.0, J), f), 0.4);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Holder, BoundsEveryIncrement) {
  const auto g = make_dyadic_grid(1.0, 7);
  const auto p = generate_path(FbmKind{0.4, 11}, g, 2);
  const double alpha = 0.35;
  const double c = holder_seminorm(p, alpha);
  for (std::size_t s = 0; s < g.size(); s += 3)
    for (std::size_t t = s + 1; t < g.size(); t += 5) {
      const double inc = std::abs(p.increment(s, t, 0)) + std::abs(p.increment(s, t, 1));
      EXPECT_LE(inc, c * std::pow(g.node(t) - g.node(s), alpha) * (1 + 1e-12));
    }
}

TEST(Holder, DyadicPairsNeverExceedAllPairs) {
  const auto p = generate_path(FbmKind{0.3, 5}, make_dyadic_grid(1.0, 8), 1);
  EXPECT_LE(holder_seminorm(p, 0.3, PairSampling::dyadic), holder_seminorm(p, 0.3, PairSampling::all));
}

TEST(GeneratePath, SinCos) {
  const auto g = make_dyadic_grid(1.0, 3);
  const auto p = generate_path(SinCosKind{}, g, 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(p(k, 0), std::sin(g.node(k)));
    EXPECT_EQ(p(k, 1), std::cos(g.node(k)));
  }
}

TEST(GeneratePath, PiecewiseLinearKnots) {
  PiecewiseLinearKind kind{{{0.0, {0.0, 0.0}}, {1.0, {1.0, 0.0}}, {2.0, {1.0, 1.0}}}};
  const auto p = generate_path(kind, make_dyadic_grid(2.0, 1), 2);
  EXPECT_EQ(p.values(), (std::vector<double>{0, 0, 1, 0, 1, 1}));
}

TEST(GeneratePath, PolynomialBroadcast) {
  const auto p = generate_path(PolynomialKind{{{1.0, 0.0, 2.0}}}, make_dyadic_grid(1.0, 2), 2);
  EXPECT_DOUBLE_EQ(p(2, 0), 1.5);
  EXPECT_DOUBLE_EQ(p(2, 1), 1.5);
}

TEST(GeneratePath, RejectsBadKinds) {
  const auto g = make_dyadic_grid(1.0, 3);
  EXPECT_THROW(generate_path(FbmKind{1.0, 0}, g, 1), InvalidArgument);
  EXPECT_THROW(generate_path(PolynomialKind{}, g, 1), InvalidArgument);
  EXPECT_THROW(generate_path(PiecewiseLinearKind{{{0.0, {0.0}}, {0.5, {1.0}}}}, g, 1), InvalidArgument);
}

TEST(Fbm, ReproducibleFromSeed) {
  const auto g = make_dyadic_grid(1.0, 6);
  EXPECT_EQ(generate_path(FbmKind{0.3, 42}, g, 2).values(),
            generate_path(FbmKind{0.3, 42}, g, 2).values());
  EXPECT_NE(generate_path(FbmKind{0.3, 42}, g, 2).values(),
            generate_path(FbmKind{0.3, 43}, g, 2).values());
}

TEST(Fbm, BrownianQuadraticVariation) {
  FbmSampler sampler(make_dyadic_grid(1.0, 12), 0.5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = sampler.sample(1, seed);
    double qv = 0.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) qv += std::pow(p.increment(k, k + 1, 0), 2);
    EXPECT_NEAR(qv, 1.0, 0.15) << "seed " << seed;
  }
}

TEST(Fbm, BrownianIncrementsUncorrelated) {
  FbmSampler sampler(make_dyadic_grid(1.0, 8), 0.5);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = sampler.sample(1, seed);
    for (std::size_t q = 0; q + 2 <= 8; ++q) {
      const double x = p.increment(q * 32, (q + 1) * 32, 0);
      const double y = p.increment((q + 1) * 32, (q + 2) * 32, 0);
      sxy += x * y;
      sxx += x * x;
      syy += y * y;
    }
  }
  EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 0.1);
}

TEST(Extension, ReflectionReproducesLinearPaths) {
  const auto g = make_dyadic_grid(2.0, 4);
  const auto p = from_function(g, [](double t) { return 3.0 * t - 1.0; });
  const long n = 16;
  for (long k = -n; k <= 2 * n; ++k) EXPECT_NEAR(p.extended(k, 0), 3.0 * g.node(k) - 1.0, 1e-13);
  EXPECT_THROW(p.extended(-n - 1, 0), InvalidArgument);
  EXPECT_THROW(p.extended(2 * n + 1, 0), InvalidArgument);
}

TEST(TestFunction, BumpExample) {
  TestFunction f(bump_profile(), 1.0, 0.5);
  EXPECT_NEAR(evaluate_test_function(f, 1.0), 2.0 * std::exp(-1.0), 1e-15);
}

TEST(TestFunction, ZeroOutsideSupport) {
  for (const auto& prof : {bump_profile(), odd_bump_profile(), unit_mass_bump_profile()}) {
    TestFunction f(prof, 0.3, 0.25);
    EXPECT_EQ(f(0.3 + 0.5), 0.0);
    EXPECT_EQ(f(0.3 - 0.25), 0.0);
  }
}

TEST(TestFunction, UnitScaleIdentity) {
  TestFunction f(bump_profile(), 0.0, 1.0);
  EXPECT_EQ(f(0.0), std::exp(-1.0));
}

TEST(TestFunction, RejectsScale) {
  EXPECT_THROW(TestFunction(bump_profile(), 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(TestFunction(bump_profile(), 0.0, 1.5), InvalidArgument);
}

TEST(TestFunction, IntegralIndependentOfCenterAndScale) {
  EXPECT_NEAR(bump_integral(), kBumpIntegral, 1e-15);
  for (double s : {-0.3, 0.0, 0.71, 2.0}) {
    for (double lambda : {1.0, 0.5, 0.125, 1.0 / 64}) {
      TestFunction f(bump_profile(), s, lambda);
      const double h = lambda / 64;
      double sum = 0.0;
      for (int q = 0; q < 128; ++q) {
        const double a = s - lambda + q * h;
        sum += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
      }
      EXPECT_NEAR(sum / kBumpIntegral, 1.0, 1e-6) << s << " " << lambda;
    }
  }
}

TEST(TestFunction, NormalizedBumpHasUnitC1Norm) {
  // sup |eta'| of the raw bump is 0.79842975 (dense scan), larger than 1/e.
  EXPECT_NEAR(bump_c1_normalization(), 1.0 / 0.7984297516, 1e-8);
  const auto p = normalized_bump_profile();
  double sup_d = 0.0;
  for (int q = -9999; q < 10000; ++q) {
    const double u = q * 1e-4;
    sup_d = std::max(sup_d, std::abs((p.eta(u + 1e-7) - p.eta(u - 1e-7)) / 2e-7));
  }
  EXPECT_NEAR(sup_d, 1.0, 1e-5);
}

TEST(Csv, RoundTripIsBitExact) {
  const auto p = generate_path(FbmKind{0.37, 9}, make_dyadic_grid(1.7, 7), 3);
  std::stringstream ss;
  write_path_csv(p, ss);
  const auto q = read_path_csv(ss);
  EXPECT_EQ(q.grid(), p.grid());
  EXPECT_EQ(q.dim(), 3u);
  EXPECT_EQ(q.values(), p.values());
}

TEST(Csv, RejectsMalformed) {
  std::stringstream bad_header("x,y\n0,1\n1,2\n");
  EXPECT_THROW(read_path_csv(bad_header), InvalidArgument);
  std::stringstream bad_rows("t,x1\n0,1\n0.5,2\n0.75,2\n1,3\n");
  EXPECT_THROW(read_path_csv(bad_rows), InvalidArgument);
  std::stringstream bad_times("t,x1\n0,1\n0.6,2\n0.75,2\n1,3\n1.25,3\n");
  EXPECT_THROW(read_path_csv(bad_times), InvalidArgument);
  std::stringstream bad_number("t,x1\n0,1\n1,abc\n");
  EXPECT_THROW(read_path_csv(bad_number), InvalidArgument);
}

}  // namespace
}  // namespace roughstruct
