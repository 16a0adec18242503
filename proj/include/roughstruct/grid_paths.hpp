#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace roughstruct {

/// Uniform dyadic grid t_k = k * T / 2^J on [0, T].
class TimeGrid {
 public:
  /// Throws InvalidArgument unless T > 0 (finite) and 0 <= J <= 24.
  TimeGrid(double horizon, int level);

  double horizon() const { return horizon_; }
  int level() const { return level_; }
  std::size_t intervals() const { return std::size_t{1} << level_; }
  std::size_t size() const { return intervals() + 1; }
  double step() const { return horizon_ / static_cast<double>(intervals()); }

  /// Node time; k may lie outside [0, 2^J] for the padded horizon [-T, 2T].
  double node(long k) const {
    return horizon_ * static_cast<double>(k) / static_cast<double>(intervals());
  }
  std::vector<double> nodes() const;

  /// Index of the node at time t. Throws InvalidArgument if t is not a node
  /// (relative tolerance 1e-9 of the step) or lies outside [0, T].
  std::size_t index_of(double t) const;

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && level_ == other.level_;
  }

 private:
  double horizon_;
  int level_;
};

TimeGrid make_dyadic_grid(double horizon, int level);

/// Path values in R^n at every node of a TimeGrid, stored row-major.
class SampledPath {
 public:
  SampledPath(TimeGrid grid, std::size_t dim, std::vector<double> values);
  static SampledPath zeros(const TimeGrid& grid, std::size_t dim);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return grid_.size(); }

  double operator()(std::size_t k, std::size_t i) const { return values_[k * dim_ + i]; }
  double& at(std::size_t k, std::size_t i) { return values_[k * dim_ + i]; }
  std::span<const double> row(std::size_t k) const {
    return {values_.data() + k * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

  /// Z_{s,t} component i for node indices s, t.
  double increment(std::size_t s, std::size_t t, std::size_t i) const {
    return (*this)(t, i) - (*this)(s, i);
  }

  /// Value at node k of the path extended to [-T, 2T] by point reflection
  /// about the endpoints: W(-t) = 2W(0) - W(t), W(T+t) = 2W(T) - W(T-t).
  double extended(long k, std::size_t i) const;
  /// Increment of the extended path over cell [t_c, t_{c+1}].
  double extended_increment(long cell, std::size_t i) const {
    return extended(cell + 1, i) - extended(cell, i);
  }

  SampledPath component(std::size_t i) const;
  /// max_k of the l1 norm of the node value.
  double sup_norm() const;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> values_;
};

/// Which node pairs enter a grid Hölder quotient.
enum class PairSampling { all, dyadic };

/// all when level <= threshold, dyadic otherwise.
PairSampling pair_sampling_for(int level, int threshold);

/// max over sampled node pairs s < t of quotient(s, t). Dyadic sampling uses
/// the pairs (i, i + 2^m). Rows are processed in parallel.
double max_over_pairs(std::size_t intervals, PairSampling sampling,
                      const std::function<double(std::size_t, std::size_t)>& quotient);

/// Grid proxy of the alpha-Hölder seminorm: max of |Z_{s,t}|_1 / |t-s|^alpha.
/// All pairs up to level 12, dyadic pairs beyond unless sampling is given.
double holder_seminorm(const SampledPath& path, double alpha);
double holder_seminorm(const SampledPath& path, double alpha, PairSampling sampling);

// ---------------------------------------------------------------------------
// Path generators

/// Component c is A sin((c/2 + 1) t) for even c and A cos((c/2 + 1) t) for
/// odd c (integer division), so n = 2 gives (sin t, cos t).
struct SinCosKind {
  double amplitude = 1.0;
};
/// W^i(t) = sum_p coeffs[i][p] t^p. A single coefficient row is broadcast.
struct PolynomialKind {
  std::vector<std::vector<double>> coeffs;
};
/// Independent fractional Brownian components, W(0) = 0.
struct FbmKind {
  double hurst = 0.5;
  std::uint64_t seed = 0;
};
/// Linear interpolation through (time, value) knots covering [0, T].
struct PiecewiseLinearKind {
  std::vector<std::pair<double, std::vector<double>>> knots;
};
using PathKind = std::variant<SinCosKind, PolynomialKind, FbmKind, PiecewiseLinearKind>;

SampledPath generate_path(const PathKind& kind, const TimeGrid& grid, std::size_t dim);

/// Exact-covariance fBm sampler. The Cholesky factor of the covariance on
/// the grid nodes t_1..t_N is computed once and reused for every sample.
class FbmSampler {
 public:
  /// Throws InvalidArgument unless 0 < H < 1; NumericalFailure if the
  /// covariance is not numerically positive definite.
  FbmSampler(const TimeGrid& grid, double hurst);
  SampledPath sample(std::size_t dim, std::uint64_t seed) const;
  const TimeGrid& grid() const { return grid_; }

 private:
  struct Factor;
  TimeGrid grid_;
  double hurst_;
  std::shared_ptr<const Factor> factor_;
};

// ---------------------------------------------------------------------------
// Test functions and windows

/// Smooth profile eta supported in [-1, 1].
struct Profile {
  std::string name;
  std::function<double(double)> eta;
};

/// exp(-1/(1-u^2)) on (-1, 1).
Profile bump_profile();
/// bump divided by its integral, so it has unit mass.
Profile unit_mass_bump_profile();
/// bump scaled so that max(sup|eta|, sup|eta'|) = 1.
Profile normalized_bump_profile();
/// u * bump(u), odd.
Profile odd_bump_profile();

/// Integral of the raw bump over (-1, 1).
double bump_integral();
/// Scale factor applied by normalized_bump_profile.
double bump_c1_normalization();

/// lambda^{-1} eta((t - s) / lambda) with center s and scale lambda in (0, 1].
class TestFunction {
 public:
  TestFunction(Profile profile, double center, double scale);
  double operator()(double t) const;
  double center() const { return center_; }
  double scale() const { return scale_; }
  const Profile& profile() const { return profile_; }

 private:
  Profile profile_;
  double center_;
  double scale_;
};

double evaluate_test_function(const TestFunction& f, double t);

/// A compactly supported weight used by every pairing. average(a, b) is the
/// mean of value over [a, b]; pairings against dZ use average * Z_{a,b}.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  std::function<double(double)> value;
  std::function<double(double, double)> average;
};

/// Window of a test function; cell averages by Simpson's rule.
Window to_window(const TestFunction& f);

/// Cells c (intervals [t_c, t_{c+1}]) meeting [lo, hi], as a half-open range.
/// Throws InvalidArgument if the range leaves the padded horizon [-T, 2T],
/// unless clip is set, in which case the range is cut to that horizon.
std::pair<long, long> cell_range(const TimeGrid& grid, double lo, double hi, bool clip = false);

/// integral of w(t) g(t) dt with g linear on each grid cell, given by its
/// node values g(c) for cell endpoints. Simpson on each cell.
double integrate_against_cells(const TimeGrid& grid, const Window& w,
                               const std::function<double(long)>& node_value);

// ---------------------------------------------------------------------------
// CSV

/// Header t,x1,..,xn then one row per node, 17 significant digits.
void write_path_csv(const SampledPath& path, std::ostream& out);
void write_path_csv(const SampledPath& path, const std::string& file);
/// Throws InvalidArgument on malformed input or non-dyadic time columns.
SampledPath read_path_csv(std::istream& in);
SampledPath read_path_csv(const std::string& file);

/// Shortest round-trip text for a double (17 significant digits).
std::string format_double(double v);

}  // namespace roughstruct
