#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "roughstruct/grid_paths.hpp"
#include "roughstruct/modelled_distributions.hpp"
#include "roughstruct/rough_core.hpp"

namespace roughstruct {

/// Least-squares slope of log|error| against log(scale).
struct OrderFit {
  double slope = 0.0;
  double r2 = 0.0;
};

/// samples are (scale, error). Needs at least 4 samples spanning 2 octaves
/// of scale, otherwise InvalidArgument. Zero errors are dropped; if fewer
/// than two remain the slope is +infinity (exact at every scale).
OrderFit convergence_order_fit(const std::vector<std::pair<double, double>>& samples);

/// Hölder exponent read off the decay of max |Z_{s,s+h}|_1 over dyadic h,
/// fitted on the finest half of the levels (at least 4). Returns 1 for paths
/// whose increments vanish.
double estimate_holder_exponent(const SampledPath& path);

struct YoungIntegral {
  std::vector<double> value;
  std::vector<std::string> warnings;
};

/// Left-point sums sum_u y_u W_{u,v} over the grid between nodes s and t.
/// y has d n components (row i, column j at i n + j), W has n, the value d.
/// Exponents that are not supplied (NaN) are estimated; a warning is added
/// when beta + alpha <= 1 or a supplied exponent exceeds its estimate by
/// more than 0.1. Throws InvalidArgument if s > t or the grids differ.
YoungIntegral young_integral(const SampledPath& y, const SampledPath& W, std::size_t s, std::size_t t,
                             double beta = std::numeric_limits<double>::quiet_NaN(),
                             double alpha = std::numeric_limits<double>::quiet_NaN());

/// Compensated sum over u < v consecutive in {s, t} and the dyadic nodes of
/// mesh level m between them:
///   sum y_u W_{u,v} + y'_u W2_{u,v}.
/// cp.y() has d n components; the value has d. Throws InvalidArgument if
/// s > t, m lies outside [0, grid level] or the paths do not match.
std::vector<double> rough_integral_sum(const ControlledPath& cp, const RoughPath& rp, std::size_t s,
                                       std::size_t t, int mesh_level);

/// t -> rough_integral_sum(0, t) on every node, in one pass.
SampledPath rough_integral_path(const ControlledPath& cp, const RoughPath& rp, int mesh_level);

/// (mesh, |sum(m) - sum(m + 1)|_1) for m = 0 .. grid level - 1.
std::vector<std::pair<double, double>> refinement_table(const ControlledPath& cp, const RoughPath& rp,
                                                        std::size_t s, std::size_t t);

/// Fit of refinement_table with the two coarsest meshes excluded.
OrderFit refinement_order(const ControlledPath& cp, const RoughPath& rp, std::size_t s, std::size_t t);

/// scale,error
void write_convergence_csv(const std::vector<std::pair<double, double>>& samples, std::ostream& out);

}  // namespace roughstruct
