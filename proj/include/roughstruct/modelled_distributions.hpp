#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "roughstruct/functions.hpp"
#include "roughstruct/grid_paths.hpp"
#include "roughstruct/regularity_structure.hpp"

namespace roughstruct {

/// (y, y') controlled by the reference path W: y in R^d, y' in R^{d x n}
/// stored row-major per node (column j of row i is dy^i / dW^j).
class ControlledPath {
 public:
  /// Throws InvalidArgument if grids differ or y' does not have d n components.
  ControlledPath(SampledPath y, SampledPath y_prime, SampledPath reference);

  const SampledPath& y() const { return y_; }
  const SampledPath& y_prime() const { return yp_; }
  const SampledPath& reference() const { return ref_; }
  const TimeGrid& grid() const { return y_.grid(); }
  std::size_t dim() const { return y_.dim(); }
  std::size_t noise_dim() const { return ref_.dim(); }

  double derivative(std::size_t k, std::size_t i, std::size_t j) const {
    return yp_(k, i * noise_dim() + j);
  }
  /// R^y_{s,t} = y_{s,t} - y'_s W_{s,t}, component i.
  double remainder(std::size_t s, std::size_t t, std::size_t i) const;

 private:
  SampledPath y_;
  SampledPath yp_;
  SampledPath ref_;
};

/// ||y'||_alpha and ||R^y||_{2 alpha}; the controlled seminorm is their sum.
struct ControlledNorm {
  double derivative = 0.0;
  double remainder = 0.0;
  double value() const { return derivative + remainder; }
};

/// Grid maxima over pairs s < t (all pairs up to level 8, dyadic beyond).
ControlledNorm controlled_norm(const ControlledPath& cp, double alpha);

/// Node values in T^m (m output components), regularity gamma.
class ModelledDistribution {
 public:
  /// values[k * components + c]; throws unless the size matches the grid.
  ModelledDistribution(TimeGrid grid, double gamma, std::size_t components,
                       std::vector<ModelSpaceVector> values);

  const TimeGrid& grid() const { return grid_; }
  double gamma() const { return gamma_; }
  std::size_t components() const { return components_; }
  const ModelSpaceVector& at(std::size_t k, std::size_t c) const {
    return values_[k * components_ + c];
  }
  const std::vector<ModelSpaceVector>& values() const { return values_; }

  /// Pointwise difference; grids, gamma and components must agree.
  ModelledDistribution operator-(const ModelledDistribution& o) const;

 private:
  TimeGrid grid_;
  double gamma_;
  std::size_t components_;
  std::vector<ModelSpaceVector> values_;
};

/// Y(t) = y_t 1 + y'_t W, gamma = 2 alpha. Component i carries y^i on 1 and
/// y'^{ij} on W^j.
ModelledDistribution to_modelled(const ControlledPath& cp, double alpha);

/// Inverse of to_modelled. Throws InvalidArgument if the support contains
/// anything other than 1 and W^j (j < reference dimension).
ControlledPath from_modelled(const ModelledDistribution& f, const SampledPath& reference);

struct MdSeminorm {
  double value = 0.0;
  /// (beta, max over pairs of |f(t) - Gamma_{t,s} f(s)|_beta / |t-s|^{gamma-beta}).
  std::vector<std::pair<double, double>> levels;
};

/// Grid maxima over pairs s < t of the graded quotients for every level
/// beta < gamma of the model's index set (all pairs up to level 8, dyadic
/// beyond). Norms sum over the output components.
MdSeminorm md_seminorm(const ModelledDistribution& f, const Model& model);

/// sup_beta |f(0)|_beta + md_seminorm (the equivalent form of the norm).
double md_norm(const ModelledDistribution& f, const Model& model);

/// Y * Wdot for f with d n components (component i n + j is row i, column
/// j of a d x n matrix field): 1 -> Wdot^j, W^k -> WWdot^{kj}, summed over
/// j into component i. gamma' = gamma + alpha - 1. Throws InvalidArgument
/// for other symbols or if n does not divide the components.
ModelledDistribution multiply_by_Wdot(const ModelledDistribution& f, std::size_t noise_dim,
                                      double alpha);

/// F o Y(t) = F(y_t) 1 + F'(y_t) y'_t W, d n components, same gamma.
/// Throws InvalidArgument if F lacks a first derivative or the dimensions
/// differ; NumericalFailure if y leaves F's declared domain.
ModelledDistribution compose(const FunctionDescriptor& F, const ModelledDistribution& f);

}  // namespace roughstruct
