#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "roughstruct/grid_paths.hpp"

namespace roughstruct {

/// n x n tensor, row-major.
using Tensor = std::vector<double>;

/// Second-order process stored as a dyadic pyramid: level m holds the
/// tensors of the aligned blocks [i 2^m, (i+1) 2^m] (node indices), level 0
/// the finest intervals. Arbitrary pairs are assembled from the pyramid by
/// Chen's relation (chen_extend).
class SecondOrderProcess {
 public:
  /// Writes the n x n tensor of the block [t_a, t_b] to out.
  using BlockFunction = std::function<void(std::size_t a, std::size_t b, double* out)>;

  /// Coarse levels filled from the finest tensors by Chen's relation, so the
  /// result is Chen-consistent by construction.
  static SecondOrderProcess from_finest(const SampledPath& path, std::vector<double> finest,
                                        double alpha);
  /// Every block evaluated independently; Chen consistency is then a
  /// property of block, measured by chen_defect.
  static SecondOrderProcess from_block_function(const SampledPath& path, double alpha,
                                                const BlockFunction& block);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  double alpha() const { return alpha_; }
  /// True when coarse levels were derived from the finest level by Chen.
  bool chen_filled() const { return chen_filled_; }

  const double* block(int level, std::size_t i) const {
    return levels_[static_cast<std::size_t>(level)].data() + i * dim_ * dim_;
  }
  const double* finest(std::size_t k) const { return block(0, k); }

  /// Copy with delta added to entry (row, col) of one block only.
  SecondOrderProcess with_block_perturbed(int level, std::size_t i, std::size_t row,
                                          std::size_t col, double delta) const;
  /// Sub-process on the aligned window [k0, k1]: k1 - k0 = 2^p, k0 a multiple of 2^p.
  SecondOrderProcess restrict(std::size_t k0, std::size_t k1) const;

 private:
  SecondOrderProcess(TimeGrid grid, std::size_t dim, double alpha);

  TimeGrid grid_;
  std::size_t dim_;
  double alpha_;
  bool chen_filled_ = false;
  std::vector<std::vector<double>> levels_;
};

/// W_{s,t} assembled by Chen from aligned dyadic blocks, greedily left to
/// right. Throws InvalidArgument if s > t.
Tensor chen_extend(const SecondOrderProcess& proc, const SampledPath& path, std::size_t s,
                   std::size_t t);

/// A path together with a second-order process, alpha in (1/3, 1/2].
class RoughPath {
 public:
  RoughPath(SampledPath path, SecondOrderProcess second);

  const SampledPath& path() const { return path_; }
  const SecondOrderProcess& second() const { return second_; }
  const TimeGrid& grid() const { return path_.grid(); }
  std::size_t dim() const { return path_.dim(); }
  double alpha() const { return second_.alpha(); }

  Tensor area(std::size_t s, std::size_t t) const { return chen_extend(second_, path_, s, t); }

  /// Entry (i, j) of the cell tensor of the path extended by point
  /// reflection; cells c in [-N, 2N). A reflected cell carries
  /// dW (x) dW - W_mirror, the level-two part of the reflected piece.
  double extended_cell(long c, std::size_t i, std::size_t j) const;

  /// Restriction to an aligned window, re-timed to start at 0.
  RoughPath restrict(std::size_t k0, std::size_t k1) const;

 private:
  SampledPath path_;
  SecondOrderProcess second_;
};

/// max over node triples s < u < t of |W_{s,t} - W_{s,u} - W_{u,t} - W_{s,u} (x) W_{u,t}|_1.
/// All nodes up to level 8; above, the level-8 dyadic nodes.
double chen_defect(const RoughPath& rp);

struct RoughPathSeminorm {
  double path = 0.0;   ///< ||W||_alpha
  double second = 0.0; ///< ||W2||_{2 alpha}
  double sum() const { return path + second; }
};

/// Grid maxima of the two Hölder quotients (all pairs up to level 8,
/// dyadic pairs beyond).
RoughPathSeminorm rough_path_seminorm(const RoughPath& rp);

/// The same quotients for the difference of two rough paths on one grid.
RoughPathSeminorm rough_path_distance(const RoughPath& a, const RoughPath& b, double alpha);

struct LinearLift {};
/// Closed form for paths produced by SinCosKind.
struct SinCosLift {
  double amplitude = 1.0;
};
/// Closed form for paths produced by PolynomialKind.
struct PolynomialLift {
  std::vector<std::vector<double>> coeffs;
};
using LiftMode = std::variant<LinearLift, SinCosLift, PolynomialLift>;

/// Exact iterated integrals: 1/2 dW (x) dW per interval for the linear mode,
/// closed-form antiderivatives on every dyadic block for analytic modes.
/// Throws InvalidArgument when the path does not match the analytic form.
RoughPath lift_piecewise_smooth(const SampledPath& path, const LiftMode& mode, double alpha = 0.5);

}  // namespace roughstruct
