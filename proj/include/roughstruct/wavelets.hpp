#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "roughstruct/grid_paths.hpp"

namespace roughstruct {

enum class WaveletKind { father, mother };

/// Daubechies scaling function and wavelet, tabulated by the cascade
/// algorithm on a dyadic grid and centered by an integer shift.
///
/// With s the shift, the centered filter is h_c[n] = h[n + s] and
/// phi(t) = sqrt(2) sum_n h_c[n] phi(2t - n), psi(t) = sqrt(2) sum_n g_c[n] phi(2t - n)
/// with g_c[n] = (-1)^n h_c[1 - n]. Both vanish outside [-c, c].
class WaveletBasis {
 public:
  /// An empty basis without tables; evaluation throws.
  WaveletBasis() = default;

  /// Daubechies with 6, 8 or 10 taps (3, 4 or 5 vanishing moments), tables
  /// at resolution 2^-table_level with table_level in [6, 20].
  static WaveletBasis daubechies(int taps = 6, int table_level = 14);

  bool has_table() const { return static_cast<bool>(tables_); }
  const std::string& family() const { return family_; }
  int taps() const { return taps_; }
  /// Raw (uncentered) scaling filter, summing to sqrt(2).
  const std::vector<double>& scaling_filter() const { return filter_; }
  /// Centered filter coefficient h_c[n], 0 outside its range.
  double centered_filter(long n) const;
  /// Centered wavelet filter coefficient g_c[n].
  double centered_wavelet_filter(long n) const;
  int shift() const { return shift_; }
  double support_radius() const { return radius_; }
  /// Hölder exponent of the scaling function for this filter.
  double regularity() const { return regularity_; }
  int vanishing_moments() const { return taps_ / 2; }
  int table_level() const { return table_level_; }
  /// Smallest l >= 0 with 2^-l * c <= 1.
  int base_level() const;

  /// Centered phi / psi at unit scale.
  double phi(double x) const;
  double psi(double x) const;
  double value(WaveletKind kind, double x) const {
    return kind == WaveletKind::father ? phi(x) : psi(x);
  }
  /// integral_{-inf}^{x} of phi / psi (exact for the interpolated table).
  double integral(WaveletKind kind, double x) const;

  double support_lo(WaveletKind kind) const;
  double support_hi(WaveletKind kind) const;

 private:
  struct Tables;
  const Tables& tables() const;

  std::string family_;
  int taps_ = 0;
  std::vector<double> filter_;
  int shift_ = 0;
  double radius_ = 0.0;
  double regularity_ = 0.0;
  int table_level_ = 0;
  std::shared_ptr<const Tables> tables_;
};

/// 2^{j/2} phi(2^j t - k) (resp. psi) by table lookup.
double cascade_evaluate(const WaveletBasis& basis, WaveletKind which, int j, long k, double t);

/// Basis element on [0, T] in physical time: (2^j / T)^{1/2} phi(2^j t / T - k).
Window basis_window(const WaveletBasis& basis, WaveletKind which, int j, long k, double horizon);

/// integral over [a, b] of the physical-time basis element.
double basis_integral(const WaveletBasis& basis, WaveletKind which, int j, long k,
                      double horizon, double a, double b);

/// Index set [-floor(c), 2^j + floor(c)] of level j.
std::pair<long, long> index_range(const WaveletBasis& basis, int j);

/// The distribution dZ of one path component, acting on windows by
/// Riemann-Stieltjes sums over the (reflected) path grid.
class StieltjesMeasure {
 public:
  StieltjesMeasure(std::shared_ptr<const SampledPath> path, std::size_t component = 0);
  explicit StieltjesMeasure(const SampledPath& path, std::size_t component = 0);

  /// sum over cells of average(w, cell) * Z_{cell}.
  double pair(const Window& w) const;
  const TimeGrid& grid() const { return path_->grid(); }
  const SampledPath& path() const { return *path_; }
  std::size_t component() const { return component_; }

 private:
  std::shared_ptr<const SampledPath> path_;
  std::size_t component_;
};

/// Coefficients of one level, indices first .. first + values.size() - 1.
struct CoefficientLevel {
  int level = 0;
  long first = 0;
  std::vector<double> values;

  double at(long k) const {
    const long i = k - first;
    return i < 0 || i >= static_cast<long>(values.size()) ? 0.0
                                                          : values[static_cast<std::size_t>(i)];
  }
  long last() const { return first + static_cast<long>(values.size()) - 1; }
};

/// phi coefficients at the base level plus psi coefficients at levels
/// base .. base + psi.size() - 1.
struct WaveletCoefficients {
  CoefficientLevel phi;
  std::vector<CoefficientLevel> psi;

  int base_level() const { return phi.level; }
  int max_level() const { return phi.level + static_cast<int>(psi.size()) - 1; }
};

/// <xi, phi^l_k> for k in I_l and <xi, psi^j_k> for l <= j <= J, k in I_j.
/// Throws InvalidArgument if 2^-l c > 1, J < l, or J exceeds the grid level.
WaveletCoefficients wavelet_coefficients(const StieltjesMeasure& xi, const WaveletBasis& basis,
                                         int base_level, int max_level);

/// Change of basis from phi coefficients at level J to phi at level l plus
/// psi at levels l .. J-1 (orthogonal filter bank). Exact for the continuous
/// basis; the tabulated functions agree with it to O(4^-table_level). Coarse levels are
/// kept on every index whose basis function can be nonzero; restrict with
/// restrict_to_index_sets for the index sets I_j.
WaveletCoefficients decompose(const CoefficientLevel& fine, const WaveletBasis& basis,
                              int base_level);
WaveletCoefficients restrict_to_index_sets(const WaveletCoefficients& c,
                                           const WaveletBasis& basis);

/// z(t) = sum_k a_k int_0^t phi^l_k + sum_j sum_k b^j_k int_0^t psi^j_k on the
/// nodes of grid. Throws if the deepest level exceeds the table level.
SampledPath antiderivative_from_distribution(const WaveletCoefficients& c,
                                             const WaveletBasis& basis, const TimeGrid& grid);

/// Same for a pure phi expansion at a single level.
SampledPath antiderivative_from_scaling(const CoefficientLevel& c, const WaveletBasis& basis,
                                        const TimeGrid& grid);

}  // namespace roughstruct
