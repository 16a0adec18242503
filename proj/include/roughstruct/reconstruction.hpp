#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "roughstruct/modelled_distributions.hpp"
#include "roughstruct/regularity_structure.hpp"
#include "roughstruct/rough_core.hpp"
#include "roughstruct/wavelets.hpp"

namespace roughstruct {

/// One probe of the reconstruction bound.
struct CertificateEntry {
  double lambda = 0.0;
  double center = 0.0;
  std::string profile;
  /// |(R f - Pi_s f(s))(eta_s^lambda)| / lambda^gamma, summed over components.
  double ratio = 0.0;
};

/// R^J f = sum_k Pi_{x_k}(f(x_k))(phi^J_k) phi^J_k per output component,
/// with x_k = k 2^-J T clamped to [0, T].
class ReconstructionResult {
 public:
  ReconstructionResult(const WaveletBasis& basis, double horizon, std::vector<CoefficientLevel> fine,
                       std::vector<WaveletCoefficients> series, SampledPath antiderivative,
                       int base_level, int max_level);

  std::size_t components() const { return fine_.size(); }
  int base_level() const { return base_level_; }
  int max_level() const { return max_level_; }
  /// phi coefficients at level J of component c.
  const CoefficientLevel& fine(std::size_t c) const { return fine_[c]; }
  /// phi at level l plus psi at levels l .. J-1, restricted to the index sets.
  const WaveletCoefficients& series(std::size_t c) const { return series_[c]; }
  /// z with z(0) = 0, one column per component.
  const SampledPath& antiderivative() const { return z_; }

  /// Value of the partial sum R^J f at time t.
  double density(std::size_t c, double t) const;
  /// (R^J f)(w) by composite Simpson at 1/8 of the level-J spacing.
  double pair(std::size_t c, const Window& w) const;

  /// Filled by reconstruct when a model is available.
  std::vector<CertificateEntry> certificate;
  /// max ratio per lambda, in the order of the probe scales.
  std::vector<std::pair<double, double>> certificate_by_scale() const;

 private:
  WaveletBasis basis_;
  double horizon_;
  std::vector<CoefficientLevel> fine_;
  std::vector<WaveletCoefficients> series_;
  SampledPath z_;
  int base_level_;
  int max_level_;
};

/// Probes for the certificate: lambda in {2^-1..2^-6}, even and odd bumps,
/// 17 evenly spaced centers; probes whose support leaves [0, T] are skipped.
ProbeBattery reconstruction_probe_battery();

/// Partial-sum reconstruction at level J, its wavelet series at the base level
/// of the basis and the antiderivative on the grid of f. Throws
/// InvalidArgument when gamma <= min A, the basis regularity does not
/// exceed |min A|, J lies outside [base level, grid level], or the grids differ.
ReconstructionResult reconstruct(const ModelledDistribution& f, const Model& model,
                                 const WaveletBasis& basis, int J,
                                 const ProbeBattery& probes = reconstruction_probe_battery());

/// Default truncation level: grid level - 2, at least the base level.
int default_truncation_level(const TimeGrid& grid, const WaveletBasis& basis);

/// max over node pairs s < t at one dyadic length of
/// |I_{s,t} - y_s W_{s,t} - y'_s W2_{s,t}|_1.
struct ThreePointDefect {
  double length = 0.0;
  double defect = 0.0;
};

/// Defects for lengths T 2^-m, m = 0 .. grid level, every aligned and
/// unaligned start node s. y carries d n components (row i, column j at
/// i n + j); I has d components.
std::vector<ThreePointDefect> three_point_defects(const SampledPath& I, const ControlledPath& cp,
                                                  const RoughPath& rp);

struct WaveletIntegral {
  SampledPath integral;
  /// max over lengths of defect / length^{3 alpha}.
  double certificate = 0.0;
  std::vector<ThreePointDefect> defects;
};

/// I = antiderivative of R(to_modelled(cp) * Wdot). cp.y() has d n
/// components; the result has d. Throws NumericalFailure if rp fails Chen
/// beyond 1e-8 (1 + |W|_inf^2).
WaveletIntegral wavelet_rough_integral(const ControlledPath& cp, const RoughPath& rp,
                                       const WaveletBasis& basis, int J);

/// Lift through the reconstruction of W^i_s Wdot^j under the first-order
/// model: W2_{s,t} = z_{s,t} - W_s (x) W_{s,t}. Throws InvalidArgument unless
/// alpha lies in (1/3, 1/2].
RoughPath wavelet_lift(const SampledPath& W, double alpha, const WaveletBasis& basis, int J);

/// ||lift(W) - lift(W~)||_alpha / ||W - W~||_alpha (rough-path seminorm of
/// the difference over the Hölder distance). Throws InvalidArgument if the
/// paths are identical or live on different grids.
double lift_continuity_gap(const SampledPath& W, const SampledPath& Wt, double alpha,
                           const WaveletBasis& basis, int J);

/// lambda,s,profile,ratio
void write_certificate_csv(const std::vector<CertificateEntry>& entries, std::ostream& out);

}  // namespace roughstruct
