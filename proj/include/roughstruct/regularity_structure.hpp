#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "roughstruct/grid_paths.hpp"
#include "roughstruct/rough_core.hpp"

namespace roughstruct {

enum class SymbolTag { one, W, Wdot, WWdot, X };

/// Abstract basis symbol. Indices are 0-based; X carries a multi-index.
struct Symbol {
  SymbolTag tag = SymbolTag::one;
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<int> k;

  static Symbol one() { return {}; }
  static Symbol W(std::size_t i) { return {SymbolTag::W, i, 0, {}}; }
  static Symbol Wdot(std::size_t i) { return {SymbolTag::Wdot, i, 0, {}}; }
  static Symbol WWdot(std::size_t i, std::size_t j) { return {SymbolTag::WWdot, i, j, {}}; }
  /// X^k; the zero multi-index is the symbol one.
  static Symbol X(std::vector<int> k);

  /// 0, alpha, alpha - 1, 2 alpha - 1 or |k|.
  double homogeneity(double alpha) const;
  std::string name() const;

  auto operator<=>(const Symbol&) const = default;
};

/// Sparse coefficient vector over symbols; exact zeros are dropped.
class ModelSpaceVector {
 public:
  ModelSpaceVector() = default;
  ModelSpaceVector(const Symbol& s, double c) { add(s, c); }

  void add(const Symbol& s, double c);
  double coefficient(const Symbol& s) const;
  const std::map<Symbol, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Sum of |coefficients| over symbols of homogeneity beta.
  double component_norm(double beta, double alpha) const;
  /// Homogeneities present in the support, increasing.
  std::vector<double> levels(double alpha) const;

  ModelSpaceVector& operator+=(const ModelSpaceVector& o);
  ModelSpaceVector& operator-=(const ModelSpaceVector& o);
  ModelSpaceVector& operator*=(double c);
  friend ModelSpaceVector operator+(ModelSpaceVector a, const ModelSpaceVector& b) { return a += b; }
  friend ModelSpaceVector operator-(ModelSpaceVector a, const ModelSpaceVector& b) { return a -= b; }
  friend ModelSpaceVector operator*(double c, ModelSpaceVector a) { return a *= c; }

 private:
  std::map<Symbol, double> entries_;
};

/// Gamma_h: fixes one, Wdot and (through h) shifts W^i by h^i 1,
/// WWdot^{ij} by h^i Wdot^j and X^k to (X + h)^k.
struct StructureGroupElement {
  std::vector<double> h;

  /// Gamma_h Gamma_h' = Gamma_{h + h'}.
  StructureGroupElement compose(const StructureGroupElement& other) const;
  StructureGroupElement inverse() const;
};

/// Throws InvalidArgument if a symbol index does not fit h.
ModelSpaceVector gamma_apply(const StructureGroupElement& g, const ModelSpaceVector& v);

enum class StructureKind {
  polynomial,   ///< one and X^k, k = 1..degree (time, 1-D)
  first_order,  ///< one, W^i, Wdot^i
  rough,        ///< one, W^i, Wdot^i, WWdot^{ij}
};

/// The triple (A, T, G) for the instances used here.
class RegularityStructure {
 public:
  static RegularityStructure polynomial(int degree);
  /// Throws unless alpha lies in (1/3, 1/2].
  static RegularityStructure first_order(double alpha, std::size_t dim);
  static RegularityStructure rough(double alpha, std::size_t dim);

  StructureKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  std::size_t dim() const { return dim_; }
  /// Basis symbols, ordered by homogeneity.
  const std::vector<Symbol>& symbols() const { return symbols_; }
  /// The index set A, increasing.
  std::vector<double> index_set() const;
  double homogeneity(const Symbol& s) const { return s.homogeneity(alpha_); }
  bool contains(const Symbol& s) const;

 private:
  StructureKind kind_ = StructureKind::polynomial;
  double alpha_ = 1.0;
  std::size_t dim_ = 1;
  std::vector<Symbol> symbols_;
};

/// A model (Pi, Gamma) on a dyadic grid. Pairings are quadratures on the
/// grid cells, extended to the padded horizon [-T, 2T] by reflection.
///
/// polynomial: Pi_s(X^k)(t) = (t - s)^k, Gamma_{s,t} = Gamma_{h = s - t}.
/// rough / first_order: Pi_s(W^i)(t) = W^i_{s,t}, Pi_s(Wdot^i) = dW^i,
/// Pi_s(WWdot^{ij}) = d_u W2^{ij}_{s,u}, Gamma_{s,t} = Gamma_{h = W_{t,s}};
/// base points must be grid nodes.
class Model {
 public:
  static Model polynomial(const TimeGrid& grid, int degree);
  static Model first_order(const SampledPath& path, double alpha);
  static Model rough(const RoughPath& rp);

  const RegularityStructure& structure() const { return structure_; }
  const TimeGrid& grid() const { return grid_; }
  /// Throws InvalidArgument for first_order and polynomial models.
  const RoughPath& rough_path() const;
  /// Throws InvalidArgument for the polynomial model.
  const SampledPath& path() const;

  StructureGroupElement gamma(double s, double t) const;

  /// Pi_s(tau)(w) for one basis symbol. Window supports are clipped to the
  /// padded horizon.
  double pair(double s, const Symbol& tau, const Window& w) const;
  double pair(double s, const ModelSpaceVector& v, const Window& w) const;

 private:
  Model(RegularityStructure structure, TimeGrid grid);
  std::size_t node_of(double s) const;

  RegularityStructure structure_;
  TimeGrid grid_;
  std::shared_ptr<const SampledPath> path_;
  std::shared_ptr<const RoughPath> rough_;
};

/// Pi_s(v)(f). Throws InvalidArgument if f leaves the padded horizon or v
/// needs a second-order process the model lacks.
double pi_pair(const Model& model, double s, const ModelSpaceVector& v, const TestFunction& f);

/// Probe battery for the analytic model bounds.
struct ProbeBattery {
  std::vector<double> scales;         ///< lambda values
  std::vector<Profile> profiles;      ///< test-function profiles
  std::size_t base_points = 17;       ///< evenly spaced grid nodes on [0, T]
};

/// lambda in {2^-1..2^-7}, normalized even bump and odd bump.
ProbeBattery default_probe_battery();

struct ModelBounds {
  double pi = 0.0;     ///< max |Pi_s tau (phi_s^lambda)| / lambda^|tau|
  double gamma = 0.0;  ///< max |Gamma_{s,t} tau|_beta / |t - s|^{|tau| - beta}
  std::vector<std::pair<Symbol, double>> pi_by_symbol;
  std::vector<std::pair<Symbol, double>> gamma_by_symbol;
};

/// Empirical ||Pi||_{gamma,T} and ||Gamma||_{gamma,T} over the symbols of
/// homogeneity below gamma. The Gamma quotient runs over all pairs of the
/// probe base points.
ModelBounds model_bound_estimate(const Model& model, double gamma, const ProbeBattery& probes);

}  // namespace roughstruct
