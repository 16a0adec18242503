#include "roughstruct/regularity_structure.hpp"

#include <algorithm>
#include <cmath>

#include "roughstruct/errors.hpp"
#include "roughstruct/parallel.hpp"

namespace roughstruct {

namespace {

// Homogeneities closer than this are one level.
constexpr double kLevelTol = 1e-12;

bool same_level(double a, double b) { return std::abs(a - b) <= kLevelTol; }

}  // namespace

Symbol Symbol::X(std::vector<int> k) {
  for (int v : k)
    if (v < 0) throw InvalidArgument("multi-index entries must be nonnegative");
  if (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; })) return one();
  return {SymbolTag::X, 0, 0, std::move(k)};
}

double Symbol::homogeneity(double alpha) const {
  switch (tag) {
    case SymbolTag::one:
      return 0.0;
    case SymbolTag::W:
      return alpha;
    case SymbolTag::Wdot:
      return alpha - 1.0;
    case SymbolTag::WWdot:
      return 2.0 * alpha - 1.0;
    case SymbolTag::X: {
      int s = 0;
      for (int v : k) s += v;
      return s;
    }
  }
  return 0.0;
}

std::string Symbol::name() const {
  switch (tag) {
    case SymbolTag::one:
      return "1";
    case SymbolTag::W:
      return "W" + std::to_string(i + 1);
    case SymbolTag::Wdot:
      return "Wdot" + std::to_string(i + 1);
    case SymbolTag::WWdot:
      return "WWdot" + std::to_string(i + 1) + std::to_string(j + 1);
    case SymbolTag::X: {
      std::string s = "X^(";
      for (std::size_t m = 0; m < k.size(); ++m) s += (m ? "," : "") + std::to_string(k[m]);
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------

void ModelSpaceVector::add(const Symbol& s, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = entries_.try_emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) entries_.erase(it);
  }
}

double ModelSpaceVector::coefficient(const Symbol& s) const {
  const auto it = entries_.find(s);
  return it == entries_.end() ? 0.0 : it->second;
}

double ModelSpaceVector::component_norm(double beta, double alpha) const {
  double n = 0.0;
  for (const auto& [s, c] : entries_)
    if (same_level(s.homogeneity(alpha), beta)) n += std::abs(c);
  return n;
}

std::vector<double> ModelSpaceVector::levels(double alpha) const {
  std::vector<double> out;
  for (const auto& [s, c] : entries_) {
    const double b = s.homogeneity(alpha);
    if (std::none_of(out.begin(), out.end(), [&](double x) { return same_level(x, b); })) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ModelSpaceVector& ModelSpaceVector::operator+=(const ModelSpaceVector& o) {
  for (const auto& [s, c] : o.entries_) add(s, c);
  return *this;
}

ModelSpaceVector& ModelSpaceVector::operator-=(const ModelSpaceVector& o) {
  for (const auto& [s, c] : o.entries_) add(s, -c);
  return *this;
}

ModelSpaceVector& ModelSpaceVector::operator*=(double c) {
  if (c == 0.0) {
    entries_.clear();
    return *this;
  }
  for (auto& [s, v] : entries_) v *= c;
  return *this;
}

// ---------------------------------------------------------------------------

StructureGroupElement StructureGroupElement::compose(const StructureGroupElement& other) const {
  if (h.size() != other.h.size()) throw InvalidArgument("group elements of different dimension");
  StructureGroupElement g{h};
  for (std::size_t i = 0; i < h.size(); ++i) g.h[i] += other.h[i];
  return g;
}

StructureGroupElement StructureGroupElement::inverse() const {
  StructureGroupElement g{h};
  for (double& v : g.h) v = -v;
  return g;
}

namespace {

// (X + h)^k = sum_{l <= k} prod_m C(k_m, l_m) h_m^{k_m - l_m} X^l.
void add_shifted_monomial(const std::vector<int>& k, const std::vector<double>& h, double c,
                          ModelSpaceVector& out) {
  std::vector<int> l(k.size(), 0);
  while (true) {
    double coef = c;
    for (std::size_t m = 0; m < k.size(); ++m) {
      double binom = 1.0;
      for (int r = 0; r < l[m]; ++r) binom = binom * (k[m] - r) / (r + 1);
      coef *= binom * std::pow(h[m], k[m] - l[m]);
    }
    out.add(Symbol::X(l), coef);
    std::size_t m = 0;
    while (m < k.size() && l[m] == k[m]) l[m++] = 0;
    if (m == k.size()) break;
    ++l[m];
  }
}

}  // namespace

ModelSpaceVector gamma_apply(const StructureGroupElement& g, const ModelSpaceVector& v) {
  const std::size_t n = g.h.size();
  ModelSpaceVector out;
  for (const auto& [s, c] : v.entries()) {
    switch (s.tag) {
      case SymbolTag::one:
        out.add(s, c);
        break;
      case SymbolTag::Wdot:
        if (s.i >= n) throw InvalidArgument("symbol index exceeds the group dimension");
        out.add(s, c);
        break;
      case SymbolTag::W:
        if (s.i >= n) throw InvalidArgument("symbol index exceeds the group dimension");
        out.add(s, c);
        out.add(Symbol::one(), c * g.h[s.i]);
        break;
      case SymbolTag::WWdot:
        if (s.i >= n || s.j >= n) throw InvalidArgument("symbol index exceeds the group dimension");
        out.add(s, c);
        out.add(Symbol::Wdot(s.j), c * g.h[s.i]);
        break;
      case SymbolTag::X:
        if (s.k.size() != n) throw InvalidArgument("multi-index length differs from the group dimension");
        add_shifted_monomial(s.k, g.h, c, out);
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

RegularityStructure RegularityStructure::polynomial(int degree) {
  if (degree < 0) throw InvalidArgument("polynomial degree must be nonnegative");
  RegularityStructure r;
  r.kind_ = StructureKind::polynomial;
  r.alpha_ = 1.0;
  r.dim_ = 1;
  r.symbols_.push_back(Symbol::one());
  for (int k = 1; k <= degree; ++k) r.symbols_.push_back(Symbol::X({k}));
  return r;
}

namespace {

void check_rough_alpha(double alpha) {
  if (!(alpha > 1.0 / 3.0 && alpha <= 0.5)) throw InvalidArgument("alpha must lie in (1/3, 1/2]");
}

}  // namespace

RegularityStructure RegularityStructure::first_order(double alpha, std::size_t dim) {
  check_rough_alpha(alpha);
  if (dim == 0) throw InvalidArgument("dimension must be positive");
  RegularityStructure r;
  r.kind_ = StructureKind::first_order;
  r.alpha_ = alpha;
  r.dim_ = dim;
  for (std::size_t i = 0; i < dim; ++i) r.symbols_.push_back(Symbol::Wdot(i));
  r.symbols_.push_back(Symbol::one());
  for (std::size_t i = 0; i < dim; ++i) r.symbols_.push_back(Symbol::W(i));
  return r;
}

RegularityStructure RegularityStructure::rough(double alpha, std::size_t dim) {
  RegularityStructure r = first_order(alpha, dim);
  r.kind_ = StructureKind::rough;
  std::vector<Symbol> ww;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) ww.push_back(Symbol::WWdot(i, j));
  r.symbols_.insert(r.symbols_.begin() + static_cast<long>(dim), ww.begin(), ww.end());
  return r;
}

std::vector<double> RegularityStructure::index_set() const {
  std::vector<double> out;
  for (const auto& s : symbols_) {
    const double b = homogeneity(s);
    if (out.empty() || !same_level(out.back(), b)) out.push_back(b);
  }
  return out;
}

bool RegularityStructure::contains(const Symbol& s) const {
  return std::find(symbols_.begin(), symbols_.end(), s) != symbols_.end();
}

// ---------------------------------------------------------------------------

Model::Model(RegularityStructure structure, TimeGrid grid)
    : structure_(std::move(structure)), grid_(grid) {}

Model Model::polynomial(const TimeGrid& grid, int degree) {
  return Model(RegularityStructure::polynomial(degree), grid);
}

Model Model::first_order(const SampledPath& path, double alpha) {
  Model m(RegularityStructure::first_order(alpha, path.dim()), path.grid());
  m.path_ = std::make_shared<const SampledPath>(path);
  return m;
}

Model Model::rough(const RoughPath& rp) {
  Model m(RegularityStructure::rough(rp.alpha(), rp.dim()), rp.grid());
  m.rough_ = std::make_shared<const RoughPath>(rp);
  m.path_ = std::shared_ptr<const SampledPath>(m.rough_, &m.rough_->path());
  return m;
}

const RoughPath& Model::rough_path() const {
  if (!rough_) throw InvalidArgument("model has no second-order process");
  return *rough_;
}

const SampledPath& Model::path() const {
  if (!path_) throw InvalidArgument("polynomial model has no driving path");
  return *path_;
}

std::size_t Model::node_of(double s) const { return grid_.index_of(s); }

StructureGroupElement Model::gamma(double s, double t) const {
  if (structure_.kind() == StructureKind::polynomial) return {{s - t}};
  const std::size_t ks = node_of(s), kt = node_of(t);
  StructureGroupElement g;
  g.h.resize(path_->dim());
  for (std::size_t i = 0; i < g.h.size(); ++i) g.h[i] = path_->increment(kt, ks, i);
  return g;
}

namespace {

// Composite Simpson of w(t) g(t) over the clipped cells, with `sub`
// sub-cells per grid cell.
double weighted_integral(const TimeGrid& grid, const Window& w, const std::function<double(double)>& g,
                         int sub) {
  const auto [c0, c1] = cell_range(grid, w.lo, w.hi, true);
  const double h = grid.step() / sub;
  double sum = 0.0;
  for (long c = c0; c < c1; ++c) {
    const double a0 = grid.node(c);
    for (int q = 0; q < sub; ++q) {
      const double a = a0 + q * h, b = a + h, m = 0.5 * (a + b);
      sum += (w.value(a) * g(a) + 4.0 * w.value(m) * g(m) + w.value(b) * g(b)) * h / 6.0;
    }
  }
  return sum;
}

}  // namespace

double Model::pair(double s, const Symbol& tau, const Window& w) const {
  if (!structure_.contains(tau))
    throw InvalidArgument("symbol " + tau.name() + " is not part of the model's structure");
  const auto [c0, c1] = cell_range(grid_, w.lo, w.hi, true);
  const double h = grid_.step();
  if (structure_.kind() == StructureKind::polynomial) {
    // One quadrature for every monomial keeps Pi_s Gamma_{s,t} = Pi_t exact.
    const int k = tau.tag == SymbolTag::X ? tau.k[0] : 0;
    return weighted_integral(grid_, w, [&](double t) { return std::pow(t - s, k); }, 8);
  }
  if (tau.tag == SymbolTag::one) {
    double sum = 0.0;
    for (long c = c0; c < c1; ++c) sum += w.average(grid_.node(c), grid_.node(c + 1)) * h;
    return sum;
  }
  const auto& p = *path_;
  const std::size_t ks = node_of(s);
  switch (tau.tag) {
    case SymbolTag::W: {
      // W^i linear on cells; Simpson per cell.
      const double base = p(ks, tau.i);
      double sum = 0.0;
      for (long c = c0; c < c1; ++c) {
        const double a = grid_.node(c), b = grid_.node(c + 1);
        const double ga = p.extended(c, tau.i) - base, gb = p.extended(c + 1, tau.i) - base;
        sum += (w.value(a) * ga + 2.0 * w.value(0.5 * (a + b)) * (ga + gb) + w.value(b) * gb) * h / 6.0;
      }
      return sum;
    }
    case SymbolTag::Wdot: {
      double sum = 0.0;
      for (long c = c0; c < c1; ++c)
        sum += w.average(grid_.node(c), grid_.node(c + 1)) * p.extended_increment(c, tau.i);
      return sum;
    }
    case SymbolTag::WWdot: {
      // Increment of u -> W2_{s,u} over a cell is W2_cell + W^i_{s,u} W^j_cell.
      const auto& rp = rough_path();
      const double base = p(ks, tau.i);
      double sum = 0.0;
      for (long c = c0; c < c1; ++c) {
        const double inc = rp.extended_cell(c, tau.i, tau.j) +
                           (p.extended(c, tau.i) - base) * p.extended_increment(c, tau.j);
        sum += w.average(grid_.node(c), grid_.node(c + 1)) * inc;
      }
      return sum;
    }
    default:
      break;
  }
  return 0.0;
}

double Model::pair(double s, const ModelSpaceVector& v, const Window& w) const {
  double sum = 0.0;
  for (const auto& [tau, c] : v.entries()) sum += c * pair(s, tau, w);
  return sum;
}

double pi_pair(const Model& model, double s, const ModelSpaceVector& v, const TestFunction& f) {
  const double T = model.grid().horizon();
  const double lo = f.center() - f.scale(), hi = f.center() + f.scale();
  if (lo < -T * (1.0 + 1e-12) || hi > 2.0 * T * (1.0 + 1e-12))
    throw InvalidArgument("test function support leaves the padded horizon [-T, 2T]");
  for (const auto& [tau, c] : v.entries())
    if (tau.tag == SymbolTag::WWdot && model.structure().kind() != StructureKind::rough)
      throw InvalidArgument("symbol " + tau.name() + " needs a second-order process");
  return model.pair(s, v, to_window(f));
}

ProbeBattery default_probe_battery() {
  ProbeBattery b;
  for (int m = 1; m <= 7; ++m) b.scales.push_back(std::ldexp(1.0, -m));
  b.profiles = {normalized_bump_profile(), odd_bump_profile()};
  return b;
}

ModelBounds model_bound_estimate(const Model& model, double gamma, const ProbeBattery& probes) {
  if (probes.scales.empty() || probes.profiles.empty() || probes.base_points < 2)
    throw InvalidArgument("probe battery must be nonempty with at least two base points");
  const auto& g = model.grid();
  const double T = g.horizon();
  const double alpha = model.structure().alpha();
  std::vector<double> points;
  for (std::size_t m = 0; m < probes.base_points; ++m) {
    const auto k = static_cast<long>(std::lround(static_cast<double>(m * g.intervals()) /
                                                 static_cast<double>(probes.base_points - 1)));
    points.push_back(g.node(k));
  }
  ModelBounds out;
  for (const auto& tau : model.structure().symbols()) {
    const double ht = tau.homogeneity(alpha);
    if (ht >= gamma) continue;
    const ModelSpaceVector v(tau, 1.0);
    const double pi_max = parallel_max(points.size(), [&](std::size_t m) {
      const double s = points[m];
      double best = 0.0;
      for (double lambda : probes.scales)
        for (const auto& prof : probes.profiles) {
          if (s - lambda < -T || s + lambda > 2.0 * T) continue;
          const TestFunction f(prof, s, lambda);
          best = std::max(best, std::abs(model.pair(s, tau, to_window(f))) / std::pow(lambda, ht));
        }
      return best;
    }, 1);
    const double gamma_max = parallel_max(points.size(), [&](std::size_t a) {
      double best = 0.0;
      for (std::size_t b = 0; b < points.size(); ++b) {
        if (a == b) continue;
        const auto shifted = gamma_apply(model.gamma(points[a], points[b]), v);
        const double dist = std::abs(points[b] - points[a]);
        for (double beta : shifted.levels(alpha))
          if (beta < ht - kLevelTol)
            best = std::max(best, shifted.component_norm(beta, alpha) / std::pow(dist, ht - beta));
      }
      return best;
    }, 1);
    out.pi_by_symbol.emplace_back(tau, pi_max);
    out.gamma_by_symbol.emplace_back(tau, gamma_max);
    out.pi = std::max(out.pi, pi_max);
    out.gamma = std::max(out.gamma, gamma_max);
  }
  return out;
}

}  // namespace roughstruct
