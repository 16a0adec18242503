#include "roughstruct/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "roughstruct/errors.hpp"
#include "roughstruct/parallel.hpp"

namespace roughstruct {

ReconstructionResult::ReconstructionResult(const WaveletBasis& basis, double horizon,
                                           std::vector<CoefficientLevel> fine,
                                           std::vector<WaveletCoefficients> series,
                                           SampledPath antiderivative, int base_level, int max_level)
    : basis_(basis),
      horizon_(horizon),
      fine_(std::move(fine)),
      series_(std::move(series)),
      z_(std::move(antiderivative)),
      base_level_(base_level),
      max_level_(max_level) {}

double ReconstructionResult::density(std::size_t c, double t) const {
  const auto& lev = fine_.at(c);
  const double scale = std::ldexp(1.0, lev.level) / horizon_;
  const double u = scale * t;
  const long k0 = static_cast<long>(std::ceil(u - basis_.support_hi(WaveletKind::father)));
  const long k1 = static_cast<long>(std::floor(u - basis_.support_lo(WaveletKind::father)));
  double v = 0.0;
  for (long k = std::max(k0, lev.first); k <= std::min(k1, lev.last()); ++k)
    v += lev.at(k) * basis_.phi(u - static_cast<double>(k));
  return std::sqrt(scale) * v;
}

double ReconstructionResult::pair(std::size_t c, const Window& w) const {
  const double step = horizon_ * std::ldexp(1.0, -fine_.at(c).level) / 8.0;
  auto n = static_cast<long>(std::ceil((w.hi - w.lo) / step));
  n += n % 2;
  n = std::max(n, 2L);
  const double h = (w.hi - w.lo) / static_cast<double>(n);
  double s = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double t = w.lo + h * static_cast<double>(i);
    const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += weight * w.value(t) * density(c, t);
  }
  return s * h / 3.0;
}

std::vector<std::pair<double, double>> ReconstructionResult::certificate_by_scale() const {
  std::vector<std::pair<double, double>> out;
  for (const auto& e : certificate) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == e.lambda; });
    if (it == out.end())
      out.emplace_back(e.lambda, e.ratio);
    else
      it->second = std::max(it->second, e.ratio);
  }
  return out;
}

ProbeBattery reconstruction_probe_battery() {
  ProbeBattery p;
  for (int m = 1; m <= 6; ++m) p.scales.push_back(std::ldexp(1.0, -m));
  p.profiles = {normalized_bump_profile(), odd_bump_profile()};
  p.base_points = 17;
  return p;
}

int default_truncation_level(const TimeGrid& grid, const WaveletBasis& basis) {
  return std::max(basis.base_level(), grid.level() - 2);
}

ReconstructionResult reconstruct(const ModelledDistribution& f, const Model& model,
                                 const WaveletBasis& basis, int J, const ProbeBattery& probes) {
  const auto& g = f.grid();
  if (!(g == model.grid())) throw InvalidArgument("modelled distribution and model grids differ");
  if (!basis.has_table()) throw InvalidArgument("wavelet table not built");
  const auto A = model.structure().index_set();
  const double min_a = *std::min_element(A.begin(), A.end());
  if (!(f.gamma() > min_a))
    throw InvalidArgument("reconstruction needs gamma > min A (gamma = " + format_double(f.gamma()) +
                          ", min A = " + format_double(min_a) + ")");
  if (!(basis.regularity() > std::abs(min_a)))
    throw InvalidArgument("wavelet regularity must exceed |min A|");
  const int l = basis.base_level();
  if (J < l || J > g.level())
    throw InvalidArgument("truncation level must lie between the base level and the grid level");

  const double T = g.horizon();
  const long NJ = 1L << J;
  const int shift = g.level() - J;
  const auto [k0, k1] = index_range(basis, J);
  const std::size_t m = f.components();
  const std::size_t count = static_cast<std::size_t>(k1 - k0 + 1);

  std::vector<CoefficientLevel> fine(m, CoefficientLevel{J, k0, std::vector<double>(count, 0.0)});
  parallel_for(count, [&](std::size_t q) {
    const long k = k0 + static_cast<long>(q);
    const long base = std::clamp(k, 0L, NJ);
    const auto node = static_cast<std::size_t>(base << shift);
    const double x = g.node(static_cast<long>(node));
    const Window w = basis_window(basis, WaveletKind::father, J, k, T);
    for (std::size_t c = 0; c < m; ++c) fine[c].values[q] = model.pair(x, f.at(node, c), w);
  }, 8);

  std::vector<WaveletCoefficients> series;
  std::vector<double> z(g.size() * m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    series.push_back(restrict_to_index_sets(decompose(fine[c], basis, l), basis));
    const auto zc = antiderivative_from_distribution(series.back(), basis, g);
    for (std::size_t k = 0; k < g.size(); ++k) z[k * m + c] = zc(k, 0);
  }
  ReconstructionResult out(basis, T, std::move(fine), std::move(series), SampledPath(g, m, std::move(z)),
                           l, J);

  if (probes.scales.empty() || probes.profiles.empty()) return out;
  if (probes.base_points < 2) throw InvalidArgument("probe battery needs at least two base points");
  const std::size_t N = g.intervals();
  struct Probe {
    double lambda;
    std::size_t node;
    const Profile* profile;
  };
  std::vector<Probe> list;
  for (double lambda : probes.scales)
    for (const auto& profile : probes.profiles)
      for (std::size_t b = 0; b < probes.base_points; ++b) {
        const auto node = static_cast<std::size_t>(std::llround(static_cast<double>(b * N) /
                                                                static_cast<double>(probes.base_points - 1)));
        const double s = g.node(static_cast<long>(node));
        const double tol = 1e-12 * T;
        if (s - lambda < -tol || s + lambda > T + tol) continue;
        list.push_back({lambda, node, &profile});
      }
  out.certificate.resize(list.size());
  parallel_for(list.size(), [&](std::size_t q) {
    const auto& p = list[q];
    const double s = g.node(static_cast<long>(p.node));
    const Window w = to_window(TestFunction(*p.profile, s, p.lambda));
    double diff = 0.0;
    for (std::size_t c = 0; c < m; ++c) diff += std::abs(out.pair(c, w) - model.pair(s, f.at(p.node, c), w));
    out.certificate[q] = {p.lambda, s, p.profile->name, diff / std::pow(p.lambda, f.gamma())};
  }, 1);
  return out;
}

std::vector<ThreePointDefect> three_point_defects(const SampledPath& I, const ControlledPath& cp,
                                                  const RoughPath& rp) {
  const std::size_t n = rp.dim();
  const std::size_t d = I.dim();
  if (cp.noise_dim() != n || cp.dim() != d * n || !(I.grid() == rp.grid()) || !(cp.grid() == rp.grid()))
    throw InvalidArgument("integral, controlled path and rough path do not match");
  const auto& W = rp.path();
  const auto& g = rp.grid();
  const std::size_t N = g.intervals();
  std::vector<ThreePointDefect> out;
  for (int lev = 0; lev <= g.level(); ++lev) {
    const std::size_t width = N >> lev;
    const double worst = parallel_max(N - width + 1, [&](std::size_t s) {
      const std::size_t t = s + width;
      const Tensor area = rp.area(s, t);
      double total = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        double r = I.increment(s, t, i);
        for (std::size_t j = 0; j < n; ++j) {
          r -= cp.y()(s, i * n + j) * W.increment(s, t, j);
          for (std::size_t k = 0; k < n; ++k) r -= cp.derivative(s, i * n + j, k) * area[k * n + j];
        }
        total += std::abs(r);
      }
      return total;
    });
    out.push_back({g.step() * static_cast<double>(width), worst});
  }
  return out;
}

WaveletIntegral wavelet_rough_integral(const ControlledPath& cp, const RoughPath& rp,
                                       const WaveletBasis& basis, int J) {
  const std::size_t n = rp.dim();
  if (cp.noise_dim() != n || cp.dim() % n != 0 || !(cp.grid() == rp.grid()))
    throw InvalidArgument("controlled path does not match the rough path");
  const double sup = rp.path().sup_norm();
  const double defect = chen_defect(rp);
  if (defect > 1e-8 * (1.0 + sup * sup))
    throw NumericalFailure("rough path violates Chen's relation (defect " + format_double(defect) + ")");
  const double alpha = rp.alpha();
  const Model model = Model::rough(rp);
  const auto f = multiply_by_Wdot(to_modelled(cp, alpha), n, alpha);
  auto rec = reconstruct(f, model, basis, J, ProbeBattery{{}, {}, 0});
  WaveletIntegral out{rec.antiderivative(), 0.0, {}};
  out.defects = three_point_defects(out.integral, cp, rp);
  for (const auto& e : out.defects)
    out.certificate = std::max(out.certificate, e.defect / std::pow(e.length, 3.0 * alpha));
  return out;
}

RoughPath wavelet_lift(const SampledPath& W, double alpha, const WaveletBasis& basis, int J) {
  if (!(alpha > 1.0 / 3.0 && alpha <= 0.5)) throw InvalidArgument("alpha must lie in (1/3, 1/2]");
  const std::size_t n = W.dim();
  const auto& g = W.grid();
  std::vector<ModelSpaceVector> v(g.size() * n * n);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[(k * n + i) * n + j].add(Symbol::Wdot(j), W(k, i));
  const ModelledDistribution f(g, 2.0 * alpha - 1.0, n * n, std::move(v));
  const auto rec = reconstruct(f, Model::first_order(W, alpha), basis, J, ProbeBattery{{}, {}, 0});
  const SampledPath& z = rec.antiderivative();
  auto second = SecondOrderProcess::from_block_function(W, alpha, [&](std::size_t a, std::size_t b, double* out) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out[i * n + j] = z.increment(a, b, i * n + j) - W(a, i) * W.increment(a, b, j);
  });
  return RoughPath(W, std::move(second));
}

double lift_continuity_gap(const SampledPath& W, const SampledPath& Wt, double alpha,
                           const WaveletBasis& basis, int J) {
  if (!(W.grid() == Wt.grid()) || W.dim() != Wt.dim()) throw InvalidArgument("paths differ in grid or dimension");
  std::vector<double> diff(W.values());
  for (std::size_t q = 0; q < diff.size(); ++q) diff[q] -= Wt.values()[q];
  const double denom = holder_seminorm(SampledPath(W.grid(), W.dim(), std::move(diff)), alpha,
                                       pair_sampling_for(W.grid().level(), 8));
  if (denom == 0.0) throw InvalidArgument("paths have zero Hölder distance");
  const auto a = wavelet_lift(W, alpha, basis, J);
  const auto b = wavelet_lift(Wt, alpha, basis, J);
  return rough_path_distance(a, b, alpha).sum() / denom;
}

void write_certificate_csv(const std::vector<CertificateEntry>& entries, std::ostream& out) {
  out << "lambda,s,profile,ratio\n";
  for (const auto& e : entries)
    out << format_double(e.lambda) << ',' << format_double(e.center) << ',' << e.profile << ','
        << format_double(e.ratio) << '\n';
}

}  // namespace roughstruct
