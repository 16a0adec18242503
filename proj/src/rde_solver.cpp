#include "roughstruct/rde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>

#include "roughstruct/errors.hpp"
#include "roughstruct/integration.hpp"
#include "roughstruct/reconstruction.hpp"

namespace roughstruct {

namespace {

bool power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

const WaveletBasis& cached_basis(int taps) {
  static std::mutex mu;
  static std::map<int, WaveletBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(taps);
  if (it == cache.end()) it = cache.emplace(taps, WaveletBasis::daubechies(taps)).first;
  return it->second;
}

void check_dimensions(std::size_t d, const std::vector<double>& xi, const FunctionDescriptor& F,
                      const RoughPath& rp) {
  if (xi.size() != d || F.dim != d || F.noise_dim != rp.dim())
    throw InvalidArgument("initial value, function and driver dimensions do not match");
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha > 1.0 / 3.0 && alpha < beta && beta <= 0.5))
    throw InvalidArgument("solver exponents must satisfy 1/3 < alpha < beta <= 1/2");
  if (initial_window_cells != 0 && !power_of_two(initial_window_cells))
    throw InvalidArgument("initial window must be a power of two cells");
  if (min_window_cells < 16 || !power_of_two(min_window_cells))
    throw InvalidArgument("minimum window must be a power of two of at least 16 cells");
  if (max_picard_iters < 1) throw InvalidArgument("max_picard_iters must be positive");
  if (!(fixed_point_tol > 0.0)) throw InvalidArgument("fixed_point_tol must be positive");
}

ModelledDistribution picard_step(const ModelledDistribution& Y, const std::vector<double>& xi,
                                 const FunctionDescriptor& F, const RoughPath& rp, const SolverConfig& cfg) {
  const std::size_t d = Y.components();
  const std::size_t n = rp.dim();
  check_dimensions(d, xi, F, rp);
  if (!(Y.grid() == rp.grid())) throw InvalidArgument("iterate and driver grids differ");
  const auto& g = Y.grid();

  const auto FY = compose(F, Y);
  SampledPath I = SampledPath::zeros(g, d);
  if (cfg.route == IntegralRoute::riemann) {
    I = rough_integral_path(from_modelled(FY, rp.path()), rp, g.level());
  } else {
    const auto& basis = cached_basis(cfg.wavelet_taps);
    I = reconstruct(multiply_by_Wdot(FY, n, cfg.alpha), Model::rough(rp), basis,
                    default_truncation_level(g, basis), ProbeBattery{{}, {}, 0})
            .antiderivative();
  }
  std::vector<ModelSpaceVector> v(g.size() * d);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) {
      auto& x = v[k * d + i];
      x.add(Symbol::one(), xi[i] + I(k, i));
      for (std::size_t j = 0; j < n; ++j) x.add(Symbol::W(j), FY.at(k, i * n + j).coefficient(Symbol::one()));
    }
  return ModelledDistribution(g, 2.0 * cfg.alpha, d, std::move(v));
}

namespace {

// |y - y~|_1 + |y' - y'~|_1, maximized over nodes.
double sup_difference(const ModelledDistribution& a, const ModelledDistribution& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.components(); ++c) {
      const auto diff = a.at(k, c) - b.at(k, c);
      for (const auto& [sym, coef] : diff.entries()) s += std::abs(coef);
    }
    worst = std::max(worst, s);
  }
  return worst;
}

struct WindowSolution {
  ModelledDistribution Y;
  WindowReport report;
};

std::optional<WindowSolution> solve_window(const std::vector<double>& xi, const FunctionDescriptor& F,
                                           const RoughPath& rp, const SolverConfig& cfg) {
  const auto& g = rp.grid();
  const auto& W = rp.path();
  const std::size_t d = xi.size(), n = rp.dim();
  const auto Fxi = F.eval(xi.data());

  std::vector<ModelSpaceVector> v(g.size() * d);
  std::vector<double> lo(xi), hi(xi);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) {
      double y = xi[i];
      for (std::size_t j = 0; j < n; ++j) y += Fxi[i * n + j] * W.increment(0, k, j);
      auto& x = v[k * d + i];
      x.add(Symbol::one(), y);
      for (std::size_t j = 0; j < n; ++j) x.add(Symbol::W(j), Fxi[i * n + j]);
      lo[i] = std::min(lo[i], y);
      hi[i] = std::max(hi[i], y);
    }
  // One span for all coordinates, so a coordinate the first iterate keeps
  // constant still gets room to move.
  double span = 0.0;
  for (std::size_t i = 0; i < d; ++i) span = std::max(span, hi[i] - lo[i]);
  WindowReport report;
  for (std::size_t i = 0; i < d; ++i) {
    report.box.lo.push_back(lo[i] - 2.0 * span);
    report.box.hi.push_back(hi[i] + 2.0 * span);
  }
  ModelledDistribution Y(g, 2.0 * cfg.alpha, d, std::move(v));

  double prev = -1.0;
  for (int it = 1; it <= cfg.max_picard_iters; ++it) {
    auto next = picard_step(Y, xi, F, rp, cfg);
    const double diff = sup_difference(next, Y);
    for (std::size_t k = 0; k < g.size(); ++k) {
      std::vector<double> y(d);
      for (std::size_t i = 0; i < d; ++i) y[i] = next.at(k, i).coefficient(Symbol::one());
      if (!report.box.contains(y.data())) return std::nullopt;
    }
    if (prev > 0.0) {
      const double r = diff / prev;
      if (r >= 1.0 && diff >= cfg.fixed_point_tol) return std::nullopt;
      report.ratio = std::max(report.ratio, r);
    }
    Y = std::move(next);
    report.iterations = it;
    if (diff < cfg.fixed_point_tol) return WindowSolution{std::move(Y), report};
    prev = diff;
  }
  return std::nullopt;
}

}  // namespace

SolveResult solve_rde(const std::vector<double>& xi, const FunctionDescriptor& F, const RoughPath& rp,
                      const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t d = xi.size(), n = rp.dim();
  check_dimensions(d, xi, F, rp);
  const auto& g = rp.grid();
  const std::size_t N = g.intervals();
  if (N < cfg.min_window_cells) throw InvalidArgument("grid has fewer cells than the minimum window");
  if (cfg.route == IntegralRoute::wavelet) {
    const double sup = rp.path().sup_norm();
    if (chen_defect(rp) > 1e-8 * (1.0 + sup * sup)) throw NumericalFailure("rough path violates Chen's relation");
  }

  std::vector<double> y(g.size() * d, 0.0), yp(g.size() * d * n, 0.0);
  std::size_t size = cfg.initial_window_cells == 0 ? N : std::min(cfg.initial_window_cells, N);
  SolveDiagnostics diag;
  std::vector<double> start = xi;
  std::size_t k0 = 0;
  while (k0 < N) {
    const std::size_t k1 = k0 + size;
    auto sol = solve_window(start, F, rp.restrict(k0, k1), cfg);
    if (!sol) {
      size /= 2;
      ++diag.halvings;
      if (size < cfg.min_window_cells)
        throw NumericalFailure("Picard iteration does not contract on a window of " +
                               std::to_string(cfg.min_window_cells) + " cells at t = " +
                               format_double(g.node(static_cast<long>(k0))));
      continue;
    }
    for (std::size_t k = 0; k <= size; ++k)
      for (std::size_t i = 0; i < d; ++i) {
        y[(k0 + k) * d + i] = sol->Y.at(k, i).coefficient(Symbol::one());
        for (std::size_t j = 0; j < n; ++j)
          yp[((k0 + k) * d + i) * n + j] = sol->Y.at(k, i).coefficient(Symbol::W(j));
      }
    sol->report.t0 = g.node(static_cast<long>(k0));
    sol->report.t1 = g.node(static_cast<long>(k1));
    diag.windows.push_back(sol->report);
    for (std::size_t i = 0; i < d; ++i) start[i] = y[k1 * d + i];
    k0 = k1;
  }
  ControlledPath solution(SampledPath(g, d, std::move(y)), SampledPath(g, d * n, std::move(yp)), rp.path());
  diag.residual = solution_residual(solution, xi, F, rp, cfg);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto Fy = F.eval(solution.y().row(k).data());
    double s = 0.0;
    for (std::size_t q = 0; q < Fy.size(); ++q) s += std::abs(solution.y_prime()(k, q) - Fy[q]);
    diag.fixed_point_identity = std::max(diag.fixed_point_identity, s);
  }
  return {std::move(solution), std::move(diag)};
}

double solution_residual(const ControlledPath& sol, const std::vector<double>& xi, const FunctionDescriptor& F,
                         const RoughPath& rp, const SolverConfig& cfg) {
  check_dimensions(sol.dim(), xi, F, rp);
  const auto FY = compose(F, to_modelled(sol, cfg.alpha));
  const auto I = rough_integral_path(from_modelled(FY, rp.path()), rp, rp.grid().level());
  double worst = 0.0;
  for (std::size_t k = 0; k < sol.grid().size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < sol.dim(); ++i) s += std::abs(sol.y()(k, i) - xi[i] - I(k, i));
    worst = std::max(worst, s);
  }
  return worst;
}

void write_solution_csv(const ControlledPath& sol, std::ostream& out) {
  const std::size_t d = sol.dim(), n = sol.noise_dim();
  out << 't';
  for (std::size_t i = 0; i < d; ++i) out << ",y" << i + 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) out << ",yp" << i + 1 << j + 1;
  out << '\n';
  const auto& g = sol.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    out << format_double(g.node(static_cast<long>(k)));
    for (std::size_t i = 0; i < d; ++i) out << ',' << format_double(sol.y()(k, i));
    for (std::size_t q = 0; q < d * n; ++q) out << ',' << format_double(sol.y_prime()(k, q));
    out << '\n';
  }
}

}  // namespace roughstruct
