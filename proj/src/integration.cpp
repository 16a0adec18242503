#include "roughstruct/integration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <ostream>

#include "roughstruct/errors.hpp"

namespace roughstruct {

OrderFit convergence_order_fit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 4) throw InvalidArgument("order fit needs at least 4 samples");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [scale, err] : samples) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(err))
      throw InvalidArgument("order fit needs positive finite scales and finite errors");
    lo = std::min(lo, scale);
    hi = std::max(hi, scale);
  }
  if (hi < 4.0 * lo) throw InvalidArgument("order fit samples must span at least 2 octaves");

  std::vector<std::pair<double, double>> logs;
  for (const auto& [scale, err] : samples)
    if (err != 0.0) logs.emplace_back(std::log(scale), std::log(std::abs(err)));
  if (logs.size() < 2) return {std::numeric_limits<double>::infinity(), 1.0};

  Eigen::MatrixXd A(logs.size(), 2);
  Eigen::VectorXd b(logs.size());
  for (std::size_t q = 0; q < logs.size(); ++q) {
    A(static_cast<Eigen::Index>(q), 0) = logs[q].first;
    A(static_cast<Eigen::Index>(q), 1) = 1.0;
    b(static_cast<Eigen::Index>(q)) = logs[q].second;
  }
  const Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  const double ss_res = (A * x - b).squaredNorm();
  return {x(0), ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

double estimate_holder_exponent(const SampledPath& path) {
  const auto& g = path.grid();
  const int L = g.level();
  if (L < 3) throw InvalidArgument("exponent estimate needs grid level >= 3");
  const std::size_t N = g.intervals();
  std::vector<std::pair<double, double>> samples;
  const int first = std::min(L / 2, L - 3);
  for (int m = first; m <= L; ++m) {
    const std::size_t w = N >> m;
    double worst = 0.0;
    for (std::size_t s = 0; s + w <= N; ++s) {
      double inc = 0.0;
      for (std::size_t i = 0; i < path.dim(); ++i) inc += std::abs(path.increment(s, s + w, i));
      worst = std::max(worst, inc);
    }
    samples.emplace_back(g.step() * static_cast<double>(w), worst);
  }
  const auto fit = convergence_order_fit(samples);
  return std::isfinite(fit.slope) ? fit.slope : 1.0;
}

YoungIntegral young_integral(const SampledPath& y, const SampledPath& W, std::size_t s, std::size_t t,
                             double beta, double alpha) {
  if (!(y.grid() == W.grid())) throw InvalidArgument("integrand and integrator grids differ");
  if (s > t || t >= W.size()) throw InvalidArgument("young integral needs nodes s <= t on the grid");
  const std::size_t n = W.dim();
  if (y.dim() % n != 0) throw InvalidArgument("integrand must have d * n components");
  const std::size_t d = y.dim() / n;

  YoungIntegral out;
  out.value.assign(d, 0.0);
  for (std::size_t u = s; u < t; ++u)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < n; ++j) out.value[i] += y(u, i * n + j) * W.increment(u, u + 1, j);

  if (W.grid().level() >= 3) {
    const double beta_est = estimate_holder_exponent(y);
    const double alpha_est = estimate_holder_exponent(W);
    const double b = std::isnan(beta) ? beta_est : beta;
    const double a = std::isnan(alpha) ? alpha_est : alpha;
    if (b + a <= 1.0)
      out.warnings.push_back("exponents " + format_double(b) + " + " + format_double(a) +
                             " do not exceed 1; the Young sum need not converge");
    if (!std::isnan(beta) && beta > beta_est + 0.1)
      out.warnings.push_back("integrand exponent " + format_double(beta) + " exceeds the grid estimate " +
                             format_double(beta_est));
    if (!std::isnan(alpha) && alpha > alpha_est + 0.1)
      out.warnings.push_back("integrator exponent " + format_double(alpha) + " exceeds the grid estimate " +
                             format_double(alpha_est));
  }
  return out;
}

namespace {

void check_controlled(const ControlledPath& cp, const RoughPath& rp) {
  if (!(cp.grid() == rp.grid()) || cp.noise_dim() != rp.dim() || cp.dim() % rp.dim() != 0)
    throw InvalidArgument("controlled path does not match the rough path");
}

void check_mesh(const TimeGrid& g, int mesh_level) {
  if (mesh_level < 0 || mesh_level > g.level())
    throw InvalidArgument("mesh level must lie between 0 and the grid level");
}

// y_u W_{u,v} + y'_u W2_{u,v}, added to acc.
void add_piece(const ControlledPath& cp, const RoughPath& rp, std::size_t u, std::size_t v,
               std::vector<double>& acc) {
  if (u == v) return;
  const std::size_t n = rp.dim();
  const std::size_t d = cp.dim() / n;
  const Tensor area = rp.area(u, v);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double r = cp.y()(u, i * n + j) * rp.path().increment(u, v, j);
      for (std::size_t k = 0; k < n; ++k) r += cp.derivative(u, i * n + j, k) * area[k * n + j];
      acc[i] += r;
    }
}

}  // namespace

std::vector<double> rough_integral_sum(const ControlledPath& cp, const RoughPath& rp, std::size_t s,
                                       std::size_t t, int mesh_level) {
  check_controlled(cp, rp);
  const auto& g = rp.grid();
  check_mesh(g, mesh_level);
  if (s > t || t > g.intervals()) throw InvalidArgument("rough integral needs nodes s <= t on the grid");
  const std::size_t w = g.intervals() >> mesh_level;
  std::vector<double> acc(cp.dim() / rp.dim(), 0.0);
  std::size_t u = s;
  for (std::size_t v = (s / w + 1) * w; v < t; v += w) {
    add_piece(cp, rp, u, v, acc);
    u = v;
  }
  add_piece(cp, rp, u, t, acc);
  return acc;
}

SampledPath rough_integral_path(const ControlledPath& cp, const RoughPath& rp, int mesh_level) {
  check_controlled(cp, rp);
  const auto& g = rp.grid();
  check_mesh(g, mesh_level);
  const std::size_t d = cp.dim() / rp.dim();
  const std::size_t w = g.intervals() >> mesh_level;
  std::vector<double> values(g.size() * d, 0.0);
  std::vector<double> done(d, 0.0);  // sum over mesh cells ending at or before the current mesh node
  for (std::size_t k = 1; k < g.size(); ++k) {
    const std::size_t u = (k - 1) / w * w;
    std::vector<double> part = done;
    add_piece(cp, rp, u, k, part);
    for (std::size_t i = 0; i < d; ++i) values[k * d + i] = part[i];
    if (k % w == 0) done = part;
  }
  return SampledPath(g, d, std::move(values));
}

std::vector<std::pair<double, double>> refinement_table(const ControlledPath& cp, const RoughPath& rp,
                                                        std::size_t s, std::size_t t) {
  const auto& g = rp.grid();
  std::vector<std::pair<double, double>> out;
  auto prev = rough_integral_sum(cp, rp, s, t, 0);
  for (int m = 0; m < g.level(); ++m) {
    auto next = rough_integral_sum(cp, rp, s, t, m + 1);
    double diff = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) diff += std::abs(next[i] - prev[i]);
    out.emplace_back(g.horizon() * std::ldexp(1.0, -m), diff);
    prev = std::move(next);
  }
  return out;
}

OrderFit refinement_order(const ControlledPath& cp, const RoughPath& rp, std::size_t s, std::size_t t) {
  auto table = refinement_table(cp, rp, s, t);
  if (table.size() < 6) throw InvalidArgument("refinement order needs grid level >= 6");
  table.erase(table.begin(), table.begin() + 2);
  return convergence_order_fit(table);
}

void write_convergence_csv(const std::vector<std::pair<double, double>>& samples, std::ostream& out) {
  out << "scale,error\n";
  for (const auto& [scale, err] : samples) out << format_double(scale) << ',' << format_double(err) << '\n';
}

}  // namespace roughstruct
