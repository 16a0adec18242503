#include "roughstruct/rough_core.hpp"

#include <cmath>
#include <numbers>

#include "roughstruct/errors.hpp"
#include "roughstruct/parallel.hpp"

namespace roughstruct {

SecondOrderProcess::SecondOrderProcess(TimeGrid grid, std::size_t dim, double alpha)
    : grid_(grid), dim_(dim), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  levels_.resize(static_cast<std::size_t>(grid.level()) + 1);
  for (int m = 0; m <= grid.level(); ++m)
    levels_[static_cast<std::size_t>(m)].assign((grid.intervals() >> m) * dim * dim, 0.0);
}

SecondOrderProcess SecondOrderProcess::from_finest(const SampledPath& path,
                                                   std::vector<double> finest, double alpha) {
  const std::size_t n = path.dim();
  SecondOrderProcess p(path.grid(), n, alpha);
  if (finest.size() != path.grid().intervals() * n * n)
    throw InvalidArgument("finest tensors do not match grid and dimension");
  p.levels_[0] = std::move(finest);
  for (int m = 1; m <= path.grid().level(); ++m) {
    const std::size_t half = std::size_t{1} << (m - 1);
    const auto& below = p.levels_[static_cast<std::size_t>(m - 1)];
    auto& here = p.levels_[static_cast<std::size_t>(m)];
    for (std::size_t i = 0; i < (path.grid().intervals() >> m); ++i) {
      const std::size_t a = 2 * i * half;
      const std::size_t u = a + half;
      const std::size_t b = u + half;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          here[(i * n + r) * n + c] = below[(2 * i * n + r) * n + c] +
                                      below[((2 * i + 1) * n + r) * n + c] +
                                      path.increment(a, u, r) * path.increment(u, b, c);
    }
  }
  p.chen_filled_ = true;
  return p;
}

SecondOrderProcess SecondOrderProcess::from_block_function(const SampledPath& path, double alpha,
                                                           const BlockFunction& block) {
  const std::size_t n = path.dim();
  SecondOrderProcess p(path.grid(), n, alpha);
  for (int m = 0; m <= path.grid().level(); ++m) {
    const std::size_t width = std::size_t{1} << m;
    auto& here = p.levels_[static_cast<std::size_t>(m)];
    parallel_for(path.grid().intervals() >> m, [&](std::size_t i) {
      block(i * width, (i + 1) * width, here.data() + i * n * n);
    });
  }
  return p;
}

SecondOrderProcess SecondOrderProcess::with_block_perturbed(int level, std::size_t i,
                                                            std::size_t row, std::size_t col,
                                                            double delta) const {
  if (level < 0 || level > grid_.level() || i >= (grid_.intervals() >> level) || row >= dim_ ||
      col >= dim_)
    throw InvalidArgument("block index out of range");
  SecondOrderProcess copy = *this;
  copy.levels_[static_cast<std::size_t>(level)][(i * dim_ + row) * dim_ + col] += delta;
  copy.chen_filled_ = false;
  return copy;
}

namespace {

int aligned_window_level(const TimeGrid& grid, std::size_t k0, std::size_t k1) {
  if (k1 <= k0 || k1 > grid.intervals()) throw InvalidArgument("window must satisfy k0 < k1 <= N");
  const std::size_t len = k1 - k0;
  if ((len & (len - 1)) != 0 || k0 % len != 0)
    throw InvalidArgument("window must be dyadic and aligned");
  int p = 0;
  while ((std::size_t{1} << p) < len) ++p;
  return p;
}

}  // namespace

SecondOrderProcess SecondOrderProcess::restrict(std::size_t k0, std::size_t k1) const {
  const int p = aligned_window_level(grid_, k0, k1);
  SecondOrderProcess out(TimeGrid(grid_.node(static_cast<long>(k1)) - grid_.node(static_cast<long>(k0)), p),
                         dim_, alpha_);
  const std::size_t nn = dim_ * dim_;
  for (int m = 0; m <= p; ++m) {
    const auto& src = levels_[static_cast<std::size_t>(m)];
    auto& dst = out.levels_[static_cast<std::size_t>(m)];
    const std::size_t first = k0 >> m;
    std::copy(src.begin() + static_cast<long>(first * nn),
              src.begin() + static_cast<long>((first + dst.size() / nn) * nn), dst.begin());
  }
  out.chen_filled_ = chen_filled_;
  return out;
}

Tensor chen_extend(const SecondOrderProcess& proc, const SampledPath& path, std::size_t s,
                   std::size_t t) {
  if (s > t) throw InvalidArgument("chen_extend needs s <= t");
  if (t > proc.grid().intervals()) throw InvalidArgument("node index out of range");
  const std::size_t n = proc.dim();
  Tensor out(n * n, 0.0);
  std::size_t p = s;
  while (p < t) {
    int m = 0;
    while (m < proc.grid().level() && p % (std::size_t{2} << m) == 0 &&
           p + (std::size_t{2} << m) <= t)
      ++m;
    const std::size_t q = p + (std::size_t{1} << m);
    const double* blk = proc.block(m, p >> m);
    for (std::size_t r = 0; r < n; ++r) {
      const double left = path.increment(s, p, r);
      for (std::size_t c = 0; c < n; ++c)
        out[r * n + c] += blk[r * n + c] + left * path.increment(p, q, c);
    }
    p = q;
  }
  return out;
}

// ---------------------------------------------------------------------------

RoughPath::RoughPath(SampledPath path, SecondOrderProcess second)
    : path_(std::move(path)), second_(std::move(second)) {
  if (!(path_.grid() == second_.grid())) throw InvalidArgument("path and second order grids differ");
  if (path_.dim() != second_.dim()) throw InvalidArgument("path and second order dimensions differ");
  const double a = second_.alpha();
  if (!(a > 1.0 / 3.0 && a <= 0.5)) throw InvalidArgument("rough path alpha must lie in (1/3, 1/2]");
}

double RoughPath::extended_cell(long c, std::size_t i, std::size_t j) const {
  const long n = static_cast<long>(grid().intervals());
  const std::size_t d = dim();
  if (c >= 0 && c < n) return second_.finest(static_cast<std::size_t>(c))[i * d + j];
  if (c < -n || c >= 2 * n) throw InvalidArgument("cell outside the padded horizon");
  const long mirror = c < 0 ? -c - 1 : 2 * n - 1 - c;
  const auto m = static_cast<std::size_t>(mirror);
  return path_.increment(m, m + 1, i) * path_.increment(m, m + 1, j) - second_.finest(m)[i * d + j];
}

RoughPath RoughPath::restrict(std::size_t k0, std::size_t k1) const {
  auto second = second_.restrict(k0, k1);
  const std::size_t d = dim();
  std::vector<double> v(path_.values().begin() + static_cast<long>(k0 * d),
                        path_.values().begin() + static_cast<long>((k1 + 1) * d));
  return RoughPath(SampledPath(second.grid(), d, std::move(v)), std::move(second));
}

namespace {

// Node subset used by chen_defect: all nodes up to level 8, else every
// 2^(J-8)-th node.
std::size_t defect_stride(const TimeGrid& g) {
  return g.level() <= 8 ? 1 : std::size_t{1} << (g.level() - 8);
}

}  // namespace

double chen_defect(const RoughPath& rp) {
  const auto& g = rp.grid();
  const std::size_t stride = defect_stride(g);
  const std::size_t m = g.intervals() / stride + 1;
  const std::size_t n = rp.dim();
  const std::size_t nn = n * n;
  // table[a][b] = W2_{node a, node b} for a < b, flattened row by row.
  std::vector<std::vector<double>> table(m);
  parallel_for(m, [&](std::size_t a) {
    table[a].assign((m - a) * nn, 0.0);
    for (std::size_t b = a + 1; b < m; ++b) {
      const Tensor x = rp.area(a * stride, b * stride);
      std::copy(x.begin(), x.end(), table[a].begin() + static_cast<long>((b - a) * nn));
    }
  }, 4);
  const auto& w = rp.path();
  return parallel_max(m, [&](std::size_t a) {
    double best = 0.0;
    for (std::size_t u = a + 1; u < m; ++u) {
      for (std::size_t b = u + 1; b < m; ++b) {
        const double* sab = table[a].data() + (b - a) * nn;
        const double* sau = table[a].data() + (u - a) * nn;
        const double* sub = table[u].data() + (b - u) * nn;
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double left = w.increment(a * stride, u * stride, r);
          for (std::size_t c = 0; c < n; ++c) {
            const std::size_t q = r * n + c;
            norm += std::abs(sab[q] - sau[q] - sub[q] - left * w.increment(u * stride, b * stride, c));
          }
        }
        best = std::max(best, norm);
      }
    }
    return best;
  }, 4);
}

RoughPathSeminorm rough_path_seminorm(const RoughPath& rp) {
  const double alpha = rp.alpha();
  const auto& g = rp.grid();
  const auto sampling = pair_sampling_for(g.level(), 8);
  RoughPathSeminorm out;
  out.path = holder_seminorm(rp.path(), alpha, sampling);
  const double h = g.step();
  out.second = max_over_pairs(g.intervals(), sampling, [&](std::size_t s, std::size_t t) {
    double norm = 0.0;
    for (double v : rp.area(s, t)) norm += std::abs(v);
    return norm / std::pow(static_cast<double>(t - s) * h, 2.0 * alpha);
  });
  return out;
}

RoughPathSeminorm rough_path_distance(const RoughPath& a, const RoughPath& b, double alpha) {
  if (!(a.grid() == b.grid()) || a.dim() != b.dim())
    throw InvalidArgument("rough paths must share grid and dimension");
  const auto& g = a.grid();
  const auto sampling = pair_sampling_for(g.level(), 8);
  const double h = g.step();
  const std::size_t n = a.dim();
  RoughPathSeminorm out;
  out.path = max_over_pairs(g.intervals(), sampling, [&](std::size_t s, std::size_t t) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      norm += std::abs(a.path().increment(s, t, i) - b.path().increment(s, t, i));
    return norm / std::pow(static_cast<double>(t - s) * h, alpha);
  });
  out.second = max_over_pairs(g.intervals(), sampling, [&](std::size_t s, std::size_t t) {
    const Tensor x = a.area(s, t);
    const Tensor y = b.area(s, t);
    double norm = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) norm += std::abs(x[q] - y[q]);
    return norm / std::pow(static_cast<double>(t - s) * h, 2.0 * alpha);
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_matches(const SampledPath& path, const std::function<double(std::size_t, double)>& f) {
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double t = path.grid().node(static_cast<long>(k));
    for (std::size_t i = 0; i < path.dim(); ++i) {
      const double expected = f(i, t);
      if (std::abs(path(k, i) - expected) > 1e-9 * (1.0 + std::abs(expected)))
        throw InvalidArgument("path does not match the analytic form of the lift mode");
    }
  }
}

// integral_a^b sin(kappa u + q) du.
double sine_integral(double kappa, double q, double a, double b) {
  if (kappa == 0.0) return (b - a) * std::sin(q);
  return (std::cos(kappa * a + q) - std::cos(kappa * b + q)) / kappa;
}

RoughPath lift_sincos(const SampledPath& path, double amp, double alpha) {
  const auto freq = [](std::size_t c) { return static_cast<double>(c / 2 + 1); };
  const auto phase = [](std::size_t c) { return c % 2 == 0 ? 0.0 : 0.5 * std::numbers::pi; };
  const auto f = [&](std::size_t c, double t) { return amp * std::sin(freq(c) * t + phase(c)); };
  check_matches(path, f);
  const std::size_t n = path.dim();
  const auto& g = path.grid();
  auto block = [&](std::size_t ka, std::size_t kb, double* out) {
    const double a = g.node(static_cast<long>(ka));
    const double b = g.node(static_cast<long>(kb));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        // int_a^b f_i f_j' with sin X cos Y = (sin(X+Y) + sin(X-Y)) / 2.
        const double wi = freq(i), wj = freq(j), pi = phase(i), pj = phase(j);
        const double cross = 0.5 * amp * amp * wj *
                             (sine_integral(wi + wj, pi + pj, a, b) +
                              sine_integral(wi - wj, pi - pj, a, b));
        out[i * n + j] = cross - f(i, a) * (f(j, b) - f(j, a));
      }
  };
  auto second = SecondOrderProcess::from_block_function(path, alpha, block);
  return RoughPath(path, std::move(second));
}

RoughPath lift_polynomial(const SampledPath& path, const PolynomialLift& mode, double alpha) {
  const std::size_t n = path.dim();
  if (mode.coeffs.empty() || (mode.coeffs.size() != 1 && mode.coeffs.size() != n))
    throw InvalidArgument("polynomial lift coefficient rows must be 1 or match the dimension");
  const auto row = [&](std::size_t i) -> const std::vector<double>& {
    return mode.coeffs.size() == 1 ? mode.coeffs[0] : mode.coeffs[i];
  };
  const auto eval = [&](std::size_t i, double t) {
    const auto& a = row(i);
    double v = 0.0;
    for (std::size_t p = a.size(); p-- > 0;) v = v * t + a[p];
    return v;
  };
  check_matches(path, eval);
  const auto& g = path.grid();
  auto block = [&](std::size_t ka, std::size_t kb, double* out) {
    const double a = g.node(static_cast<long>(ka));
    const double b = g.node(static_cast<long>(kb));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        // Expand about a so that small blocks do not cancel catastrophically:
        // f(a + v) = sum_p c_p v^p.
        auto shifted = [&](std::size_t r) {
          const auto& co = row(r);
          std::vector<double> c(co.size(), 0.0);
          // coefficient of v^q in (a + v)^p is C(p, q) a^(p-q)
          for (std::size_t p = 0; p < co.size(); ++p) {
            double binom = 1.0;
            for (std::size_t q = 0; q <= p; ++q) {
              c[q] += co[p] * binom * std::pow(a, static_cast<double>(p - q));
              binom = binom * static_cast<double>(p - q) / static_cast<double>(q + 1);
            }
          }
          return c;
        };
        const auto ci = shifted(i);
        const auto cj = shifted(j);
        const double len = b - a;
        // int_0^len (f_i(a+v) - f_i(a)) f_j'(a+v) dv
        double s = 0.0;
        for (std::size_t p = 1; p < ci.size(); ++p)
          for (std::size_t q = 1; q < cj.size(); ++q)
            s += ci[p] * static_cast<double>(q) * cj[q] *
                 std::pow(len, static_cast<double>(p + q)) / static_cast<double>(p + q);
        out[i * n + j] = s;
      }
  };
  auto second = SecondOrderProcess::from_block_function(path, alpha, block);
  return RoughPath(path, std::move(second));
}

}  // namespace

RoughPath lift_piecewise_smooth(const SampledPath& path, const LiftMode& mode, double alpha) {
  if (std::holds_alternative<LinearLift>(mode)) {
    const std::size_t n = path.dim();
    std::vector<double> finest(path.grid().intervals() * n * n);
    for (std::size_t k = 0; k < path.grid().intervals(); ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          finest[(k * n + i) * n + j] = 0.5 * path.increment(k, k + 1, i) * path.increment(k, k + 1, j);
    auto second = SecondOrderProcess::from_finest(path, std::move(finest), alpha);
    return RoughPath(path, std::move(second));
  }
  if (const auto* sc = std::get_if<SinCosLift>(&mode)) return lift_sincos(path, sc->amplitude, alpha);
  return lift_polynomial(path, std::get<PolynomialLift>(mode), alpha);
}

}  // namespace roughstruct
