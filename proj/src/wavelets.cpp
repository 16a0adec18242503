#include "roughstruct/wavelets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "roughstruct/errors.hpp"
#include "roughstruct/parallel.hpp"

namespace roughstruct {

namespace {

// Daubechies reconstruction low-pass filters, normalized to sum sqrt(2).
const std::vector<double> kDb3 = {0.33267055295008263,  0.8068915093110925,
                                  0.45987750211849154,  -0.13501102001025458,
                                  -0.08544127388202666, 0.03522629188570953};
const std::vector<double> kDb4 = {0.2303778133088965,    0.7148465705529157,
                                  0.6308807679298589,    -0.027983769416859854,
                                  -0.18703481171909309,  0.030841381835560764,
                                  0.0328830116668852,    -0.010597401785069032};
const std::vector<double> kDb5 = {0.16010239797419293,   0.6038292697971896,
                                  0.7243085284377729,    0.13842814590132074,
                                  -0.24229488706638203,  -0.032244869584638375,
                                  0.07757149384004572,   -0.006241490212798274,
                                  -0.012580751999081999, 0.0033357252854737712};

// Tabulated function on [lo, lo + (size-1) * 2^-L] plus its running integral.
struct Table {
  double lo = 0.0;
  double step = 0.0;
  std::vector<double> v;
  std::vector<double> cum;

  void finish() {
    cum.assign(v.size(), 0.0);
    for (std::size_t m = 1; m < v.size(); ++m) cum[m] = cum[m - 1] + 0.5 * step * (v[m - 1] + v[m]);
  }
  double hi() const { return lo + step * static_cast<double>(v.size() - 1); }
  double value(double x) const {
    const double p = (x - lo) / step;
    if (!(p >= 0.0) || p > static_cast<double>(v.size() - 1)) return 0.0;
    const std::size_t i = static_cast<std::size_t>(p);
    if (i + 1 >= v.size()) return v.back();
    const double f = p - static_cast<double>(i);
    return v[i] + f * (v[i + 1] - v[i]);
  }
  double integral(double x) const {
    const double p = (x - lo) / step;
    if (!(p > 0.0)) return 0.0;
    if (p >= static_cast<double>(v.size() - 1)) return cum.back();
    const std::size_t i = static_cast<std::size_t>(p);
    const double f = p - static_cast<double>(i);
    return cum[i] + step * f * (v[i] + 0.5 * f * (v[i + 1] - v[i]));
  }
};

}  // namespace

struct WaveletBasis::Tables {
  Table phi;
  Table psi;
};

WaveletBasis WaveletBasis::daubechies(int taps, int table_level) {
  WaveletBasis b;
  switch (taps) {
    case 6:
      b.filter_ = kDb3;
      b.regularity_ = 1.0878;
      break;
    case 8:
      b.filter_ = kDb4;
      b.regularity_ = 1.6179;
      break;
    case 10:
      b.filter_ = kDb5;
      b.regularity_ = 1.9690;
      break;
    default:
      throw InvalidArgument(
          "supported Daubechies filters have 6, 8 or 10 taps (4 taps is not C^1)");
  }
  if (table_level < 6 || table_level > 20) throw InvalidArgument("table level must lie in [6, 20]");
  b.taps_ = taps;
  b.family_ = "db" + std::to_string(taps / 2);
  b.table_level_ = table_level;

  const int K = taps;
  const double r2 = std::sqrt(2.0);
  // phi at the integers: eigenvector of M(m, n) = sqrt(2) h[2m - n] for the
  // eigenvalue 1, normalized by sum phi(m) = 1.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      const int q = 2 * m - n;
      if (q >= 0 && q < K) A(m, n) = r2 * b.filter_[static_cast<std::size_t>(q)];
    }
  A -= Eigen::MatrixXd::Identity(K, K);
  A.row(K - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K);
  rhs(K - 1) = 1.0;
  const Eigen::VectorXd at_integers = A.fullPivLu().solve(rhs);

  // Cascade refinement of the uncentered phi on [0, K-1].
  const std::size_t per_unit = std::size_t{1} << table_level;
  const std::size_t size = static_cast<std::size_t>(K - 1) * per_unit + 1;
  std::vector<double> raw(size, 0.0);
  for (int m = 0; m < K; ++m) raw[static_cast<std::size_t>(m) * per_unit] = at_integers(m);
  for (int level = 1; level <= table_level; ++level) {
    const std::size_t stride = per_unit >> level;
    for (std::size_t idx = stride; idx < size; idx += 2 * stride) {
      double s = 0.0;
      for (int k = 0; k < K; ++k) {
        const long src = 2 * static_cast<long>(idx) - static_cast<long>(k) * static_cast<long>(per_unit);
        if (src >= 0 && src < static_cast<long>(size))
          s += b.filter_[static_cast<std::size_t>(k)] * raw[static_cast<std::size_t>(src)];
      }
      raw[idx] = r2 * s;
    }
  }
  const double step = 1.0 / static_cast<double>(per_unit);
  double moment = 0.0;
  for (std::size_t m = 0; m < size; ++m) moment += static_cast<double>(m) * step * raw[m] * step;
  b.shift_ = static_cast<int>(std::lround(moment));
  b.radius_ = static_cast<double>(std::max(b.shift_, K - 1 - b.shift_));

  auto tables = std::make_shared<Tables>();
  tables->phi.lo = -static_cast<double>(b.shift_);
  tables->phi.step = step;
  tables->phi.v = raw;
  tables->phi.finish();

  // psi(x) = sqrt(2) sum_n g_c[n] phi_c(2x - n) on [1 - K/2, K/2]; the
  // argument 2x - n lands on table nodes of the previous level.
  const long psi_lo = 1 - K / 2;
  tables->psi.lo = static_cast<double>(psi_lo);
  tables->psi.step = step;
  tables->psi.v.assign(size, 0.0);
  for (std::size_t m = 0; m < size; ++m) {
    double s = 0.0;
    for (long n = b.shift_ + 2 - K; n <= b.shift_ + 1; ++n) {
      const long src = (2 * psi_lo - n + b.shift_) * static_cast<long>(per_unit) +
                       2 * static_cast<long>(m);
      if (src >= 0 && src < static_cast<long>(size))
        s += b.centered_wavelet_filter(n) * raw[static_cast<std::size_t>(src)];
    }
    tables->psi.v[m] = r2 * s;
  }
  tables->psi.finish();
  b.tables_ = std::move(tables);
  return b;
}

double WaveletBasis::centered_filter(long n) const {
  const long q = n + shift_;
  if (q < 0 || q >= taps_) return 0.0;
  return filter_[static_cast<std::size_t>(q)];
}

double WaveletBasis::centered_wavelet_filter(long n) const {
  const double h = centered_filter(1 - n);
  return (n & 1) ? -h : h;
}

int WaveletBasis::base_level() const {
  int l = 0;
  while (radius_ > std::ldexp(1.0, l)) ++l;
  return l;
}

const WaveletBasis::Tables& WaveletBasis::tables() const {
  if (!tables_) throw InvalidArgument("wavelet table not built");
  return *tables_;
}

double WaveletBasis::phi(double x) const { return tables().phi.value(x); }
double WaveletBasis::psi(double x) const { return tables().psi.value(x); }

double WaveletBasis::integral(WaveletKind kind, double x) const {
  return kind == WaveletKind::father ? tables().phi.integral(x) : tables().psi.integral(x);
}

double WaveletBasis::support_lo(WaveletKind kind) const {
  return kind == WaveletKind::father ? tables().phi.lo : tables().psi.lo;
}

double WaveletBasis::support_hi(WaveletKind kind) const {
  return kind == WaveletKind::father ? tables().phi.hi() : tables().psi.hi();
}

double cascade_evaluate(const WaveletBasis& basis, WaveletKind which, int j, long k, double t) {
  const double scale = std::ldexp(1.0, j);
  return std::sqrt(scale) * basis.value(which, scale * t - static_cast<double>(k));
}

Window basis_window(const WaveletBasis& basis, WaveletKind which, int j, long k, double horizon) {
  const double scale = std::ldexp(1.0, j) / horizon;
  const double amp = std::sqrt(scale);
  const double kk = static_cast<double>(k);
  Window w;
  w.lo = (kk + basis.support_lo(which)) / scale;
  w.hi = (kk + basis.support_hi(which)) / scale;
  w.value = [&basis, which, scale, amp, kk](double t) {
    return amp * basis.value(which, scale * t - kk);
  };
  w.average = [&basis, which, scale, amp, kk](double a, double b) {
    return amp / scale *
           (basis.integral(which, scale * b - kk) - basis.integral(which, scale * a - kk)) /
           (b - a);
  };
  return w;
}

double basis_integral(const WaveletBasis& basis, WaveletKind which, int j, long k,
                      double horizon, double a, double b) {
  const double scale = std::ldexp(1.0, j) / horizon;
  const double kk = static_cast<double>(k);
  return std::sqrt(scale) / scale *
         (basis.integral(which, scale * b - kk) - basis.integral(which, scale * a - kk));
}

std::pair<long, long> index_range(const WaveletBasis& basis, int j) {
  const long c = static_cast<long>(std::floor(basis.support_radius()));
  return {-c, (1L << j) + c};
}

// ---------------------------------------------------------------------------

StieltjesMeasure::StieltjesMeasure(std::shared_ptr<const SampledPath> path, std::size_t component)
    : path_(std::move(path)), component_(component) {
  if (!path_) throw InvalidArgument("Stieltjes measure needs a path");
  if (component_ >= path_->dim()) throw InvalidArgument("component index out of range");
}

StieltjesMeasure::StieltjesMeasure(const SampledPath& path, std::size_t component)
    : StieltjesMeasure(std::make_shared<const SampledPath>(path), component) {}

double StieltjesMeasure::pair(const Window& w) const {
  const TimeGrid& g = path_->grid();
  const auto [c0, c1] = cell_range(g, w.lo, w.hi, true);
  double sum = 0.0;
  for (long c = c0; c < c1; ++c)
    sum += w.average(g.node(c), g.node(c + 1)) * path_->extended_increment(c, component_);
  return sum;
}

namespace {

void check_levels(const WaveletBasis& basis, int base_level, int max_level) {
  if (!basis.has_table()) throw InvalidArgument("wavelet table not built");
  if (base_level < 0 || std::ldexp(basis.support_radius(), -base_level) > 1.0)
    throw InvalidArgument("base level must satisfy 2^-l c <= 1");
  if (max_level < base_level) throw InvalidArgument("max level must be at least the base level");
}

}  // namespace

WaveletCoefficients wavelet_coefficients(const StieltjesMeasure& xi, const WaveletBasis& basis,
                                         int base_level, int max_level) {
  check_levels(basis, base_level, max_level);
  if (max_level > xi.grid().level())
    throw InvalidArgument("max level exceeds the integrator grid resolution");
  const double T = xi.grid().horizon();

  struct Job {
    WaveletKind kind;
    int level;
    long k;
    double* out;
  };
  WaveletCoefficients c;
  const auto [p0, p1] = index_range(basis, base_level);
  c.phi = {base_level, p0, std::vector<double>(static_cast<std::size_t>(p1 - p0 + 1))};
  c.psi.resize(static_cast<std::size_t>(max_level - base_level + 1));
  std::vector<Job> jobs;
  for (long k = p0; k <= p1; ++k)
    jobs.push_back({WaveletKind::father, base_level, k, &c.phi.values[static_cast<std::size_t>(k - p0)]});
  for (int j = base_level; j <= max_level; ++j) {
    auto& lev = c.psi[static_cast<std::size_t>(j - base_level)];
    const auto [q0, q1] = index_range(basis, j);
    lev = {j, q0, std::vector<double>(static_cast<std::size_t>(q1 - q0 + 1))};
  }
  for (int j = base_level; j <= max_level; ++j) {
    auto& lev = c.psi[static_cast<std::size_t>(j - base_level)];
    for (long k = lev.first; k <= lev.last(); ++k)
      jobs.push_back({WaveletKind::mother, j, k, &lev.values[static_cast<std::size_t>(k - lev.first)]});
  }
  parallel_for(jobs.size(), [&](std::size_t q) {
    const Job& job = jobs[q];
    *job.out = xi.pair(basis_window(basis, job.kind, job.level, job.k, T));
  });
  return c;
}

WaveletCoefficients decompose(const CoefficientLevel& fine, const WaveletBasis& basis,
                              int base_level) {
  check_levels(basis, base_level, fine.level);
  // Union of the index ranges of the two centered filters.
  const long s = basis.shift();
  const long K = basis.taps();
  const long n_lo = std::min(-s, s + 2 - K);
  const long n_hi = std::max(K - 1 - s, s + 1);

  WaveletCoefficients out;
  out.psi.resize(static_cast<std::size_t>(fine.level - base_level));
  CoefficientLevel a = fine;
  for (int j = fine.level; j > base_level; --j) {
    CoefficientLevel coarse;
    CoefficientLevel detail;
    coarse.level = detail.level = j - 1;
    // a^{j-1}_k = sum_n h_c[n] a^j_{2k+n}: k ranges over indices touching a.
    const long k0 = static_cast<long>(std::ceil((static_cast<double>(a.first) - static_cast<double>(n_hi)) / 2.0));
    const long k1 = static_cast<long>(std::floor((static_cast<double>(a.last()) - static_cast<double>(n_lo)) / 2.0));
    coarse.first = detail.first = k0;
    coarse.values.assign(static_cast<std::size_t>(k1 - k0 + 1), 0.0);
    detail.values.assign(static_cast<std::size_t>(k1 - k0 + 1), 0.0);
    for (long k = k0; k <= k1; ++k) {
      double sa = 0.0;
      double sd = 0.0;
      for (long n = n_lo; n <= n_hi; ++n) {
        const double v = a.at(2 * k + n);
        sa += basis.centered_filter(n) * v;
        sd += basis.centered_wavelet_filter(n) * v;
      }
      coarse.values[static_cast<std::size_t>(k - k0)] = sa;
      detail.values[static_cast<std::size_t>(k - k0)] = sd;
    }
    out.psi[static_cast<std::size_t>(j - 1 - base_level)] = std::move(detail);
    a = std::move(coarse);
  }
  out.phi = std::move(a);
  return out;
}

WaveletCoefficients restrict_to_index_sets(const WaveletCoefficients& c,
                                           const WaveletBasis& basis) {
  auto restrict = [&](const CoefficientLevel& lev) {
    const auto [k0, k1] = index_range(basis, lev.level);
    CoefficientLevel out{lev.level, k0, std::vector<double>(static_cast<std::size_t>(k1 - k0 + 1))};
    for (long k = k0; k <= k1; ++k) out.values[static_cast<std::size_t>(k - k0)] = lev.at(k);
    return out;
  };
  WaveletCoefficients out;
  out.phi = restrict(c.phi);
  for (const auto& lev : c.psi) out.psi.push_back(restrict(lev));
  return out;
}

namespace {

// Adds coefficient * int_0^t e^j_k to z at every node of grid.
void accumulate_antiderivative(const WaveletBasis& basis, WaveletKind kind,
                               const CoefficientLevel& lev, const TimeGrid& grid,
                               std::vector<double>& z, std::vector<double>& tail) {
  const double T = grid.horizon();
  const double scale = std::ldexp(1.0, lev.level) / T;
  const double amp = std::sqrt(scale) / scale;
  const long n = static_cast<long>(grid.intervals());
  const double h = grid.step();
  const double lo = basis.support_lo(kind);
  const double hi = basis.support_hi(kind);
  for (long k = lev.first; k <= lev.last(); ++k) {
    const double a = lev.at(k);
    if (a == 0.0) continue;
    const double kk = static_cast<double>(k);
    const double base = basis.integral(kind, -kk);
    // Nodes strictly inside the support get the exact partial integral;
    // nodes at or past its right end get the full mass.
    const double t_lo = (kk + lo) / scale;
    const double t_hi = (kk + hi) / scale;
    long m0 = std::max(0L, static_cast<long>(std::floor(t_lo / h)));
    long m1 = std::min(n + 1, static_cast<long>(std::ceil(t_hi / h)));
    if (m1 <= 0) continue;
    for (long m = m0; m < m1; ++m)
      z[static_cast<std::size_t>(m)] +=
          a * amp * (basis.integral(kind, scale * grid.node(m) - kk) - base);
    if (m1 <= n) tail[static_cast<std::size_t>(m1)] += a * amp * (basis.integral(kind, hi + 1.0) - base);
  }
}

SampledPath finish_antiderivative(const TimeGrid& grid, std::vector<double> z,
                                  const std::vector<double>& tail) {
  double run = 0.0;
  for (std::size_t m = 0; m < z.size(); ++m) {
    run += tail[m];
    z[m] += run;
  }
  // z(0) = 0 holds analytically; remove round-off.
  const double z0 = z[0];
  for (double& v : z) v -= z0;
  return SampledPath(grid, 1, std::move(z));
}

}  // namespace

SampledPath antiderivative_from_distribution(const WaveletCoefficients& c,
                                             const WaveletBasis& basis, const TimeGrid& grid) {
  if (!basis.has_table()) throw InvalidArgument("wavelet table not built");
  if (c.max_level() > basis.table_level())
    throw InvalidArgument("series levels exceed the wavelet table resolution");
  std::vector<double> z(grid.size(), 0.0);
  std::vector<double> tail(grid.size(), 0.0);
  accumulate_antiderivative(basis, WaveletKind::father, c.phi, grid, z, tail);
  for (const auto& lev : c.psi) accumulate_antiderivative(basis, WaveletKind::mother, lev, grid, z, tail);
  return finish_antiderivative(grid, std::move(z), tail);
}

SampledPath antiderivative_from_scaling(const CoefficientLevel& c, const WaveletBasis& basis,
                                        const TimeGrid& grid) {
  if (!basis.has_table()) throw InvalidArgument("wavelet table not built");
  if (c.level > basis.table_level())
    throw InvalidArgument("series levels exceed the wavelet table resolution");
  std::vector<double> z(grid.size(), 0.0);
  std::vector<double> tail(grid.size(), 0.0);
  accumulate_antiderivative(basis, WaveletKind::father, c, grid, z, tail);
  return finish_antiderivative(grid, std::move(z), tail);
}

}  // namespace roughstruct
