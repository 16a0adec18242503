#include "roughstruct/grid_paths.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "roughstruct/errors.hpp"
#include "roughstruct/parallel.hpp"

namespace roughstruct {

TimeGrid::TimeGrid(double horizon, int level) : horizon_(horizon), level_(level) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidArgument("grid horizon must be a positive finite number");
  if (level < 0 || level > 24) throw InvalidArgument("grid level must lie in [0, 24]");
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = node(static_cast<long>(k));
  return out;
}

std::size_t TimeGrid::index_of(double t) const {
  const double x = t / step();
  const double k = std::round(x);
  if (std::abs(x - k) > 1e-9 || k < 0 || k > static_cast<double>(intervals()))
    throw InvalidArgument("time " + format_double(t) + " is not a grid node");
  return static_cast<std::size_t>(k);
}

TimeGrid make_dyadic_grid(double horizon, int level) { return TimeGrid(horizon, level); }

SampledPath::SampledPath(TimeGrid grid, std::size_t dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw InvalidArgument("path dimension must be at least 1");
  if (values_.size() != grid_.size() * dim_)
    throw InvalidArgument("path values do not match grid size times dimension");
}

SampledPath SampledPath::zeros(const TimeGrid& grid, std::size_t dim) {
  return SampledPath(grid, dim, std::vector<double>(grid.size() * dim, 0.0));
}

double SampledPath::extended(long k, std::size_t i) const {
  const long n = static_cast<long>(grid_.intervals());
  if (k >= 0 && k <= n) return (*this)(static_cast<std::size_t>(k), i);
  if (k < -n || k > 2 * n) throw InvalidArgument("node index outside the padded horizon");
  if (k < 0) return 2.0 * (*this)(0, i) - (*this)(static_cast<std::size_t>(-k), i);
  return 2.0 * (*this)(static_cast<std::size_t>(n), i) -
         (*this)(static_cast<std::size_t>(2 * n - k), i);
}

SampledPath SampledPath::component(std::size_t i) const {
  if (i >= dim_) throw InvalidArgument("component index out of range");
  std::vector<double> v(size());
  for (std::size_t k = 0; k < size(); ++k) v[k] = (*this)(k, i);
  return SampledPath(grid_, 1, std::move(v));
}

double SampledPath::sup_norm() const {
  double best = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += std::abs((*this)(k, i));
    best = std::max(best, s);
  }
  return best;
}

PairSampling pair_sampling_for(int level, int threshold) {
  return level <= threshold ? PairSampling::all : PairSampling::dyadic;
}

double max_over_pairs(std::size_t intervals, PairSampling sampling,
                      const std::function<double(std::size_t, std::size_t)>& quotient) {
  if (sampling == PairSampling::all) {
    return parallel_max(intervals, [&](std::size_t s) {
      double best = 0.0;
      for (std::size_t t = s + 1; t <= intervals; ++t) best = std::max(best, quotient(s, t));
      return best;
    }, 8);
  }
  return parallel_max(intervals, [&](std::size_t s) {
    double best = 0.0;
    for (std::size_t len = 1; s + len <= intervals; len *= 2)
      best = std::max(best, quotient(s, s + len));
    return best;
  }, 64);
}

double holder_seminorm(const SampledPath& path, double alpha) {
  return holder_seminorm(path, alpha, pair_sampling_for(path.grid().level(), 12));
}

double holder_seminorm(const SampledPath& path, double alpha, PairSampling sampling) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  const double h = path.grid().step();
  const std::size_t n = path.dim();
  return max_over_pairs(path.grid().intervals(), sampling, [&](std::size_t s, std::size_t t) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::abs(path.increment(s, t, i));
    return norm / std::pow(static_cast<double>(t - s) * h, alpha);
  });
}

// ---------------------------------------------------------------------------

namespace {

double sincos_component(std::size_t c, double amplitude, double t) {
  const double w = static_cast<double>(c / 2 + 1);
  return c % 2 == 0 ? amplitude * std::sin(w * t) : amplitude * std::cos(w * t);
}

SampledPath generate_polynomial(const PolynomialKind& kind, const TimeGrid& grid,
                                std::size_t dim) {
  if (kind.coeffs.empty()) throw InvalidArgument("polynomial path needs coefficients");
  if (kind.coeffs.size() != 1 && kind.coeffs.size() != dim)
    throw InvalidArgument("polynomial coefficient rows must be 1 or match the dimension");
  SampledPath out = SampledPath::zeros(grid, dim);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.node(static_cast<long>(k));
    for (std::size_t i = 0; i < dim; ++i) {
      const auto& a = kind.coeffs.size() == 1 ? kind.coeffs[0] : kind.coeffs[i];
      double v = 0.0;
      for (std::size_t p = a.size(); p-- > 0;) v = v * t + a[p];
      out.at(k, i) = v;
    }
  }
  return out;
}

SampledPath generate_piecewise_linear(const PiecewiseLinearKind& kind, const TimeGrid& grid,
                                      std::size_t dim) {
  const auto& knots = kind.knots;
  if (knots.size() < 2) throw InvalidArgument("piecewise linear path needs two knots");
  for (std::size_t q = 0; q < knots.size(); ++q) {
    if (knots[q].second.size() != dim)
      throw InvalidArgument("knot value dimension does not match the path dimension");
    if (q > 0 && !(knots[q].first > knots[q - 1].first))
      throw InvalidArgument("knot times must be strictly increasing");
  }
  const double T = grid.horizon();
  const double tol = 1e-12 * T;
  if (knots.front().first > tol || knots.back().first < T - tol)
    throw InvalidArgument("knots must cover [0, T]");
  SampledPath out = SampledPath::zeros(grid, dim);
  std::size_t q = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.node(static_cast<long>(k));
    while (q + 2 < knots.size() && t > knots[q + 1].first) ++q;
    const auto& [t0, v0] = knots[q];
    const auto& [t1, v1] = knots[q + 1];
    double u = (t - t0) / (t1 - t0);
    u = std::clamp(u, 0.0, 1.0);
    for (std::size_t i = 0; i < dim; ++i) {
      // Exact at the knots themselves.
      out.at(k, i) = u == 1.0 ? v1[i] : v0[i] + u * (v1[i] - v0[i]);
    }
  }
  return out;
}

}  // namespace

SampledPath generate_path(const PathKind& kind, const TimeGrid& grid, std::size_t dim) {
  if (dim == 0) throw InvalidArgument("path dimension must be at least 1");
  if (const auto* sc = std::get_if<SinCosKind>(&kind)) {
    SampledPath out = SampledPath::zeros(grid, dim);
    for (std::size_t k = 0; k < grid.size(); ++k)
      for (std::size_t i = 0; i < dim; ++i)
        out.at(k, i) = sincos_component(i, sc->amplitude, grid.node(static_cast<long>(k)));
    return out;
  }
  if (const auto* poly = std::get_if<PolynomialKind>(&kind))
    return generate_polynomial(*poly, grid, dim);
  if (const auto* fbm = std::get_if<FbmKind>(&kind))
    return FbmSampler(grid, fbm->hurst).sample(dim, fbm->seed);
  return generate_piecewise_linear(std::get<PiecewiseLinearKind>(kind), grid, dim);
}

struct FbmSampler::Factor {
  Eigen::MatrixXd lower;
};

FbmSampler::FbmSampler(const TimeGrid& grid, double hurst) : grid_(grid), hurst_(hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw InvalidArgument("Hurst index must lie in (0, 1)");
  const Eigen::Index n = static_cast<Eigen::Index>(grid.intervals());
  Eigen::MatrixXd cov(n, n);
  const double two_h = 2.0 * hurst;
  for (Eigen::Index a = 0; a < n; ++a) {
    const double s = grid.node(a + 1);
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double t = grid.node(b + 1);
      const double v =
          0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(s - t), two_h));
      cov(a, b) = v;
      cov(b, a) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("fBm covariance is not positive definite on this grid");
  auto f = std::make_shared<Factor>();
  f->lower = llt.matrixL();
  factor_ = std::move(f);
}

SampledPath FbmSampler::sample(std::size_t dim, std::uint64_t seed) const {
  if (dim == 0) throw InvalidArgument("path dimension must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = static_cast<Eigen::Index>(grid_.intervals());
  SampledPath out = SampledPath::zeros(grid_, dim);
  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < dim; ++i) {
    for (Eigen::Index a = 0; a < n; ++a) z(a) = normal(rng);
    const Eigen::VectorXd x = factor_->lower.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index a = 0; a < n; ++a) out.at(static_cast<std::size_t>(a + 1), i) = x(a);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double raw_bump(double u) {
  if (!(u > -1.0 && u < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double raw_bump_derivative(double u) {
  if (!(u > -1.0 && u < 1.0)) return 0.0;
  const double q = 1.0 - u * u;
  return raw_bump(u) * (-2.0 * u / (q * q));
}

}  // namespace

double bump_integral() {
  // Trapezoid is spectrally accurate for a function flat to all orders at
  // both ends of its support.
  static const double value = [] {
    const int m = 1 << 14;
    double s = 0.0;
    for (int q = 1; q < m; ++q) s += raw_bump(-1.0 + 2.0 * q / m);
    return s * 2.0 / m;
  }();
  return value;
}

double bump_c1_normalization() {
  static const double value = [] {
    // |eta'| has its maximum on (0, 1); golden-section search after a scan.
    const int m = 1 << 14;
    double best_u = 0.0;
    double best = 0.0;
    for (int q = 1; q < m; ++q) {
      const double u = static_cast<double>(q) / m;
      const double v = std::abs(raw_bump_derivative(u));
      if (v > best) {
        best = v;
        best_u = u;
      }
    }
    double a = best_u - 1.0 / m;
    double b = best_u + 1.0 / m;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
      const double c = b - g * (b - a);
      const double d = a + g * (b - a);
      if (std::abs(raw_bump_derivative(c)) > std::abs(raw_bump_derivative(d)))
        b = d;
      else
        a = c;
    }
    const double sup_derivative = std::abs(raw_bump_derivative(0.5 * (a + b)));
    return 1.0 / std::max(std::exp(-1.0), sup_derivative);
  }();
  return value;
}

Profile bump_profile() { return {"bump", raw_bump}; }

Profile unit_mass_bump_profile() {
  const double mass = bump_integral();
  return {"unit_bump", [mass](double u) { return raw_bump(u) / mass; }};
}

Profile normalized_bump_profile() {
  const double c = bump_c1_normalization();
  return {"normalized_bump", [c](double u) { return c * raw_bump(u); }};
}

Profile odd_bump_profile() {
  return {"odd_bump", [](double u) { return u * raw_bump(u); }};
}

TestFunction::TestFunction(Profile profile, double center, double scale)
    : profile_(std::move(profile)), center_(center), scale_(scale) {
  if (!profile_.eta) throw InvalidArgument("test function profile is empty");
  if (!std::isfinite(center)) throw InvalidArgument("test function center must be finite");
  if (!(scale > 0.0 && scale <= 1.0)) throw InvalidArgument("test function scale must lie in (0, 1]");
}

double TestFunction::operator()(double t) const {
  const double u = (t - center_) / scale_;
  if (!(u > -1.0 && u < 1.0)) return 0.0;
  return profile_.eta(u) / scale_;
}

double evaluate_test_function(const TestFunction& f, double t) { return f(t); }

Window to_window(const TestFunction& f) {
  Window w;
  w.lo = f.center() - f.scale();
  w.hi = f.center() + f.scale();
  w.value = [f](double t) { return f(t); };
  w.average = [f](double a, double b) { return (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)) / 6.0; };
  return w;
}

std::pair<long, long> cell_range(const TimeGrid& grid, double lo, double hi, bool clip) {
  const double h = grid.step();
  const long n = static_cast<long>(grid.intervals());
  long c0 = static_cast<long>(std::floor(lo / h + 1e-9));
  long c1 = static_cast<long>(std::ceil(hi / h - 1e-9));
  if (clip) {
    c0 = std::clamp(c0, -n, 2 * n);
    c1 = std::clamp(c1, -n, 2 * n);
  } else if (c0 < -n || c1 > 2 * n)
    throw InvalidArgument("window support leaves the padded horizon [-T, 2T]");
  return {c0, std::max(c0, c1)};
}

double integrate_against_cells(const TimeGrid& grid, const Window& w,
                               const std::function<double(long)>& node_value) {
  const auto [c0, c1] = cell_range(grid, w.lo, w.hi);
  const double h = grid.step();
  double sum = 0.0;
  double g_left = node_value(c0);
  for (long c = c0; c < c1; ++c) {
    const double g_right = node_value(c + 1);
    const double a = grid.node(c);
    const double b = grid.node(c + 1);
    sum += (w.value(a) * g_left + 2.0 * w.value(0.5 * (a + b)) * (g_left + g_right) +
            w.value(b) * g_right) *
           h / 6.0;
    g_left = g_right;
  }
  return sum;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_path_csv(const SampledPath& path, std::ostream& out) {
  out << "t";
  for (std::size_t i = 0; i < path.dim(); ++i) out << ",x" << (i + 1);
  out << "\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << format_double(path.grid().node(static_cast<long>(k)));
    for (std::size_t i = 0; i < path.dim(); ++i) out << ',' << format_double(path(k, i));
    out << "\n";
  }
}

void write_path_csv(const SampledPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw InvalidArgument("cannot open " + file + " for writing");
  write_path_csv(path, out);
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text) {
  std::size_t b = text.find_first_not_of(" \t\r");
  std::size_t e = text.find_last_not_of(" \t\r");
  if (b == std::string::npos) throw InvalidArgument("empty CSV field");
  double v = 0.0;
  const char* first = text.data() + b;
  const char* last = text.data() + e + 1;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw InvalidArgument("malformed number in CSV: '" + text + "'");
  return v;
}

}  // namespace

SampledPath read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 2 || header[0] != "t")
    throw InvalidArgument("CSV header must be t,x1,...,xn");
  const std::size_t dim = header.size() - 1;
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != dim + 1) throw InvalidArgument("CSV row has the wrong number of fields");
    times.push_back(parse_double(cells[0]));
    for (std::size_t i = 0; i < dim; ++i) values.push_back(parse_double(cells[i + 1]));
  }
  if (times.size() < 2) throw InvalidArgument("CSV path needs at least two rows");
  const std::size_t intervals = times.size() - 1;
  if ((intervals & (intervals - 1)) != 0)
    throw InvalidArgument("CSV row count must be 2^J + 1");
  int level = 0;
  while ((std::size_t{1} << level) < intervals) ++level;
  TimeGrid grid(times.back(), level);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - grid.node(static_cast<long>(k))) > 1e-12 * grid.horizon())
      throw InvalidArgument("CSV time column is not a uniform dyadic grid starting at 0");
  }
  return SampledPath(grid, dim, std::move(values));
}

SampledPath read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot open " + file);
  return read_path_csv(in);
}

}  // namespace roughstruct
