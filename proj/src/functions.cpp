#include "roughstruct/functions.hpp"

#include <algorithm>
#include <cmath>

#include "roughstruct/errors.hpp"

namespace roughstruct {

bool Box::contains(const double* y) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(y[i] >= lo[i] && y[i] <= hi[i])) return false;
  return true;
}

std::vector<double> FunctionDescriptor::eval(const double* y) const {
  std::vector<double> out(outputs());
  value(y, out.data());
  return out;
}

std::vector<double> FunctionDescriptor::eval_jacobian(const double* y) const {
  if (!jacobian) throw InvalidArgument("function " + name + " has no first derivative");
  std::vector<double> out(outputs() * dim);
  jacobian(y, out.data());
  return out;
}

namespace {

// F^{ij}(y) = g(y_i) with g and its derivatives given.
FunctionDescriptor diagonal_function(std::string name, std::size_t d, std::size_t n,
                                     std::function<double(double)> g0, std::function<double(double)> g1,
                                     std::function<double(double)> g2, std::function<double(double)> g3) {
  if (d == 0 || n == 0) throw InvalidArgument("function dimensions must be positive");
  FunctionDescriptor F;
  F.name = std::move(name);
  F.dim = d;
  F.noise_dim = n;
  F.value = [=](const double* y, double* out) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = g0(y[i]);
  };
  F.jacobian = [=](const double* y, double* out) {
    std::fill(out, out + d * n * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < n; ++j) out[(i * n + j) * d + i] = g1(y[i]);
  };
  F.hessian = [=](const double* y, double* out) {
    std::fill(out, out + d * n * d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < n; ++j) out[((i * n + j) * d + i) * d + i] = g2(y[i]);
  };
  F.third = [=](const double* y, double* out) {
    std::fill(out, out + d * n * d * d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < n; ++j) out[(((i * n + j) * d + i) * d + i) * d + i] = g3(y[i]);
  };
  return F;
}

}  // namespace

FunctionDescriptor linear_function(std::size_t d, std::size_t n) {
  return diagonal_function(
      "linear", d, n, [](double x) { return x; }, [](double) { return 1.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; });
}

FunctionDescriptor matrix_function(std::size_t d, std::size_t n, std::vector<double> A) {
  if (d == 0 || n == 0) throw InvalidArgument("function dimensions must be positive");
  if (A.size() != d * n * d) throw InvalidArgument("matrix field needs d * n * d coefficients");
  FunctionDescriptor F;
  F.name = "matrix";
  F.dim = d;
  F.noise_dim = n;
  F.value = [=](const double* y, double* out) {
    for (std::size_t r = 0; r < d * n; ++r) {
      double s = 0.0;
      for (std::size_t l = 0; l < d; ++l) s += A[r * d + l] * y[l];
      out[r] = s;
    }
  };
  F.jacobian = [=](const double*, double* out) { std::copy(A.begin(), A.end(), out); };
  F.hessian = [=](const double*, double* out) { std::fill(out, out + d * n * d * d, 0.0); };
  F.third = [=](const double*, double* out) { std::fill(out, out + d * n * d * d * d, 0.0); };
  return F;
}

FunctionDescriptor sin_function(std::size_t d, std::size_t n) {
  return diagonal_function(
      "sin", d, n, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
      [](double x) { return -std::sin(x); }, [](double x) { return -std::cos(x); });
}

FunctionDescriptor tanh_function(std::size_t d, std::size_t n) {
  return diagonal_function(
      "tanh", d, n, [](double x) { return std::tanh(x); },
      [](double x) {
        const double t = std::tanh(x);
        return 1.0 - t * t;
      },
      [](double x) {
        const double t = std::tanh(x);
        return -2.0 * t * (1.0 - t * t);
      },
      [](double x) {
        const double t = std::tanh(x);
        return (1.0 - t * t) * (6.0 * t * t - 2.0);
      });
}

FunctionDescriptor rotation_function() {
  auto F = matrix_function(2, 1, {0.0, -1.0, 1.0, 0.0});
  F.name = "rotation";
  return F;
}

FunctionDescriptor constant_function(std::size_t d, std::size_t n, double c) {
  auto F = diagonal_function(
      "constant", d, n, [c](double) { return c; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; });
  return F;
}

FunctionDescriptor builtin_function(const std::string& name, std::size_t d, std::size_t n, double c) {
  if (name == "linear") return linear_function(d, n);
  if (name == "sin") return sin_function(d, n);
  if (name == "tanh") return tanh_function(d, n);
  if (name == "constant") return constant_function(d, n, c);
  if (name == "rotation") {
    if (d != 2 || n != 1) throw InvalidArgument("rotation field needs d = 2 and n = 1");
    return rotation_function();
  }
  throw InvalidArgument("unknown function '" + name + "' (linear, sin, tanh, rotation, constant)");
}

DerivativeBounds bounds_on_box(const FunctionDescriptor& F, const Box& box) {
  if (box.empty() || box.lo.size() != F.dim || box.hi.size() != F.dim)
    throw InvalidArgument("bounds need a box of the function's dimension");
  if (!F.value || !F.jacobian || !F.hessian)
    throw InvalidArgument("function " + F.name + " lacks derivatives up to order 2");
  const std::size_t d = F.dim;
  const auto per_axis = static_cast<std::size_t>(
      std::max(2.0, std::floor(std::pow(4096.0, 1.0 / static_cast<double>(d)))));
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= per_axis;
  const std::size_t m = F.outputs();
  std::vector<double> y(d), v(m), j1(m * d), j2(m * d * d), j3(m * d * d * d);
  DerivativeBounds b;
  const auto l1 = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += std::abs(e);
    return s;
  };
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < d; ++i) {
      const double u = static_cast<double>(rest % per_axis) / static_cast<double>(per_axis - 1);
      rest /= per_axis;
      y[i] = box.lo[i] + u * (box.hi[i] - box.lo[i]);
    }
    F.value(y.data(), v.data());
    F.jacobian(y.data(), j1.data());
    F.hessian(y.data(), j2.data());
    b.value = std::max(b.value, l1(v));
    b.first = std::max(b.first, l1(j1));
    b.second = std::max(b.second, l1(j2));
    if (F.third) {
      F.third(y.data(), j3.data());
      b.third = std::max(b.third, l1(j3));
    }
  }
  return b;
}

}  // namespace roughstruct
