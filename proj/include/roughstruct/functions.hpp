#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace roughstruct {

/// Axis-aligned box in R^d. An empty box means no declared domain.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  bool empty() const { return lo.empty(); }
  bool contains(const double* y) const;
};

/// Sup norms of F and its first three derivatives (entrywise l1 sums).
struct DerivativeBounds {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

/// A vector field F : R^d -> L(R^n, R^d), stored as d x n matrices
/// row-major. Derivative callables write:
///   jacobian: (d n) x d, entry [r d + l] = d_l F^r
///   hessian:  (d n) x d x d, entry [(r d + l) d + m]
///   third:    (d n) x d x d x d
/// Missing derivatives are empty functions.
struct FunctionDescriptor {
  using Eval = std::function<void(const double* y, double* out)>;

  std::string name;
  std::size_t dim = 1;        ///< d
  std::size_t noise_dim = 1;  ///< n
  Eval value;
  Eval jacobian;
  Eval hessian;
  Eval third;
  /// Region where the derivative bounds are declared.
  Box domain;

  std::size_t outputs() const { return dim * noise_dim; }
  std::vector<double> eval(const double* y) const;
  std::vector<double> eval_jacobian(const double* y) const;
};

/// F^{ij}(y) = y_i for every column j (n = 1: F(y) = y).
FunctionDescriptor linear_function(std::size_t d, std::size_t n);
/// F^{ij}(y) = sum_l A[(i n + j) d + l] y_l.
FunctionDescriptor matrix_function(std::size_t d, std::size_t n, std::vector<double> A);
/// F^{ij}(y) = sin(y_i).
FunctionDescriptor sin_function(std::size_t d, std::size_t n);
/// F^{ij}(y) = tanh(y_i), a saturated linear field.
FunctionDescriptor tanh_function(std::size_t d, std::size_t n);
/// d = 2, n = 1: F(y) = (-y_2, y_1).
FunctionDescriptor rotation_function();
/// F^{ij}(y) = c.
FunctionDescriptor constant_function(std::size_t d, std::size_t n, double c);

/// Built-in by name: linear, sin, tanh, rotation, constant (value c).
/// Throws InvalidArgument for unknown names or incompatible dimensions.
FunctionDescriptor builtin_function(const std::string& name, std::size_t d, std::size_t n,
                                    double c = 1.0);

/// Sup norms over the box, sampled on a lattice of about 4096 points.
/// Throws InvalidArgument if the box is empty or a needed derivative is missing
/// (third is reported as 0 when absent).
DerivativeBounds bounds_on_box(const FunctionDescriptor& F, const Box& box);

}  // namespace roughstruct
