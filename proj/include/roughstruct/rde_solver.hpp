#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "roughstruct/functions.hpp"
#include "roughstruct/modelled_distributions.hpp"
#include "roughstruct/rough_core.hpp"
#include "roughstruct/wavelets.hpp"

namespace roughstruct {

enum class IntegralRoute { riemann, wavelet };

struct SolverConfig {
  double alpha = 0.4;
  double beta = 0.45;
  /// First window length in grid cells (0 = the whole grid); a power of two.
  std::size_t initial_window_cells = 0;
  /// Windows are halved on non-contraction down to this many cells.
  std::size_t min_window_cells = 16;
  int max_picard_iters = 100;
  /// Sup norm of the (y, y') change between successive iterates.
  double fixed_point_tol = 1e-10;
  IntegralRoute route = IntegralRoute::riemann;
  /// Wavelet route only: taps of the Daubechies basis.
  int wavelet_taps = 6;

  /// Throws InvalidArgument unless 1/3 < alpha < beta <= 1/2 and the window
  /// sizes are powers of two with min_window_cells >= 16.
  void validate() const;
};

/// N(Y) = xi 1 + L(F(Y)) on the grid of rp: compose, multiply by Wdot,
/// integrate by the configured route and reassemble
/// I(F(Y)) 1 + <F(Y), 1> W. Y has d components; F maps R^d to d x n.
/// NumericalFailure if Y leaves the declared domain of F.
ModelledDistribution picard_step(const ModelledDistribution& Y, const std::vector<double>& xi,
                                 const FunctionDescriptor& F, const RoughPath& rp, const SolverConfig& cfg);

struct WindowReport {
  double t0 = 0.0;
  double t1 = 0.0;
  int iterations = 0;
  /// max over iterations of |N(Y_{k+1}) - N(Y_k)| / |Y_{k+1} - Y_k|.
  double ratio = 0.0;
  /// Working box [min y - 2 span, max y + 2 span] of the first iterate, span
  /// the largest coordinate range.
  Box box;
};

struct SolveDiagnostics {
  std::vector<WindowReport> windows;
  int halvings = 0;
  double residual = 0.0;
  /// sup_t |y'_t - F(y_t)|_1.
  double fixed_point_identity = 0.0;
};

struct SolveResult {
  ControlledPath solution;
  SolveDiagnostics diagnostics;
};

/// Windowed Picard iteration from Y_0 = xi 1 + F(xi) W on each window. A
/// window is accepted once the iterate change drops below the tolerance with
/// every ratio below 1; otherwise it is halved. NumericalFailure when a window
/// would fall below min_window_cells.
SolveResult solve_rde(const std::vector<double>& xi, const FunctionDescriptor& F, const RoughPath& rp,
                      const SolverConfig& cfg = {});

/// sup over nodes of |y_t - xi - int_0^t F(y) dW|_1, with the integral by
/// compensated sums on the finest mesh.
double solution_residual(const ControlledPath& sol, const std::vector<double>& xi,
                         const FunctionDescriptor& F, const RoughPath& rp, const SolverConfig& cfg = {});

/// t,y1..yd,yp11..ypdn
void write_solution_csv(const ControlledPath& sol, std::ostream& out);

}  // namespace roughstruct
