#pragma once

#include <vector>

#include "tomo/atomic.hpp"
#include "tomo/observation.hpp"

namespace tomo {

struct SolverConfig {
  double tau = 0.0;
  double penalty_eta = 1.0;
  int max_iters = 5000;
  double tol_primal = 1e-6;
  double tol_change = 1e-8;
  /// Rescales eta by 2 when primal and dual residuals drift apart by more
  /// than a factor of 10. Off by default.
  bool adaptive_eta = false;
  /// Record (iter, primal_residual, objective) rows for diagnostics.
  bool keep_trace = false;

  void validate() const;
};

struct SolverTraceRow {
  int iter = 0;
  double primal_residual = 0.0;
  double objective = 0.0;
};

/// Iterates of the splitting solver for the denoising semidefinite program
///   min 1/2 ||Ghat_Omega - G_Omega||_F^2 + tau/2 (tr V + tr T(u)/N)
///   s.t. [[T(u), Ghat], [Ghat^H, V]] >= 0.
struct SolverState {
  CMat g_hat;              // N x L denoised full observation
  CMat v;                  // L x L
  ToeplitzGenerator u;     // length N
  CMat big_u;              // (N+L) x (N+L), PSD
  CMat lambda;             // (N+L) x (N+L) multiplier
  int iters_run = 0;
  double primal_residual = 0.0;
  bool converged = false;
  std::vector<SolverTraceRow> trace;
};

/// ADMM iteration for the partially observed multi-snapshot problem.
/// Throws SolverError when iterates become non-finite; non-convergence
/// within max_iters returns the final state with converged = false.
SolverState solve_empast(const Observation& observation, const ArrayGeometry& geometry,
                         const SolverConfig& config);

/// Single-snapshot entry point; requires L = 1 and otherwise shares the
/// solve_empast code path.
SolverState solve_past(const Observation& observation, const ArrayGeometry& geometry,
                       const SolverConfig& config);

/// Objective of the semidefinite program at the current iterate.
double objective_value(const SolverState& state, const Observation& observation,
                       const ArrayGeometry& geometry, double tau);

}  // namespace tomo
