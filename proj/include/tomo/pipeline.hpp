#pragma once

#include <string>

#include "tomo/admm.hpp"
#include "tomo/gbcs.hpp"
#include "tomo/spectrum.hpp"

namespace tomo {

enum class Method { empast, past, gbcs };

std::string method_name(Method method);
/// Throws ConfigError listing the valid tags.
Method parse_method(const std::string& tag);

struct MethodOptions {
  Method method = Method::empast;
  SolverConfig solver;           // solver.tau <= 0 requests the closed form
  double gbcs_grid_step_m = 0.0; // 0 requests rho_s / 8
  double gbcs_tau_l1 = -1.0;     // < 0 requests the sigma-based default
  int gbcs_max_iters = 2000;
  double gbcs_tol = 1e-10;
  int expected_order = 0;  // 0 = estimate from the recovered spectrum
  int max_auto_order = 0;  // cap for the automatic order, 0 = N-1
  bool refit_amplitudes = true;
};

/// Elevations, powers and diagnostics produced by one method on one pixel.
struct EstimationResult {
  std::vector<double> elevations_m;  // sorted ascending
  std::vector<double> powers;
  CMat amplitudes;  // refit K x L; empty when refit was off or failed
  int model_order = 0;
  bool degenerate = false;
  int solver_iters = 0;
  double solver_residual = 0.0;
  bool solver_converged = true;
};

/// Runs the selected method end to end on one observation. extent_m bounds
/// the grid for the dictionary baseline; the gridless methods ignore it.
EstimationResult estimate_elevations(const ArrayGeometry& geometry, const Observation& observation,
                                     const MethodOptions& options, double extent_m);

/// Regularization weight actually used for an observation: the closed form
/// when the noise variance is known and positive, otherwise a small
/// multiple of the data norm so the noiseless limit picks the minimum
/// atomic-norm completion.
double effective_tau(const Observation& observation, const ArrayGeometry& geometry);

}  // namespace tomo
