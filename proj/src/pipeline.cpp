#include "tomo/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace tomo {

std::string method_name(Method method) {
  switch (method) {
    case Method::empast: return "empast";
    case Method::past: return "past";
    case Method::gbcs: return "gbcs";
  }
  return "unknown";
}

Method parse_method(const std::string& tag) {
  if (tag == "empast") return Method::empast;
  if (tag == "past") return Method::past;
  if (tag == "gbcs") return Method::gbcs;
  throw ConfigError("unknown method tag '" + tag + "'; valid tags are {empast, past, gbcs}");
}

double effective_tau(const Observation& observation, const ArrayGeometry& geometry) {
  // Floor keeps the noiseless limit selecting the minimum atomic-norm
  // completion instead of an arbitrary feasible one.
  const double floor = 1e-4 * observation.data.norm();
  if (observation.noise_variance > 0.0) {
    RegularizationInput in;
    in.noise_variance = observation.noise_variance;
    in.n_observed = geometry.n_observed();
    in.n_full = geometry.n_full;
    in.snapshots = observation.snapshots();
    return std::max(regularization_tau(in), floor);
  }
  return floor;
}

namespace {

EstimationResult run_gridless(const ArrayGeometry& geometry, const Observation& observation,
                              const MethodOptions& options) {
  SolverConfig cfg = options.solver;
  if (cfg.tau <= 0.0) cfg.tau = effective_tau(observation, geometry);
  const SolverState state = options.method == Method::past
                                ? solve_past(observation, geometry, cfg)
                                : solve_empast(observation, geometry, cfg);

  EstimationResult res;
  res.solver_iters = state.iters_run;
  res.solver_residual = state.primal_residual;
  res.solver_converged = state.converged;

  const int n = geometry.n_full;
  int order = options.expected_order;
  if (order <= 0) {
    order = estimate_model_order(state.u, 0.0);
    const int cap = options.max_auto_order > 0 ? options.max_auto_order : n - 1;
    order = std::min(order, cap);
  }
  order = std::min(order, n - 1);
  if (order < 1) return res;  // empty scene

  SpectralEstimate est = vandermonde_decompose(state.u, order);
  map_to_elevations(est, geometry);
  res.elevations_m = est.elevations_m;
  res.powers = est.powers;
  res.model_order = est.model_order;
  res.degenerate = est.degenerate;

  if (options.refit_amplitudes && !res.elevations_m.empty()) {
    try {
      res.amplitudes = estimate_amplitudes(observation, geometry, res.elevations_m);
      const int l = observation.snapshots();
      for (std::size_t k = 0; k < res.powers.size(); ++k)
        res.powers[k] = res.amplitudes.row(static_cast<int>(k)).squaredNorm() / l;
    } catch (const SolverError&) {
      // Near-collision refit failure: keep the Toeplitz powers.
    }
  }
  return res;
}

EstimationResult run_gbcs(const ArrayGeometry& geometry, const Observation& observation,
                          const MethodOptions& options, double extent_m) {
  const double rho = rayleigh_resolution(geometry);
  const double step = options.gbcs_grid_step_m > 0.0 ? options.gbcs_grid_step_m : rho / 8.0;
  const Dictionary dict = build_dictionary(geometry, extent_m, step);
  const double tau = options.gbcs_tau_l1 >= 0.0
                         ? options.gbcs_tau_l1
                         : default_l1_tau(observation.noise_variance, dict.grid_size());
  const RVec power = solve_l1_mmv(observation.data, dict, tau, options.gbcs_max_iters,
                                  options.gbcs_tol);

  const int max_peaks = options.expected_order > 0
                            ? options.expected_order
                            : (options.max_auto_order > 0 ? options.max_auto_order
                                                          : geometry.n_full - 1);
  const std::vector<Peak> peaks = extract_peaks(power, dict, max_peaks, step);

  EstimationResult res;
  for (const Peak& p : peaks) {
    res.elevations_m.push_back(p.elevation_m);
    res.powers.push_back(p.amplitude * p.amplitude);
  }
  res.model_order = static_cast<int>(peaks.size());
  return res;
}

}  // namespace

EstimationResult estimate_elevations(const ArrayGeometry& geometry, const Observation& observation,
                                     const MethodOptions& options, double extent_m) {
  if (options.method == Method::gbcs) return run_gbcs(geometry, observation, options, extent_m);
  return run_gridless(geometry, observation, options);
}

}  // namespace tomo
